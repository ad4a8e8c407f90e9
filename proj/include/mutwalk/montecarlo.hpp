#pragma once

#include <cstdint>
#include <vector>

#include "mutwalk/chain.hpp"
#include "mutwalk/rng.hpp"

namespace mutwalk {

// A genotype: N sites packed into 64-bit words.
class Genotype {
  public:
    explicit Genotype(int n_sites);

    int n_sites() const { return n_sites_; }
    int popcount() const;
    bool test(int site) const;
    void set(int site, bool value);

    // XOR with a flip mask laid out like the genotype words.
    void apply_flips(const std::vector<std::uint64_t>& mask);

    const std::vector<std::uint64_t>& words() const { return words_; }

  private:
    int n_sites_;
    std::vector<std::uint64_t> words_;
};

// Simulation controls.  Results are a pure function of (SimConfig,
// ModelParams): per-trial streams are derived with trial_seed(), so the
// thread count changes the schedule but never the numbers.
struct SimConfig {
    std::uint64_t seed = 0;
    std::int64_t n_trials = 10000;
    std::int64_t max_steps_per_trial = 1 << 20;
    int n_threads = 1;
};

// Sample statistics of the uncensored trials.  Censored trials (those that
// hit max_steps_per_trial) are excluded from the mean but always counted.
struct EstimateReport {
    double mean = 0.0;
    double std_error = 0.0;
    double ci95_low = 0.0;
    double ci95_high = 0.0;
    std::int64_t n_trials = 0;
    std::int64_t n_censored = 0;
};

// One mutation step: every site flips independently with probability p.
// Small-p inputs use an exact equivalent scheme (binomial flip count, then
// uniform positions without replacement); the path depends only on params.
Genotype step_genotype(const Genotype& g, const ModelParams& params,
                       SplitMix64& rng);

// Uniform genotype with exactly cls ones.
Genotype random_genotype_in_class(int n_sites, int cls, SplitMix64& rng);

// Mean of the first n >= 1 with popcount(X_n) = target_class, starting each
// trial from a uniform genotype of start_class.
EstimateReport estimate_hitting_time(const ModelParams& params,
                                     int start_class, int target_class,
                                     const SimConfig& cfg);

// Total-variation distance between the empirical law of popcount(X_n) and
// the closed-form class distribution; O(1/sqrt(trials)) for a correct chain.
double lumping_consistency(const ModelParams& params, int start_class, int n,
                           const SimConfig& cfg);

}  // namespace mutwalk
