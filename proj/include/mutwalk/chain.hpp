#pragma once

#include <cstdint>
#include <vector>

#include "mutwalk/errors.hpp"

namespace mutwalk {

// Genome length N and per-site per-step mutation probability p.
// The whole model is a function of these two numbers.
class ModelParams {
  public:
    ModelParams(int n_sites, double mut_prob);

    int n_sites() const { return n_sites_; }
    double mut_prob() const { return mut_prob_; }

    // One-step autocorrelation of a single site, 1 - 2p.  This is the
    // second eigenvalue of the single-site kernel and the geometric decay
    // rate of every series in the library.
    double step_correlation() const { return 1.0 - 2.0 * mut_prob_; }

  private:
    int n_sites_;
    double mut_prob_;
};

// Probability vector over Hamming classes {0, ..., N}.
// Entries are validated to be in [0,1] and to sum to 1 within 1e-12.
class ClassDistribution {
  public:
    explicit ClassDistribution(std::vector<double> probs);

    static ClassDistribution point_mass(int n_classes, int cls);

    int n_classes() const { return static_cast<int>(probs_.size()); }
    double operator[](int j) const { return probs_[static_cast<size_t>(j)]; }
    const std::vector<double>& probs() const { return probs_; }

  private:
    std::vector<double> probs_;
};

// Row-stochastic (N+1)x(N+1) matrix over Hamming classes; every row is a
// ClassDistribution.  Also used for the urn-model comparator chain.
class TransitionMatrix {
  public:
    explicit TransitionMatrix(std::vector<std::vector<double>> rows);

    static TransitionMatrix identity(int size);

    int size() const { return size_; }
    double operator()(int i, int j) const {
        return entries_[static_cast<size_t>(i) * size_ + j];
    }
    ClassDistribution row(int i) const;

  private:
    TransitionMatrix(int size, std::vector<double> entries)
        : size_(size), entries_(std::move(entries)) {}

    int size_ = 0;
    std::vector<double> entries_;

    friend TransitionMatrix n_step_matrix(const TransitionMatrix&, int);
};

// Diagonal and off-diagonal of the n-step single-site kernel M^n.
// flip_prob is stored as the exact complement of stay_prob.
struct SingleSiteKernel {
    double stay_prob = 1.0;
    double flip_prob = 0.0;
    int step_count = 0;
};

// C(n, k) with the out-of-range convention C(n, k) = 0 for k < 0 or k > n.
// Exact integer values for n <= 60, log-domain evaluation beyond.
double binomial(int n, int k);

// Exact integer C(n, k) for n <= 60 (fits in 64 bits).
std::uint64_t binomial_u64(int n, int k);

// Probability that a single site equals its initial value after n steps,
// p_n = (1 + (1-2p)^n) / 2.  The n = 0 convention (1-2p)^0 = 1 holds even
// at p = 1/2.
double p_step(const ModelParams& params, int n);

// M^n for a single site.
SingleSiteKernel single_site_power(const ModelParams& params, int n);

// Probability of finding the chain in class j after n steps given that it
// started in class i: the convolution of Bin(i, p_n) and Bin(N-i, 1-p_n).
// O(N) per entry; exposed for series evaluators that need a single entry.
double class_probability(const ModelParams& params, int start_class, int j,
                         int n);

// The full law of Y_n given Y_0 = start_class.
ClassDistribution class_distribution(const ModelParams& params,
                                     int start_class, int n);

// One-step transition matrix of the lumped chain; row i is
// class_distribution(params, i, 1).  All entries are strictly positive for
// p in (0,1), so the chain is irreducible and aperiodic.
TransitionMatrix transition_matrix(const ModelParams& params);

// Plain iterated matrix power; n = 0 gives the identity.
TransitionMatrix n_step_matrix(const TransitionMatrix& matrix, int n);

}  // namespace mutwalk
