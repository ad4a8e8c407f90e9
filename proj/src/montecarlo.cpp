#include "mutwalk/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>

namespace mutwalk {

namespace {

constexpr double kSparsePathMaxProb = 0.1;
constexpr int kSparsePathMinSites = 16;

void check_sim_config(const SimConfig& cfg) {
    if (cfg.n_trials < 1) throw DomainError("n_trials must be >= 1");
    if (cfg.max_steps_per_trial < 1)
        throw DomainError("max_steps_per_trial must be >= 1");
    if (cfg.n_threads < 1) throw DomainError("n_threads must be >= 1");
}

// Binomial(n, p) by CDF inversion; exact and cheap for the small-p regime
// where it is used.
int sample_binomial(int n, double p, SplitMix64& rng) {
    const double u = rng.next_double();
    double pmf = std::pow(1.0 - p, n);
    double cdf = pmf;
    int k = 0;
    const double odds = p / (1.0 - p);
    while (u >= cdf && k < n) {
        pmf *= static_cast<double>(n - k) / (k + 1) * odds;
        ++k;
        cdf += pmf;
    }
    return k;
}

void set_mask_bit(std::vector<std::uint64_t>& mask, int site) {
    mask[static_cast<size_t>(site) >> 6] |= std::uint64_t(1) << (site & 63);
}

bool test_mask_bit(const std::vector<std::uint64_t>& mask, int site) {
    return (mask[static_cast<size_t>(site) >> 6] >>
            (site & 63)) & 1;
}

// Floyd's uniform k-subset of {0, ..., n-1}, written into mask.
void sample_subset(std::vector<std::uint64_t>& mask, int n, int k,
                   SplitMix64& rng) {
    for (int m = n - k; m < n; ++m) {
        int site = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m) + 1));
        if (test_mask_bit(mask, site)) site = m;
        set_mask_bit(mask, site);
    }
}

void fill_flip_mask(std::vector<std::uint64_t>& mask, const ModelParams& params,
                    SplitMix64& rng) {
    const int n = params.n_sites();
    const double p = params.mut_prob();
    std::fill(mask.begin(), mask.end(), 0);
    if (p <= kSparsePathMaxProb && n >= kSparsePathMinSites) {
        const int flips = sample_binomial(n, p, rng);
        sample_subset(mask, n, flips, rng);
    } else {
        for (int s = 0; s < n; ++s)
            if (rng.next_double() < p) set_mask_bit(mask, s);
    }
}

void step_in_place(Genotype& g, std::vector<std::uint64_t>& mask,
                   const ModelParams& params, SplitMix64& rng) {
    fill_flip_mask(mask, params, rng);
    g.apply_flips(mask);
}

// Runs trials [lo, hi), one independent stream per trial, recording the
// hitting step or -1 when censored.
void run_hitting_trials(const ModelParams& params, int start_class,
                        int target_class, const SimConfig& cfg,
                        std::int64_t lo, std::int64_t hi,
                        std::vector<std::int64_t>& durations) {
    const int n = params.n_sites();
    std::vector<std::uint64_t> mask((static_cast<size_t>(n) + 63) / 64, 0);
    for (std::int64_t t = lo; t < hi; ++t) {
        SplitMix64 rng(trial_seed(cfg.seed, static_cast<std::uint64_t>(t)));
        Genotype g = random_genotype_in_class(n, start_class, rng);
        std::int64_t hit = -1;
        for (std::int64_t step = 1; step <= cfg.max_steps_per_trial; ++step) {
            step_in_place(g, mask, params, rng);
            if (g.popcount() == target_class) {
                hit = step;
                break;
            }
        }
        durations[static_cast<size_t>(t)] = hit;
    }
}

template <class Work>
void run_partitioned(std::int64_t n_trials, int n_threads, Work&& work) {
    const int threads = static_cast<int>(
        std::min<std::int64_t>(n_threads, n_trials));
    if (threads <= 1) {
        work(0, n_trials);
        return;
    }
    const std::int64_t chunk = (n_trials + threads - 1) / threads;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        const std::int64_t lo = w * chunk;
        const std::int64_t hi = std::min<std::int64_t>(lo + chunk, n_trials);
        if (lo >= hi) break;
        pool.emplace_back([&work, lo, hi] { work(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

Genotype::Genotype(int n_sites) : n_sites_(n_sites) {
    if (n_sites < 1) throw DomainError("n_sites must be >= 1");
    words_.assign((static_cast<size_t>(n_sites) + 63) / 64, 0);
}

int Genotype::popcount() const {
    int total = 0;
    for (std::uint64_t w : words_) total += std::popcount(w);
    return total;
}

bool Genotype::test(int site) const {
    if (site < 0 || site >= n_sites_) throw DomainError("site out of range");
    return (words_[static_cast<size_t>(site) >> 6] >> (site & 63)) & 1;
}

void Genotype::set(int site, bool value) {
    if (site < 0 || site >= n_sites_) throw DomainError("site out of range");
    const std::uint64_t bit = std::uint64_t(1) << (site & 63);
    if (value)
        words_[static_cast<size_t>(site) >> 6] |= bit;
    else
        words_[static_cast<size_t>(site) >> 6] &= ~bit;
}

void Genotype::apply_flips(const std::vector<std::uint64_t>& mask) {
    if (mask.size() != words_.size())
        throw DomainError("flip mask has the wrong word count");
    for (size_t w = 0; w < words_.size(); ++w) words_[w] ^= mask[w];
    const int tail = n_sites_ & 63;
    if (tail != 0) words_.back() &= (std::uint64_t(1) << tail) - 1;
}

Genotype step_genotype(const Genotype& g, const ModelParams& params,
                       SplitMix64& rng) {
    if (g.n_sites() != params.n_sites())
        throw DomainError("genotype length does not match n_sites");
    Genotype out = g;
    std::vector<std::uint64_t> mask(g.words().size(), 0);
    step_in_place(out, mask, params, rng);
    return out;
}

Genotype random_genotype_in_class(int n_sites, int cls, SplitMix64& rng) {
    if (cls < 0 || cls > n_sites)
        throw DomainError("class out of range [0, N]");
    Genotype g(n_sites);
    std::vector<std::uint64_t> mask(g.words().size(), 0);
    sample_subset(mask, n_sites, cls, rng);
    g.apply_flips(mask);
    return g;
}

EstimateReport estimate_hitting_time(const ModelParams& params,
                                     int start_class, int target_class,
                                     const SimConfig& cfg) {
    const int n = params.n_sites();
    if (start_class < 0 || start_class > n || target_class < 0 ||
        target_class > n)
        throw DomainError("class out of range [0, N]");
    check_sim_config(cfg);

    std::vector<std::int64_t> durations(static_cast<size_t>(cfg.n_trials), -1);
    run_partitioned(cfg.n_trials, cfg.n_threads,
                    [&](std::int64_t lo, std::int64_t hi) {
                        run_hitting_trials(params, start_class, target_class,
                                           cfg, lo, hi, durations);
                    });

    // deterministic reduction in trial order, independent of the schedule
    std::int64_t count = 0;
    double sum = 0.0;
    for (std::int64_t d : durations) {
        if (d < 0) continue;
        ++count;
        sum += static_cast<double>(d);
    }
    const std::int64_t censored = cfg.n_trials - count;
    if (count == 0)
        throw AllCensored("all " + std::to_string(cfg.n_trials) +
                          " trials hit the step cap");
    const double mean = sum / static_cast<double>(count);
    double ss = 0.0;
    for (std::int64_t d : durations) {
        if (d < 0) continue;
        const double dev = static_cast<double>(d) - mean;
        ss += dev * dev;
    }
    const double var = count > 1 ? ss / static_cast<double>(count - 1) : 0.0;
    const double se = std::sqrt(var / static_cast<double>(count));
    return EstimateReport{mean,           se,
                          mean - 1.96 * se, mean + 1.96 * se,
                          cfg.n_trials,   censored};
}

double lumping_consistency(const ModelParams& params, int start_class, int n,
                           const SimConfig& cfg) {
    const int sites = params.n_sites();
    if (start_class < 0 || start_class > sites)
        throw DomainError("class out of range [0, N]");
    if (n < 0) throw DomainError("step count must be >= 0");
    check_sim_config(cfg);

    std::vector<std::int64_t> counts(static_cast<size_t>(sites) + 1, 0);
    std::mutex merge;
    run_partitioned(cfg.n_trials, cfg.n_threads, [&](std::int64_t lo,
                                                     std::int64_t hi) {
        std::vector<std::int64_t> local(static_cast<size_t>(sites) + 1, 0);
        std::vector<std::uint64_t> mask((static_cast<size_t>(sites) + 63) / 64,
                                        0);
        for (std::int64_t t = lo; t < hi; ++t) {
            SplitMix64 rng(trial_seed(cfg.seed, static_cast<std::uint64_t>(t)));
            Genotype g = random_genotype_in_class(sites, start_class, rng);
            for (int step = 0; step < n; ++step)
                step_in_place(g, mask, params, rng);
            ++local[static_cast<size_t>(g.popcount())];
        }
        const std::lock_guard<std::mutex> hold(merge);
        for (size_t j = 0; j < counts.size(); ++j) counts[j] += local[j];
    });

    const ClassDistribution exact = class_distribution(params, start_class, n);
    double tv = 0.0;
    for (int j = 0; j <= sites; ++j) {
        const double emp = static_cast<double>(counts[static_cast<size_t>(j)]) /
                           static_cast<double>(cfg.n_trials);
        tv += std::abs(emp - exact[j]);
    }
    return 0.5 * tv;
}

}  // namespace mutwalk
