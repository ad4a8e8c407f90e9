#pragma once

// Test-side reference implementations, kept deliberately independent of the
// library code paths they check: Pascal-triangle binomials in big-integer
// arithmetic, full 2^N genotype-space evolution, and small dense matrix
// helpers.

#include <bit>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace refo {

// C(n, k) by the Pascal recurrence, exact, converted to double at the end.
inline double pascal_binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    std::vector<boost::multiprecision::cpp_int> row(static_cast<size_t>(n) + 1, 0);
    row[0] = 1;
    for (int r = 1; r <= n; ++r)
        for (int c = r; c >= 1; --c) row[static_cast<size_t>(c)] += row[static_cast<size_t>(c) - 1];
    return row[static_cast<size_t>(k)].convert_to<double>();
}

// Law of the Hamming class after n steps, computed on the full genotype
// space: start from one representative with start_class ones, evolve the
// 2^N-dimensional distribution with the exact per-genotype transition
// probabilities, then lump by popcount.  O(4^N n); for N <= 6 or so.
inline std::vector<double> genotype_class_law(int n_sites, double p,
                                              int start_class, int n_steps) {
    const std::uint32_t size = std::uint32_t(1) << n_sites;
    std::vector<double> flip_prob(static_cast<size_t>(n_sites) + 1);
    for (int d = 0; d <= n_sites; ++d) {
        double v = 1.0;
        for (int t = 0; t < d; ++t) v *= p;
        for (int t = 0; t < n_sites - d; ++t) v *= 1.0 - p;
        flip_prob[static_cast<size_t>(d)] = v;
    }
    std::vector<double> dist(size, 0.0);
    dist[(std::uint32_t(1) << start_class) - 1] = 1.0;
    std::vector<double> next(size);
    for (int step = 0; step < n_steps; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::uint32_t x = 0; x < size; ++x) {
            if (dist[x] == 0.0) continue;
            for (std::uint32_t y = 0; y < size; ++y)
                next[y] += dist[x] *
                           flip_prob[static_cast<size_t>(std::popcount(x ^ y))];
        }
        dist.swap(next);
    }
    std::vector<double> law(static_cast<size_t>(n_sites) + 1, 0.0);
    for (std::uint32_t x = 0; x < size; ++x)
        law[static_cast<size_t>(std::popcount(x))] += dist[x];
    return law;
}

// Probability that a Bernoulli(p) coin tossed n times lands heads an even
// number of times, by exhaustive enumeration of all 2^n outcomes.
inline double even_flip_probability(int n, double p) {
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << n); ++mask) {
        const int flips = std::popcount(mask);
        if (flips % 2 != 0) continue;
        double v = 1.0;
        for (int t = 0; t < flips; ++t) v *= p;
        for (int t = 0; t < n - flips; ++t) v *= 1.0 - p;
        total += v;
    }
    return total;
}

// n-th power of the 2x2 single-site kernel [[1-p, p], [p, 1-p]],
// returning the diagonal entry.
inline double two_state_power_diag(double p, int n) {
    double a = 1.0, b = 0.0;  // row (stay, flip) of M^k
    for (int k = 0; k < n; ++k) {
        const double na = a * (1.0 - p) + b * p;
        const double nb = a * p + b * (1.0 - p);
        a = na;
        b = nb;
    }
    return a;
}

}  // namespace refo
