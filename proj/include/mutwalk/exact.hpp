#pragma once

#include <optional>
#include <string>

#include "mutwalk/chain.hpp"

namespace mutwalk {

// Truncation policy for every infinite series in the library.  A series
// stops once the absolute value of the term falls below abs_tol for two
// consecutive indices (terms can alternate in sign when 1-2p < 0) and at
// least min_terms have been summed; max_terms is a hard cap.
struct SeriesControl {
    double abs_tol = 1e-12;
    int max_terms = 100000;
    int min_terms = 8;

    void validate() const;
};

enum class Method {
    closed_form,
    kac_series,
    explicit_series,
    oracle,
    monte_carlo,
};

const char* to_string(Method m);

// One mean-passage-time result, tagged with how it was obtained.
// error_bound, when present, is the truncation tail estimate plus a
// round-off allowance; terms_used counts evaluated series terms.
struct PassageTimeReport {
    int from_class = 0;
    int to_class = 0;
    double value = 0.0;
    Method method = Method::closed_form;
    std::optional<double> error_bound;
    std::optional<int> terms_used;
};

// Mean time to reach class 0 from class N:
//   sum_{k=1}^{N} C(N,k) (1-(-1)^k) / (1-(1-2p)^k).
// Even k contribute exact zeros.
PassageTimeReport traversal_time(const ModelParams& params);

// Mean return time to class 0, equal to 2^N for every p.
PassageTimeReport return_time_zero(const ModelParams& params);

// Mean return time to class j, equal to 2^N / C(N,j).
PassageTimeReport return_time_class(const ModelParams& params, int j);

// Mean passage time from class i to class j via the expanded double series
// over n and k: brackets of binomial products against powers of (1-q) and
// (1+q), q = (1-2p)^n.  On the support of each product the two exponents
// are nonnegative and sum to N, so no singular ratio is ever formed; the
// n = 0 term contributes 2^N / C(N,j) from the probabilistic identity.
PassageTimeReport passage_time_explicit(const ModelParams& params, int i,
                                        int j,
                                        const SeriesControl& ctrl = {});

// Same quantity through the occupation-probability series
//   E(tau_j | j) * (1 + sum_{n>=1} (P_j(Y_n=j) - P_i(Y_n=j))).
PassageTimeReport passage_time_kac_series(const ModelParams& params, int i,
                                          int j,
                                          const SeriesControl& ctrl = {});

// Auxiliary rational function phi_k(z) = C(N,k) / (1 - (1-2p)^k z).
// Throws PoleAtArgument when the denominator vanishes (k = 0, z = 1).
double phi(const ModelParams& params, int k, double z);

// Occupation generating function F_ij(z) = sum_{n>=1} P_i(Y_n=j) z^n,
// summed term by term.  Requires |z| < 1.
double f_generating(const ModelParams& params, int i, int j, double z,
                    const SeriesControl& ctrl = {});

// Hitting-time generating function G_ij(z) = F_ij(z) / (1 + F_jj(z)).
double g_generating(const ModelParams& params, int i, int j, double z,
                    const SeriesControl& ctrl = {});

// Exact integer check of sum_l C(j,l) C(N-j,l) == C(N,j).
bool vandermonde_check(int n, int j);

}  // namespace mutwalk
