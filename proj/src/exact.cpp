#include "mutwalk/exact.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mutwalk/rational.hpp"

namespace mutwalk {

namespace {

void check_class_pair(const ModelParams& params, int i, int j) {
    const int n = params.n_sites();
    if (i < 0 || i > n || j < 0 || j > n)
        throw DomainError("class index out of range [0, N]");
}

struct SeriesResult {
    double value = 0.0;
    double error_bound = 0.0;
    int terms_used = 0;
};

// Sums prefactor_term + sum_{n>=1} term_at(n) under the SeriesControl
// truncation rule.  The error bound is a geometric tail from the last
// term (ratio |1-2p|) plus a round-off allowance scaled by the absolute
// term sum.  term_at is called once per index, in increasing order.
template <class TermFn>
SeriesResult sum_passage_series(const ModelParams& params,
                                double prefactor_term,
                                const SeriesControl& ctrl, TermFn&& term_at) {
    ctrl.validate();
    const double r = std::abs(params.step_correlation());
    double sum = prefactor_term;
    double abs_sum = std::abs(prefactor_term);
    int small_streak = 0;
    for (int n = 1; n <= ctrl.max_terms; ++n) {
        const double term = term_at(n);
        sum += term;
        const double mag = std::abs(term);
        abs_sum += mag;
        small_streak = mag < ctrl.abs_tol ? small_streak + 1 : 0;
        const int terms = n + 1;  // the n = 0 term counts
        if (small_streak >= 2 && terms >= ctrl.min_terms) {
            const double tail = mag * r / (1.0 - r);
            const double round = std::numeric_limits<double>::epsilon() *
                                 (params.n_sites() + 2.0) * abs_sum;
            return SeriesResult{sum, tail + round, terms};
        }
    }
    throw NonConvergence("passage-time series still above tolerance after " +
                             std::to_string(ctrl.max_terms) + " terms",
                         ctrl.max_terms);
}

// Neumaier-compensated accumulator for the inner k sums, whose terms can
// cancel heavily when 1-2p < 0.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double total() const { return sum + comp; }
};

}  // namespace

void SeriesControl::validate() const {
    if (!(abs_tol > 0.0) || !std::isfinite(abs_tol))
        throw DomainError("abs_tol must be a positive finite number");
    if (min_terms < 1 || max_terms < min_terms)
        throw DomainError("need 1 <= min_terms <= max_terms");
}

const char* to_string(Method m) {
    switch (m) {
        case Method::closed_form: return "closed_form";
        case Method::kac_series: return "kac_series";
        case Method::explicit_series: return "explicit_series";
        case Method::oracle: return "oracle";
        case Method::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

PassageTimeReport traversal_time(const ModelParams& params) {
    const int n = params.n_sites();
    const double corr = params.step_correlation();
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double sign = k % 2 == 0 ? 1.0 : -1.0;
        const double numer = 1.0 - sign;  // exactly 0 for even k
        if (numer == 0.0) continue;
        sum += binomial(n, k) * numer / (1.0 - std::pow(corr, k));
    }
    return PassageTimeReport{n, 0, sum, Method::closed_form, {}, {}};
}

PassageTimeReport return_time_zero(const ModelParams& params) {
    const double value = std::ldexp(1.0, params.n_sites());
    return PassageTimeReport{0, 0, value, Method::closed_form, {}, {}};
}

PassageTimeReport return_time_class(const ModelParams& params, int j) {
    const int n = params.n_sites();
    if (j < 0 || j > n) throw DomainError("class index out of range [0, N]");
    const double value = std::ldexp(1.0, n) / binomial(n, j);
    return PassageTimeReport{j, j, value, Method::closed_form, {}, {}};
}

PassageTimeReport passage_time_explicit(const ModelParams& params, int i,
                                        int j, const SeriesControl& ctrl) {
    check_class_pair(params, i, j);
    const int n = params.n_sites();
    const double corr = params.step_correlation();
    const double cj = binomial(n, j);

    // Binomial products of the two brackets; zero outside their supports.
    std::vector<double> bjj(static_cast<size_t>(n) + 1);
    std::vector<double> bij(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        bjj[static_cast<size_t>(k)] = binomial(j, k) * binomial(n - j, k);
        bij[static_cast<size_t>(k)] = binomial(i, j - k) * binomial(n - i, k);
    }

    const double prefactor = std::ldexp(1.0, n) / cj;
    std::vector<double> pm(static_cast<size_t>(n) + 1);  // (1-q)^t
    std::vector<double> pp(static_cast<size_t>(n) + 1);  // (1+q)^t
    double q = 1.0;
    auto term_at = [&](int /*step*/) {
        q *= corr;
        pm[0] = 1.0;
        pp[0] = 1.0;
        for (int t = 1; t <= n; ++t) {
            pm[static_cast<size_t>(t)] = pm[static_cast<size_t>(t) - 1] * (1.0 - q);
            pp[static_cast<size_t>(t)] = pp[static_cast<size_t>(t) - 1] * (1.0 + q);
        }
        CompensatedSum bracket;
        for (int k = 0; k <= n; ++k) {
            const double b1 = bjj[static_cast<size_t>(k)];
            const double b2 = bij[static_cast<size_t>(k)];
            if (b1 != 0.0) {
                bracket.add(b1 * pm[static_cast<size_t>(2 * k)] *
                            pp[static_cast<size_t>(n - 2 * k)]);
            }
            if (b2 != 0.0) {
                // On this support a = i-j+2k lies in [0, n], so the powers
                // of (1-q) and (1+q) pair up as pm[a] * pp[n-a].
                const int a = i - j + 2 * k;
                bracket.add(-b2 * pm[static_cast<size_t>(a)] *
                            pp[static_cast<size_t>(n - a)]);
            }
        }
        return bracket.total() / cj;
    };

    const SeriesResult res =
        sum_passage_series(params, prefactor, ctrl, term_at);
    return PassageTimeReport{i, j, res.value, Method::explicit_series,
                             res.error_bound, res.terms_used};
}

PassageTimeReport passage_time_kac_series(const ModelParams& params, int i,
                                          int j, const SeriesControl& ctrl) {
    check_class_pair(params, i, j);
    const int n = params.n_sites();
    const double ret = std::ldexp(1.0, n) / binomial(n, j);
    auto term_at = [&](int step) {
        return ret * (class_probability(params, j, j, step) -
                      class_probability(params, i, j, step));
    };
    const SeriesResult res = sum_passage_series(params, ret, ctrl, term_at);
    return PassageTimeReport{i, j, res.value, Method::kac_series,
                             res.error_bound, res.terms_used};
}

double phi(const ModelParams& params, int k, double z) {
    const int n = params.n_sites();
    if (k < 0 || k > n) throw DomainError("phi index out of range [0, N]");
    const double denom = 1.0 - std::pow(params.step_correlation(), k) * z;
    if (denom == 0.0)
        throw PoleAtArgument("phi_" + std::to_string(k) + " has a pole at z = " +
                             std::to_string(z));
    return binomial(n, k) / denom;
}

double f_generating(const ModelParams& params, int i, int j, double z,
                    const SeriesControl& ctrl) {
    ctrl.validate();
    check_class_pair(params, i, j);
    if (!(std::abs(z) < 1.0))
        throw DomainError("f_generating requires |z| < 1");
    double sum = 0.0;
    double zp = 1.0;
    int small_streak = 0;
    for (int n = 1; n <= ctrl.max_terms; ++n) {
        zp *= z;
        const double term = class_probability(params, i, j, n) * zp;
        sum += term;
        small_streak = std::abs(term) < ctrl.abs_tol ? small_streak + 1 : 0;
        if (small_streak >= 2 && n >= ctrl.min_terms) return sum;
    }
    throw NonConvergence("generating-function series still above tolerance after " +
                             std::to_string(ctrl.max_terms) + " terms",
                         ctrl.max_terms);
}

double g_generating(const ModelParams& params, int i, int j, double z,
                    const SeriesControl& ctrl) {
    const double fjj = f_generating(params, j, j, z, ctrl);
    const double denom = 1.0 + fjj;
    if (denom == 0.0)
        throw PoleAtArgument("g_generating denominator 1 + F_jj vanishes at z = " +
                             std::to_string(z));
    const double fij =
        i == j ? fjj : f_generating(params, i, j, z, ctrl);
    return fij / denom;
}

bool vandermonde_check(int n, int j) {
    if (n < 0 || j < 0 || j > n)
        throw DomainError("vandermonde_check needs 0 <= j <= n");
    rational::BigInt sum = 0;
    for (int l = 0; l <= std::min(j, n - j); ++l)
        sum += rational::binomial_int(j, l) * rational::binomial_int(n - j, l);
    return sum == rational::binomial_int(n, j);
}

}  // namespace mutwalk
