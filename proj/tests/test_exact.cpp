#include <doctest.h>

#include <cmath>
#include <vector>

#include "mutwalk/exact.hpp"
#include "mutwalk/oracle.hpp"

using namespace mutwalk;

namespace {

double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Richardson extrapolation of the one-sided slope of G at z = 1, using
// G(1) = 1 and two step sizes; cancels the first-order truncation term.
double g_slope_at_one(const ModelParams& params, int i, int j) {
    SeriesControl ctrl;
    ctrl.abs_tol = 1e-14;
    ctrl.max_terms = 1500000;
    const double h1 = 1e-3;
    const double h2 = 1e-4;
    const double d1 = (1.0 - g_generating(params, i, j, 1.0 - h1, ctrl)) / h1;
    const double d2 = (1.0 - g_generating(params, i, j, 1.0 - h2, ctrl)) / h2;
    return (h1 * d2 - h2 * d1) / (h1 - h2);
}

}  // namespace

TEST_CASE("traversal time closed form") {
    CHECK_EQ(traversal_time(ModelParams(1, 0.25)).value, 4.0);
    CHECK_EQ(traversal_time(ModelParams(1, 0.5)).value, 2.0);
    CHECK_EQ(traversal_time(ModelParams(2, 0.25)).value, 8.0);
    const PassageTimeReport r = traversal_time(ModelParams(5, 0.1));
    CHECK_EQ(r.from_class, 5);
    CHECK_EQ(r.to_class, 0);
    CHECK_EQ(r.method, Method::closed_form);

    SUBCASE("identical to the odd-k-only summation") {
        for (int n = 1; n <= 15; ++n) {
            for (double p : {0.05, 0.25, 0.49, 0.6, 0.9}) {
                const ModelParams params(n, p);
                const double corr = params.step_correlation();
                double odd_only = 0.0;
                for (int k = 1; k <= n; k += 2)
                    odd_only += binomial(n, k) * 2.0 / (1.0 - std::pow(corr, k));
                CHECK_EQ(traversal_time(params).value, odd_only);
            }
        }
    }
    SUBCASE("matches the linear-solve oracle") {
        for (int n = 1; n <= 8; ++n) {
            for (double p : {0.05, 0.25, 0.49, 0.6, 0.9}) {
                const ModelParams params(n, p);
                const double h =
                    hitting_times_solve(transition_matrix(params), 0)
                        [static_cast<size_t>(n)];
                CHECK(rel_diff(traversal_time(params).value, h) <= 1e-9);
            }
        }
    }
}

TEST_CASE("return times") {
    CHECK_EQ(return_time_zero(ModelParams(3, 0.1)).value, 8.0);
    CHECK_EQ(return_time_zero(ModelParams(1, 0.7)).value, 2.0);
    CHECK_EQ(return_time_zero(ModelParams(10, 0.25)).value, 1024.0);

    CHECK_EQ(return_time_class(ModelParams(4, 0.2), 2).value,
             doctest::Approx(16.0 / 6.0).epsilon(1e-15));
    CHECK_EQ(return_time_class(ModelParams(4, 0.2), 0).value, 16.0);
    CHECK_EQ(return_time_class(ModelParams(5, 0.35), 5).value, 32.0);
    CHECK_THROWS_AS(return_time_class(ModelParams(4, 0.2), 5), DomainError);
    CHECK_THROWS_AS(return_time_class(ModelParams(4, 0.2), -1), DomainError);
}

TEST_CASE("sandwich bound on the traversal time") {
    for (int n = 1; n <= 20; ++n) {
        for (double p : {0.05, 0.1, 0.25, 0.4, 0.49}) {
            const ModelParams params(n, p);
            const double t = traversal_time(params).value;
            const double lo = return_time_zero(params).value;  // 2^N
            CHECK(t >= lo * (1.0 - 1e-12));
            CHECK(t <= lo / p * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("the lower sandwich inequality reverses for p above one half") {
    // For p > 1/2 every odd-k denominator 1 - (1-2p)^k exceeds 1, so the
    // traversal sum drops strictly below 2^N; the two-sided bracket only
    // holds on p < 1/2.
    for (int n = 1; n <= 15; ++n) {
        for (double p : {0.6, 0.75, 0.9}) {
            const ModelParams params(n, p);
            CHECK(traversal_time(params).value <
                  return_time_zero(params).value);
        }
    }
}

TEST_CASE("explicit passage-time series") {
    CHECK_EQ(passage_time_explicit(ModelParams(1, 0.25), 1, 0).value,
             doctest::Approx(4.0).epsilon(1e-12));
    CHECK_EQ(passage_time_explicit(ModelParams(1, 0.25), 0, 0).value, 2.0);
    CHECK_EQ(passage_time_explicit(ModelParams(2, 0.25), 2, 0).value,
             doctest::Approx(8.0).epsilon(1e-12));
    const PassageTimeReport r = passage_time_explicit(ModelParams(3, 0.2), 1, 2);
    CHECK(r.error_bound.has_value());
    CHECK(r.terms_used.has_value());
    CHECK(*r.error_bound >= 0.0);
    CHECK(r.value >= 1.0);
    CHECK_THROWS_AS(passage_time_explicit(ModelParams(3, 0.2), 4, 0),
                    DomainError);

    SUBCASE("diagonal reproduces the return-time closed form") {
        for (int n = 1; n <= 10; ++n) {
            for (double p : {0.1, 0.25, 0.5, 0.75}) {
                const ModelParams params(n, p);
                for (int j = 0; j <= n; ++j) {
                    CHECK(rel_diff(passage_time_explicit(params, j, j).value,
                                   return_time_class(params, j).value) <= 1e-9);
                }
            }
        }
    }
    SUBCASE("p = 1/2 collapses to the n = 0 term") {
        const PassageTimeReport fast =
            passage_time_explicit(ModelParams(6, 0.5), 4, 2);
        CHECK_EQ(fast.value, return_time_class(ModelParams(6, 0.5), 2).value);
        CHECK(*fast.error_bound <= 1e-12);
    }
    SUBCASE("matches the linear-solve oracle within its bound") {
        for (int n = 1; n <= 8; ++n) {
            for (double p : {0.1, 0.25, 0.5, 0.75}) {
                const ModelParams params(n, p);
                const TransitionMatrix t = transition_matrix(params);
                for (int j = 0; j <= n; ++j) {
                    const std::vector<double> h = hitting_times_solve(t, j);
                    for (int i = 0; i <= n; ++i) {
                        const PassageTimeReport rep =
                            passage_time_explicit(params, i, j);
                        const double ref = h[static_cast<size_t>(i)];
                        CHECK(std::abs(rep.value - ref) <=
                              std::max(1e-8 * ref, *rep.error_bound));
                    }
                }
            }
        }
    }
}

TEST_CASE("occupation-series passage times agree with the explicit series") {
    CHECK_EQ(passage_time_kac_series(ModelParams(1, 0.25), 1, 0).value,
             doctest::Approx(4.0).epsilon(1e-12));
    CHECK_EQ(passage_time_kac_series(ModelParams(3, 0.2), 2, 2).value,
             doctest::Approx(8.0 / 3.0).epsilon(1e-15));
    CHECK_EQ(passage_time_kac_series(ModelParams(2, 0.25), 2, 0).value,
             doctest::Approx(8.0).epsilon(1e-12));

    for (int n = 1; n <= 8; ++n) {
        for (double p : {0.1, 0.25, 0.5, 0.75}) {
            const ModelParams params(n, p);
            for (int i = 0; i <= n; ++i) {
                for (int j = 0; j <= n; ++j) {
                    const PassageTimeReport a =
                        passage_time_kac_series(params, i, j);
                    const PassageTimeReport b =
                        passage_time_explicit(params, i, j);
                    CHECK(std::abs(a.value - b.value) <=
                          *a.error_bound + *b.error_bound);
                }
            }
        }
    }
}

TEST_CASE("series truncation control") {
    SeriesControl tight;
    tight.max_terms = 10;
    CHECK_THROWS_AS(passage_time_explicit(ModelParams(4, 0.05), 4, 0, tight),
                    NonConvergence);
    try {
        passage_time_kac_series(ModelParams(4, 0.05), 4, 0, tight);
        CHECK(false);
    } catch (const NonConvergence& e) {
        CHECK_EQ(e.terms_used, 10);
    }
    SeriesControl bad;
    bad.abs_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = SeriesControl{};
    bad.min_terms = 0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = SeriesControl{};
    bad.max_terms = 4;
    bad.min_terms = 5;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("auxiliary rational functions phi_k") {
    CHECK_EQ(phi(ModelParams(2, 0.25), 1, 1.0), 4.0);
    CHECK_EQ(phi(ModelParams(3, 0.5), 2, 0.9), 3.0);
    CHECK_THROWS_AS(phi(ModelParams(2, 0.25), 0, 1.0), PoleAtArgument);
    CHECK_THROWS_AS(phi(ModelParams(2, 0.25), 3, 0.5), DomainError);
}

TEST_CASE("occupation generating function F") {
    const ModelParams p1(1, 0.25);
    CHECK_EQ(f_generating(p1, 1, 0, 0.5),
             doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK_EQ(f_generating(ModelParams(2, 0.25), 0, 0, 0.0), 0.0);
    CHECK_THROWS_AS(f_generating(p1, 1, 0, 1.0), DomainError);
    CHECK_THROWS_AS(f_generating(p1, 1, 0, -1.0), DomainError);

    SUBCASE("closed forms from the phi decomposition") {
        // phi_k carries its own binomial weight, so the expansions of
        // (1 -+ q^n)^N need alternating signs only:
        //   F_N0 = 2^-N sum_k (-1)^k phi_k,  1 + F_00 = 2^-N sum_k phi_k.
        const ModelParams p2(2, 0.25);
        const double z = 0.9;
        const double f20 = f_generating(p2, 2, 0, z);
        const double phi_sum_alt =
            0.25 * (phi(p2, 0, z) - phi(p2, 1, z) + phi(p2, 2, z));
        CHECK(std::abs(f20 - phi_sum_alt) <= 1e-10);

        const double f00 = f_generating(p2, 0, 0, z);
        const double phi_sum =
            0.25 * (phi(p2, 0, z) + phi(p2, 1, z) + phi(p2, 2, z));
        CHECK(std::abs(1.0 + f00 - phi_sum) <= 1e-10);
    }
}

TEST_CASE("hitting-time generating function G") {
    CHECK_EQ(g_generating(ModelParams(3, 0.3), 2, 1, 0.0), 0.0);
    CHECK_EQ(g_generating(ModelParams(1, 0.5), 0, 0, 0.5),
             doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    SUBCASE("sub-probability for z in [0, 1)") {
        const ModelParams params(4, 0.2);
        for (double z : {0.0, 0.3, 0.6, 0.9, 0.99}) {
            for (int i = 0; i <= 4; ++i) {
                const double g = g_generating(params, i, 2, z);
                CHECK(g >= 0.0);
                CHECK(g < 1.0);
            }
        }
    }
    SUBCASE("slope at z = 1 recovers the mean passage time") {
        for (int n : {2, 4, 6}) {
            const ModelParams params(n, 0.25);
            CHECK(rel_diff(g_slope_at_one(params, n, 0),
                           traversal_time(params).value) <= 1e-3);
            CHECK(rel_diff(g_slope_at_one(params, 0, 0),
                           return_time_zero(params).value) <= 1e-3);
            const int j = n / 2;
            CHECK(rel_diff(g_slope_at_one(params, j, j),
                           return_time_class(params, j).value) <= 1e-3);
        }
        const ModelParams odd(5, 0.35);
        CHECK(rel_diff(g_slope_at_one(odd, 5, 0),
                       traversal_time(odd).value) <= 1e-3);
    }
}

TEST_CASE("binomial convolution identity") {
    CHECK(vandermonde_check(4, 2));
    CHECK(vandermonde_check(7, 0));
    CHECK(vandermonde_check(30, 13));
    CHECK_THROWS_AS(vandermonde_check(4, 5), DomainError);
    for (int n = 0; n <= 40; ++n)
        for (int j = 0; j <= n; ++j) CHECK(vandermonde_check(n, j));
}
