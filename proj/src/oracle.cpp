#include "mutwalk/oracle.hpp"

#include <cmath>
#include <string>

#include "detail/chain_structure.hpp"
#include "detail/linsolve.hpp"

namespace mutwalk {

namespace {

void check_target(const TransitionMatrix& matrix, int j) {
    if (j < 0 || j >= matrix.size())
        throw DomainError("target class out of range");
}

// Assembles I - Q over the complement of j and returns the complement
// index map alongside it.
struct RestrictedSystem {
    std::vector<int> idx;
    std::vector<double> a;
};

RestrictedSystem restricted_system(const TransitionMatrix& matrix, int j) {
    const int s = matrix.size();
    RestrictedSystem sys;
    sys.idx.reserve(static_cast<size_t>(s) - 1);
    for (int i = 0; i < s; ++i)
        if (i != j) sys.idx.push_back(i);
    const int n = s - 1;
    sys.a.assign(static_cast<size_t>(n) * n, 0.0);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            sys.a[static_cast<size_t>(r) * n + c] =
                (r == c ? 1.0 : 0.0) - matrix(sys.idx[static_cast<size_t>(r)],
                                              sys.idx[static_cast<size_t>(c)]);
    return sys;
}

}  // namespace

PotentialMatrix::PotentialMatrix(int target_class, int size,
                                 std::vector<double> entries)
    : target_class_(target_class), size_(size), entries_(std::move(entries)) {
    if (size_ < 1 || target_class_ < 0 || target_class_ >= size_ ||
        entries_.size() != static_cast<size_t>(size_) * size_)
        throw DomainError("malformed potential matrix");
}

std::vector<double> PotentialMatrix::row_sums() const {
    std::vector<double> sums(static_cast<size_t>(size_), 0.0);
    for (int i = 0; i < size_; ++i) {
        double s = 0.0;
        for (int k = 0; k < size_; ++k) s += (*this)(i, k);
        sums[static_cast<size_t>(i)] = s;
    }
    return sums;
}

std::vector<double> hitting_times_solve(const TransitionMatrix& matrix,
                                        int j) {
    check_target(matrix, j);
    const int s = matrix.size();
    const int n = s - 1;
    const RestrictedSystem sys = restricted_system(matrix, j);
    const std::vector<double> ones(static_cast<size_t>(n), 1.0);
    const std::vector<double> x =
        detail::solve_linear<double, true>(sys.a, ones, n, 1);
    std::vector<double> h(static_cast<size_t>(s), 0.0);
    for (int r = 0; r < n; ++r)
        h[static_cast<size_t>(sys.idx[static_cast<size_t>(r)])] =
            x[static_cast<size_t>(r)];
    double hj = 1.0;
    for (int k = 0; k < s; ++k)
        if (k != j) hj += matrix(j, k) * h[static_cast<size_t>(k)];
    h[static_cast<size_t>(j)] = hj;
    return h;
}

PotentialMatrix potential_matrix(const TransitionMatrix& matrix, int j) {
    check_target(matrix, j);
    const int s = matrix.size();
    const int n = s - 1;
    const RestrictedSystem sys = restricted_system(matrix, j);
    std::vector<double> id(static_cast<size_t>(n) * n, 0.0);
    for (int r = 0; r < n; ++r) id[static_cast<size_t>(r) * n + r] = 1.0;
    const std::vector<double> x =
        detail::solve_linear<double, true>(sys.a, id, n, n);

    std::vector<double> e(static_cast<size_t>(s) * s, 0.0);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            e[static_cast<size_t>(sys.idx[static_cast<size_t>(r)]) * s +
              sys.idx[static_cast<size_t>(c)]] =
                x[static_cast<size_t>(r) * n + c];
    e[static_cast<size_t>(j) * s + j] = 1.0;
    // row j: one step from the target, then the complement counts
    for (int c = 0; c < n; ++c) {
        double v = 0.0;
        for (int l = 0; l < n; ++l)
            v += matrix(j, sys.idx[static_cast<size_t>(l)]) *
                 x[static_cast<size_t>(l) * n + c];
        e[static_cast<size_t>(j) * s + sys.idx[static_cast<size_t>(c)]] = v;
    }
    return PotentialMatrix(j, s, std::move(e));
}

double lempot_residual(const TransitionMatrix& matrix, int j) {
    check_target(matrix, j);
    const PotentialMatrix g = potential_matrix(matrix, j);
    const int s = matrix.size();
    double worst = 0.0;
    for (int i = 0; i < s; ++i) {
        for (int k = 0; k < s; ++k) {
            double gp = 0.0;
            for (int l = 0; l < s; ++l) gp += g(i, l) * matrix(l, k);
            const double h = k == j ? 1.0 : 0.0;
            const double id = i == k ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(gp - h - g(i, k) + id));
        }
    }
    return worst;
}

ClassDistribution stationary_distribution(const TransitionMatrix& matrix) {
    const int s = matrix.size();
    const auto structure = detail::analyze_chain(
        s, [&](int u, int v) { return matrix(u, v) > 0.0; });
    if (!structure.primitive())
        throw DomainError(
            "chain is not primitive (reducible or periodic); the n-step law "
            "has no unique limit");
    std::vector<double> a(static_cast<size_t>(s) * s, 0.0);
    std::vector<double> b(static_cast<size_t>(s), 0.0);
    for (int r = 0; r < s; ++r)
        for (int c = 0; c < s; ++c)
            a[static_cast<size_t>(r) * s + c] =
                matrix(c, r) - (r == c ? 1.0 : 0.0);
    for (int c = 0; c < s; ++c) a[static_cast<size_t>(s - 1) * s + c] = 1.0;
    b[static_cast<size_t>(s) - 1] = 1.0;
    std::vector<double> pi = detail::solve_linear<double, true>(a, b, s, 1);
    return ClassDistribution(std::move(pi));
}

double ergodic_limit_residual(const TransitionMatrix& matrix, int n) {
    if (n < 0) throw DomainError("step count must be >= 0");
    const ClassDistribution pi = stationary_distribution(matrix);
    const TransitionMatrix pn = n_step_matrix(matrix, n);
    const int s = matrix.size();
    double worst = 0.0;
    for (int i = 0; i < s; ++i)
        for (int k = 0; k < s; ++k)
            worst = std::max(worst, std::abs(pn(i, k) - pi[k]));
    return worst;
}

TransitionMatrix ehrenfest_matrix(int n_sites) {
    if (n_sites < 1) throw DomainError("n_sites must be >= 1");
    const int s = n_sites + 1;
    std::vector<std::vector<double>> rows(
        static_cast<size_t>(s), std::vector<double>(static_cast<size_t>(s), 0.0));
    for (int i = 0; i <= n_sites; ++i) {
        if (i > 0)
            rows[static_cast<size_t>(i)][static_cast<size_t>(i) - 1] =
                static_cast<double>(i) / n_sites;
        if (i < n_sites)
            rows[static_cast<size_t>(i)][static_cast<size_t>(i) + 1] =
                static_cast<double>(n_sites - i) / n_sites;
    }
    return TransitionMatrix(std::move(rows));
}

}  // namespace mutwalk
