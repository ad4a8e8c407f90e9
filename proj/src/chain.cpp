#include "mutwalk/chain.hpp"

#include <cmath>
#include <string>

namespace mutwalk {

namespace {

constexpr int kExactBinomialMax = 60;  // C(60,30) still fits in 64 bits
constexpr int kLogDomainThreshold = 40;

double row_sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

void check_probability_vector(const std::vector<double>& probs) {
    if (probs.empty()) throw DomainError("probability vector is empty");
    for (double x : probs) {
        if (!(x >= 0.0) || x > 1.0 + 1e-12)
            throw DomainError("probability entry outside [0,1]: " +
                              std::to_string(x));
    }
    const double s = row_sum(probs);
    if (std::abs(s - 1.0) > 1e-12)
        throw DomainError("probabilities sum to " + std::to_string(s) +
                          ", not 1");
}

// log C(n,k) via lgamma, for the large-n regime.
double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
           std::lgamma(n - k + 1.0);
}

}  // namespace

ModelParams::ModelParams(int n_sites, double mut_prob)
    : n_sites_(n_sites), mut_prob_(mut_prob) {
    if (n_sites < 1)
        throw DomainError("n_sites must be >= 1, got " +
                          std::to_string(n_sites));
    if (!(mut_prob > 0.0) || !(mut_prob < 1.0))
        throw DomainError("mut_prob must lie strictly inside (0,1), got " +
                          std::to_string(mut_prob));
}

ClassDistribution::ClassDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
    check_probability_vector(probs_);
}

ClassDistribution ClassDistribution::point_mass(int n_classes, int cls) {
    if (n_classes < 1 || cls < 0 || cls >= n_classes)
        throw DomainError("point mass class out of range");
    std::vector<double> probs(static_cast<size_t>(n_classes), 0.0);
    probs[static_cast<size_t>(cls)] = 1.0;
    return ClassDistribution(std::move(probs));
}

TransitionMatrix::TransitionMatrix(std::vector<std::vector<double>> rows) {
    size_ = static_cast<int>(rows.size());
    if (size_ == 0) throw DomainError("transition matrix is empty");
    entries_.reserve(static_cast<size_t>(size_) * size_);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != size_)
            throw DomainError("transition matrix is not square");
        check_probability_vector(row);
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
}

TransitionMatrix TransitionMatrix::identity(int size) {
    if (size < 1) throw DomainError("matrix size must be >= 1");
    std::vector<double> e(static_cast<size_t>(size) * size, 0.0);
    for (int i = 0; i < size; ++i) e[static_cast<size_t>(i) * size + i] = 1.0;
    return TransitionMatrix(size, std::move(e));
}

ClassDistribution TransitionMatrix::row(int i) const {
    if (i < 0 || i >= size_) throw DomainError("row index out of range");
    auto first = entries_.begin() + static_cast<size_t>(i) * size_;
    return ClassDistribution(std::vector<double>(first, first + size_));
}

std::uint64_t binomial_u64(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (n > kExactBinomialMax)
        throw DomainError("binomial_u64 supports n <= 60");
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int t = 1; t <= k; ++t) {
        // exact at every step: r * (n-k+t) is divisible by t
        r = r * static_cast<std::uint64_t>(n - k + t) /
            static_cast<std::uint64_t>(t);
    }
    return r;
}

double binomial(int n, int k) {
    if (n < 0) throw DomainError("binomial requires n >= 0");
    if (k < 0 || k > n) return 0.0;
    if (n <= kExactBinomialMax)
        return static_cast<double>(binomial_u64(n, k));
    return std::exp(log_binomial(n, k));
}

double p_step(const ModelParams& params, int n) {
    if (n < 0) throw DomainError("step count must be >= 0");
    if (n == 0) return 1.0;
    return 0.5 * (1.0 + std::pow(params.step_correlation(), n));
}

SingleSiteKernel single_site_power(const ModelParams& params, int n) {
    const double stay = p_step(params, n);
    return SingleSiteKernel{stay, 1.0 - stay, n};
}

double class_probability(const ModelParams& params, int start_class, int j,
                         int n) {
    const int N = params.n_sites();
    if (start_class < 0 || start_class > N)
        throw DomainError("start class out of range [0, N]");
    if (j < 0 || j > N) return 0.0;
    if (n < 0) throw DomainError("step count must be >= 0");
    if (n == 0) return start_class == j ? 1.0 : 0.0;

    const int i = start_class;
    const double pn = p_step(params, n);
    const double qn = 1.0 - pn;
    // Y_n ~ Bin(i, p_n) + Bin(N-i, 1-p_n); convolve over the count k of
    // initially-one sites still equal to one.
    const int k_lo = std::max(0, j - (N - i));
    const int k_hi = std::min(i, j);
    double total = 0.0;
    if (N <= kLogDomainThreshold) {
        for (int k = k_lo; k <= k_hi; ++k) {
            total += binomial(i, k) * binomial(N - i, j - k) *
                     std::pow(qn, i + j - 2 * k) *
                     std::pow(pn, N - i - j + 2 * k);
        }
    } else {
        const double lq = std::log(qn);
        const double lp = std::log(pn);
        for (int k = k_lo; k <= k_hi; ++k) {
            total += std::exp(log_binomial(i, k) + log_binomial(N - i, j - k) +
                              (i + j - 2 * k) * lq +
                              (N - i - j + 2 * k) * lp);
        }
    }
    return total;
}

ClassDistribution class_distribution(const ModelParams& params,
                                     int start_class, int n) {
    const int N = params.n_sites();
    if (start_class < 0 || start_class > N)
        throw DomainError("start class out of range [0, N]");
    if (n == 0) return ClassDistribution::point_mass(N + 1, start_class);
    std::vector<double> probs(static_cast<size_t>(N) + 1);
    for (int j = 0; j <= N; ++j)
        probs[static_cast<size_t>(j)] = class_probability(params, start_class, j, n);
    return ClassDistribution(std::move(probs));
}

TransitionMatrix transition_matrix(const ModelParams& params) {
    const int N = params.n_sites();
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<size_t>(N) + 1);
    for (int i = 0; i <= N; ++i)
        rows.push_back(class_distribution(params, i, 1).probs());
    return TransitionMatrix(std::move(rows));
}

TransitionMatrix n_step_matrix(const TransitionMatrix& matrix, int n) {
    if (n < 0) throw DomainError("matrix power must be >= 0");
    const int s = matrix.size();
    TransitionMatrix result = TransitionMatrix::identity(s);
    for (int step = 0; step < n; ++step) {
        std::vector<double> next(static_cast<size_t>(s) * s, 0.0);
        for (int i = 0; i < s; ++i) {
            for (int k = 0; k < s; ++k) {
                const double a = result(i, k);
                if (a == 0.0) continue;
                for (int j = 0; j < s; ++j)
                    next[static_cast<size_t>(i) * s + j] += a * matrix(k, j);
            }
        }
        result = TransitionMatrix(s, std::move(next));
    }
    return result;
}

}  // namespace mutwalk
