#include "mutwalk/rational.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "detail/chain_structure.hpp"
#include "detail/linsolve.hpp"

namespace mutwalk::rational {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
    });
}

BigInt pow10_int(int e) {
    BigInt r = 1;
    for (int t = 0; t < e; ++t) r *= 10;
    return r;
}

// cpp_int's string constructor treats a leading zero as an octal prefix,
// so digit runs are normalized first.
BigInt int_from_digits(std::string_view digits) {
    const size_t nz = digits.find_first_not_of('0');
    if (nz == std::string_view::npos) return BigInt(0);
    return BigInt(std::string(digits.substr(nz)));
}

Rational rpow(const Rational& base, int e) {
    Rational r = 1;
    for (int t = 0; t < e; ++t) r *= base;
    return r;
}

Rational parse_fraction(std::string_view text) {
    const size_t slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    bool neg = false;
    if (!num.empty() && (num.front() == '+' || num.front() == '-')) {
        neg = num.front() == '-';
        num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den))
        throw DomainError("malformed fraction: " + std::string(text));
    const BigInt n = int_from_digits(num);
    const BigInt d = int_from_digits(den);
    if (d == 0) throw DomainError("fraction with zero denominator");
    Rational v{n, d};
    return neg ? -v : v;
}

Rational parse_decimal(std::string_view text) {
    size_t pos = 0;
    bool neg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        neg = text[pos] == '-';
        ++pos;
    }
    std::string digits;
    int frac_digits = 0;
    bool any = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        digits.push_back(text[pos++]);
        any = true;
    }
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() &&
               std::isdigit(static_cast<unsigned char>(text[pos]))) {
            digits.push_back(text[pos++]);
            ++frac_digits;
            any = true;
        }
    }
    int exp10 = 0;
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        ++pos;
        bool exp_neg = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            exp_neg = text[pos] == '-';
            ++pos;
        }
        std::string_view rest = text.substr(pos);
        if (!all_digits(rest) || rest.size() > 6)
            throw DomainError("malformed exponent in: " + std::string(text));
        exp10 = std::stoi(std::string(rest));
        if (exp_neg) exp10 = -exp10;
        pos = text.size();
    }
    if (pos != text.size() || !any)
        throw DomainError("malformed number: " + std::string(text));
    Rational v{int_from_digits(digits)};
    const int shift = exp10 - frac_digits;
    if (shift > 0)
        v *= Rational(pow10_int(shift));
    else if (shift < 0)
        v /= Rational(pow10_int(-shift));
    return neg ? -v : v;
}

void check_probability(const Rational& p) {
    if (!(p > 0 && p < 1))
        throw DomainError("mutation probability must lie strictly inside (0,1)");
}

}  // namespace

BigInt binomial_int(int n, int k) {
    if (n < 0) throw DomainError("binomial requires n >= 0");
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (int t = 1; t <= k; ++t) {
        r *= n - k + t;
        r /= t;  // exact: r is C(n-k+t, t) times an integer at every step
    }
    return r;
}

RationalMatrix::RationalMatrix(int size, Rational fill) : size_(size) {
    if (size < 1) throw DomainError("matrix size must be >= 1");
    entries_.assign(static_cast<size_t>(size) * size, std::move(fill));
}

Rational parse_rational(std::string_view text, bool require_open_unit) {
    auto is_space = [](char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r';
    };
    while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
    while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
    if (text.empty()) throw DomainError("empty number");
    const Rational v = text.find('/') != std::string_view::npos
                           ? parse_fraction(text)
                           : parse_decimal(text);
    if (require_open_unit && !(v > 0 && v < 1))
        throw DomainError("value " + to_string(v) +
                          " outside the open interval (0,1)");
    return v;
}

std::string to_string(const Rational& value) {
    const BigInt num = numerator(value);
    const BigInt den = denominator(value);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

RationalMatrix transition_matrix(int n_sites, const Rational& p) {
    if (n_sites < 1) throw DomainError("n_sites must be >= 1");
    check_probability(p);
    const int n = n_sites;
    const Rational q = 1 - p;
    RationalMatrix m(n + 1);
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            Rational sum = 0;
            const int k_lo = std::max(0, j - (n - i));
            const int k_hi = std::min(i, j);
            for (int k = k_lo; k <= k_hi; ++k) {
                sum += Rational(binomial_int(i, k) * binomial_int(n - i, j - k)) *
                       rpow(p, i + j - 2 * k) * rpow(q, n - i - j + 2 * k);
            }
            m(i, j) = sum;
        }
    }
    return m;
}

RationalMatrix ehrenfest_matrix(int n_sites) {
    if (n_sites < 1) throw DomainError("n_sites must be >= 1");
    RationalMatrix m(n_sites + 1);
    for (int i = 0; i <= n_sites; ++i) {
        if (i > 0) m(i, i - 1) = Rational(i, n_sites);
        if (i < n_sites) m(i, i + 1) = Rational(n_sites - i, n_sites);
    }
    return m;
}

std::vector<Rational> hitting_times_solve(const RationalMatrix& matrix,
                                          int j) {
    const int s = matrix.size();
    if (j < 0 || j >= s) throw DomainError("target class out of range");
    const int n = s - 1;
    std::vector<int> idx;
    idx.reserve(static_cast<size_t>(n));
    for (int i = 0; i < s; ++i)
        if (i != j) idx.push_back(i);
    std::vector<Rational> a(static_cast<size_t>(n) * n, Rational(0));
    std::vector<Rational> ones(static_cast<size_t>(n), Rational(1));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            a[static_cast<size_t>(r) * n + c] =
                Rational(r == c ? 1 : 0) -
                matrix(idx[static_cast<size_t>(r)], idx[static_cast<size_t>(c)]);
    const std::vector<Rational> x =
        detail::solve_linear<Rational, false>(a, ones, n, 1);
    std::vector<Rational> h(static_cast<size_t>(s), Rational(0));
    for (int r = 0; r < n; ++r)
        h[static_cast<size_t>(idx[static_cast<size_t>(r)])] =
            x[static_cast<size_t>(r)];
    Rational hj = 1;
    for (int k = 0; k < s; ++k)
        if (k != j) hj += matrix(j, k) * h[static_cast<size_t>(k)];
    h[static_cast<size_t>(j)] = hj;
    return h;
}

RationalMatrix potential_matrix(const RationalMatrix& matrix, int j) {
    const int s = matrix.size();
    if (j < 0 || j >= s) throw DomainError("target class out of range");
    const int n = s - 1;
    std::vector<int> idx;
    idx.reserve(static_cast<size_t>(n));
    for (int i = 0; i < s; ++i)
        if (i != j) idx.push_back(i);
    std::vector<Rational> a(static_cast<size_t>(n) * n, Rational(0));
    std::vector<Rational> id(static_cast<size_t>(n) * n, Rational(0));
    for (int r = 0; r < n; ++r) {
        id[static_cast<size_t>(r) * n + r] = 1;
        for (int c = 0; c < n; ++c)
            a[static_cast<size_t>(r) * n + c] =
                Rational(r == c ? 1 : 0) -
                matrix(idx[static_cast<size_t>(r)], idx[static_cast<size_t>(c)]);
    }
    const std::vector<Rational> x =
        detail::solve_linear<Rational, false>(a, id, n, n);
    RationalMatrix g(s);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            g(idx[static_cast<size_t>(r)], idx[static_cast<size_t>(c)]) =
                x[static_cast<size_t>(r) * n + c];
    g(j, j) = 1;
    for (int c = 0; c < n; ++c) {
        Rational v = 0;
        for (int l = 0; l < n; ++l)
            v += matrix(j, idx[static_cast<size_t>(l)]) *
                 x[static_cast<size_t>(l) * n + c];
        g(j, idx[static_cast<size_t>(c)]) = v;
    }
    return g;
}

Rational lempot_residual(const RationalMatrix& matrix, int j) {
    const RationalMatrix g = potential_matrix(matrix, j);
    const int s = matrix.size();
    Rational worst = 0;
    for (int i = 0; i < s; ++i) {
        for (int k = 0; k < s; ++k) {
            Rational gp = 0;
            for (int l = 0; l < s; ++l) gp += g(i, l) * matrix(l, k);
            Rational r = gp - Rational(k == j ? 1 : 0) - g(i, k) +
                         Rational(i == k ? 1 : 0);
            if (r < 0) r = -r;
            if (r > worst) worst = r;
        }
    }
    return worst;
}

std::vector<Rational> stationary_distribution(const RationalMatrix& matrix) {
    const int s = matrix.size();
    const auto structure = detail::analyze_chain(
        s, [&](int u, int v) { return matrix(u, v) != 0; });
    if (!structure.primitive())
        throw DomainError(
            "chain is not primitive (reducible or periodic); the n-step law "
            "has no unique limit");
    std::vector<Rational> a(static_cast<size_t>(s) * s, Rational(0));
    std::vector<Rational> b(static_cast<size_t>(s), Rational(0));
    for (int r = 0; r < s; ++r)
        for (int c = 0; c < s; ++c)
            a[static_cast<size_t>(r) * s + c] =
                matrix(c, r) - Rational(r == c ? 1 : 0);
    for (int c = 0; c < s; ++c) a[static_cast<size_t>(s - 1) * s + c] = 1;
    b[static_cast<size_t>(s) - 1] = 1;
    return detail::solve_linear<Rational, false>(a, b, s, 1);
}

TransitionMatrix to_transition_matrix(const RationalMatrix& matrix) {
    const int s = matrix.size();
    std::vector<std::vector<double>> rows(
        static_cast<size_t>(s), std::vector<double>(static_cast<size_t>(s)));
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            rows[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                matrix(i, j).convert_to<double>();
    return TransitionMatrix(std::move(rows));
}

}  // namespace mutwalk::rational
