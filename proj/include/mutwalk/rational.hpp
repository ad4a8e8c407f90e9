#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mutwalk/chain.hpp"

// Exact-arithmetic backend.  When p is a known fraction the whole chain is
// rational, Gaussian elimination stays exact, and the closed-form results
// become integer identities instead of tolerance tests.
namespace mutwalk::rational {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Exact C(n, k) with the same out-of-range-is-zero convention as
// mutwalk::binomial, but unbounded n.
BigInt binomial_int(int n, int k);

// Square rational matrix, row-major.
class RationalMatrix {
  public:
    RationalMatrix(int size, Rational fill = Rational(0));

    int size() const { return size_; }
    Rational& operator()(int i, int j) {
        return entries_[static_cast<size_t>(i) * size_ + j];
    }
    const Rational& operator()(int i, int j) const {
        return entries_[static_cast<size_t>(i) * size_ + j];
    }

  private:
    int size_;
    std::vector<Rational> entries_;
};

// Parses "a/b" or a decimal literal ("0.25", "1e-3") into an exact value.
// Throws DomainError on malformed input or a value outside (0,1) when
// require_open_unit is set.
Rational parse_rational(std::string_view text, bool require_open_unit = false);

// Lowest-terms "a" or "a/b" rendering.
std::string to_string(const Rational& value);

// Exact counterparts of the chain and oracle operations.
RationalMatrix transition_matrix(int n_sites, const Rational& p);
RationalMatrix ehrenfest_matrix(int n_sites);
std::vector<Rational> hitting_times_solve(const RationalMatrix& matrix, int j);
RationalMatrix potential_matrix(const RationalMatrix& matrix, int j);
Rational lempot_residual(const RationalMatrix& matrix, int j);
std::vector<Rational> stationary_distribution(const RationalMatrix& matrix);

// Rounds every entry to double, yielding the floating-point chain.
TransitionMatrix to_transition_matrix(const RationalMatrix& matrix);

}  // namespace mutwalk::rational
