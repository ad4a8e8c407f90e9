#pragma once

#include <vector>

#include "mutwalk/chain.hpp"

namespace mutwalk {

// Expected visit counts G(i,k) = E_i(number of n in [0, tau_j) with Y_n = k)
// for a fixed target class j.  Column j is zero except G(j,j) = 1, and row
// sums equal the mean hitting times E(tau_j | Y_0 = i).
class PotentialMatrix {
  public:
    PotentialMatrix(int target_class, int size, std::vector<double> entries);

    int target_class() const { return target_class_; }
    int size() const { return size_; }
    double operator()(int i, int k) const {
        return entries_[static_cast<size_t>(i) * size_ + k];
    }
    std::vector<double> row_sums() const;

  private:
    int target_class_;
    int size_;
    std::vector<double> entries_;
};

// Mean hitting times h(i) = E(tau_j | Y_0 = i) for every start class,
// obtained by a partial-pivoted linear solve on the system restricted to
// the complement of j; h(j) is the return time 1 + sum_{k!=j} P(j,k) h(k).
std::vector<double> hitting_times_solve(const TransitionMatrix& matrix, int j);

// Visit-count matrix for target class j (see PotentialMatrix).
PotentialMatrix potential_matrix(const TransitionMatrix& matrix, int j);

// Max-norm residual of the potential-matrix identity G P = H + G - I,
// where H puts a unit mass in column j on every row.
double lempot_residual(const TransitionMatrix& matrix, int j);

// Unique stationary probability vector of a primitive chain.  Throws
// DomainError when no power of the matrix is strictly positive (periodic
// or reducible input), rather than returning a Cesaro average.
ClassDistribution stationary_distribution(const TransitionMatrix& matrix);

// max_{i,j} |P^n(i,j) - pi(j)|; decays geometrically for primitive P.
double ergodic_limit_residual(const TransitionMatrix& matrix, int n);

// The urn comparator chain: P(i, i-1) = i/N, P(i, i+1) = (N-i)/N.
// Periodic, so hitting-time solves apply but the ergodic limit does not.
TransitionMatrix ehrenfest_matrix(int n_sites);

}  // namespace mutwalk
