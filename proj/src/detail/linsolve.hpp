#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "mutwalk/errors.hpp"

// Internal Gauss-Jordan elimination shared by the floating-point and exact
// oracles.  PartialPivot selects the largest pivot by magnitude (the right
// policy for doubles); without it the first nonzero pivot is taken, which
// is enough for exact arithmetic.
namespace mutwalk::detail {

template <class T, bool PartialPivot>
void eliminate_augmented(std::vector<T>& aug, int n, int m) {
    const int w = n + m;
    auto at = [&](int r, int c) -> T& {
        return aug[static_cast<size_t>(r) * w + c];
    };
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        if constexpr (PartialPivot) {
            double best = 0.0;
            for (int r = col; r < n; ++r) {
                const double mag = std::abs(at(r, col));
                if (mag > best) {
                    best = mag;
                    pivot = r;
                }
            }
        } else {
            for (int r = col; r < n; ++r) {
                if (at(r, col) != 0) {
                    pivot = r;
                    break;
                }
            }
        }
        if (pivot < 0)
            throw SingularSystem("singular linear system (zero pivot column)");
        if (pivot != col)
            for (int c = 0; c < w; ++c) std::swap(at(pivot, c), at(col, c));
        const T d = at(col, col);
        for (int c = col; c < w; ++c) at(col, c) /= d;
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const T f = at(r, col);
            if (f == 0) continue;
            for (int c = col; c < w; ++c) at(r, c) -= f * at(col, c);
        }
    }
}

// Solves A X = B for the n x m matrix X; a is n x n row-major, b is n x m.
template <class T, bool PartialPivot>
std::vector<T> solve_linear(const std::vector<T>& a, const std::vector<T>& b,
                            int n, int m) {
    const int w = n + m;
    std::vector<T> aug(static_cast<size_t>(n) * w, T(0));
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c)
            aug[static_cast<size_t>(r) * w + c] = a[static_cast<size_t>(r) * n + c];
        for (int c = 0; c < m; ++c)
            aug[static_cast<size_t>(r) * w + n + c] =
                b[static_cast<size_t>(r) * m + c];
    }
    eliminate_augmented<T, PartialPivot>(aug, n, m);
    std::vector<T> x(static_cast<size_t>(n) * m, T(0));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < m; ++c)
            x[static_cast<size_t>(r) * m + c] =
                aug[static_cast<size_t>(r) * w + n + c];
    return x;
}

}  // namespace mutwalk::detail
