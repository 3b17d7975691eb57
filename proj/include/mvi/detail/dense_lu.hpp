#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "mvi/errors.hpp"

namespace mvi::detail {

/// Row-major square matrix, just enough for nodal systems of a few nodes.
class DenseMatrix {
public:
    explicit DenseMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }

private:
    std::size_t n_;
    std::vector<double> a_;
};

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Throws SingularSystemError when a pivot falls below `pivot_tol` times the
/// largest entry of A.
inline std::vector<double> lu_solve(DenseMatrix a, std::span<const double> b,
                                    double pivot_tol = 1e-13) {
    const std::size_t n = a.size();
    std::vector<double> x(b.begin(), b.end());
    if (x.size() != n) throw SingularSystemError("lu_solve: rhs size mismatch");

    double scale = 0.0;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) scale = std::max(scale, std::abs(a(r, c)));
    if (scale == 0.0) throw SingularSystemError("lu_solve: zero matrix");

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(a(r, k)) > std::abs(a(piv, k))) piv = r;
        if (std::abs(a(piv, k)) <= pivot_tol * scale)
            throw SingularSystemError("lu_solve: matrix is singular");
        if (piv != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(piv, c));
            std::swap(x[k], x[piv]);
        }
        for (std::size_t r = k + 1; r < n; ++r) {
            const double f = a(r, k) / a(k, k);
            if (f == 0.0) continue;
            for (std::size_t c = k; c < n; ++c) a(r, c) -= f * a(k, c);
            x[r] -= f * x[k];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        double s = x[k];
        for (std::size_t c = k + 1; c < n; ++c) s -= a(k, c) * x[c];
        x[k] = s / a(k, k);
    }
    return x;
}

} // namespace mvi::detail
