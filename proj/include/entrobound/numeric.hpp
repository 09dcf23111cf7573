// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace entrobound {

/// Neumaier-compensated accumulator. Long weighted sums stay accurate to a
/// few ulps independent of term count, which keeps the library's 1e-12
/// mass and moment tolerances meaningful for large discretization grids.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Symmetric 2x2 matrix with closed-form spectral helpers.
struct Sym2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    double det() const noexcept { return xx * yy - xy * xy; }

    /// Eigenvalues, smallest first.
    std::array<double, 2> eigenvalues() const noexcept {
        const double mid = 0.5 * (xx + yy);
        const double off = std::hypot(0.5 * (xx - yy), xy);
        return {mid - off, mid + off};
    }

    /// Solves A s = b by Cramer's rule; caller checks conditioning first.
    std::array<double, 2> solve(const std::array<double, 2>& b) const noexcept {
        const double d = det();
        return {(yy * b[0] - xy * b[1]) / d, (xx * b[1] - xy * b[0]) / d};
    }
};

/// ln cosh u without overflow for large |u|.
inline double log_cosh(double u) noexcept {
    const double a = std::abs(u);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

/// u^2/2 - ln cosh u. Strictly positive for u != 0, zero at u = 0; this is
/// the logarithmic gap in the pointwise bound cosh(u) exp(-u^2/2) < 1.
/// Evaluated by series below |u| = 1e-2 because the direct difference
/// cancels to zero in double precision there (the gap is O(u^4)).
inline double cosh_gauss_deficit(double u) noexcept {
    const double a = std::abs(u);
    if (a == 0.0) return 0.0;
    if (a < 1e-2) {
        const double u2 = a * a;
        const double u4 = u2 * u2;
        return u4 * (1.0 / 12.0 - u2 / 45.0 + u4 * (17.0 / 2520.0));
    }
    return 0.5 * a * a - log_cosh(a);
}

}  // namespace entrobound
