// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "entrobound/errors.hpp"
#include "entrobound/measure.hpp"
#include "entrobound/numeric.hpp"

namespace entrobound {

/// Dual variables (u, v) of the exponential tilt e^{u z + v z^2}.
struct TiltParams {
    double u = 0.0;
    double v = 0.0;
};

/// Value, gradient and Hessian of the bivariate log-Laplace transform
/// Lambda(u, v) = ln ∫ e^{u z + v z^2} drho(z). The gradient is the tilted
/// mean of (Z, Z^2) and the Hessian its tilted covariance, so the Hessian
/// is positive semidefinite.
struct CgfEval {
    double value = 0.0;
    std::array<double, 2> gradient{0.0, 0.0};
    Sym2 hessian;
};

/// Position of a moment point relative to the closed convex hull of
/// {(z, z^2) : z in supp rho} — the set of moment pairs with finite rate.
enum class Region { interior, boundary, outside };

inline const char* to_string(Region r) noexcept {
    switch (r) {
        case Region::interior: return "interior";
        case Region::boundary: return "boundary";
        default: return "outside";
    }
}

/// Result of the concave maximization defining the rate function.
/// argmax is empty for boundary and outside points, where the supremum is
/// not attained at finite tilts.
struct CramerResult {
    double value = 0.0;
    std::optional<TiltParams> argmax;
    int iterations = 0;
    bool converged = false;
    Region region = Region::interior;
};

namespace detail {

/// Exponents u z + v z^2 with the running maximum, shared by the CGF paths.
inline double tilt_exponents(const DiscreteMeasure& rho, TiltParams theta,
                             std::vector<double>& out) {
    const auto& atoms = rho.atoms();
    out.resize(atoms.size());
    double max_exp = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double z = atoms[i].position;
        out[i] = theta.u * z + theta.v * z * z;
        max_exp = std::max(max_exp, out[i]);
    }
    return max_exp;
}

}  // namespace detail

/// Lambda(theta) alone; cheaper than cgf() during line searches.
inline double cgf_value(const DiscreteMeasure& rho, TiltParams theta) {
    std::vector<double> exponents;
    const double max_exp = detail::tilt_exponents(rho, theta, exponents);
    CompensatedSum sum;
    for (std::size_t i = 0; i < exponents.size(); ++i)
        sum.add(rho.atoms()[i].weight * std::exp(exponents[i] - max_exp));
    return max_exp + std::log(sum.value());
}

/// Lambda(theta) with gradient and Hessian. Second moments are accumulated
/// around the tilted means, which keeps the Hessian an exact Gram matrix
/// (PSD to rounding) even when the tilted measure concentrates far from 0.
inline CgfEval cgf(const DiscreteMeasure& rho, TiltParams theta) {
    const auto& atoms = rho.atoms();
    std::vector<double> exponents;
    const double max_exp = detail::tilt_exponents(rho, theta, exponents);

    std::vector<double> tilted(atoms.size());
    CompensatedSum norm;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        tilted[i] = atoms[i].weight * std::exp(exponents[i] - max_exp);
        norm.add(tilted[i]);
    }
    const double mass = norm.value();

    CgfEval out;
    out.value = max_exp + std::log(mass);

    CompensatedSum mean_z;
    CompensatedSum mean_zz;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double w = tilted[i] / mass;
        tilted[i] = w;
        const double z = atoms[i].position;
        mean_z.add(w * z);
        mean_zz.add(w * z * z);
    }
    out.gradient = {mean_z.value(), mean_zz.value()};

    CompensatedSum var_z;
    CompensatedSum cov;
    CompensatedSum var_zz;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double z = atoms[i].position;
        const double dz = z - out.gradient[0];
        const double dzz = z * z - out.gradient[1];
        var_z.add(tilted[i] * dz * dz);
        cov.add(tilted[i] * dz * dzz);
        var_zz.add(tilted[i] * dzz * dzz);
    }
    out.hessian = {var_z.value(), cov.value(), var_zz.value()};
    return out;
}

/// The exponential tilt of rho by theta: weights proportional to
/// p_i e^{u z_i + v z_i^2}.
inline DiscreteMeasure tilted_measure(const DiscreteMeasure& rho, TiltParams theta) {
    std::vector<double> exponents;
    const double max_exp = detail::tilt_exponents(rho, theta, exponents);
    std::vector<Atom> atoms(rho.atoms());
    for (std::size_t i = 0; i < atoms.size(); ++i)
        atoms[i].weight *= std::exp(exponents[i] - max_exp);
    return DiscreteMeasure(std::move(atoms));
}

/// Both sides of the reflection identity
///   ∫ e^{s z - t z^2} drho = ∫ cosh(s z) e^{-t z^2} drho
/// valid for symmetric rho; returned as (left, right) for contract checks.
inline std::pair<double, double> symmetrized_integrand_identity_check(const DiscreteMeasure& rho,
                                                                      double s, double t) {
    if (!is_symmetric(rho, kDefaultSymmetryTol))
        throw domain_error("symmetrized integrand identity requires a symmetric measure");
    CompensatedSum left;
    CompensatedSum right;
    for (const Atom& a : rho.atoms()) {
        const double z = a.position;
        left.add(a.weight * std::exp(s * z - t * z * z));
        right.add(a.weight * std::cosh(s * z) * std::exp(-t * z * z));
    }
    return {left.value(), right.value()};
}

/// ∫ exp(s z - s^2 z^2 / 2) drho with s = x/y. Each exponent is
/// a - a^2/2 <= 1/2 for a = s z, so the sum never overflows. For symmetric
/// rho (not Dirac at 0) and x != 0 the value is strictly below 1.
inline double witness_integral(const DiscreteMeasure& rho, double x, double y) {
    if (y == 0.0) throw domain_error("witness_integral requires y != 0");
    const double s = x / y;
    CompensatedSum sum;
    for (const Atom& atom : rho.atoms()) {
        const double a = s * atom.position;
        sum.add(atom.weight * std::exp(a - 0.5 * a * a));
    }
    return sum.value();
}

/// x^2/(2y) - ln witness_integral(rho, x, y): an explicit finite-tilt lower
/// bound for the rate at (x, y), strictly above x^2/(2y) for symmetric rho
/// not Dirac at 0 when x != 0.
inline double witness_bound(const DiscreteMeasure& rho, double x, double y) {
    return x * x / (2.0 * y) - std::log(witness_integral(rho, x, y));
}

/// Absolute distance tolerance for hull boundary classification.
inline constexpr double kHullTol = 1e-10;

namespace detail {

/// Lower hull envelope at abscissa x: the piecewise-linear interpolant of
/// the support points (z_i, z_i^2), which are all hull vertices because
/// they sit on a strictly convex curve.
inline double lower_envelope(const DiscreteMeasure& rho, double x) {
    const auto& a = rho.atoms();
    const double clamped = std::clamp(x, a.front().position, a.back().position);
    auto it = std::upper_bound(a.begin(), a.end(), clamped,
                               [](double v, const Atom& atom) { return v < atom.position; });
    std::size_t hi = static_cast<std::size_t>(it - a.begin());
    if (hi == 0) hi = 1;
    if (hi == a.size()) hi = a.size() - 1;
    const double za = a[hi - 1].position;
    const double zb = a[hi].position;
    return za * za + (clamped - za) * (za + zb);
}

/// Upper hull envelope: the chord from the leftmost to the rightmost
/// support point.
inline double upper_envelope(const DiscreteMeasure& rho, double x) {
    const double za = rho.min_position();
    const double zb = rho.max_position();
    return za * za + (x - za) * (za + zb);
}

}  // namespace detail

/// Classifies a moment point against the realizable region (the closed
/// convex hull of the support points in the moment plane), with absolute
/// boundary tolerance kHullTol.
inline Region realizable_region(const DiscreteMeasure& rho, MomentPair point) {
    const auto& atoms = rho.atoms();
    const double zmin = rho.min_position();
    const double zmax = rho.max_position();
    if (point.x < zmin - kHullTol || point.x > zmax + kHullTol) return Region::outside;
    if (atoms.size() == 1) {
        return std::abs(point.y - zmin * zmin) <= kHullTol ? Region::boundary : Region::outside;
    }
    const double below = point.y - detail::lower_envelope(rho, point.x);
    const double above = detail::upper_envelope(rho, point.x) - point.y;
    if (below < -kHullTol || above < -kHullTol) return Region::outside;
    if (below > kHullTol && above > kHullTol) return Region::interior;
    return Region::boundary;
}

namespace detail {

/// Rate at a hull boundary point, via the supporting face: the unique
/// measure carried by the face atoms with the prescribed moments, scored
/// against rho. Faces are single vertices or two-atom edges (the lower
/// edges join consecutive support points; the top face is the extreme
/// chord).
inline double boundary_face_value(const DiscreteMeasure& rho, MomentPair p) {
    const auto& a = rho.atoms();
    const std::size_t n = a.size();

    // Vertex face.
    auto it = std::lower_bound(a.begin(), a.end(), p.x,
                               [](const Atom& atom, double v) { return atom.position < v; });
    std::size_t near = std::min(static_cast<std::size_t>(it - a.begin()), n - 1);
    if (near > 0 && std::abs(a[near - 1].position - p.x) < std::abs(a[near].position - p.x))
        --near;
    if (std::abs(a[near].position - p.x) <= kHullTol &&
        std::abs(a[near].position * a[near].position - p.y) <= kHullTol)
        return -std::log(a[near].weight);

    // Edge face: the top chord, or the lower edge spanning p.x.
    std::size_t ia = 0;
    std::size_t ib = n - 1;
    if (std::abs(upper_envelope(rho, p.x) - p.y) > kHullTol) {
        const double clamped = std::clamp(p.x, a.front().position, a.back().position);
        auto hi_it = std::upper_bound(a.begin(), a.end(), clamped,
                                      [](double v, const Atom& atom) { return v < atom.position; });
        std::size_t hi = static_cast<std::size_t>(hi_it - a.begin());
        if (hi == 0) hi = 1;
        if (hi == n) hi = n - 1;
        ia = hi - 1;
        ib = hi;
    }
    const double za = a[ia].position;
    const double zb = a[ib].position;
    const double lambda = std::clamp((zb - p.x) / (zb - za), 0.0, 1.0);
    double value = 0.0;
    if (lambda > 0.0) value += lambda * std::log(lambda / a[ia].weight);
    if (lambda < 1.0) value += (1.0 - lambda) * std::log((1.0 - lambda) / a[ib].weight);
    return std::max(value, 0.0);
}

}  // namespace detail

/// Legendre–Fenchel conjugate of the bivariate CGF at a moment point:
///
///   I(x, y) = sup_{(u,v)} { u x + v y - Lambda(u, v) }.
///
/// Interior points are solved by damped Newton ascent of the concave
/// objective from theta = (0, 0), with Armijo backtracking and a scaled
/// gradient step whenever the Hessian is near-singular (condition number
/// beyond 1e12). Boundary points are evaluated exactly on the supporting
/// face; outside points have value +infinity. Tilt norms beyond 1e4 signal
/// an unattained supremum and fall back to the boundary evaluation.
inline CramerResult cramer_transform(const DiscreteMeasure& rho, MomentPair point) {
    const Region region = realizable_region(rho, point);
    if (region == Region::outside)
        return {std::numeric_limits<double>::infinity(), std::nullopt, 0, true, region};
    if (region == Region::boundary)
        return {detail::boundary_face_value(rho, point), std::nullopt, 0, true, region};

    constexpr int kMaxIterations = 200;
    constexpr double kGradientTol = 1e-10;
    constexpr double kArmijo = 1e-4;
    constexpr double kConditionLimit = 1e12;
    constexpr double kTiltNormLimit = 1e4;

    TiltParams theta;
    CgfEval eval = cgf(rho, theta);
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;

    while (true) {
        const std::array<double, 2> grad{point.x - eval.gradient[0], point.y - eval.gradient[1]};
        const double grad_norm = std::hypot(grad[0], grad[1]);
        if (grad_norm <= kGradientTol) {
            converged = true;
            break;
        }
        if (iterations >= kMaxIterations) break;

        const auto eig = eval.hessian.eigenvalues();
        std::array<double, 2> dir;
        if (eig[0] > 0.0 && eig[0] * kConditionLimit > eig[1]) {
            dir = eval.hessian.solve(grad);
        } else {
            const double scale = std::max(eig[1], 1.0);
            dir = {grad[0] / scale, grad[1] / scale};
        }
        double slope = grad[0] * dir[0] + grad[1] * dir[1];
        if (!(slope > 0.0)) {
            dir = grad;
            slope = grad_norm * grad_norm;
        }

        bool accepted = false;
        double step = 1.0;
        for (int halvings = 0; halvings < 60; ++halvings, step *= 0.5) {
            const TiltParams cand{theta.u + step * dir[0], theta.v + step * dir[1]};
            const double cand_objective =
                cand.u * point.x + cand.v * point.y - cgf_value(rho, cand);
            if (cand_objective >= objective + kArmijo * step * slope) {
                theta = cand;
                objective = cand_objective;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;  // objective at its numerical floor
        ++iterations;

        if (std::hypot(theta.u, theta.v) > kTiltNormLimit) {
            // Diverging tilt: the supremum is not attained, so the point is
            // effectively on the hull boundary despite the tolerance-based
            // interior classification.
            return {detail::boundary_face_value(rho, point), std::nullopt, iterations, true,
                    Region::boundary};
        }
        eval = cgf(rho, theta);
    }

    return {objective, theta, iterations, converged, Region::interior};
}

}  // namespace entrobound
