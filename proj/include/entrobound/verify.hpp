// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "entrobound/entropy.hpp"
#include "entrobound/errors.hpp"
#include "entrobound/measure.hpp"
#include "entrobound/numeric.hpp"
#include "entrobound/parallel.hpp"
#include "entrobound/report.hpp"
#include "entrobound/tilt.hpp"

namespace entrobound {

// ---------------------------------------------------------------------------
// Deterministic randomness
// ---------------------------------------------------------------------------

/// splitmix64 stream with explicit Box–Muller normals. Self-contained so
/// that reports are reproducible bit-for-bit from the seed alone.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) noexcept { return a + (b - a) * uniform01(); }

    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Decorrelates substreams (per family, per purpose) from one user seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) noexcept {
    RandomStream s(seed ^ (0xA0761D6478BD642FULL * (salt + 1)));
    return s.next_u64();
}

/// mu with weights rho_i * exp(g_i), g_i independent standard normals,
/// renormalized. Absolutely continuous w.r.t. rho by construction.
inline DiscreteMeasure random_reweight(const DiscreteMeasure& rho, RandomStream& rng) {
    std::vector<Atom> atoms(rho.atoms());
    for (Atom& a : atoms) a.weight *= std::exp(rng.normal());
    return DiscreteMeasure(std::move(atoms));
}

// ---------------------------------------------------------------------------
// Theorem chain
// ---------------------------------------------------------------------------

enum class TheoremCase { mu_equals_rho, zero_first_moment, h_infinite, generic };

inline const char* to_string(TheoremCase c) noexcept {
    switch (c) {
        case TheoremCase::mu_equals_rho: return "mu_equals_rho";
        case TheoremCase::zero_first_moment: return "zero_first_moment";
        case TheoremCase::h_infinite: return "h_infinite";
        default: return "generic";
    }
}

/// One instance of the entropy lower-bound chain F <= I <= H, with margins
/// and the reduction case it exercises.
struct TheoremCheck {
    double h = 0.0;
    double i_at_moments = 0.0;
    double f = 0.0;
    std::array<double, 2> margins{0.0, 0.0};  // (h - i, i - f)
    bool pass = false;
    TheoremCase case_label = TheoremCase::generic;
};

namespace detail {

/// a - b on the extended reals; +inf == +inf counts as a zero margin.
inline double chain_margin(double a, double b) noexcept {
    if (std::isinf(a) && std::isinf(b) && a == b) return 0.0;
    return a - b;
}

}  // namespace detail

/// Verifies H(mu|rho) >= I(m1, m2) >= F(mu) for symmetric rho, including
/// the strictness of H > F away from mu = rho and the equality case at
/// mu = rho. Throws domain_error when rho is asymmetric or either measure
/// is the Dirac mass at 0.
inline TheoremCheck check_theorem(const DiscreteMeasure& mu, const DiscreteMeasure& rho) {
    if (!is_symmetric(rho, kDefaultSymmetryTol))
        throw domain_error("check_theorem requires a symmetric reference measure");
    if (is_dirac_at_zero(rho, kPositionTol) || is_dirac_at_zero(mu, kPositionTol))
        throw domain_error("check_theorem excludes the Dirac mass at 0");

    TheoremCheck out;
    out.h = relative_entropy(mu, rho).value;
    out.f = jensen_bound(mu);
    const MomentPair m = moments(mu);
    out.i_at_moments = cramer_transform(rho, m).value;

    const bool equal = atomwise_equal(mu, rho, kPositionTol, 1e-9);
    if (equal) {
        out.case_label = TheoremCase::mu_equals_rho;
    } else if (std::abs(m.x) <= 1e-12) {
        out.case_label = TheoremCase::zero_first_moment;
    } else if (std::isinf(out.h)) {
        out.case_label = TheoremCase::h_infinite;
    } else {
        out.case_label = TheoremCase::generic;
    }

    out.margins = {detail::chain_margin(out.h, out.i_at_moments),
                   detail::chain_margin(out.i_at_moments, out.f)};

    const bool chain_ok = out.f <= out.i_at_moments + 1e-9 && out.i_at_moments <= out.h + 1e-9;
    if (equal) {
        out.pass = chain_ok && std::abs(out.h - out.f) <= 1e-12 && std::abs(out.h) <= 1e-12 &&
                   std::abs(out.f) <= 1e-12;
    } else {
        out.pass = chain_ok && out.h >= out.f + 1e-12;
    }
    return out;
}

/// check_theorem wrapped as a report record, including the explicit-tilt
/// witness value W at the moments of mu.
inline CheckRecord theorem_record(std::string name, const std::string& rho_spec,
                                  std::string mu_spec, const DiscreteMeasure& mu,
                                  const DiscreteMeasure& rho) {
    const auto start = std::chrono::steady_clock::now();
    const TheoremCheck tc = check_theorem(mu, rho);
    const MomentPair m = moments(mu);

    CheckRecord rec;
    rec.name = std::move(name);
    rec.rho = rho_spec;
    rec.mu = std::move(mu_spec);
    rec.quantities.h = tc.h;
    rec.quantities.i = tc.i_at_moments;
    rec.quantities.f = tc.f;
    if (m.y != 0.0) rec.quantities.w = witness_bound(rho, m.x, m.y);
    rec.margins = {tc.margins[0], tc.margins[1]};
    rec.passed = tc.pass;
    rec.case_label = to_string(tc.case_label);
    rec.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

// ---------------------------------------------------------------------------
// Moment-plane grids
// ---------------------------------------------------------------------------

/// Rectangular grid of candidate moment points (Cartesian product).
struct MomentGrid {
    std::vector<double> xs;
    std::vector<double> ys;

    double dx() const noexcept { return xs.size() > 1 ? xs[1] - xs[0] : 0.0; }
    double dy() const noexcept { return ys.size() > 1 ? ys[1] - ys[0] : 0.0; }
    std::size_t size() const noexcept { return xs.size() * ys.size(); }
};

/// Default sweep grid: x symmetric about 0 covering shrink times the hull
/// extent (odd counts hit 0 exactly), y covering the shrunken hull extent
/// with the spacing chosen so that the true second moment of rho is a grid
/// node — the global minimum of I(x,y) - x^2/(2y) sits at (0, m2(rho)), so
/// the sweep must be able to land on it.
inline MomentGrid default_moment_grid(const DiscreteMeasure& rho, int nx = 39, int ny = 39,
                                      double shrink = 0.95) {
    if (nx < 1 || ny < 1) throw domain_error("grid sizes must be positive");
    if (!(shrink > 0.0) || !(shrink <= 1.0)) throw domain_error("grid shrink must be in (0, 1]");

    MomentGrid grid;
    const double x_extent =
        shrink * std::max(std::abs(rho.min_position()), std::abs(rho.max_position()));
    if (nx == 1) {
        grid.xs = {0.0};
    } else if (nx % 2 == 1) {
        const int half = nx / 2;
        const double step = x_extent / half;
        for (int i = -half; i <= half; ++i) grid.xs.push_back(static_cast<double>(i) * step);
    } else {
        const double step = 2.0 * x_extent / (nx - 1);
        for (int i = 0; i < nx; ++i) grid.xs.push_back(-x_extent + static_cast<double>(i) * step);
    }

    double y_min_hull = std::numeric_limits<double>::infinity();
    for (const Atom& a : rho.atoms())
        y_min_hull = std::min(y_min_hull, a.position * a.position);
    const double y_max_hull = std::max(rho.min_position() * rho.min_position(),
                                       rho.max_position() * rho.max_position());
    const double center = 0.5 * (y_min_hull + y_max_hull);
    const double half_extent = 0.5 * (y_max_hull - y_min_hull);
    const double lo = center - shrink * half_extent;
    const double hi = center + shrink * half_extent;
    const double m2 = moments(rho).y;

    if (ny == 1 || hi - lo <= 1e-14) {
        grid.ys = {m2};
    } else {
        const double step = (hi - lo) / (ny - 1);
        long anchor = std::lround((m2 - lo) / step);
        anchor = std::clamp<long>(anchor, 0, ny - 1);
        for (long k = 0; k < ny; ++k)
            grid.ys.push_back(m2 + static_cast<double>(k - anchor) * step);
    }
    return grid;
}

/// One grid point of a sweep: the rate, the moment functional x^2/(2y),
/// their gap G, and the explicit witness bound, plus the verdict on the
/// claims asserted at this point.
struct SweepPoint {
    double x = 0.0;
    double y = 0.0;
    Region region = Region::outside;
    double rate = 0.0;     // I(x, y)
    double bound = 0.0;    // x^2 / (2y)
    double g = 0.0;        // rate - bound
    double witness = std::numeric_limits<double>::quiet_NaN();
    bool strict_gated = false;  // x != 0 and |x/y| >= 1e-3
    bool ok = false;
};

/// Evaluates the rate and the bound on every grid point. Preconditions as
/// for check_theorem; grid y values must be nonzero.
inline std::vector<SweepPoint> grid_sweep(const DiscreteMeasure& rho, const MomentGrid& grid) {
    if (!is_symmetric(rho, kDefaultSymmetryTol))
        throw domain_error("grid sweeps require a symmetric reference measure");
    if (is_dirac_at_zero(rho, kPositionTol))
        throw domain_error("grid sweeps exclude the Dirac mass at 0");
    for (double y : grid.ys)
        if (y == 0.0) throw domain_error("grid y values must be nonzero");

    std::vector<SweepPoint> rows(grid.size());
    const std::size_t ny = grid.ys.size();
    parallel_for(rows.size(), [&](std::size_t k) {
        SweepPoint& p = rows[k];
        p.x = grid.xs[k / ny];
        p.y = grid.ys[k % ny];
        p.region = realizable_region(rho, {p.x, p.y});
        p.bound = p.x * p.x / (2.0 * p.y);
        p.witness = witness_bound(rho, p.x, p.y);
        if (p.region == Region::outside) {
            p.rate = std::numeric_limits<double>::infinity();
            p.g = std::numeric_limits<double>::infinity();
            p.ok = true;  // I = +inf exceeds any finite bound
            return;
        }
        p.rate = cramer_transform(rho, {p.x, p.y}).value;
        p.g = p.rate - p.bound;
        const bool witness_ok = p.rate >= p.witness - 1e-9;
        if (p.x == 0.0) {
            p.ok = witness_ok && p.rate >= 0.0;
        } else {
            p.strict_gated = std::abs(p.x / p.y) >= 1e-3;
            p.ok = witness_ok && (p.strict_gated ? p.g > 1e-12 : p.g > 0.0);
        }
    });
    return rows;
}

namespace detail {

inline std::string format_point(double x, double y) {
    return "(" + format_full(x) + ", " + format_full(y) + ")";
}

inline CheckRecord summarize_proposition(const std::string& rho_spec,
                                         const std::vector<SweepPoint>& rows, double seconds) {
    CheckRecord rec;
    rec.name = "proposition";
    rec.rho = rho_spec;
    rec.wall_time_seconds = seconds;

    std::size_t asserted = 0;
    std::size_t vacuous = 0;
    bool all_ok = true;
    const SweepPoint* tightest = nullptr;
    double min_witness_slack = std::numeric_limits<double>::infinity();
    for (const SweepPoint& p : rows) {
        all_ok = all_ok && p.ok;
        if (p.region == Region::outside) {
            ++vacuous;
            continue;
        }
        min_witness_slack = std::min(min_witness_slack, p.rate - p.witness);
        if (p.x == 0.0) continue;
        ++asserted;
        if (tightest == nullptr || p.g < tightest->g) tightest = &p;
    }
    if (tightest != nullptr) {
        rec.quantities.i = tightest->rate;
        rec.quantities.f = tightest->bound;
        rec.quantities.w = tightest->witness;
        rec.margins.push_back(tightest->g);
    }
    if (std::isfinite(min_witness_slack)) rec.margins.push_back(min_witness_slack);
    rec.passed = all_ok;
    rec.case_label = "asserted=" + std::to_string(asserted) + " vacuous=" + std::to_string(vacuous);
    if (tightest != nullptr)
        rec.case_label += " tightest=" + format_point(tightest->x, tightest->y);
    return rec;
}

inline CheckRecord summarize_min_g(const std::string& rho_spec,
                                   const std::vector<SweepPoint>& rows, const MomentGrid& grid,
                                   double rho_second_moment, double seconds) {
    CheckRecord rec;
    rec.name = "min_g";
    rec.rho = rho_spec;
    rec.wall_time_seconds = seconds;

    const SweepPoint* minimizer = nullptr;
    for (const SweepPoint& p : rows) {
        if (!std::isfinite(p.g)) continue;
        if (minimizer == nullptr || p.g < minimizer->g) minimizer = &p;
    }
    if (minimizer == nullptr) {
        rec.passed = false;
        rec.case_label = "no realizable grid points";
        return rec;
    }
    const double x_dist = std::abs(minimizer->x);
    const double y_dist = std::abs(minimizer->y - rho_second_moment);
    rec.quantities.i = minimizer->rate;
    rec.quantities.f = minimizer->bound;
    rec.margins = {minimizer->g, x_dist, y_dist};
    rec.passed = minimizer->g >= -1e-9 && minimizer->g <= 1e-8 &&
                 x_dist <= std::abs(grid.dx()) + 1e-12 && y_dist <= std::abs(grid.dy()) + 1e-12;
    rec.case_label = "minimizer=" + format_point(minimizer->x, minimizer->y);
    return rec;
}

}  // namespace detail

/// Asserts I(x, y) > x^2/(2y) (strictly beyond 1e-12 when |x/y| >= 1e-3)
/// and I >= witness bound - 1e-9 on every realizable grid point with
/// x != 0; non-realizable points are recorded as vacuous.
inline VerificationReport check_proposition(const DiscreteMeasure& rho, const MomentGrid& grid,
                                            const std::string& rho_spec = "") {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<SweepPoint> rows = grid_sweep(rho, grid);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    VerificationReport report;
    report.checks.push_back(detail::summarize_proposition(
        rho_spec.empty() ? to_spec_string(rho) : rho_spec, rows, secs));
    return report;
}

/// Locates the grid minimizer of G(x, y) = I(x, y) - x^2/(2y); passes when
/// it sits within one grid cell of (0, m2(rho)) with minimum in
/// [-1e-9, 1e-8].
inline VerificationReport sweep_min_g(const DiscreteMeasure& rho, const MomentGrid& grid,
                                      const std::string& rho_spec = "") {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<SweepPoint> rows = grid_sweep(rho, grid);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    VerificationReport report;
    report.checks.push_back(detail::summarize_min_g(
        rho_spec.empty() ? to_spec_string(rho) : rho_spec, rows, grid, moments(rho).y, secs));
    return report;
}

// ---------------------------------------------------------------------------
// Asymmetric counterexample search
// ---------------------------------------------------------------------------

/// Searches random reweightings of an asymmetric rho (plus mu = rho) for
/// violations H(mu|rho) < F(mu) - 1e-12, demonstrating that the symmetry
/// hypothesis cannot be dropped. The record passes iff a violation exists.
inline VerificationReport search_counterexample_asymmetric(const DiscreteMeasure& rho, int trials,
                                                           std::uint64_t seed,
                                                           const std::string& rho_spec = "") {
    if (is_symmetric(rho, kDefaultSymmetryTol))
        throw domain_error("counterexample search requires an asymmetric measure");

    const auto start = std::chrono::steady_clock::now();
    RandomStream rng(mix_seed(seed, 0xC0DEULL));
    int violations = 0;
    int total = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::string worst_mu;
    CheckQuantities worst_q;

    auto consider = [&](const DiscreteMeasure& mu) {
        ++total;
        const double h = relative_entropy(mu, rho).value;
        const double f = jensen_bound(mu);
        const double margin = h - f;
        if (margin < -1e-12) ++violations;
        if (margin < worst_margin) {
            worst_margin = margin;
            worst_mu = to_spec_string(mu);
            worst_q.h = h;
            worst_q.i = cramer_transform(rho, moments(mu)).value;
            worst_q.f = f;
        }
    };

    consider(rho);
    for (int t = 0; t < trials; ++t) consider(random_reweight(rho, rng));

    CheckRecord rec;
    rec.name = "asymmetry_violation";
    rec.rho = rho_spec.empty() ? to_spec_string(rho) : rho_spec;
    rec.mu = worst_mu;
    rec.quantities = worst_q;
    rec.margins = {worst_margin};
    rec.passed = violations > 0;
    rec.case_label =
        "violations=" + std::to_string(violations) + "/" + std::to_string(total);
    rec.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    VerificationReport report;
    report.checks.push_back(std::move(rec));
    return report;
}

// ---------------------------------------------------------------------------
// Analytic kernel checks
// ---------------------------------------------------------------------------

/// Random compact measure for kernel checks: 2..6 atoms in [-3, 3].
inline DiscreteMeasure random_measure(RandomStream& rng) {
    const int n = 2 + static_cast<int>(rng.uniform01() * 5.0);
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) atoms.push_back({rng.uniform(-3.0, 3.0), rng.uniform(0.05, 1.0)});
    return DiscreteMeasure(std::move(atoms));
}

/// CGF gradient vs central finite differences (step 1e-6), 1e-6 relative.
inline CheckRecord kernel_gradient_fd_check(std::uint64_t seed, int trials = 100) {
    RandomStream rng(mix_seed(seed, 0xF1D0ULL));
    constexpr double kStep = 1e-6;
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const DiscreteMeasure rho = random_measure(rng);
        const TiltParams theta{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        const CgfEval eval = cgf(rho, theta);
        const double fd_u = (cgf_value(rho, {theta.u + kStep, theta.v}) -
                             cgf_value(rho, {theta.u - kStep, theta.v})) /
                            (2.0 * kStep);
        const double fd_v = (cgf_value(rho, {theta.u, theta.v + kStep}) -
                             cgf_value(rho, {theta.u, theta.v - kStep})) /
                            (2.0 * kStep);
        worst = std::max(worst, std::abs(fd_u - eval.gradient[0]) /
                                    std::max(1.0, std::abs(eval.gradient[0])));
        worst = std::max(worst, std::abs(fd_v - eval.gradient[1]) /
                                    std::max(1.0, std::abs(eval.gradient[1])));
    }
    CheckRecord rec;
    rec.name = "kernel_cgf_gradient_fd";
    rec.rho = "randomized";
    rec.margins = {worst};
    rec.passed = worst <= 1e-6;
    rec.case_label = "trials=" + std::to_string(trials);
    return rec;
}

/// Tilted covariance must be PSD: both eigenvalues >= -1e-10.
inline CheckRecord kernel_hessian_psd_check(std::uint64_t seed, int trials = 100) {
    RandomStream rng(mix_seed(seed, 0x4E55ULL));
    double min_eig = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        const DiscreteMeasure rho = random_measure(rng);
        const TiltParams theta{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        min_eig = std::min(min_eig, cgf(rho, theta).hessian.eigenvalues()[0]);
    }
    CheckRecord rec;
    rec.name = "kernel_hessian_psd";
    rec.rho = "randomized";
    rec.margins = {min_eig};
    rec.passed = min_eig >= -1e-10;
    rec.case_label = "trials=" + std::to_string(trials);
    return rec;
}

/// cosh(u) e^{-u^2/2} < 1 on a log-spaced grid u in [1e-8, 50], equality
/// at u = 0; evaluated through the cancellation-free log-gap.
inline CheckRecord kernel_cosh_inequality_check(int points = 200) {
    double min_deficit = std::numeric_limits<double>::infinity();
    for (int k = 0; k < points; ++k) {
        const double u =
            1e-8 * std::pow(50.0 / 1e-8, static_cast<double>(k) / static_cast<double>(points - 1));
        min_deficit = std::min(min_deficit, cosh_gauss_deficit(u));
    }
    CheckRecord rec;
    rec.name = "kernel_cosh_inequality";
    rec.rho = "";
    rec.margins = {min_deficit};
    rec.passed = min_deficit > 0.0 && cosh_gauss_deficit(0.0) == 0.0;
    rec.case_label = "log_grid[1e-8,50] n=" + std::to_string(points);
    return rec;
}

/// Reflection identity on an (s, t) grid, 1e-10 relative.
inline CheckRecord kernel_symmetrization_check(const DiscreteMeasure& rho,
                                               const std::string& rho_spec) {
    static constexpr double kS[] = {-3.0, -1.5, -0.5, 0.0, 0.25, 1.0, 2.0, 3.0};
    static constexpr double kT[] = {0.0, 0.1, 0.5, 1.0, 2.5, 5.0};
    double worst = 0.0;
    for (double s : kS) {
        for (double t : kT) {
            const auto [left, right] = symmetrized_integrand_identity_check(rho, s, t);
            worst = std::max(worst, std::abs(left - right) / std::max(1.0, std::abs(left)));
        }
    }
    CheckRecord rec;
    rec.name = "kernel_symmetrization_identity";
    rec.rho = rho_spec;
    rec.margins = {worst};
    rec.passed = worst <= 1e-10;
    rec.case_label = "s_grid=8 t_grid=6";
    return rec;
}

// ---------------------------------------------------------------------------
// Suite
// ---------------------------------------------------------------------------

struct SuiteConfig {
    std::string name = "default";
    std::uint64_t seed = 7;
    int trials = 100;
    int counterexample_trials = 1000;
    int grid_nx = 39;
    int grid_ny = 39;
    double grid_shrink = 0.95;
    bool kernel_checks = true;
    std::vector<std::string> symmetric_families;
    std::vector<std::string> asymmetric_families;
};

/// Built-in families: the two-point measure at ±1, the three-atom
/// (1/4, 1/2, 1/4) measure, a discretized uniform and a discretized
/// standard normal; counterexample search on two asymmetric measures.
inline SuiteConfig default_suite_config() {
    SuiteConfig cfg;
    cfg.symmetric_families = {
        "rademacher",
        "atoms:-1=0.25,0=0.5,1=0.25",
        "uniform:a=-1,b=1,n=1001",
        "gauss:mean=0,sd=1",
    };
    cfg.asymmetric_families = {"atoms:1=1", "atoms:-1=0.1,1=0.9"};
    return cfg;
}

/// Loads a JSON config; fields not present keep their defaults. Unknown or
/// ill-typed fields raise config_error naming the field.
inline SuiteConfig load_suite_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open suite config: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("<root>", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw config_error("<root>", "config must be a JSON object");

    SuiteConfig cfg = default_suite_config();
    auto family_list = [](const nlohmann::json& v, const std::string& key) {
        if (!v.is_array()) throw config_error(key, "expected an array of measure specs");
        std::vector<std::string> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string field = key + "[" + std::to_string(i) + "]";
            if (!v[i].is_string()) throw config_error(field, "expected a measure spec string");
            const std::string spec = v[i].get<std::string>();
            try {
                parse_spec(spec);
            } catch (const parse_error& e) {
                throw config_error(field, e.what());
            }
            out.push_back(spec);
        }
        return out;
    };

    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& key = it.key();
        const nlohmann::json& v = it.value();
        if (key == "suite") {
            if (!v.is_string()) throw config_error(key, "expected a string");
            cfg.name = v.get<std::string>();
        } else if (key == "seed") {
            if (!v.is_number_unsigned()) throw config_error(key, "expected a nonnegative integer");
            cfg.seed = v.get<std::uint64_t>();
        } else if (key == "trials") {
            if (!v.is_number_integer() || v.get<long>() < 0)
                throw config_error(key, "expected a nonnegative integer");
            cfg.trials = v.get<int>();
        } else if (key == "counterexample_trials") {
            if (!v.is_number_integer() || v.get<long>() < 0)
                throw config_error(key, "expected a nonnegative integer");
            cfg.counterexample_trials = v.get<int>();
        } else if (key == "grid") {
            if (!v.is_object()) throw config_error(key, "expected an object {nx, ny, shrink}");
            for (auto git = v.begin(); git != v.end(); ++git) {
                const std::string gkey = "grid." + git.key();
                const nlohmann::json& gv = git.value();
                if (git.key() == "nx" || git.key() == "ny") {
                    if (!gv.is_number_integer() || gv.get<long>() < 1)
                        throw config_error(gkey, "expected a positive integer");
                    (git.key() == "nx" ? cfg.grid_nx : cfg.grid_ny) = gv.get<int>();
                } else if (git.key() == "shrink") {
                    if (!gv.is_number() || !(gv.get<double>() > 0.0) || !(gv.get<double>() <= 1.0))
                        throw config_error(gkey, "expected a number in (0, 1]");
                    cfg.grid_shrink = gv.get<double>();
                } else {
                    throw config_error(gkey, "unknown field");
                }
            }
        } else if (key == "kernel_checks") {
            if (!v.is_boolean()) throw config_error(key, "expected a boolean");
            cfg.kernel_checks = v.get<bool>();
        } else if (key == "symmetric_families") {
            cfg.symmetric_families = family_list(v, key);
        } else if (key == "asymmetric_families") {
            cfg.asymmetric_families = family_list(v, key);
        } else {
            throw config_error(key, "unknown field");
        }
    }
    return cfg;
}

namespace detail {

inline DiscreteMeasure translate(const DiscreteMeasure& m, double shift) {
    std::vector<Atom> atoms(m.atoms());
    for (Atom& a : atoms) a.position += shift;
    return DiscreteMeasure(std::move(atoms));
}

}  // namespace detail

/// Runs the whole battery: the theorem chain over each symmetric family
/// with mu = rho, random reweightings, exponential tilts (pinning H = I),
/// a translated non-absolutely-continuous mu and a symmetrized reweighting
/// (pinning the H = +inf and zero-first-moment reductions); the strict-gap
/// grid sweep and the minimum-of-G sweep; the reflection identity; the
/// counterexample search on each asymmetric family; and the analytic
/// kernel checks. Checks are sorted by (name, rho, mu); a failed
/// precondition becomes a failing record rather than an exception.
inline VerificationReport run_suite(const SuiteConfig& cfg) {
    VerificationReport report;
    report.suite = cfg.name;
    report.seed = cfg.seed;

    static constexpr TiltParams kTiltMus[] = {{0.3, 0.0},  {-0.8, 0.1},  {0.5, -0.4},
                                              {0.0, 0.25}, {1.0, -0.2}, {-0.25, -0.6}};

    for (std::size_t fi = 0; fi < cfg.symmetric_families.size(); ++fi) {
        const std::string& spec = cfg.symmetric_families[fi];
        const DiscreteMeasure rho = parse_spec(spec);
        if (!is_symmetric(rho, kDefaultSymmetryTol) || is_dirac_at_zero(rho, kPositionTol)) {
            CheckRecord rec;
            rec.name = "theorem";
            rec.rho = spec;
            rec.passed = false;
            rec.case_label = "precondition_error: family must be symmetric and not Dirac at 0";
            report.checks.push_back(std::move(rec));
            continue;
        }

        report.checks.push_back(theorem_record("theorem", spec, spec, rho, rho));

        RandomStream rng(mix_seed(cfg.seed, fi));
        for (int t = 0; t < cfg.trials; ++t) {
            const DiscreteMeasure mu = random_reweight(rho, rng);
            report.checks.push_back(theorem_record("theorem", spec, to_spec_string(mu), mu, rho));
        }

        for (const TiltParams& theta : kTiltMus) {
            const DiscreteMeasure mu = tilted_measure(rho, theta);
            CheckRecord rec = theorem_record("theorem_tilt_mu", spec, to_spec_string(mu), mu, rho);
            // mu is an exponential tilt of rho, so the variational bound is
            // tight: require H = I within 1e-9 on top of the chain.
            rec.passed = rec.passed && std::abs(*rec.quantities.h - *rec.quantities.i) <= 1e-9;
            report.checks.push_back(std::move(rec));
        }

        {
            const DiscreteMeasure shifted = detail::translate(rho, 3.0);
            report.checks.push_back(
                theorem_record("theorem", spec, to_spec_string(shifted), shifted, rho));
        }
        {
            const DiscreteMeasure balanced = symmetrize(random_reweight(rho, rng));
            report.checks.push_back(
                theorem_record("theorem", spec, to_spec_string(balanced), balanced, rho));
        }

        const MomentGrid grid =
            default_moment_grid(rho, cfg.grid_nx, cfg.grid_ny, cfg.grid_shrink);
        const auto start = std::chrono::steady_clock::now();
        const std::vector<SweepPoint> rows = grid_sweep(rho, grid);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.checks.push_back(detail::summarize_proposition(spec, rows, secs));
        report.checks.push_back(
            detail::summarize_min_g(spec, rows, grid, moments(rho).y, secs));
        report.checks.push_back(kernel_symmetrization_check(rho, spec));
    }

    for (std::size_t ai = 0; ai < cfg.asymmetric_families.size(); ++ai) {
        const std::string& spec = cfg.asymmetric_families[ai];
        const DiscreteMeasure rho = parse_spec(spec);
        try {
            report.append(search_counterexample_asymmetric(
                rho, cfg.counterexample_trials, mix_seed(cfg.seed, 1000 + ai), spec));
        } catch (const domain_error& e) {
            CheckRecord rec;
            rec.name = "asymmetry_violation";
            rec.rho = spec;
            rec.passed = false;
            rec.case_label = std::string("precondition_error: ") + e.what();
            report.checks.push_back(std::move(rec));
        }
    }

    if (!cfg.symmetric_families.empty()) {
        if (cfg.kernel_checks) {
            report.checks.push_back(kernel_gradient_fd_check(cfg.seed));
            report.checks.push_back(kernel_hessian_psd_check(cfg.seed));
            report.checks.push_back(kernel_cosh_inequality_check());
        }
        // The infinite-second-moment reduction has no finite-support
        // instance; recorded as vacuously satisfied.
        CheckRecord rec;
        rec.name = "reduction_infinite_second_moment";
        rec.passed = true;
        rec.case_label = "analytically_vacuous_at_finite_support";
        report.checks.push_back(std::move(rec));
    }

    report.sort_checks();
    return report;
}

}  // namespace entrobound
