// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "entrobound/errors.hpp"
#include "entrobound/numeric.hpp"

namespace entrobound {

/// One weighted point mass.
struct Atom {
    double position = 0.0;
    double weight = 0.0;
};

/// A point (x, y) in the moment plane, candidate value of
/// (first moment, second moment) of some measure.
struct MomentPair {
    double x = 0.0;
    double y = 0.0;
};

/// Positions closer than this are considered the same support point.
inline constexpr double kPositionTol = 1e-12;
/// Default tolerance for symmetry tests; wide enough that discretized
/// symmetric families pass despite grid rounding.
inline constexpr double kDefaultSymmetryTol = 1e-9;

/// A probability measure on the real line with finite support.
///
/// Atoms are sorted with strictly increasing positions (gaps exceed
/// kPositionTol), weights are positive, and total mass is renormalized
/// to 1 at construction. Values are immutable afterwards and safe to
/// share across threads.
class DiscreteMeasure {
public:
    explicit DiscreteMeasure(std::vector<Atom> atoms) {
        for (Atom& a : atoms) {
            if (!std::isfinite(a.position))
                throw domain_error("atom position must be a finite real");
            if (!std::isfinite(a.weight) || a.weight < 0.0)
                throw domain_error("atom weight must be a finite nonnegative real");
            if (a.position == 0.0) a.position = 0.0;  // canonicalize -0.0
        }
        std::erase_if(atoms, [](const Atom& a) { return a.weight == 0.0; });
        if (atoms.empty())
            throw degenerate_measure_error("measure has no positive mass");
        std::sort(atoms.begin(), atoms.end(),
                  [](const Atom& a, const Atom& b) { return a.position < b.position; });

        // Merge positions equal within kPositionTol, anchored at the first
        // member of each cluster so chains cannot drift.
        atoms_.reserve(atoms.size());
        for (const Atom& a : atoms) {
            if (!atoms_.empty() && a.position - atoms_.back().position <= kPositionTol) {
                atoms_.back().weight += a.weight;
            } else {
                atoms_.push_back(a);
            }
        }

        CompensatedSum total;
        for (const Atom& a : atoms_) total.add(a.weight);
        const double mass = total.value();
        if (!(mass > 0.0) || !std::isfinite(mass))
            throw degenerate_measure_error("total weight must be positive and finite");
        for (Atom& a : atoms_) a.weight /= mass;
    }

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    double min_position() const noexcept { return atoms_.front().position; }
    double max_position() const noexcept { return atoms_.back().position; }

private:
    std::vector<Atom> atoms_;
};

/// Textual measure descriptor; see parse_spec for the grammar.
using MeasureSpec = std::string;

namespace detail {

struct SpecParser {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(std::size_t at, const std::string& message) const {
        std::size_t end = at;
        while (end < text.size() && text[end] != ',' && text[end] != '=') ++end;
        if (end == at && at < text.size()) end = at + 1;
        std::string token(text.substr(at, end - at));
        const std::string shown = token.empty() ? "end of input" : "'" + token + "'";
        throw parse_error("measure spec error at offset " + std::to_string(at) + " near " +
                              shown + ": " + message,
                          at, std::move(token));
    }

    bool consume(std::string_view lit) {
        if (text.substr(pos).starts_with(lit)) {
            pos += lit.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view lit, const char* what) {
        if (!consume(lit)) fail(pos, std::string("expected ") + what);
    }

    double parse_real(const char* what) {
        double out = 0.0;
        const char* first = text.data() + pos;
        const char* last = text.data() + text.size();
        const auto res = std::from_chars(first, last, out);
        if (res.ec != std::errc{}) fail(pos, std::string("expected ") + what);
        if (!std::isfinite(out)) fail(pos, std::string(what) + " must be finite");
        pos = static_cast<std::size_t>(res.ptr - text.data());
        return out;
    }

    long parse_int(const char* what) {
        long out = 0;
        const char* first = text.data() + pos;
        const char* last = text.data() + text.size();
        const auto res = std::from_chars(first, last, out);
        if (res.ec != std::errc{}) fail(pos, std::string("expected ") + what);
        pos = static_cast<std::size_t>(res.ptr - text.data());
        return out;
    }

    DiscreteMeasure run() {
        DiscreteMeasure m = family();
        if (pos != text.size()) fail(pos, "unexpected trailing input");
        return m;
    }

    DiscreteMeasure family() {
        if (consume("rademacher")) return DiscreteMeasure({{-1.0, 0.5}, {1.0, 0.5}});
        if (consume("atoms:")) return atom_list();
        if (consume("uniform:")) return uniform_family();
        if (consume("gauss:")) return gauss_family();
        fail(0, "unknown measure family (expected rademacher, atoms:, uniform: or gauss:)");
    }

    DiscreteMeasure atom_list() {
        std::vector<Atom> atoms;
        while (true) {
            Atom a;
            a.position = parse_real("atom position");
            expect("=", "'=' between position and weight");
            const std::size_t weight_at = pos;
            a.weight = parse_real("atom weight");
            if (a.weight < 0.0) fail(weight_at, "atom weight must be nonnegative");
            atoms.push_back(a);
            if (!consume(",")) break;
        }
        return DiscreteMeasure(std::move(atoms));
    }

    DiscreteMeasure uniform_family() {
        expect("a=", "'a='");
        const double a = parse_real("left endpoint");
        expect(",b=", "',b='");
        const std::size_t b_at = pos;
        const double b = parse_real("right endpoint");
        expect(",n=", "',n='");
        const std::size_t n_at = pos;
        const long n = parse_int("atom count");
        if (!(a < b)) fail(b_at, "uniform requires a < b");
        if (n < 2) fail(n_at, "uniform requires n >= 2");
        std::vector<Atom> atoms;
        atoms.reserve(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i) {
            const double z = a + (b - a) * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
            atoms.push_back({z, 1.0});
        }
        return DiscreteMeasure(std::move(atoms));
    }

    DiscreteMeasure gauss_family() {
        expect("mean=", "'mean='");
        const double mean = parse_real("mean");
        expect(",sd=", "',sd='");
        const std::size_t sd_at = pos;
        const double sd = parse_real("standard deviation");
        if (!(sd > 0.0)) fail(sd_at, "sd must be positive");
        double halfwidth = 8.0;
        long n = 2001;
        if (consume(",halfwidth=")) {
            const std::size_t hw_at = pos;
            halfwidth = parse_real("halfwidth");
            if (!(halfwidth > 0.0)) fail(hw_at, "halfwidth must be positive");
        }
        if (consume(",n=")) {
            const std::size_t n_at = pos;
            n = parse_int("atom count");
            if (n < 2) fail(n_at, "gauss requires n >= 2");
        }
        const double lo = mean - halfwidth * sd;
        const double hi = mean + halfwidth * sd;
        std::vector<Atom> atoms;
        atoms.reserve(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i) {
            const double z = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
            const double t = (z - mean) / sd;
            atoms.push_back({z, std::exp(-0.5 * t * t)});
        }
        return DiscreteMeasure(std::move(atoms));
    }
};

}  // namespace detail

/// Parses a measure spec:
///
///   spec := "rademacher"
///         | "atoms:" pair ("," pair)*            pair := real "=" weight
///         | "uniform:a=" real ",b=" real ",n=" int          (a < b, n >= 2)
///         | "gauss:mean=" real ",sd=" real [",halfwidth=" real] [",n=" int]
///
/// Weights need not sum to 1; they are renormalized. uniform discretizes by
/// n equal-weight midpoint atoms; gauss places n equally spaced atoms on
/// [mean - halfwidth*sd, mean + halfwidth*sd] weighted by the density
/// (defaults halfwidth 8, n 2001).
inline DiscreteMeasure parse_spec(std::string_view spec) {
    detail::SpecParser parser{spec};
    return parser.run();
}

/// (sum p*z, sum p*z^2).
inline MomentPair moments(const DiscreteMeasure& mu) {
    CompensatedSum m1;
    CompensatedSum m2;
    for (const Atom& a : mu.atoms()) {
        m1.add(a.weight * a.position);
        m2.add(a.weight * a.position * a.position);
    }
    return {m1.value(), m2.value()};
}

/// True iff every atom (z, p) has a mirror atom (-z, q) with positions
/// matched within tol and |p - q| <= tol.
inline bool is_symmetric(const DiscreteMeasure& rho, double tol = kDefaultSymmetryTol) {
    if (!(tol >= 0.0)) throw domain_error("symmetry tolerance must be >= 0");
    const auto& a = rho.atoms();
    std::size_t i = 0;
    std::size_t j = a.size() - 1;
    while (i < j) {
        if (std::abs(a[i].position + a[j].position) > tol) return false;
        if (std::abs(a[i].weight - a[j].weight) > tol) return false;
        ++i;
        --j;
    }
    if (i == j && std::abs(2.0 * a[i].position) > tol) return false;
    return true;
}

/// (rho + rho∘(-id)) / 2. Idempotent; the result has first moment 0 up to
/// rounding and passes is_symmetric with tolerance 0.
inline DiscreteMeasure symmetrize(const DiscreteMeasure& rho) {
    std::vector<Atom> atoms;
    atoms.reserve(2 * rho.size());
    for (const Atom& a : rho.atoms()) {
        atoms.push_back({a.position, 0.5 * a.weight});
        atoms.push_back({-a.position, 0.5 * a.weight});
    }
    return DiscreteMeasure(std::move(atoms));
}

/// True iff all mass sits within tol of position 0.
inline bool is_dirac_at_zero(const DiscreteMeasure& m, double tol) {
    if (!(tol >= 0.0)) throw domain_error("tolerance must be >= 0");
    for (const Atom& a : m.atoms())
        if (std::abs(a.position) > tol) return false;
    return true;
}

/// Atom-by-atom equality: same support (positions within pos_tol, in order)
/// and weights within weight_tol.
inline bool atomwise_equal(const DiscreteMeasure& a, const DiscreteMeasure& b,
                           double pos_tol = kPositionTol, double weight_tol = 1e-9) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a.atoms()[i].position - b.atoms()[i].position) > pos_tol) return false;
        if (std::abs(a.atoms()[i].weight - b.atoms()[i].weight) > weight_tol) return false;
    }
    return true;
}

/// Round-trippable "atoms:..." spec string with full double precision.
inline std::string to_spec_string(const DiscreteMeasure& m) {
    std::string out = "atoms:";
    char buf[64];
    bool first = true;
    for (const Atom& a : m.atoms()) {
        if (!first) out += ',';
        first = false;
        std::snprintf(buf, sizeof buf, "%.17g", a.position);
        out += buf;
        out += '=';
        std::snprintf(buf, sizeof buf, "%.17g", a.weight);
        out += buf;
    }
    return out;
}

}  // namespace entrobound
