// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "entrobound/errors.hpp"
#include "entrobound/measure.hpp"
#include "entrobound/numeric.hpp"

namespace entrobound {

/// Relative entropy value plus the absolute-continuity verdict. For finite
/// atom lists the value is +infinity exactly when mu is not absolutely
/// continuous with respect to rho.
struct EntropyResult {
    double value = 0.0;
    bool absolutely_continuous = true;

    bool finite() const noexcept { return std::isfinite(value); }
};

/// H(mu|rho) = sum mu_i ln(mu_i/rho_i) over the support of mu, matching
/// atom positions within kPositionTol; +infinity when some atom of mu has
/// no counterpart in rho. Atoms of rho outside supp mu contribute 0.
inline EntropyResult relative_entropy(const DiscreteMeasure& mu, const DiscreteMeasure& rho) {
    const auto& ma = mu.atoms();
    const auto& ra = rho.atoms();
    CompensatedSum sum;
    std::size_t j = 0;
    for (const Atom& m : ma) {
        while (j < ra.size() && ra[j].position < m.position - kPositionTol) ++j;
        if (j == ra.size() || std::abs(ra[j].position - m.position) > kPositionTol)
            return {std::numeric_limits<double>::infinity(), false};
        sum.add(m.weight * std::log(m.weight / ra[j].weight));
    }
    // Gibbs: the exact value is nonnegative; clamp summation noise.
    return {std::max(sum.value(), 0.0), true};
}

/// m1^2 / (2 m2): the moment functional bounded above by 1/2 for every
/// measure, with equality only for a single atom. Undefined (0/0) for the
/// Dirac mass at 0.
inline double jensen_bound(const DiscreteMeasure& mu) {
    if (is_dirac_at_zero(mu, kPositionTol))
        throw domain_error("jensen_bound is undefined for the Dirac mass at 0");
    const MomentPair m = moments(mu);
    return m.x * m.x / (2.0 * m.y);
}

/// A real function known only at finitely many support points.
class TabulatedFn {
public:
    struct Sample {
        double position = 0.0;
        double value = 0.0;
    };

    explicit TabulatedFn(std::vector<Sample> samples) : samples_(std::move(samples)) {
        for (const Sample& s : samples_)
            if (!std::isfinite(s.position))
                throw domain_error("tabulation position must be finite");
        std::sort(samples_.begin(), samples_.end(),
                  [](const Sample& a, const Sample& b) { return a.position < b.position; });
        for (std::size_t i = 1; i < samples_.size(); ++i)
            if (samples_[i].position - samples_[i - 1].position <= kPositionTol)
                throw domain_error("duplicate tabulation position");
    }

    /// Tabulates f on the union of the two supports.
    template <typename F>
    static TabulatedFn sample(const F& f, const DiscreteMeasure& mu, const DiscreteMeasure& rho) {
        std::vector<double> positions;
        positions.reserve(mu.size() + rho.size());
        for (const Atom& a : mu.atoms()) positions.push_back(a.position);
        for (const Atom& a : rho.atoms()) positions.push_back(a.position);
        std::sort(positions.begin(), positions.end());
        std::vector<Sample> samples;
        for (double z : positions) {
            if (!samples.empty() && z - samples.back().position <= kPositionTol) continue;
            samples.push_back({z, f(z)});
        }
        return TabulatedFn(std::move(samples));
    }

    /// Value at a support point (matched within kPositionTol); undefined or
    /// non-finite entries are domain errors.
    double at(double position) const {
        auto it = std::lower_bound(samples_.begin(), samples_.end(), position - kPositionTol,
                                   [](const Sample& s, double p) { return s.position < p; });
        if (it == samples_.end() || std::abs(it->position - position) > kPositionTol)
            throw domain_error("phi is undefined at position " + std::to_string(position));
        if (!std::isfinite(it->value))
            throw domain_error("phi is not finite at position " + std::to_string(position));
        return it->value;
    }

private:
    std::vector<Sample> samples_;
};

/// Variational lower bound  ∫phi dmu - ln ∫ e^phi drho  <=  H(mu|rho),
/// with the log integral evaluated by log-sum-exp. Equality is attained at
/// phi = ln(dmu/drho).
inline double dv_lower_bound(const DiscreteMeasure& mu, const DiscreteMeasure& rho,
                             const TabulatedFn& phi) {
    CompensatedSum mean;
    for (const Atom& a : mu.atoms()) mean.add(a.weight * phi.at(a.position));

    std::vector<double> values;
    values.reserve(rho.size());
    double max_value = -std::numeric_limits<double>::infinity();
    for (const Atom& a : rho.atoms()) {
        values.push_back(phi.at(a.position));
        max_value = std::max(max_value, values.back());
    }
    CompensatedSum sum;
    for (std::size_t i = 0; i < values.size(); ++i)
        sum.add(rho.atoms()[i].weight * std::exp(values[i] - max_value));
    return mean.value() - (max_value + std::log(sum.value()));
}

/// Comparison bound (m1(mu) - m1(rho))^2 / (2 v_sg) from the sub-Gaussian
/// transform inequality. The certificate v_sg is the caller's; it is not
/// verified here.
inline double blm_bound(const DiscreteMeasure& mu, const DiscreteMeasure& rho, double v_sg) {
    if (!(v_sg > 0.0)) throw domain_error("sub-Gaussian proxy v_sg must be positive");
    const double d = moments(mu).x - moments(rho).x;
    return d * d / (2.0 * v_sg);
}

}  // namespace entrobound
