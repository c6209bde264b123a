#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgflab/distributions.hpp"
#include "mgflab/mgf_value.hpp"
#include "mgflab/quadrature.hpp"

namespace mgflab {

/// Open interval (a, b) of t values.
struct Interval {
    double a = 0.0;
    double b = 0.0;
    void validate() const {
        if (!(a < b)) throw std::invalid_argument("Interval: a must be less than b");
    }
};

/// G(t, x) = P(e^{tX} <= x) for fixed t != 0, evaluated as a function of x.
/// For t > 0 this is F(ln(x)/t).  For t < 0 dividing by t flips the event,
/// so G(t, x) = P(X >= ln(x)/t) = 1 - F(ln(x)/t -) with the left limit; for
/// continuous F the left limit coincides with F itself.
inline double transformed_cdf(const DistributionModel& model, double t, double x) {
    if (t == 0.0) throw std::invalid_argument("transformed_cdf: t must be nonzero");
    if (x <= 0.0) return 0.0;  // e^{tX} > 0 almost surely
    const double y = std::log(x) / t;
    if (t > 0.0) return model.cdf(y);
    return 1.0 - model.cdf_left(y);
}

/// Function object form, convenient for quadrature and grid sweeps.
class TransformedCdf {
  public:
    TransformedCdf(DistributionModel model, double t) : model_(std::move(model)), t_(t) {
        if (t == 0.0) throw std::invalid_argument("TransformedCdf: t must be nonzero");
    }
    double operator()(double x) const { return transformed_cdf(model_, t_, x); }
    double t() const { return t_; }
    const DistributionModel& base() const { return model_; }

  private:
    DistributionModel model_;
    double t_;
};

/// M(t) by direct quadrature of density(x) e^{tx} over the support.
inline MgfValue mgf_via_density(const DistributionModel& model, double t,
                                const QuadratureConfig& cfg = {}) {
    if (!model.has_density()) throw NoDensityError(model.label());
    auto integrand = [&model, t](double x) {
        const double d = model.density(x);
        return d == 0.0 ? 0.0 : d * std::exp(t * x);
    };
    IntegralOutcome out = integrate(integrand, model.support_lo(), model.support_hi(), cfg);
    return {out.status, out.value, out.error_estimate, MgfRoute::density, out.diagnostics};
}

/// M(t) through the tail-integral identity for the nonnegative variable
/// Y = e^{tX}: E(Y) = integral over (0, inf) of (1 - G(t, x)) dx.  When the
/// support bounds Y above, the integration domain collapses accordingly
/// (in particular to (0, 1] for t < 0 with support in [0, inf)).
inline MgfValue mgf_via_tail(const DistributionModel& model, double t,
                             const QuadratureConfig& cfg = {}) {
    if (t == 0.0)
        throw std::invalid_argument("mgf_via_tail: t must be nonzero (M(0) = 1 by definition)");
    const double bound = t < 0.0 ? model.support_lo() : model.support_hi();
    double hi = std::numeric_limits<double>::infinity();
    if (std::isfinite(bound)) {
        const double e = t * bound;
        hi = e > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(e);
    }
    auto integrand = [&model, t](double x) { return 1.0 - transformed_cdf(model, t, x); };
    IntegralOutcome out = integrate(integrand, 0.0, hi, cfg);
    return {out.status, out.value, out.error_estimate, MgfRoute::tail, out.diagnostics};
}

/// Preferred-route evaluation: exact shortcut at t = 0, else the density
/// route when a density exists, else a closed form when the model carries
/// one, else the tail route (every model has a CDF).
inline MgfValue evaluate_mgf(const DistributionModel& model, double t,
                             const QuadratureConfig& cfg = {}) {
    if (t == 0.0)
        return {EvalStatus::Finite, 1.0, 0.0, MgfRoute::closed_form, "M(0) = 1"};
    if (model.has_density()) return mgf_via_density(model, t, cfg);
    if (model.has_closed_form_mgf()) return model.closed_form_mgf(t);
    return mgf_via_tail(model, t, cfg);
}

struct ScanEntry {
    double t;
    EvalStatus status;
};

/// Classifies M(t) over a grid of t values, one entry per t in input order.
inline std::vector<ScanEntry> existence_scan(const DistributionModel& model,
                                             const std::vector<double>& t_grid,
                                             const QuadratureConfig& cfg = {}) {
    if (t_grid.empty()) throw std::invalid_argument("existence_scan: t_grid must be nonempty");
    std::vector<ScanEntry> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) out.push_back({t, evaluate_mgf(model, t, cfg).status});
    return out;
}

}  // namespace mgflab
