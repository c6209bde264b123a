#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgflab/format.hpp"

namespace mgflab {

/// Shared outcome classification for integrals and the MGF values built on
/// top of them.  Divergent and Inconclusive are distinct on purpose:
/// Divergent means the expanding truncations demonstrably blow up,
/// Inconclusive means neither convergence nor divergence was established
/// within the configured budget.
enum class EvalStatus { Finite, Divergent, Inconclusive };

inline const char* status_name(EvalStatus s) {
    switch (s) {
        case EvalStatus::Finite: return "finite";
        case EvalStatus::Divergent: return "divergent";
        default: return "inconclusive";
    }
}

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 2000;
    double truncation_growth_factor = 2.0;
    double divergence_threshold = 1e12;
    int stagnation_rounds = 3;

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
            throw std::invalid_argument("QuadratureConfig: tolerances must be positive");
        if (max_subdivisions < 1)
            throw std::invalid_argument("QuadratureConfig: max_subdivisions must be >= 1");
        if (!(truncation_growth_factor > 1.0))
            throw std::invalid_argument("QuadratureConfig: truncation_growth_factor must exceed 1");
        if (!(divergence_threshold > 1.0))
            throw std::invalid_argument("QuadratureConfig: divergence_threshold must exceed 1");
        if (stagnation_rounds < 1)
            throw std::invalid_argument("QuadratureConfig: stagnation_rounds must be >= 1");
    }
};

struct IntegralOutcome {
    EvalStatus status = EvalStatus::Inconclusive;
    double value = 0.0;           // meaningful when status == Finite
    double error_estimate = 0.0;  // meaningful when status == Finite
    std::string diagnostics;
};

/// Thrown when the integrand returns NaN or +-inf at an interior evaluation
/// point.  Carries the offending abscissa.
class EvaluationError : public std::runtime_error {
  public:
    EvaluationError(const std::string& what, double abscissa)
        : std::runtime_error(what + " at x = " + format_double(abscissa)), abscissa_(abscissa) {}
    double abscissa() const { return abscissa_; }

  private:
    double abscissa_;
};

enum class TailProbe { Divergent, FiniteSoFar };

namespace quad_detail {

// 15-point Kronrod extension of the 7-point Gauss rule (standard abscissae
// and weights).  Endpoints are never evaluated, so endpoint singularities
// are tolerated as long as the integrand is finite at interior points.
inline constexpr double kXk[8] = {
    0.0,
    0.2077849550078985, 0.4058451513773972, 0.5860872354676911,
    0.7415311855993944, 0.8648644233597691, 0.9491079123427585,
    0.9914553711208126};
inline constexpr double kWk[8] = {
    0.2094821410847278,
    0.2044329400752989, 0.1903505780647854, 0.1690047266392679,
    0.1406532597155259, 0.1047900103222502, 0.0630920926299786,
    0.0229353220105292};
// Gauss-7 weights attached to kXk[0], kXk[2], kXk[4], kXk[6].
inline constexpr double kWg[4] = {
    0.4179591836734694, 0.3818300505051189, 0.2797053914892767,
    0.1294849661688697};

struct Panel {
    double a, b;
    double value;
    double error;
    double resabs;
};

template <class F>
double eval_checked(F& f, double x) {
    double v = f(x);
    if (!std::isfinite(v)) throw EvaluationError("integrand is not finite", x);
    return v;
}

template <class F>
Panel gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    double fv[15];
    fv[0] = eval_checked(f, c);
    for (int i = 1; i < 8; ++i) {
        const double dx = h * kXk[i];
        fv[2 * i - 1] = eval_checked(f, c - dx);
        fv[2 * i] = eval_checked(f, c + dx);
    }

    double resk = kWk[0] * fv[0];
    double resabs = kWk[0] * std::fabs(fv[0]);
    double resg = kWg[0] * fv[0];
    for (int i = 1; i < 8; ++i) {
        const double s = fv[2 * i - 1] + fv[2 * i];
        resk += kWk[i] * s;
        resabs += kWk[i] * (std::fabs(fv[2 * i - 1]) + std::fabs(fv[2 * i]));
        if (i % 2 == 0) resg += kWg[i / 2] * s;
    }

    const double mean = 0.5 * resk;
    double resasc = kWk[0] * std::fabs(fv[0] - mean);
    for (int i = 1; i < 8; ++i)
        resasc += kWk[i] * (std::fabs(fv[2 * i - 1] - mean) + std::fabs(fv[2 * i] - mean));

    const double value = resk * h;
    resabs *= std::fabs(h);
    resasc *= std::fabs(h);

    // QUADPACK-style error estimate, scaled down when the rule pair agrees
    // much better than the integrand's variation would suggest.
    double err = std::fabs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double round = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    err = std::max(err, round);

    return Panel{a, b, value, err, resabs};
}

struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;
    double resabs = 0.0;
    bool converged = false;
    bool threshold_hit = false;
};

// Worst-panel-first refinement over one finite interval.  `budget` is the
// remaining panel allowance shared across the whole integrate() call.
template <class F>
AdaptiveResult adaptive_finite(F& f, double a, double b, double abs_goal, double rel_goal,
                               int& budget, double divergence_threshold) {
    AdaptiveResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }

    std::vector<Panel> active;
    std::vector<Panel> settled;  // too narrow to split further
    auto by_error = [](const Panel& p, const Panel& q) { return p.error < q.error; };

    active.push_back(gk15(f, a, b));
    --budget;

    double val = active.front().value;
    double err = active.front().error;

    while (true) {
        if (err <= std::max(abs_goal, rel_goal * std::fabs(val))) {
            out.converged = true;
            break;
        }
        if (std::fabs(val) > divergence_threshold) {
            out.threshold_hit = true;
            break;
        }
        if (budget <= 0 || active.empty()) break;

        std::pop_heap(active.begin(), active.end(), by_error);
        Panel worst = active.back();
        active.pop_back();

        const double mid = 0.5 * (worst.a + worst.b);
        const double min_width = 8.0 * std::numeric_limits<double>::epsilon() *
                                 std::max(std::fabs(worst.a), std::fabs(worst.b));
        if (worst.b - worst.a < min_width || mid <= worst.a || mid >= worst.b) {
            settled.push_back(worst);
            continue;
        }

        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        --budget;

        val += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;

        active.push_back(left);
        std::push_heap(active.begin(), active.end(), by_error);
        active.push_back(right);
        std::push_heap(active.begin(), active.end(), by_error);
    }

    // Recompute the sums pairwise for an accumulation that does not depend
    // on the refinement history.
    double v = 0.0, e = 0.0, ra = 0.0;
    for (const auto& p : settled) {
        v += p.value;
        e += p.error;
        ra += p.resabs;
    }
    std::sort(active.begin(), active.end(),
              [](const Panel& p, const Panel& q) { return p.a < q.a; });
    for (const auto& p : active) {
        v += p.value;
        e += p.error;
        ra += p.resabs;
    }
    out.value = v;
    out.error = e;
    out.resabs = ra;
    if (out.converged) out.converged = e <= std::max(abs_goal, rel_goal * std::fabs(v));
    return out;
}

// Essential-decay cutoff near a finite left endpoint: when the integrand
// vanishes with all derivatives as x -> lo+ (e.g. exp(-1/x) factors), panels
// start where |f| drops below a small fraction of abs_tol and the skipped
// sliver is charged to the error budget.  Integrands that stay O(1) or grow
// toward the endpoint are left alone.
template <class F>
std::pair<double, double> left_cutoff(F& f, double lo, double scale, double abs_tol) {
    const double tiny = 0.01 * abs_tol;
    for (int j = 2; j <= 54; ++j) {
        const double off = std::ldexp(scale, -j);
        const double x = lo + off;
        if (x <= lo) break;
        const double fx = eval_checked(f, x);
        if (std::fabs(fx) < tiny) {
            bool decays = true;
            for (int k : {j + 8, j + 16, j + 32, 52}) {
                if (k <= j || k > 54) continue;
                const double xi = lo + std::ldexp(scale, -k);
                if (xi <= lo) continue;
                if (std::fabs(eval_checked(f, xi)) >= tiny) {
                    decays = false;
                    break;
                }
            }
            if (decays) return {x, off * tiny};
            return {lo, 0.0};
        }
    }
    return {lo, 0.0};
}

template <class F>
IntegralOutcome integrate_finite(F& f, double lo, double hi, const QuadratureConfig& cfg) {
    int budget = cfg.max_subdivisions;
    auto [start, skipped] = left_cutoff(f, lo, std::min(1.0, 0.25 * (hi - lo)), cfg.abs_tol);

    AdaptiveResult r = adaptive_finite(f, start, hi, 0.25 * cfg.abs_tol, 0.25 * cfg.rel_tol,
                                       budget, cfg.divergence_threshold);

    IntegralOutcome out;
    if (r.threshold_hit) {
        out.status = EvalStatus::Divergent;
        out.diagnostics = "partial sums exceeded divergence_threshold on a finite interval";
        return out;
    }

    // Panel estimates can accumulate one-signed bias across many panels;
    // report twice the raw sum so the estimate stays a bound in practice.
    const double err = 2.0 * r.error + skipped +
                       100.0 * std::numeric_limits<double>::epsilon() * r.resabs;
    if (r.converged && err <= std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(r.value))) {
        out.status = EvalStatus::Finite;
        out.value = r.value;
        out.error_estimate = err;
        out.diagnostics = "converged, panels used: " + format_int(cfg.max_subdivisions - budget);
    } else {
        out.status = EvalStatus::Inconclusive;
        out.value = r.value;
        out.error_estimate = err;
        out.diagnostics = "tolerance not met within subdivision budget";
    }
    return out;
}

// Progressive truncation over [lo, inf): integrate expanding windows
// [T_k, T_{k+1}] with T_{k+1} = growth * T_k and watch the window sums.
// Decaying windows -> Finite with a geometric tail bound; non-decaying or
// threshold-crossing partial sums -> Divergent; otherwise Inconclusive.
template <class F>
IntegralOutcome integrate_semi(F& f, double lo, const QuadratureConfig& cfg) {
    int budget = cfg.max_subdivisions;
    auto [start, skipped] = left_cutoff(f, lo, 1.0, cfg.abs_tol);

    double total = 0.0;
    double err = skipped;
    double resabs = 0.0;
    double a = start;
    double T = std::max(1.0, start + std::max(1.0, std::fabs(start)));

    std::vector<double> windows;
    int small_streak = 0;
    int grow_streak = 0;

    IntegralOutcome out;
    while (true) {
        const double window_goal =
            std::max(0.0625 * cfg.abs_tol, 0.0625 * cfg.rel_tol * std::fabs(total));
        AdaptiveResult r =
            adaptive_finite(f, a, T, window_goal, 0.0625 * cfg.rel_tol, budget,
                            cfg.divergence_threshold);
        total += r.value;
        err += r.error;
        resabs += r.resabs;

        if (r.threshold_hit || std::fabs(total) > cfg.divergence_threshold) {
            out.status = EvalStatus::Divergent;
            out.diagnostics =
                "partial integral exceeded divergence_threshold by T = " + format_double(T);
            return out;
        }

        const double S = std::fabs(r.value);
        windows.push_back(S);
        const double scale_tol = std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total));

        if (windows.size() >= 2) {
            const double prev = windows[windows.size() - 2];
            const bool growing = S >= prev * (1.0 - 1e-12) && S > scale_tol;
            grow_streak = growing ? grow_streak + 1 : 0;
            if (grow_streak >= cfg.stagnation_rounds) {
                out.status = EvalStatus::Divergent;
                out.diagnostics =
                    "window contributions stopped decaying (no stabilization) by T = " +
                    format_double(T);
                return out;
            }
        }

        small_streak = (S <= 0.25 * scale_tol) ? small_streak + 1 : 0;
        if (small_streak >= cfg.stagnation_rounds) {
            // Probe ahead for mass hiding beyond the current truncation.
            bool quiet = true;
            for (double m : {2.0, 8.0, 32.0, 128.0, 512.0, 1024.0}) {
                if (std::fabs(eval_checked(f, T * m)) >= cfg.abs_tol) {
                    quiet = false;
                    break;
                }
            }
            if (quiet) {
                // Geometric tail bound from the observed decay ratio, with a
                // safety factor against ratio drift.
                double ratio = 0.0;
                for (int k = 0; k < cfg.stagnation_rounds; ++k) {
                    const std::size_t i = windows.size() - 1 - k;
                    if (i == 0) break;
                    if (windows[i - 1] > 0.0)
                        ratio = std::max(ratio, windows[i] / windows[i - 1]);
                }
                ratio = std::min(ratio, 0.999);
                const double tail = 2.0 * windows.back() * ratio / (1.0 - ratio);
                const double total_err =
                    2.0 * err + tail +
                    100.0 * std::numeric_limits<double>::epsilon() * resabs;
                if (total_err <= std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total))) {
                    out.status = EvalStatus::Finite;
                    out.value = total;
                    out.error_estimate = total_err;
                    out.diagnostics = "converged, truncated at T = " + format_double(T) +
                                      ", panels used: " +
                                      format_int(cfg.max_subdivisions - budget);
                    return out;
                }
                // Tail bound still above tolerance: keep expanding; the
                // truncation cap or the panel budget bounds the loop.
            } else {
                small_streak = 0;  // mass ahead: keep expanding
            }
        }

        if (budget <= 0) {
            out.status = EvalStatus::Inconclusive;
            out.value = total;
            out.error_estimate = 2.0 * err;
            out.diagnostics = "subdivision budget exhausted at T = " + format_double(T);
            return out;
        }
        if (T > 1e280) {
            out.status = EvalStatus::Inconclusive;
            out.value = total;
            out.error_estimate = 2.0 * err;
            out.diagnostics = "truncation limit reached without stabilization or divergence";
            return out;
        }

        a = T;
        T *= cfg.truncation_growth_factor;
    }
}

}  // namespace quad_detail

/// Integrates f over (lo, hi).  Either endpoint may be infinite; endpoint
/// singularities are allowed because the panel rule never evaluates
/// endpoints.  Non-finite integrand values at interior points raise
/// EvaluationError.
template <class F>
IntegralOutcome integrate(F&& f, double lo, double hi, const QuadratureConfig& cfg = {}) {
    cfg.validate();
    if (std::isnan(lo) || std::isnan(hi))
        throw std::invalid_argument("integrate: NaN integration bound");
    if (lo == hi) return {EvalStatus::Finite, 0.0, 0.0, "empty interval"};
    if (lo > hi) throw std::invalid_argument("integrate: lo must not exceed hi");

    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);

    if (!lo_inf && !hi_inf) return quad_detail::integrate_finite(f, lo, hi, cfg);
    if (!lo_inf && hi_inf) return quad_detail::integrate_semi(f, lo, cfg);
    if (lo_inf && !hi_inf) {
        auto g = [&f, hi](double y) { return f(hi - y); };
        return quad_detail::integrate_semi(g, 0.0, cfg);
    }

    // Doubly infinite: split at 0 and mirror the left half.
    auto g = [&f](double y) { return f(-y); };
    IntegralOutcome right = quad_detail::integrate_semi(f, 0.0, cfg);
    if (right.status == EvalStatus::Divergent) return right;
    IntegralOutcome left = quad_detail::integrate_semi(g, 0.0, cfg);
    if (left.status == EvalStatus::Divergent) return left;
    IntegralOutcome out;
    if (right.status == EvalStatus::Finite && left.status == EvalStatus::Finite) {
        out.status = EvalStatus::Finite;
        out.value = right.value + left.value;
        out.error_estimate = right.error_estimate + left.error_estimate;
        out.diagnostics = "split at 0; " + right.diagnostics;
    } else {
        out.status = EvalStatus::Inconclusive;
        out.value = right.value + left.value;
        out.error_estimate = right.error_estimate + left.error_estimate;
        out.diagnostics = "split at 0; one half inconclusive";
    }
    return out;
}

/// Classifies the tail behaviour of f over [lo, inf): Divergent when the
/// expanding truncations fail the stabilization test, FiniteSoFar otherwise.
template <class F>
TailProbe detect_divergence(F&& f, double lo, const QuadratureConfig& cfg = {}) {
    cfg.validate();
    IntegralOutcome out = quad_detail::integrate_semi(f, lo, cfg);
    return out.status == EvalStatus::Divergent ? TailProbe::Divergent : TailProbe::FiniteSoFar;
}

}  // namespace mgflab
