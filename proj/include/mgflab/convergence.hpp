#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgflab/distributions.hpp"
#include "mgflab/format.hpp"
#include "mgflab/gridspec.hpp"
#include "mgflab/mgf.hpp"
#include "mgflab/quadrature.hpp"

namespace mgflab {

enum class VerdictStatus { Satisfied, Violated, Inconclusive };

inline const char* verdict_name(VerdictStatus v) {
    switch (v) {
        case VerdictStatus::Satisfied: return "satisfied";
        case VerdictStatus::Violated: return "violated";
        default: return "inconclusive";
    }
}

enum class Consistency { ConsistentWithTheorem1, ContradictionFlagged };

inline const char* consistency_name(Consistency c) {
    return c == Consistency::ConsistentWithTheorem1 ? "consistent-with-theorem-1"
                                                    : "contradiction-flagged";
}

/// Small table of supporting numbers attached to every decided verdict.
struct EvidenceTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    bool empty() const { return rows.empty(); }
};

struct ConditionVerdict {
    VerdictStatus status = VerdictStatus::Inconclusive;
    EvidenceTable evidence;
    std::string note;
};

/// Tolerances and grid sizes for the verdict engine.  All verdicts are
/// evidence over the finite n-set examined, never proofs; the defaults are
/// sized to the O(1/n) convergence rates of the built-in families.
struct LabConfig {
    QuadratureConfig quad{};
    double mgf_tol = 1e-2;            // |M_n - M| target at the largest n
    double cdf_tol = 1e-2;            // sup-distance target at the largest n
    double growth_margin = 10.0;      // condition (a): last value vs median
    double unbounded_threshold = 1e10;
    double trend_slack = 1.10;        // "nonincreasing" tolerance across n
    int quantile_grid_points = 2000;  // quantile probes per model in CDF grids
    int log_grid_points = 400;        // geometric probes over the joint support
};

// ---------------------------------------------------------------------------
// sup-distance between two CDFs
// ---------------------------------------------------------------------------

struct SupDistance {
    double distance = 0.0;
    double arg_x = 0.0;  // a grid point attaining the maximum
};

namespace lab_detail {

inline void add_edge_probes(std::vector<double>& xs, double edge) {
    if (!std::isfinite(edge)) return;
    xs.push_back(edge);
    const double scale = std::max(1.0, std::fabs(edge));
    for (double eps : {1e-12, 1e-9, 1e-6, 1e-3}) {
        xs.push_back(edge + eps * scale);
        xs.push_back(edge - eps * scale);
    }
}

}  // namespace lab_detail

/// Merged evaluation grid: quantile probes of both models (when available),
/// a geometric grid over the joint support in both signs, and approach
/// sequences at every finite support edge.
inline std::vector<double> merged_cdf_grid(const DistributionModel& a, const DistributionModel& b,
                                           const LabConfig& cfg = {}) {
    std::vector<double> xs;
    const double lo = std::min(a.support_lo(), b.support_lo());
    const double hi = std::max(a.support_hi(), b.support_hi());

    for (const DistributionModel* m : {&a, &b}) {
        if (m->has_quantile()) {
            const int q = cfg.quantile_grid_points;
            for (int k = 1; k < q; ++k)
                xs.push_back(m->quantile(static_cast<double>(k) / q));
        }
        lab_detail::add_edge_probes(xs, m->support_lo());
        lab_detail::add_edge_probes(xs, m->support_hi());
    }

    const double log_min = 1e-9, log_max = 1e9;
    const int g = cfg.log_grid_points;
    for (int j = 0; j <= g; ++j) {
        const double x = log_min * std::pow(log_max / log_min, static_cast<double>(j) / g);
        xs.push_back(x);
        xs.push_back(-x);
    }
    xs.push_back(0.0);

    std::erase_if(xs, [lo, hi](double x) { return !std::isfinite(x) || x < lo || x > hi; });
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    if (xs.empty()) xs.push_back(0.5 * (std::max(lo, -1e9) + std::min(hi, 1e9)));
    return xs;
}

/// max over the merged grid of |F_a(x) - F_b(x)|, with the attaining x.
inline SupDistance sup_distance(const DistributionModel& a, const DistributionModel& b,
                                const LabConfig& cfg = {}) {
    SupDistance best;
    const std::vector<double> grid = merged_cdf_grid(a, b, cfg);
    best.arg_x = grid.front();
    for (double x : grid) {
        const double d = std::fabs(a.cdf(x) - b.cdf(x));
        if (d > best.distance) {
            best.distance = d;
            best.arg_x = x;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Theorem 1 conditions
// ---------------------------------------------------------------------------

namespace lab_detail {

constexpr const char* kFiniteEvidenceNote = "evidence over finite n_set, not a proof";

inline bool increasing_tail(const std::vector<double>& v) {
    const std::size_t k = v.size();
    return k >= 3 && v[k - 3] < v[k - 2] && v[k - 2] < v[k - 1];
}

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size();
    return k % 2 == 1 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

/// Condition (a) verdict from the evaluated sequence (n, M_n(t)).
inline ConditionVerdict condition_a_from_sequence(
    const std::vector<std::pair<int, MgfValue>>& seq, const LabConfig& cfg, double t) {
    ConditionVerdict v;
    v.evidence.columns = {"n", "t", "status", "value"};
    std::vector<double> finite_vals;
    std::size_t divergent = 0, inconclusive = 0;
    for (const auto& [n, m] : seq) {
        v.evidence.rows.push_back({format_int(n), format_double(t), status_name(m.status),
                                   m.status == EvalStatus::Finite ? format_double(m.value) : ""});
        if (m.status == EvalStatus::Finite) finite_vals.push_back(m.value);
        else if (m.status == EvalStatus::Divergent) ++divergent;
        else ++inconclusive;
    }

    const bool growth_trend = finite_vals.size() >= 3 &&
                              finite_vals.back() > cfg.growth_margin * finite_vals.front() &&
                              increasing_tail(finite_vals);

    if (divergent > 0) {
        if (divergent == seq.size()) {
            v.status = VerdictStatus::Violated;
            v.note = "M_n(t) divergent at every examined n";
        } else if (growth_trend) {
            v.status = VerdictStatus::Violated;
            v.note = "divergent members with the finite values trending upward";
        } else {
            v.status = VerdictStatus::Inconclusive;
            v.note = "isolated divergent evaluations without a clear trend";
        }
        return v;
    }
    if (inconclusive > 0) {
        v.status = VerdictStatus::Inconclusive;
        v.note = "some evaluations inconclusive";
        return v;
    }
    const double vmax = *std::max_element(finite_vals.begin(), finite_vals.end());
    if (vmax > cfg.unbounded_threshold) {
        v.status = VerdictStatus::Violated;
        v.note = "values exceed unbounded_threshold " + format_double(cfg.unbounded_threshold);
        return v;
    }
    if (growth_trend) {
        v.status = VerdictStatus::Violated;
        v.note = "growth trend: last value exceeds " + format_double(cfg.growth_margin) +
                 "x the first and the sequence is increasing over its last three entries";
        return v;
    }
    if (finite_vals.back() <= median_of(finite_vals) * cfg.growth_margin) {
        v.status = VerdictStatus::Satisfied;
        v.note = std::string("bounded over the examined n; ") + kFiniteEvidenceNote;
    } else {
        v.status = VerdictStatus::Inconclusive;
        v.note = "no divergence, but the sequence has not settled";
    }
    return v;
}

}  // namespace lab_detail

/// Condition (a) of the convergence criterion: sup over n of M_n(t) finite.
/// Decided from the evaluated values over n_set; Satisfied verdicts carry
/// the finite-evidence caveat.
inline ConditionVerdict check_condition_a(const DistributionFamily& family, double t,
                                          const std::vector<int>& n_set,
                                          const LabConfig& cfg = {}) {
    if (n_set.empty()) throw std::invalid_argument("check_condition_a: n_set must be nonempty");
    std::vector<std::pair<int, MgfValue>> seq;
    seq.reserve(n_set.size());
    for (int n : n_set) seq.emplace_back(n, evaluate_mgf(family.member(n), t, cfg.quad));
    return lab_detail::condition_a_from_sequence(seq, cfg, t);
}

namespace lab_detail {

inline ConditionVerdict condition_b_from_distances(
    const std::vector<std::pair<int, SupDistance>>& dist, const std::vector<ScanEntry>& limit_scan,
    double tol, const LabConfig& cfg) {
    ConditionVerdict v;
    v.evidence.columns = {"n", "sup_distance", "arg_x"};
    for (const auto& [n, d] : dist)
        v.evidence.rows.push_back({format_int(n), format_double(d.distance), format_double(d.arg_x)});

    bool monotone = true;
    for (std::size_t i = 1; i < dist.size(); ++i)
        if (dist[i].second.distance > cfg.trend_slack * dist[i - 1].second.distance) monotone = false;

    const double first = dist.front().second.distance;
    const double last = dist.back().second.distance;
    const bool limit_mgf_ok =
        std::all_of(limit_scan.begin(), limit_scan.end(),
                    [](const ScanEntry& e) { return e.status == EvalStatus::Finite; });

    if (!limit_mgf_ok) {
        v.status = VerdictStatus::Violated;
        v.note = "declared limit's mgf does not exist across the interval";
        return v;
    }
    if (monotone && last < tol) {
        v.status = VerdictStatus::Satisfied;
        v.note = std::string("sup-distance nonincreasing and below tol at the largest n; ") +
                 kFiniteEvidenceNote;
        return v;
    }
    if (last >= tol && last > 0.5 * first) {
        v.status = VerdictStatus::Violated;
        v.note = "sup-distance does not approach 0 (plateau at " + format_double(last) + ")";
        return v;
    }
    v.status = VerdictStatus::Inconclusive;
    v.note = "sup-distance still decreasing but above tol at the largest n";
    return v;
}

}  // namespace lab_detail

/// Condition (b): weak convergence of F_n to the declared limit whose MGF
/// exists across the interval.  A sentinel limit (escaping mass) is an
/// immediate violation.
inline ConditionVerdict check_condition_b(const DistributionFamily& family, const Interval& interval,
                                          double tol, const LabConfig& cfg = {}) {
    interval.validate();
    const std::vector<int>& n_set = family.index_set();

    if (!family.declared_limit()) {
        ConditionVerdict v;
        v.status = VerdictStatus::Violated;
        v.note = "no proper declared limit; " +
                 (family.note().empty() ? std::string("mass escapes") : family.note());
        v.evidence.columns = {"n", "F_n(-10)", "F_n(0)", "F_n(10)"};
        for (int n : n_set) {
            const DistributionModel m = family.member(n);
            v.evidence.rows.push_back({format_int(n), format_double(m.cdf(-10.0)),
                                       format_double(m.cdf(0.0)), format_double(m.cdf(10.0))});
        }
        return v;
    }

    const DistributionModel& limit = *family.declared_limit();
    std::vector<std::pair<int, SupDistance>> dist;
    dist.reserve(n_set.size());
    for (int n : n_set) dist.emplace_back(n, sup_distance(family.member(n), limit, cfg));
    const std::vector<ScanEntry> scan =
        existence_scan(limit, interior_grid(interval, 9), cfg.quad);
    return lab_detail::condition_b_from_distances(dist, scan, tol, cfg);
}

// ---------------------------------------------------------------------------
// Full Theorem 1 report
// ---------------------------------------------------------------------------

struct MgfCell {
    int n;
    double t;
    MgfValue value;
};

struct DistanceRow {
    int n;
    double sup_distance;
    double arg_x;
};

struct LimitMgfEntry {
    double t;
    MgfValue value;
};

/// Everything the consistency check rests on: the (n, t) table of MGF
/// values, the per-n sup-distances to the declared limit, the three
/// verdicts, and the cross-check between them.
struct ConvergenceReport {
    std::string family_id;
    Interval interval;
    std::vector<double> t_grid;
    std::vector<int> n_set;
    std::vector<MgfCell> mgf_table;             // sorted by (n, t)
    std::vector<LimitMgfEntry> limit_mgf;       // empty when no declared limit
    std::vector<DistanceRow> sup_distance_by_n; // empty when no declared limit
    ConditionVerdict condition_a;
    ConditionVerdict condition_b;
    ConditionVerdict mgf_convergence;
    Consistency consistency = Consistency::ConsistentWithTheorem1;
    std::string note;
};

namespace lab_detail {

inline ConditionVerdict mgf_convergence_verdict(
    const std::vector<int>& n_set, const std::vector<double>& t_grid,
    const std::vector<MgfCell>& table, const std::vector<LimitMgfEntry>& limit_mgf,
    bool has_limit, const LabConfig& cfg) {
    ConditionVerdict v;

    auto cell = [&](int n, double t) -> const MgfValue& {
        for (const auto& c : table)
            if (c.n == n && c.t == t) return c.value;
        throw std::logic_error("mgf table cell missing");
    };

    if (!has_limit) {
        // No target: the sequence can only be shown not to converge.
        v.evidence.columns = {"t", "first_value", "last_value"};
        bool unbounded = false;
        for (double t : t_grid) {
            std::vector<double> vals;
            for (int n : n_set) {
                const MgfValue& m = cell(n, t);
                if (m.status == EvalStatus::Finite) vals.push_back(m.value);
            }
            if (vals.size() >= 3 && vals.back() > cfg.growth_margin * vals.front() &&
                increasing_tail(vals))
                unbounded = true;
            if (!vals.empty())
                v.evidence.rows.push_back(
                    {format_double(t), format_double(vals.front()), format_double(vals.back())});
        }
        if (unbounded) {
            v.status = VerdictStatus::Violated;
            v.note = "M_n(t) grows without bound; no finite limit mgf";
        } else {
            v.status = VerdictStatus::Inconclusive;
            v.note = "no declared limit mgf to compare against";
        }
        return v;
    }

    v.evidence.columns = {"n", "max_gap_over_t"};
    bool member_divergent = false, target_divergent = false, any_inconclusive = false;

    auto target = [&](double t) -> const MgfValue& {
        for (const auto& e : limit_mgf)
            if (e.t == t) return e.value;
        throw std::logic_error("limit mgf entry missing");
    };
    for (double t : t_grid)
        if (target(t).status == EvalStatus::Divergent) target_divergent = true;

    std::vector<double> max_gap;
    for (int n : n_set) {
        double g = 0.0;
        bool complete = true;
        for (double t : t_grid) {
            const MgfValue& m = cell(n, t);
            const MgfValue& mt = target(t);
            if (m.status == EvalStatus::Divergent) member_divergent = true;
            if (m.status != EvalStatus::Finite || mt.status != EvalStatus::Finite) {
                if (m.status == EvalStatus::Inconclusive || mt.status == EvalStatus::Inconclusive)
                    any_inconclusive = true;
                complete = false;
                continue;
            }
            g = std::max(g, std::fabs(m.value - mt.value));
        }
        if (complete) {
            max_gap.push_back(g);
            v.evidence.rows.push_back({format_int(n), format_double(g)});
        }
    }

    if (target_divergent) {
        v.status = VerdictStatus::Violated;
        v.note = "target mgf divergent on the grid";
        return v;
    }
    if (member_divergent) {
        v.status = VerdictStatus::Violated;
        v.note = "member mgf divergent on the grid while the target is finite";
        return v;
    }
    if (max_gap.size() != n_set.size() || any_inconclusive) {
        v.status = VerdictStatus::Inconclusive;
        v.note = "incomplete mgf table";
        return v;
    }
    bool nonincreasing = true;
    for (std::size_t i = 1; i < max_gap.size(); ++i)
        if (max_gap[i] > cfg.trend_slack * max_gap[i - 1]) nonincreasing = false;
    if (nonincreasing && max_gap.back() < cfg.mgf_tol) {
        v.status = VerdictStatus::Satisfied;
        v.note = std::string("max_t |M_n - M| decreasing and below mgf_tol at the largest n; ") +
                 kFiniteEvidenceNote;
    } else if (max_gap.back() >= cfg.mgf_tol && max_gap.back() > 0.5 * max_gap.front()) {
        v.status = VerdictStatus::Violated;
        v.note = "mgf gap does not approach 0 (plateau at " + format_double(max_gap.back()) + ")";
    } else {
        v.status = VerdictStatus::Inconclusive;
        v.note = "gap decreasing but above mgf_tol at the largest n";
    }
    return v;
}

}  // namespace lab_detail

/// Runs the full check: condition (a) across the t-grid, condition (b)
/// against the declared limit, direct measurement of |M_n - M|, and the
/// two-way consistency cross-check.
inline ConvergenceReport theorem1_report(const DistributionFamily& family, const Interval& interval,
                                         std::vector<double> t_grid, std::vector<int> n_set,
                                         const LabConfig& cfg = {}) {
    interval.validate();
    if (t_grid.empty()) t_grid = interior_grid(interval, 9);
    for (double t : t_grid)
        if (!(t > interval.a && t < interval.b))
            throw std::invalid_argument("theorem1_report: t_grid must lie inside the interval");
    if (n_set.empty()) n_set = family.index_set();
    std::sort(n_set.begin(), n_set.end());
    n_set.erase(std::unique(n_set.begin(), n_set.end()), n_set.end());
    std::sort(t_grid.begin(), t_grid.end());

    ConvergenceReport rep;
    rep.family_id = family.id();
    rep.interval = interval;
    rep.t_grid = t_grid;
    rep.n_set = n_set;
    rep.note = family.note();

    const bool has_limit = family.declared_limit().has_value();

    // MGF table, one member construction per n.
    for (int n : n_set) {
        const DistributionModel m = family.member(n);
        for (double t : t_grid) rep.mgf_table.push_back({n, t, evaluate_mgf(m, t, cfg.quad)});
        if (has_limit)
            rep.sup_distance_by_n.push_back([&] {
                const SupDistance d = sup_distance(m, *family.declared_limit(), cfg);
                return DistanceRow{n, d.distance, d.arg_x};
            }());
    }
    if (has_limit)
        for (double t : t_grid)
            rep.limit_mgf.push_back({t, evaluate_mgf(*family.declared_limit(), t, cfg.quad)});

    // Condition (a) aggregated over the grid: worst verdict wins.
    {
        ConditionVerdict agg;
        agg.evidence.columns = {"n", "t", "status", "value"};
        VerdictStatus worst = VerdictStatus::Satisfied;
        std::string note;
        for (double t : t_grid) {
            std::vector<std::pair<int, MgfValue>> seq;
            for (int n : n_set) {
                for (const auto& c : rep.mgf_table)
                    if (c.n == n && c.t == t) seq.emplace_back(n, c.value);
            }
            ConditionVerdict vt = lab_detail::condition_a_from_sequence(seq, cfg, t);
            for (auto& row : vt.evidence.rows) agg.evidence.rows.push_back(row);
            if (vt.status == VerdictStatus::Violated && worst != VerdictStatus::Violated) {
                worst = VerdictStatus::Violated;
                note = "t = " + format_double(t) + ": " + vt.note;
            } else if (vt.status == VerdictStatus::Inconclusive && worst == VerdictStatus::Satisfied) {
                worst = VerdictStatus::Inconclusive;
                note = "t = " + format_double(t) + ": " + vt.note;
            } else if (worst == VerdictStatus::Satisfied) {
                note = vt.note;
            }
        }
        agg.status = worst;
        agg.note = note;
        rep.condition_a = agg;
    }

    // Condition (b): reuse the per-n distances already computed.
    if (!has_limit) {
        rep.condition_b = check_condition_b(family, interval, cfg.cdf_tol, cfg);
    } else {
        std::vector<std::pair<int, SupDistance>> dist;
        for (const auto& row : rep.sup_distance_by_n)
            dist.emplace_back(row.n, SupDistance{row.sup_distance, row.arg_x});
        const std::vector<ScanEntry> scan =
            existence_scan(*family.declared_limit(), interior_grid(interval, 9), cfg.quad);
        rep.condition_b = lab_detail::condition_b_from_distances(dist, scan, cfg.cdf_tol, cfg);
    }

    rep.mgf_convergence = lab_detail::mgf_convergence_verdict(n_set, t_grid, rep.mgf_table,
                                                              rep.limit_mgf, has_limit, cfg);

    // Two-way cross-check of the equivalence.
    const bool ab_satisfied = rep.condition_a.status == VerdictStatus::Satisfied &&
                              rep.condition_b.status == VerdictStatus::Satisfied;
    const bool ab_violated = rep.condition_a.status == VerdictStatus::Violated ||
                             rep.condition_b.status == VerdictStatus::Violated;
    if (ab_satisfied && rep.mgf_convergence.status == VerdictStatus::Violated)
        rep.consistency = Consistency::ContradictionFlagged;
    else if (rep.mgf_convergence.status == VerdictStatus::Satisfied && ab_violated)
        rep.consistency = Consistency::ContradictionFlagged;
    else
        rep.consistency = Consistency::ConsistentWithTheorem1;
    return rep;
}

// ---------------------------------------------------------------------------
// Theorem 2 demonstration: uniform convergence of the transformed CDFs
// ---------------------------------------------------------------------------

struct Theorem2Row {
    int n;
    double sup_g_distance;  // sup_x |G_n(t, x) - G(t, x)|
    double arg_x;
    MgfValue tail_mgf;      // integral of (1 - G_n) over (0, inf)
    MgfValue reference_mgf; // density route when available, else preferred route
    double abs_diff;        // |tail - reference| when both finite, else NaN
};

/// Per-n evidence for the uniform-convergence mechanism: the transformed
/// CDFs G_n(t, .) approach G(t, .) uniformly, and the tail integral of
/// 1 - G_n reproduces the member's MGF.
inline std::vector<Theorem2Row> theorem2_demo(const DistributionFamily& family, double t,
                                              std::vector<int> n_set, const LabConfig& cfg = {}) {
    if (t == 0.0) throw std::invalid_argument("theorem2_demo: t must be nonzero");
    if (!family.declared_limit())
        throw std::invalid_argument("theorem2_demo: family has no declared limit distribution");
    if (family.declared_limit()->continuity() != Continuity::continuous)
        throw std::invalid_argument("theorem2_demo: the declared limit must be continuous");
    if (n_set.empty()) n_set = family.index_set();
    std::sort(n_set.begin(), n_set.end());
    n_set.erase(std::unique(n_set.begin(), n_set.end()), n_set.end());

    const DistributionModel& limit = *family.declared_limit();
    std::vector<Theorem2Row> rows;
    rows.reserve(n_set.size());

    for (int n : n_set) {
        const DistributionModel member = family.member(n);
        if (member.continuity() != Continuity::continuous)
            throw std::invalid_argument("theorem2_demo: member " + format_int(n) +
                                        " is not continuous (hypothesis of the theorem)");

        Theorem2Row row;
        row.n = n;

        // sup_x |G_n - G| over the image of the CDF grid under x = e^{t y}.
        row.sup_g_distance = 0.0;
        row.arg_x = 1.0;
        for (double y : merged_cdf_grid(member, limit, cfg)) {
            const double e = t * y;
            if (e > 700.0 || e < -700.0) continue;
            const double x = std::exp(e);
            const double d = std::fabs(transformed_cdf(member, t, x) - transformed_cdf(limit, t, x));
            if (d > row.sup_g_distance) {
                row.sup_g_distance = d;
                row.arg_x = x;
            }
        }

        row.tail_mgf = mgf_via_tail(member, t, cfg.quad);
        row.reference_mgf = member.has_density() ? mgf_via_density(member, t, cfg.quad)
                                                 : evaluate_mgf(member, t, cfg.quad);
        row.abs_diff = (row.tail_mgf.status == EvalStatus::Finite &&
                        row.reference_mgf.status == EvalStatus::Finite)
                           ? std::fabs(row.tail_mgf.value - row.reference_mgf.value)
                           : std::numeric_limits<double>::quiet_NaN();
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace mgflab
