#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mgflab/format.hpp"
#include "mgflab/mgf_value.hpp"
#include "mgflab/rng.hpp"

namespace mgflab {

enum class FamilyTag {
    frechet,
    pareto_seq,
    lognormal,
    uniform01,
    degenerate,
    std_normal,
    clt_exponential,
    tabulated
};

enum class Continuity { continuous, discrete, mixed };

class NoDensityError : public std::runtime_error {
  public:
    explicit NoDensityError(const std::string& label)
        : std::runtime_error("density required but not available for model '" + label + "'") {}
};

class NoQuantileError : public std::runtime_error {
  public:
    explicit NoQuantileError(const std::string& label)
        : std::runtime_error("no quantile available for model '" + label + "'") {}
};

// ---------------------------------------------------------------------------
// Scalar distribution functions
// ---------------------------------------------------------------------------

/// Standard Frechet distribution function: 0 for x <= 0, exp(-1/x) for x > 0.
inline double frechet_cdf(double x) { return x <= 0.0 ? 0.0 : std::exp(-1.0 / x); }

/// Member n of the Pareto-like sequence: 0 for x <= 1/n, (1 - 1/(nx))^n
/// for x > 1/n.  n = 1 is a Pareto distribution with support [1, inf).
inline double pareto_seq_cdf(int n, double x) {
    if (n < 1) throw std::invalid_argument("pareto_seq_cdf: n must be a positive integer");
    const double nd = static_cast<double>(n);
    if (x <= 1.0 / nd) return 0.0;
    return std::exp(nd * std::log1p(-1.0 / (nd * x)));
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

namespace dist_detail {

// Acklam's rational approximation to the standard normal quantile,
// polished with two Newton steps against erfc so the inverse reproduces
// the CDF to machine precision.
inline double normal_quantile(double u) {
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;

    double x;
    if (u < plow) {
        const double q = std::sqrt(-2.0 * std::log(u));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (u <= 1.0 - plow) {
        const double q = u - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-u));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    for (int i = 0; i < 2; ++i) {
        const double e = normal_cdf(x) - u;
        x -= e / normal_pdf(x);
    }
    return x;
}

}  // namespace dist_detail

// ---------------------------------------------------------------------------
// DistributionModel
// ---------------------------------------------------------------------------

/// A single distribution function with its support, continuity class and
/// optional density / quantile / closed-form MGF evaluators.  Immutable
/// after construction; all evaluators are pure, so concurrent use is safe.
class DistributionModel {
  public:
    using Fn = std::function<double(double)>;
    using MgfFn = std::function<MgfValue(double)>;

    struct Spec {
        FamilyTag tag;
        std::string label;
        Continuity continuity = Continuity::continuous;
        double support_lo = -std::numeric_limits<double>::infinity();
        double support_hi = std::numeric_limits<double>::infinity();
        Fn cdf;
        Fn cdf_left;   // defaults to cdf (continuous models)
        Fn density;    // optional
        Fn quantile;   // optional
        MgfFn closed_form_mgf;  // optional
        int index_param = 0;    // n for indexed members
    };

    explicit DistributionModel(Spec spec) : s_(std::move(spec)) {
        if (!(s_.support_lo < s_.support_hi))
            throw std::invalid_argument("DistributionModel: support_lo must be < support_hi");
        if (!s_.cdf) throw std::invalid_argument("DistributionModel: cdf is required");
    }

    FamilyTag tag() const { return s_.tag; }
    const std::string& label() const { return s_.label; }
    Continuity continuity() const { return s_.continuity; }
    double support_lo() const { return s_.support_lo; }
    double support_hi() const { return s_.support_hi; }
    int index_param() const { return s_.index_param; }

    double cdf(double x) const { return s_.cdf(x); }

    /// Left limit F(x-) = P(X < x); equals cdf for continuous models.
    double cdf_left(double x) const { return s_.cdf_left ? s_.cdf_left(x) : s_.cdf(x); }

    bool has_density() const { return static_cast<bool>(s_.density); }
    double density(double x) const {
        if (!s_.density) throw NoDensityError(s_.label);
        return s_.density(x);
    }

    bool has_quantile() const { return static_cast<bool>(s_.quantile); }
    double quantile(double u) const {
        if (!s_.quantile) throw NoQuantileError(s_.label);
        if (!(u > 0.0 && u < 1.0))
            throw std::invalid_argument("quantile: u must lie in (0, 1)");
        return s_.quantile(u);
    }

    bool has_closed_form_mgf() const { return static_cast<bool>(s_.closed_form_mgf); }
    MgfValue closed_form_mgf(double t) const {
        if (!s_.closed_form_mgf)
            throw std::runtime_error("no closed-form mgf for model '" + s_.label + "'");
        return s_.closed_form_mgf(t);
    }

  private:
    Spec s_;
};

// ---------------------------------------------------------------------------
// Built-in models
// ---------------------------------------------------------------------------

inline DistributionModel frechet_model() {
    DistributionModel::Spec s;
    s.tag = FamilyTag::frechet;
    s.label = "frechet";
    s.support_lo = 0.0;
    s.support_hi = std::numeric_limits<double>::infinity();
    s.cdf = [](double x) { return frechet_cdf(x); };
    s.density = [](double x) {
        return x <= 0.0 ? 0.0 : std::exp(-1.0 / x) / (x * x);
    };
    s.quantile = [](double u) { return -1.0 / std::log(u); };
    return DistributionModel(std::move(s));
}

inline DistributionModel pareto_seq_model(int n) {
    if (n < 1) throw std::invalid_argument("pareto_seq_model: n must be a positive integer");
    const double nd = static_cast<double>(n);
    DistributionModel::Spec s;
    s.tag = FamilyTag::pareto_seq;
    s.label = "pareto_seq(" + format_int(n) + ")";
    s.index_param = n;
    s.support_lo = 1.0 / nd;
    s.support_hi = std::numeric_limits<double>::infinity();
    s.cdf = [n](double x) { return pareto_seq_cdf(n, x); };
    // Density of (1 - 1/(nx))^n, defined as 0 on (0, 1/n] to match the
    // CDF's support.
    s.density = [nd](double x) {
        if (x <= 1.0 / nd) return 0.0;
        return std::exp((nd - 1.0) * std::log1p(-1.0 / (nd * x))) / (x * x);
    };
    s.quantile = [nd](double u) {
        // inverse of (1 - 1/(nx))^n = u, written with expm1 for precision
        return -1.0 / (nd * std::expm1(std::log(u) / nd));
    };
    return DistributionModel(std::move(s));
}

inline DistributionModel lognormal_model() {
    DistributionModel::Spec s;
    s.tag = FamilyTag::lognormal;
    s.label = "lognormal";
    s.support_lo = 0.0;
    s.support_hi = std::numeric_limits<double>::infinity();
    s.cdf = [](double x) { return x <= 0.0 ? 0.0 : normal_cdf(std::log(x)); };
    s.density = [](double x) {
        if (x <= 0.0) return 0.0;
        const double l = std::log(x);
        return std::exp(-0.5 * l * l) / (x * std::sqrt(2.0 * M_PI));
    };
    s.quantile = [](double u) { return std::exp(dist_detail::normal_quantile(u)); };
    return DistributionModel(std::move(s));
}

inline DistributionModel uniform01_model() {
    DistributionModel::Spec s;
    s.tag = FamilyTag::uniform01;
    s.label = "uniform01";
    s.support_lo = 0.0;
    s.support_hi = 1.0;
    s.cdf = [](double x) { return x <= 0.0 ? 0.0 : (x >= 1.0 ? 1.0 : x); };
    s.density = [](double x) { return (x > 0.0 && x < 1.0) ? 1.0 : 0.0; };
    s.quantile = [](double u) { return u; };
    s.closed_form_mgf = [](double t) {
        MgfValue v;
        v.status = EvalStatus::Finite;
        v.route = MgfRoute::closed_form;
        v.value = t == 0.0 ? 1.0 : std::expm1(t) / t;
        v.error_estimate = 8.0 * std::numeric_limits<double>::epsilon() * v.value;
        return v;
    };
    return DistributionModel(std::move(s));
}

inline DistributionModel standard_normal_model() {
    DistributionModel::Spec s;
    s.tag = FamilyTag::std_normal;
    s.label = "normal";
    s.cdf = [](double x) { return normal_cdf(x); };
    s.density = [](double x) { return normal_pdf(x); };
    s.quantile = [](double u) { return dist_detail::normal_quantile(u); };
    s.closed_form_mgf = [](double t) {
        MgfValue v;
        v.status = EvalStatus::Finite;
        v.route = MgfRoute::closed_form;
        v.value = std::exp(0.5 * t * t);
        v.error_estimate = 8.0 * std::numeric_limits<double>::epsilon() * v.value;
        if (!std::isfinite(v.value)) {
            v.status = EvalStatus::Inconclusive;
            v.diagnostics = "value overflows double";
        }
        return v;
    };
    return DistributionModel(std::move(s));
}

/// Point mass at c, with the right-continuous step CDF.
inline DistributionModel degenerate_model(double c) {
    DistributionModel::Spec s;
    s.tag = FamilyTag::degenerate;
    s.label = "degenerate(" + format_double(c) + ")";
    s.continuity = Continuity::discrete;
    s.support_lo = c - 1.0;  // the mass sits at c; a unit pad keeps lo < hi
    s.support_hi = c + 1.0;
    s.cdf = [c](double x) { return x >= c ? 1.0 : 0.0; };
    s.cdf_left = [c](double x) { return x > c ? 1.0 : 0.0; };
    s.closed_form_mgf = [c](double t) {
        MgfValue v;
        v.route = MgfRoute::closed_form;
        v.value = std::exp(t * c);
        if (!std::isfinite(v.value)) {
            v.status = EvalStatus::Inconclusive;
            v.diagnostics = "value overflows double";
        } else {
            v.status = EvalStatus::Finite;
            v.error_estimate = 8.0 * std::numeric_limits<double>::epsilon() * v.value;
        }
        return v;
    };
    return DistributionModel(std::move(s));
}

// ---------------------------------------------------------------------------
// CLT family: standardized sums of unit exponentials
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kDefaultSeed = 12345;

/// Draws from Y_n = (sum of n unit exponentials - n) / sqrt(n).  Shared by
/// the Monte Carlo sampler and the model's recorded-seed empirical CDF.
inline std::vector<double> clt_standardized_draws(int n, std::size_t count,
                                                  std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("clt_standardized_draws: n must be positive");
    SplitMix64 gen(seed);
    std::vector<double> out(count);
    const double nd = static_cast<double>(n);
    const double inv_sqrt_n = 1.0 / std::sqrt(nd);
    for (std::size_t i = 0; i < count; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) sum -= std::log(gen.next_uniform());
        out[i] = (sum - nd) * inv_sqrt_n;
    }
    return out;
}

/// Closed-form MGF of the standardized exponential sum:
/// M_n(t) = exp(-t sqrt(n)) (1 - t/sqrt(n))^{-n}, finite exactly for
/// t < sqrt(n).
inline MgfValue clt_exponential_mgf(int n, double t) {
    if (n < 1) throw std::invalid_argument("clt_exponential_mgf: n must be positive");
    MgfValue v;
    v.route = MgfRoute::closed_form;
    const double rn = std::sqrt(static_cast<double>(n));
    if (t >= rn) {
        v.status = EvalStatus::Divergent;
        v.diagnostics = "mgf does not exist for t >= sqrt(n)";
        return v;
    }
    const double ln_m = -t * rn - static_cast<double>(n) * std::log1p(-t / rn);
    v.value = std::exp(ln_m);
    if (!std::isfinite(v.value)) {
        v.status = EvalStatus::Inconclusive;
        v.diagnostics = "value overflows double";
        return v;
    }
    v.status = EvalStatus::Finite;
    v.error_estimate = 16.0 * std::numeric_limits<double>::epsilon() * v.value;
    return v;
}

/// Model of Y_n.  There is no closed-form CDF here by design: CDF queries
/// are answered by the empirical CDF of a seeded sample, with the seed and
/// draw count recorded in the label.  The MGF is exposed in closed form.
inline DistributionModel clt_exponential_model(int n, std::uint64_t cdf_seed = kDefaultSeed,
                                               std::size_t cdf_draws = 1000000) {
    if (n < 1) throw std::invalid_argument("clt_exponential_model: n must be positive");
    if (cdf_draws < 1) throw std::invalid_argument("clt_exponential_model: cdf_draws must be positive");

    auto sorted = std::make_shared<std::vector<double>>(
        clt_standardized_draws(n, cdf_draws, derive_stream(cdf_seed, static_cast<std::uint64_t>(n))));
    std::sort(sorted->begin(), sorted->end());
    const double count = static_cast<double>(sorted->size());

    DistributionModel::Spec s;
    s.tag = FamilyTag::clt_exponential;
    s.label = "clt_exponential(" + format_int(n) + ")";
    s.index_param = n;
    s.support_lo = -std::sqrt(static_cast<double>(n));
    s.support_hi = std::numeric_limits<double>::infinity();
    s.cdf = [sorted, count](double x) {
        auto it = std::upper_bound(sorted->begin(), sorted->end(), x);
        return static_cast<double>(it - sorted->begin()) / count;
    };
    s.cdf_left = [sorted, count](double x) {
        auto it = std::lower_bound(sorted->begin(), sorted->end(), x);
        return static_cast<double>(it - sorted->begin()) / count;
    };
    s.closed_form_mgf = [n](double t) { return clt_exponential_mgf(n, t); };
    return DistributionModel(std::move(s));
}

// ---------------------------------------------------------------------------
// Tabulated CDF input
// ---------------------------------------------------------------------------

struct TableLoadReport {
    bool truncated_low = false;   // first F above 1e-6: support declared truncated
    bool truncated_high = false;  // last F below 1 - 1e-6
    double first_f = 0.0;
    double last_f = 1.0;
    std::string message;
};

/// Loads a comma-separated table with header `x,F`, strictly increasing x
/// and nondecreasing F within [0, 1].  Knots are linearly interpolated and
/// the model is treated as continuous.
inline std::pair<DistributionModel, TableLoadReport> tabulated_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("tabulated_model: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("tabulated_model: empty file '" + path + "'");
    {
        std::string header = line;
        header.erase(std::remove_if(header.begin(), header.end(),
                                    [](unsigned char ch) { return std::isspace(ch); }),
                     header.end());
        if (header != "x,F")
            throw std::runtime_error("tabulated_model: expected header 'x,F', got '" + line + "'");
    }

    auto xs = std::make_shared<std::vector<double>>();
    auto fs = std::make_shared<std::vector<double>>();
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("tabulated_model: line " + format_int(line_no) + ": missing comma");
        double x, f;
        try {
            x = std::stod(line.substr(0, comma));
            f = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw std::runtime_error("tabulated_model: line " + format_int(line_no) + ": bad number");
        }
        if (!xs->empty() && x <= xs->back())
            throw std::runtime_error("tabulated_model: line " + format_int(line_no) +
                                     ": x must be strictly increasing");
        if (f < 0.0 || f > 1.0)
            throw std::runtime_error("tabulated_model: line " + format_int(line_no) +
                                     ": F outside [0, 1]");
        if (!fs->empty() && f < fs->back())
            throw std::runtime_error("tabulated_model: line " + format_int(line_no) +
                                     ": F must be nondecreasing");
        xs->push_back(x);
        fs->push_back(f);
    }
    if (xs->size() < 2) throw std::runtime_error("tabulated_model: need at least two rows");

    TableLoadReport report;
    report.first_f = fs->front();
    report.last_f = fs->back();
    report.truncated_low = fs->front() > 1e-6;
    report.truncated_high = fs->back() < 1.0 - 1e-6;
    if (report.truncated_low)
        report.message += "support truncated below: first F = " + format_double(fs->front()) + "; ";
    if (report.truncated_high)
        report.message += "support truncated above: last F = " + format_double(fs->back()) + "; ";
    if (report.message.empty()) report.message = "ok";

    const bool snap_high = !report.truncated_high;
    DistributionModel::Spec s;
    s.tag = FamilyTag::tabulated;
    s.label = "tabulated:" + path;
    s.support_lo = xs->front();
    s.support_hi = xs->back();
    s.cdf = [xs, fs, snap_high](double x) {
        if (x < xs->front()) return 0.0;
        if (x >= xs->back()) return snap_high ? 1.0 : fs->back();
        auto it = std::upper_bound(xs->begin(), xs->end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs->begin());
        const double x0 = (*xs)[i - 1], x1 = (*xs)[i];
        const double f0 = (*fs)[i - 1], f1 = (*fs)[i];
        return f0 + (f1 - f0) * (x - x0) / (x1 - x0);
    };
    s.cdf_left = [xs, cdf = s.cdf](double x) {
        if (x <= xs->front()) return 0.0;
        return cdf(x);
    };
    return {DistributionModel(std::move(s)), report};
}

// ---------------------------------------------------------------------------
// Indexed families
// ---------------------------------------------------------------------------

inline std::vector<int> default_index_set() { return {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000}; }

struct FamilyParams {
    std::vector<int> index_set = default_index_set();
    std::uint64_t clt_cdf_seed = kDefaultSeed;
    std::size_t clt_cdf_draws = 1000000;
};

/// An indexed sequence n -> F_n together with its declared candidate weak
/// limit.  A family without a proper limit (escaping mass) carries
/// std::nullopt in the limit slot.
class DistributionFamily {
  public:
    DistributionFamily(std::string id, std::vector<int> index_set,
                       std::function<DistributionModel(int)> member,
                       std::optional<DistributionModel> declared_limit, std::string note = {})
        : id_(std::move(id)),
          index_set_(std::move(index_set)),
          member_(std::move(member)),
          limit_(std::move(declared_limit)),
          note_(std::move(note)) {
        if (index_set_.empty())
            throw std::invalid_argument("DistributionFamily: index_set must be nonempty");
        for (int n : index_set_)
            if (n < 1) throw std::invalid_argument("DistributionFamily: indices must be positive");
    }

    const std::string& id() const { return id_; }
    const std::vector<int>& index_set() const { return index_set_; }
    DistributionModel member(int n) const {
        if (n < 1) throw std::invalid_argument("DistributionFamily: member index must be positive");
        return member_(n);
    }
    const std::optional<DistributionModel>& declared_limit() const { return limit_; }
    const std::string& note() const { return note_; }

    /// Copy of this family with a different declared limit (for probing
    /// deliberately wrong limits).
    DistributionFamily with_declared_limit(DistributionModel limit) const {
        return DistributionFamily(id_ + "|limit=" + limit.label(), index_set_, member_,
                                  std::move(limit), note_);
    }

  private:
    std::string id_;
    std::vector<int> index_set_;
    std::function<DistributionModel(int)> member_;
    std::optional<DistributionModel> limit_;
    std::string note_;
};

inline DistributionFamily make_family(const std::string& family_id, const FamilyParams& params = {}) {
    if (family_id == "pareto_to_frechet") {
        return DistributionFamily(family_id, params.index_set,
                                  [](int n) { return pareto_seq_model(n); }, frechet_model());
    }
    if (family_id == "degenerate_drift") {
        // Point mass at -n; the mass escapes to -inf, so there is no proper
        // limit and the limit slot carries the sentinel.
        return DistributionFamily(
            family_id, params.index_set,
            [](int n) { return degenerate_model(-static_cast<double>(n)); }, std::nullopt,
            "no proper weak limit: F_n(x) -> 1 for every fixed x");
    }
    if (family_id == "clt_exponential") {
        const auto seed = params.clt_cdf_seed;
        const auto draws = params.clt_cdf_draws;
        return DistributionFamily(
            family_id, params.index_set,
            [seed, draws](int n) { return clt_exponential_model(n, seed, draws); },
            standard_normal_model(),
            "declared limit mgf is exp(t^2/2); the variant exp(-t^2/2) dips below "
            "Jensen's bound exp(t*mean) = 1 and is not a valid mgf; flagged as a "
            "sign discrepancy");
    }
    if (family_id == "constant_frechet") {
        return DistributionFamily(family_id, params.index_set,
                                  [](int) { return frechet_model(); }, frechet_model());
    }
    throw std::invalid_argument("make_family: unknown family '" + family_id + "'");
}

}  // namespace mgflab
