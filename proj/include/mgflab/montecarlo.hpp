#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgflab/distributions.hpp"
#include "mgflab/rng.hpp"

namespace mgflab {

/// Seeded draws from one model.  Identical (model, seed, count) inputs give
/// bit-identical batches.
struct SampleBatch {
    std::string model_label;
    std::uint64_t seed = 0;
    std::vector<double> draws;

    std::size_t count() const { return draws.size(); }
};

/// Inverse-CDF sampling; the CLT family draws standardized sums of unit
/// exponentials instead, since its members expose no quantile.
inline SampleBatch sample(const DistributionModel& model, std::size_t count,
                          std::uint64_t seed) {
    SampleBatch batch;
    batch.model_label = model.label();
    batch.seed = seed;
    if (count == 0) return batch;

    if (model.tag() == FamilyTag::clt_exponential) {
        batch.draws = clt_standardized_draws(model.index_param(), count, seed);
        return batch;
    }
    if (!model.has_quantile()) throw NoQuantileError(model.label());

    SplitMix64 gen(seed);
    batch.draws.resize(count);
    for (std::size_t i = 0; i < count; ++i) batch.draws[i] = model.quantile(gen.next_uniform());
    return batch;
}

/// Sample mean and standard error of e^{t * draw}.  Terms whose exponent
/// exceeds the double range are capped and flagged; callers must treat a
/// flagged estimate as inconclusive rather than a value.
struct MgfEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    bool overflow = false;
};

inline MgfEstimate empirical_mgf(const SampleBatch& batch, double t) {
    if (batch.draws.empty()) throw std::invalid_argument("empirical_mgf: empty batch");
    MgfEstimate out;
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t k = 0;
    for (double x : batch.draws) {
        const double e = t * x;
        double v;
        if (e > 700.0) {
            out.overflow = true;
            v = std::exp(700.0);
        } else {
            v = std::exp(e);
        }
        ++k;
        const double d = v - mean;
        mean += d / static_cast<double>(k);
        m2 += d * (v - mean);
    }
    out.estimate = mean;
    if (k > 1) out.std_error = std::sqrt(m2 / static_cast<double>(k - 1) / static_cast<double>(k));
    return out;
}

/// Kolmogorov-Smirnov distance between the batch's empirical CDF and the
/// model's CDF.
inline double empirical_cdf_distance(const SampleBatch& batch, const DistributionModel& model) {
    if (batch.draws.empty()) throw std::invalid_argument("empirical_cdf_distance: empty batch");
    std::vector<double> sorted = batch.draws;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = model.cdf(sorted[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

}  // namespace mgflab
