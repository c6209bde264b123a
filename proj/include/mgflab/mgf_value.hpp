#pragma once

#include <string>

#include "mgflab/quadrature.hpp"

namespace mgflab {

/// How an MGF value was obtained.  Cross-checking independent routes against
/// each other is a core diagnostic, so the route is part of the value.
enum class MgfRoute { density, tail, closed_form, monte_carlo };

inline const char* route_name(MgfRoute r) {
    switch (r) {
        case MgfRoute::density: return "density";
        case MgfRoute::tail: return "tail";
        case MgfRoute::closed_form: return "closed_form";
        default: return "monte_carlo";
    }
}

/// Outcome of evaluating M(t) = E(e^{tX}).  Finite values carry an error
/// estimate; Divergent and Inconclusive are kept distinct, mirroring the
/// quadrature engine's semantics.
struct MgfValue {
    EvalStatus status = EvalStatus::Inconclusive;
    double value = 0.0;
    double error_estimate = 0.0;
    MgfRoute route = MgfRoute::density;
    std::string diagnostics;
};

}  // namespace mgflab
