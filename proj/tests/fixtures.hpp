#pragma once

#include "faultflow/assembly.hpp"
#include "faultflow/coefficients.hpp"
#include "faultflow/linsolve.hpp"
#include "faultflow/mesh.hpp"

#include <functional>

namespace fixture {

using namespace faultflow;

// Pressure on every external face of every domain (layer tips included).
inline BoundaryConditions pressure_everywhere(const MixedDimGeometry& g, const std::function<double(const Point&)>& p) {
    BoundaryConditions bc;
    for (const char* tag : {"left", "right", "bottom", "top"}) add_pressure(bc.omega, g.omega, tag, p);
    for (Side s : kSides) {
        add_pressure(bc.mu[static_cast<int>(s)], g.mu(s), "bottom", p);
        add_pressure(bc.mu[static_cast<int>(s)], g.mu(s), "top", p);
    }
    add_pressure(bc.gamma, g.gamma, "bottom", p);
    add_pressure(bc.gamma, g.gamma, "top", p);
    return bc;
}

// p = p_left on x = 0, p = p_right on x = 2, everything else impermeable.
inline BoundaryConditions cross_flow(const MixedDimGeometry& g, double p_left, double p_right) {
    BoundaryConditions bc;
    add_pressure(bc.omega, g.omega, "left", [&](const Point&) { return p_left; });
    add_pressure(bc.omega, g.omega, "right", [&](const Point&) { return p_right; });
    return bc;
}

inline CoefficientSet series(const MixedDimGeometry& g, double a, double b) {
    return CoefficientSet::uniform(g, 1.0, 1.0, a, 1.0, b);
}

}  // namespace fixture
