#pragma once

namespace movplane {

/// Numerical tolerances. A zero entry means "use the default", which is
/// scaled by the domain diameter when the tolerances are resolved.
struct Tolerances {
    double resolution = 0.0;  // boundary cell size; default diameter / 400
    double tol_proj = 0.0;    // |phi| after projection; default 1e-10 * diameter
    double tol_a = 0.0;       // support refinement; default 1e-9 * diameter
    double tol_T = 0.0;       // hyperplane band thickness; default 2 * resolution
    double tol_event = 1e-10; // margin threshold for the two conditions
    double step = 0.0;        // sweep step; default diameter / 200
    double tol_lambda = 0.0;  // bisection width; default 1e-8 * diameter
    double delta0 = 0.0;      // sweep start offset; default 1e-6 * diameter

    Tolerances resolved(double diameter) const;
};

}  // namespace movplane
