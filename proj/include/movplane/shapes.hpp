#pragma once

#include <span>

#include "movplane/geometry.hpp"

namespace movplane {

/// Built-in domains.
ImplicitDomain make_disk(double R, int dim = 2);
ImplicitDomain make_ellipse(double a, double b);
/// (|x|/a)^m + (|y|/b)^m < 1 with m even, m >= 2.
ImplicitDomain make_superellipse(double a, double b, int m);
/// Points within r of the segment [-L/2, L/2] x {0}.
ImplicitDomain make_stadium(double L, double r);
/// Points within rho of the closed polygon (inside or outside); corners get
/// radius rho.
ImplicitDomain make_rounded_polygon(std::span<const Vec> vertices, double rho);

ImplicitDomain make_domain(const ShapeSpec& spec);

}  // namespace movplane
