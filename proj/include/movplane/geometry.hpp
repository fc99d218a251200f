#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "movplane/error.hpp"
#include "movplane/tolerances.hpp"
#include "movplane/vec.hpp"

namespace movplane {

/// Unit vector on S^{N-1}.
class Direction {
public:
    /// Normalizes `v`; throws InvalidArgument for zero or non-finite input.
    explicit Direction(const Vec& v);

    static Direction from_angle(double theta);

    const Vec& vec() const noexcept { return v_; }
    int dim() const noexcept { return static_cast<int>(v_.size()); }
    double operator[](int i) const { return v_[i]; }
    Direction operator-() const { return Direction(-v_); }

private:
    Vec v_;
};

struct Box {
    Vec lo;
    Vec hi;
};

enum class ShapeKind { Disk, Ellipse, Superellipse, Stadium, RoundedPolygon, Custom };

/// Shape name plus parameters. Only the fields relevant to `kind` are used.
struct ShapeSpec {
    ShapeKind kind = ShapeKind::Custom;
    double R = 1.0;          // disk radius
    int dim = 2;             // disk dimension
    double a = 1.0, b = 1.0; // ellipse / superellipse semi-axes
    int m = 4;               // superellipse exponent (even)
    double L = 2.0, r = 1.0; // stadium flat length and cap radius
    std::vector<Vec> vertices;
    double rho = 0.1;        // rounded polygon corner radius
};

std::string shape_name(ShapeKind kind);

/// Bounded open set {phi < 0} with C^1 boundary.
///
/// The evaluators must be pure: the domain is shared read-only across threads.
class ImplicitDomain {
public:
    using ScalarField = std::function<double(const Vec&)>;
    using VectorField = std::function<Vec(const Vec&)>;

    ImplicitDomain(ScalarField phi, VectorField grad_phi, Box bounding_box,
                   double r_max, ShapeSpec shape);

    double phi(const Vec& x) const { return phi_(x); }
    Vec grad_phi(const Vec& x) const { return grad_(x); }

    const Box& bounding_box() const noexcept { return box_; }
    double r_max() const noexcept { return r_max_; }
    /// 2 * r_max, an upper bound on the true diameter; the scale every
    /// relative tolerance is measured against.
    double diameter() const noexcept { return 2.0 * r_max_; }
    int dim() const noexcept { return static_cast<int>(box_.lo.size()); }
    const ShapeSpec& shape() const noexcept { return shape_; }

private:
    ScalarField phi_;
    VectorField grad_;
    Box box_;
    double r_max_;
    ShapeSpec shape_;
};

struct BoundarySample {
    Vec point;
    Vec inward_normal;
    double arc_parameter = 0.0;
};

/// Ordered boundary samples, split into closed loops. Loop `k` occupies
/// samples[loop_offsets[k] .. loop_offsets[k+1]).
struct Boundary {
    std::vector<BoundarySample> samples;
    std::vector<std::size_t> loop_offsets;
    double resolution = 0.0;

    std::size_t loop_count() const noexcept {
        return loop_offsets.empty() ? 0 : loop_offsets.size() - 1;
    }
    std::span<const BoundarySample> loop(std::size_t k) const {
        return std::span(samples).subspan(loop_offsets[k],
                                          loop_offsets[k + 1] - loop_offsets[k]);
    }
};

Vec reflect_point(const Vec& x, const Direction& nu, double lambda);

/// Newton projection onto {phi = 0} along the gradient.
Vec project_to_boundary(const ImplicitDomain& domain, const Vec& x, double tol_proj);

Direction inward_normal(const ImplicitDomain& domain, const Vec& x, double tol_proj);

/// Marching squares on phi at the given cell size, crossings projected to
/// tol_proj and chained into loops. 2D only.
Boundary extract_boundary(const ImplicitDomain& domain, double resolution, double tol_proj);

/// Point on the boundary near the closed polyline p -> q, at chord parameter t.
Vec chord_point(const ImplicitDomain& domain, const Vec& p, const Vec& q, double t,
                double tol_proj);

/// Domain plus its sampled boundary and resolved tolerances; immutable once
/// built, and the unit every moving-plane operation works on.
class DomainModel {
public:
    DomainModel(ImplicitDomain domain, const Tolerances& tolerances = {});

    const ImplicitDomain& domain() const noexcept { return domain_; }
    const Boundary& boundary() const noexcept { return boundary_; }
    const Tolerances& tol() const noexcept { return tol_; }

    double phi(const Vec& x) const { return domain_.phi(x); }

    /// Point on the boundary between sample i (s = 0) and its loop neighbours
    /// (s = -1 previous, s = +1 next).
    Vec local_arc_point(std::size_t i, double s) const;
    std::size_t prev_index(std::size_t i) const;
    std::size_t next_index(std::size_t i) const;

private:
    ImplicitDomain domain_;
    Tolerances tol_;
    Boundary boundary_;
    std::vector<std::size_t> loop_of_;
};

struct SupportPoint {
    double value;
    Vec point;
};

/// a(nu) = min over the boundary of x.nu, refined along the boundary arc.
SupportPoint support_point(const DomainModel& model, const Direction& nu);
double support_min(const DomainModel& model, const Direction& nu);

/// N-generic variant: projected descent of x.nu along the boundary from each
/// seed (seeds need not lie exactly on the boundary).
double support_min(const ImplicitDomain& domain, const Direction& nu,
                   std::span<const Vec> seeds, double tol_a);

}  // namespace movplane
