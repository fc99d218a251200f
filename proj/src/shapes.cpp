#include "movplane/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <fmt/format.h>

namespace movplane {

namespace {

void require(bool ok, const char* what) {
    if (!ok) fail(ErrorKind::InvalidArgument, what);
}

/// Tight box grown by a small margin so phi > 0 on its faces.
Box padded(Vec lo, Vec hi) {
    const double margin = 1e-3 * (hi - lo).maxCoeff();
    lo.array() -= margin;
    hi.array() += margin;
    return {lo, hi};
}

Box box2(double xlo, double ylo, double xhi, double yhi) {
    return padded(vec2(xlo, ylo), vec2(xhi, yhi));
}

}  // namespace

std::string shape_name(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::Disk: return "disk";
        case ShapeKind::Ellipse: return "ellipse";
        case ShapeKind::Superellipse: return "superellipse";
        case ShapeKind::Stadium: return "stadium";
        case ShapeKind::RoundedPolygon: return "rounded_polygon";
        case ShapeKind::Custom: return "custom";
    }
    return "custom";
}

ImplicitDomain make_disk(double R, int dim) {
    require(R > 0.0 && std::isfinite(R), "disk radius must be positive");
    require(dim >= 2, "disk dimension must be at least 2");
    ShapeSpec spec;
    spec.kind = ShapeKind::Disk;
    spec.R = R;
    spec.dim = dim;
    auto phi = [R](const Vec& x) { return x.norm() - R; };
    auto grad = [](const Vec& x) -> Vec {
        const double n = x.norm();
        if (n == 0.0) return Vec::Zero(x.size());
        return x / n;
    };
    return ImplicitDomain(phi, grad, padded(Vec::Constant(dim, -R), Vec::Constant(dim, R)), R, spec);
}

ImplicitDomain make_ellipse(double a, double b) {
    require(a > 0.0 && b > 0.0, "ellipse semi-axes must be positive");
    ShapeSpec spec;
    spec.kind = ShapeKind::Ellipse;
    spec.a = a;
    spec.b = b;
    auto phi = [a, b](const Vec& x) { return std::hypot(x[0] / a, x[1] / b) - 1.0; };
    auto grad = [a, b](const Vec& x) -> Vec {
        const double rho = std::hypot(x[0] / a, x[1] / b);
        if (rho == 0.0) return Vec::Zero(2);
        return vec2(x[0] / (a * a * rho), x[1] / (b * b * rho));
    };
    return ImplicitDomain(phi, grad, box2(-a, -b, a, b), std::max(a, b), spec);
}

ImplicitDomain make_superellipse(double a, double b, int m) {
    require(a > 0.0 && b > 0.0, "superellipse semi-axes must be positive");
    require(m >= 2 && m % 2 == 0, "superellipse exponent must be even and >= 2");
    ShapeSpec spec;
    spec.kind = ShapeKind::Superellipse;
    spec.a = a;
    spec.b = b;
    spec.m = m;
    const double md = m;
    auto phi = [a, b, md](const Vec& x) {
        const double s = std::pow(x[0] / a, md) + std::pow(x[1] / b, md);
        return std::pow(s, 1.0 / md) - 1.0;
    };
    auto grad = [a, b, md](const Vec& x) -> Vec {
        const double u = x[0] / a, v = x[1] / b;
        const double s = std::pow(u, md) + std::pow(v, md);
        if (s == 0.0) return Vec::Zero(2);
        const double f = std::pow(s, 1.0 / md - 1.0);
        return vec2(f * std::pow(u, md - 1.0) / a, f * std::pow(v, md - 1.0) / b);
    };
    // max |x| over the boundary, from the standard parametrization
    double r_max = std::max(a, b);
    const int n = 20000;
    for (int k = 0; k < n; ++k) {
        const double t = 0.5 * std::numbers::pi * k / n;
        const double x = a * std::pow(std::cos(t), 2.0 / md);
        const double y = b * std::pow(std::sin(t), 2.0 / md);
        r_max = std::max(r_max, std::hypot(x, y));
    }
    return ImplicitDomain(phi, grad, box2(-a, -b, a, b), r_max * (1.0 + 1e-9), spec);
}

ImplicitDomain make_stadium(double L, double r) {
    require(L >= 0.0 && std::isfinite(L), "stadium length must be non-negative");
    require(r > 0.0 && std::isfinite(r), "stadium radius must be positive");
    ShapeSpec spec;
    spec.kind = ShapeKind::Stadium;
    spec.L = L;
    spec.r = r;
    const double half = 0.5 * L;
    auto phi = [half, r](const Vec& x) {
        const double dx = std::max(std::abs(x[0]) - half, 0.0);
        return std::hypot(dx, x[1]) - r;
    };
    auto grad = [half](const Vec& x) -> Vec {
        const double dx = std::max(std::abs(x[0]) - half, 0.0);
        const double n = std::hypot(dx, x[1]);
        if (n == 0.0) return Vec::Zero(2);
        return vec2(std::copysign(dx, x[0]) / n, x[1] / n);
    };
    return ImplicitDomain(phi, grad, box2(-half - r, -r, half + r, r), half + r, spec);
}

ImplicitDomain make_rounded_polygon(std::span<const Vec> vertices, double rho) {
    require(vertices.size() >= 3, "rounded polygon needs at least 3 vertices");
    require(rho > 0.0 && std::isfinite(rho), "corner radius must be positive");
    std::vector<Vec> verts(vertices.begin(), vertices.end());
    for (const auto& v : verts) require(v.size() == 2, "polygon vertices must be 2D");

    ShapeSpec spec;
    spec.kind = ShapeKind::RoundedPolygon;
    spec.vertices = verts;
    spec.rho = rho;

    // Signed distance to the polygon (negative inside) and the closest point.
    auto closest = [verts](const Vec& x, Vec& c) {
        double best = std::numeric_limits<double>::infinity();
        bool inside = false;
        const std::size_t n = verts.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Vec& p = verts[j];
            const Vec& q = verts[i];
            const Vec e = q - p;
            const double t = std::clamp((x - p).dot(e) / e.squaredNorm(), 0.0, 1.0);
            const Vec y = p + t * e;
            const double d = (x - y).norm();
            if (d < best) {
                best = d;
                c = y;
            }
            if ((p[1] > x[1]) != (q[1] > x[1]) &&
                x[0] < p[0] + (x[1] - p[1]) * e[0] / e[1])
                inside = !inside;
        }
        return inside ? -best : best;
    };
    auto phi = [closest, rho](const Vec& x) {
        Vec c;
        return closest(x, c) - rho;
    };
    auto grad = [closest](const Vec& x) -> Vec {
        Vec c;
        const double sd = closest(x, c);
        const double d = std::abs(sd);
        if (d == 0.0) return Vec::Zero(2);
        return (sd < 0.0 ? -1.0 : 1.0) * (x - c) / d;
    };

    Vec lo = verts.front(), hi = verts.front();
    double r_max = 0.0;
    for (const auto& v : verts) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
        r_max = std::max(r_max, v.norm());
    }
    lo.array() -= rho;
    hi.array() += rho;
    return ImplicitDomain(phi, grad, padded(lo, hi), r_max + rho, spec);
}

ImplicitDomain make_domain(const ShapeSpec& spec) {
    switch (spec.kind) {
        case ShapeKind::Disk: return make_disk(spec.R, spec.dim);
        case ShapeKind::Ellipse: return make_ellipse(spec.a, spec.b);
        case ShapeKind::Superellipse: return make_superellipse(spec.a, spec.b, spec.m);
        case ShapeKind::Stadium: return make_stadium(spec.L, spec.r);
        case ShapeKind::RoundedPolygon: return make_rounded_polygon(spec.vertices, spec.rho);
        case ShapeKind::Custom: break;
    }
    fail(ErrorKind::InvalidArgument, "custom shapes cannot be rebuilt from a spec");
}

}  // namespace movplane
