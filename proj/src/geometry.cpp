#include "movplane/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <fmt/format.h>

#include "movplane/root_finding.hpp"

namespace movplane {

namespace {

constexpr double kMinGradient = 1e-8;
constexpr int kMaxNewton = 60;

}  // namespace

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::DomainEmpty: return "DomainEmpty";
        case ErrorKind::DegenerateGradient: return "DegenerateGradient";
        case ErrorKind::NotOnBoundary: return "NotOnBoundary";
        case ErrorKind::EmptySection: return "EmptySection";
        case ErrorKind::EmptyCap: return "EmptyCap";
        case ErrorKind::NoEventFound: return "NoEventFound";
        case ErrorKind::EmptyMask: return "EmptyMask";
        case ErrorKind::LambdaOutOfRange: return "LambdaOutOfRange";
        case ErrorKind::UnconvergedInput: return "UnconvergedInput";
    }
    return "Unknown";
}

ErrorFamily family_of(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::DegenerateGradient:
        case ErrorKind::EmptySection:
        case ErrorKind::EmptyCap:
        case ErrorKind::NoEventFound:
        case ErrorKind::UnconvergedInput:
            return ErrorFamily::Numeric;
        default:
            return ErrorFamily::Domain;
    }
}

Tolerances Tolerances::resolved(double diameter) const {
    auto check = [](double v, const char* name) {
        if (!std::isfinite(v) || v < 0.0)
            fail(ErrorKind::InvalidArgument, fmt::format("tolerance {} must be positive", name));
    };
    check(resolution, "resolution");
    check(tol_proj, "tol_proj");
    check(tol_a, "tol_a");
    check(tol_T, "tol_T");
    check(tol_event, "tol_event");
    check(step, "step");
    check(tol_lambda, "tol_lambda");
    check(delta0, "delta0");

    Tolerances t = *this;
    if (t.resolution == 0.0) t.resolution = diameter / 400.0;
    if (t.tol_proj == 0.0) t.tol_proj = 1e-10 * diameter;
    if (t.tol_a == 0.0) t.tol_a = 1e-9 * diameter;
    if (t.tol_T == 0.0) t.tol_T = 2.0 * t.resolution;
    if (t.step == 0.0) t.step = diameter / 200.0;
    if (t.tol_lambda == 0.0) t.tol_lambda = 1e-8 * diameter;
    if (t.delta0 == 0.0) t.delta0 = 1e-6 * diameter;
    return t;
}

Direction::Direction(const Vec& v) {
    const double n = v.norm();
    if (v.size() < 2) fail(ErrorKind::InvalidArgument, "direction needs at least 2 components");
    if (!std::isfinite(n) || n == 0.0)
        fail(ErrorKind::InvalidArgument, "direction must be nonzero");
    v_ = v / n;
}

Direction Direction::from_angle(double theta) {
    return Direction(vec2(std::cos(theta), std::sin(theta)));
}

ImplicitDomain::ImplicitDomain(ScalarField phi, VectorField grad_phi, Box bounding_box,
                               double r_max, ShapeSpec shape)
    : phi_(std::move(phi)),
      grad_(std::move(grad_phi)),
      box_(std::move(bounding_box)),
      r_max_(r_max),
      shape_(std::move(shape)) {
    if (box_.lo.size() != box_.hi.size() || box_.lo.size() < 2)
        fail(ErrorKind::InvalidArgument, "bounding box dimension mismatch");
    if (!(r_max_ > 0.0)) fail(ErrorKind::InvalidArgument, "r_max must be positive");
}

Vec reflect_point(const Vec& x, const Direction& nu, double lambda) {
    return x + 2.0 * (lambda - x.dot(nu.vec())) * nu.vec();
}

Vec project_to_boundary(const ImplicitDomain& domain, const Vec& x0, double tol_proj) {
    Vec x = x0;
    for (int it = 0; it < kMaxNewton; ++it) {
        const double v = domain.phi(x);
        if (std::abs(v) <= tol_proj) return x;
        const Vec g = domain.grad_phi(x);
        const double g2 = g.squaredNorm();
        if (g2 < kMinGradient * kMinGradient)
            fail(ErrorKind::DegenerateGradient,
                 fmt::format("|grad phi| below {} during projection", kMinGradient));
        x -= (v / g2) * g;
    }
    if (std::abs(domain.phi(x)) <= tol_proj) return x;
    fail(ErrorKind::DegenerateGradient, "boundary projection did not converge");
}

Direction inward_normal(const ImplicitDomain& domain, const Vec& x, double tol_proj) {
    const double v = domain.phi(x);
    if (!(std::abs(v) <= tol_proj))
        fail(ErrorKind::NotOnBoundary, fmt::format("|phi(x)| = {:.3e} exceeds {:.3e}",
                                                   std::abs(v), tol_proj));
    const Vec g = domain.grad_phi(x);
    const double n = g.norm();
    if (n < kMinGradient) fail(ErrorKind::DegenerateGradient, "|grad phi| vanishes on boundary");
    return Direction(-g / n);
}

Vec chord_point(const ImplicitDomain& domain, const Vec& p, const Vec& q, double t,
                double tol_proj) {
    return project_to_boundary(domain, p + t * (q - p), tol_proj);
}

namespace {

struct Crossing {
    Vec point;
    int link[2] = {-1, -1};
};

void connect(std::vector<Crossing>& cs, int a, int b) {
    auto attach = [&](int from, int to) {
        auto& l = cs[from].link;
        if (l[0] < 0) l[0] = to;
        else if (l[1] < 0) l[1] = to;
    };
    attach(a, b);
    attach(b, a);
}

}  // namespace

Boundary extract_boundary(const ImplicitDomain& domain, double resolution, double tol_proj) {
    if (!(resolution > 0.0)) fail(ErrorKind::InvalidArgument, "resolution must be positive");
    if (domain.dim() != 2) fail(ErrorKind::InvalidArgument, "boundary extraction is 2D only");

    const Box& box = domain.bounding_box();
    const double pad = 2.0 * resolution;
    const double x0 = box.lo[0] - pad, y0 = box.lo[1] - pad;
    const int nx = static_cast<int>(std::ceil((box.hi[0] + pad - x0) / resolution));
    const int ny = static_cast<int>(std::ceil((box.hi[1] + pad - y0) / resolution));
    auto node = [&](int i, int j) { return vec2(x0 + i * resolution, y0 + j * resolution); };

    std::vector<double> val(static_cast<std::size_t>(nx + 1) * (ny + 1));
    auto at = [&](int i, int j) -> double& { return val[static_cast<std::size_t>(j) * (nx + 1) + i]; };
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) at(i, j) = domain.phi(node(i, j));

    std::vector<Crossing> cs;
    // horizontal edge (i,j)-(i+1,j) and vertical edge (i,j)-(i,j+1)
    std::vector<int> hedge(static_cast<std::size_t>(nx) * (ny + 1), -1);
    std::vector<int> vedge(static_cast<std::size_t>(nx + 1) * ny, -1);

    auto add_crossing = [&](int ia, int ja, int ib, int jb) -> int {
        const double fa = at(ia, ja), fb = at(ib, jb);
        if ((fa < 0.0) == (fb < 0.0)) return -1;
        const double t = fa / (fa - fb);
        const Vec p = node(ia, ja) + t * (node(ib, jb) - node(ia, ja));
        cs.push_back({project_to_boundary(domain, p, tol_proj)});
        return static_cast<int>(cs.size()) - 1;
    };
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i) hedge[static_cast<std::size_t>(j) * nx + i] = add_crossing(i, j, i + 1, j);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i <= nx; ++i) vedge[static_cast<std::size_t>(j) * (nx + 1) + i] = add_crossing(i, j, i, j + 1);

    if (cs.empty()) fail(ErrorKind::DomainEmpty, "no sign change of phi on the sampling grid");

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            // bottom, right, top, left
            const int e[4] = {hedge[static_cast<std::size_t>(j) * nx + i],
                              vedge[static_cast<std::size_t>(j) * (nx + 1) + i + 1],
                              hedge[static_cast<std::size_t>(j + 1) * nx + i],
                              vedge[static_cast<std::size_t>(j) * (nx + 1) + i]};
            int present[4];
            int n = 0;
            for (int k = 0; k < 4; ++k)
                if (e[k] >= 0) present[n++] = k;
            if (n == 2) {
                connect(cs, e[present[0]], e[present[1]]);
            } else if (n == 4) {
                const bool c0_inside = at(i, j) < 0.0;
                const Vec centre = node(i, j) + vec2(0.5 * resolution, 0.5 * resolution);
                const bool centre_inside = domain.phi(centre) < 0.0;
                // Cut off the corners that are not connected through the centre.
                const bool cut_c0_c2 = (c0_inside != centre_inside);
                if (cut_c0_c2) {
                    connect(cs, e[3], e[0]);
                    connect(cs, e[1], e[2]);
                } else {
                    connect(cs, e[0], e[1]);
                    connect(cs, e[2], e[3]);
                }
            }
        }
    }

    Boundary out;
    out.resolution = resolution;
    out.loop_offsets.push_back(0);
    std::vector<char> used(cs.size(), 0);
    double arc = 0.0;
    for (std::size_t start = 0; start < cs.size(); ++start) {
        if (used[start]) continue;
        std::vector<int> chain;
        int prev = -1, cur = static_cast<int>(start);
        while (cur >= 0 && !used[cur]) {
            used[cur] = 1;
            chain.push_back(cur);
            const auto& l = cs[cur].link;
            const int next = (l[0] != prev && l[0] >= 0 && !used[l[0]]) ? l[0] : l[1];
            prev = cur;
            cur = (next >= 0 && !used[next]) ? next : -1;
        }
        if (chain.size() < 3) continue;

        double area = 0.0;
        for (std::size_t k = 0; k < chain.size(); ++k) {
            const Vec& p = cs[chain[k]].point;
            const Vec& q = cs[chain[(k + 1) % chain.size()]].point;
            area += p[0] * q[1] - q[0] * p[1];
        }
        if (area < 0.0) std::reverse(chain.begin() + 1, chain.end());

        // crossings next to a grid node can project onto the same point
        const double min_gap = 1e-6 * resolution;
        std::vector<int> kept;
        for (int c : chain)
            if (kept.empty() || (cs[c].point - cs[kept.back()].point).norm() > min_gap) kept.push_back(c);
        while (kept.size() > 1 && (cs[kept.back()].point - cs[kept.front()].point).norm() <= min_gap)
            kept.pop_back();
        if (kept.size() < 3) continue;
        chain = std::move(kept);

        const std::size_t first = out.samples.size();
        for (std::size_t k = 0; k < chain.size(); ++k) {
            const Vec& p = cs[chain[k]].point;
            if (k > 0) arc += (p - out.samples.back().point).norm();
            const Vec g = domain.grad_phi(p);
            const double gn = g.norm();
            if (gn < kMinGradient)
                fail(ErrorKind::DegenerateGradient, "|grad phi| vanishes at a boundary sample");
            out.samples.push_back({p, -g / gn, arc});
        }
        arc += (out.samples.back().point - out.samples[first].point).norm();
        out.loop_offsets.push_back(out.samples.size());
    }
    if (out.samples.empty()) fail(ErrorKind::DomainEmpty, "boundary extraction produced no loops");
    return out;
}

DomainModel::DomainModel(ImplicitDomain domain, const Tolerances& tolerances)
    : domain_(std::move(domain)), tol_(tolerances.resolved(domain_.diameter())) {
    boundary_ = extract_boundary(domain_, tol_.resolution, tol_.tol_proj);
    loop_of_.resize(boundary_.samples.size());
    for (std::size_t k = 0; k < boundary_.loop_count(); ++k)
        for (std::size_t i = boundary_.loop_offsets[k]; i < boundary_.loop_offsets[k + 1]; ++i)
            loop_of_[i] = k;
}

std::size_t DomainModel::prev_index(std::size_t i) const {
    const std::size_t k = loop_of_[i];
    return i == boundary_.loop_offsets[k] ? boundary_.loop_offsets[k + 1] - 1 : i - 1;
}

std::size_t DomainModel::next_index(std::size_t i) const {
    const std::size_t k = loop_of_[i];
    return i + 1 == boundary_.loop_offsets[k + 1] ? boundary_.loop_offsets[k] : i + 1;
}

Vec DomainModel::local_arc_point(std::size_t i, double s) const {
    const Vec& p = boundary_.samples[i].point;
    if (s == 0.0) return p;
    const std::size_t j = s < 0.0 ? prev_index(i) : next_index(i);
    return chord_point(domain_, p, boundary_.samples[j].point, std::abs(s), tol_.tol_proj);
}

SupportPoint support_point(const DomainModel& model, const Direction& nu) {
    const auto& samples = model.boundary().samples;
    if (samples.empty()) fail(ErrorKind::DomainEmpty, "no boundary samples");
    std::size_t best = 0;
    double best_v = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double v = samples[i].point.dot(nu.vec());
        if (v < best_v) {
            best_v = v;
            best = i;
        }
    }
    const auto f = [&](double s) { return model.local_arc_point(best, s).dot(nu.vec()); };
    const double xtol = std::max(1e-12, model.tol().tol_a / model.tol().resolution);
    const auto [s, v] = golden_section_min(f, -1.0, 1.0, xtol);
    if (v < best_v) return {v, model.local_arc_point(best, s)};
    return {best_v, samples[best].point};
}

double support_min(const DomainModel& model, const Direction& nu) {
    return support_point(model, nu).value;
}

double support_min(const ImplicitDomain& domain, const Direction& nu,
                   std::span<const Vec> seeds, double tol_a) {
    if (seeds.empty()) fail(ErrorKind::DomainEmpty, "no seed points for support search");
    const double tol_proj = 1e-3 * tol_a;
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& seed : seeds) {
        Vec x = project_to_boundary(domain, seed, tol_proj);
        double fx = x.dot(nu.vec());
        double step = 0.1 * domain.diameter();
        for (int it = 0; it < 10000 && step > tol_a; ++it) {
            const Vec n = -domain.grad_phi(x).normalized();
            const Vec tangential = nu.vec() - nu.vec().dot(n) * n;
            if (tangential.norm() < 1e-14) break;
            const Vec trial = project_to_boundary(domain, x - step * tangential, tol_proj);
            const double ft = trial.dot(nu.vec());
            if (ft < fx) {
                x = trial;
                fx = ft;
                step *= 1.5;
            } else {
                step *= 0.5;
            }
        }
        best = std::min(best, fx);
    }
    return best;
}

}  // namespace movplane
