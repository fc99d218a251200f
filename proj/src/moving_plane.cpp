#include "movplane/moving_plane.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "movplane/root_finding.hpp"

namespace movplane {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double normal_dot(const ImplicitDomain& domain, const Vec& x, const Direction& nu) {
    const Vec g = domain.grad_phi(x);
    const double n = g.norm();
    if (n < 1e-8) fail(ErrorKind::DegenerateGradient, "|grad phi| vanishes on the section");
    return -g.dot(nu.vec()) / n;
}

}  // namespace

std::string_view to_string(EventKind kind) noexcept {
    return kind == EventKind::NormalOrthogonal ? "NormalOrthogonal" : "InternalTangency";
}

PlaneSweep::PlaneSweep(const DomainModel& model, const Direction& nu)
    : model_(&model), nu_(nu) {
    if (nu.dim() != model.domain().dim())
        fail(ErrorKind::InvalidArgument, "direction dimension does not match the domain");
    const Boundary& bd = model.boundary();
    const auto& samples = bd.samples;
    sample_f_.resize(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) sample_f_[i] = samples[i].point.dot(nu.vec());

    const double xtol = std::max(1e-12, 1e-3 * model.tol().tol_a / model.tol().resolution);
    lower_ = kInf;
    upper_ = -kInf;
    loops_.resize(bd.loop_count());
    for (std::size_t k = 0; k < bd.loop_count(); ++k) {
        auto& nodes = loops_[k];
        for (std::size_t i = bd.loop_offsets[k]; i < bd.loop_offsets[k + 1]; ++i) {
            const double fp = sample_f_[model.prev_index(i)];
            const double fi = sample_f_[i];
            const double fn = sample_f_[model.next_index(i)];
            // one-sided equality catches a minimum midway between two samples
            const bool is_min = fi <= fp && fi < fn;
            const bool is_max = fi >= fp && fi > fn;
            if (!is_min && !is_max) {
                nodes.push_back({samples[i].point, fi});
                continue;
            }
            const double sign = is_min ? 1.0 : -1.0;
            const auto obj = [&](double s) {
                return sign * model.local_arc_point(i, s).dot(nu.vec());
            };
            const auto [s, v] = golden_section_min(obj, -1.0, 1.0, xtol);
            const Vec p = model.local_arc_point(i, s);
            const double fref = p.dot(nu.vec());
            const bool improves = sign * fref < sign * fi;
            if (improves && s < 0.0) nodes.push_back({p, fref});
            nodes.push_back({samples[i].point, fi});
            if (improves && s > 0.0) nodes.push_back({p, fref});
        }
        for (const auto& n : nodes) {
            lower_ = std::min(lower_, n.f);
            upper_ = std::max(upper_, n.f);
        }
    }
}

std::vector<Vec> PlaneSweep::section_points(double lambda) const {
    const ImplicitDomain& domain = model_->domain();
    const double tol_proj = model_->tol().tol_proj;
    std::vector<Vec> out;
    for (const auto& nodes : loops_) {
        const std::size_t n = nodes.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Node& p = nodes[i];
            const Node& q = nodes[(i + 1) % n];
            const bool below_p = p.f < lambda;
            const bool below_q = q.f < lambda;
            if (below_p == below_q) continue;
            if (p.f == lambda) {
                out.push_back(p.point);
                continue;
            }
            const auto g = [&](double t) {
                return chord_point(domain, p.point, q.point, t, tol_proj).dot(nu_.vec()) - lambda;
            };
            const double t = illinois_root(g, 0.0, 1.0, p.f - lambda, q.f - lambda, 1e-14);
            out.push_back(chord_point(domain, p.point, q.point, t, tol_proj));
        }
    }
    return out;
}

std::optional<Margin> PlaneSweep::orthogonality(double lambda) const {
    const auto pts = section_points(lambda);
    if (pts.empty()) return std::nullopt;
    Margin best{kInf, {}};
    for (const auto& x : pts) {
        const double d = normal_dot(model_->domain(), x, nu_);
        if (d < best.value) best = {d, x};
    }
    return best;
}

std::optional<Margin> PlaneSweep::tangency(double lambda) const {
    const auto& samples = model_->boundary().samples;
    const double cut = lambda - model_->tol().tol_T;
    std::size_t best = samples.size();
    double best_v = -kInf;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(sample_f_[i] < cut)) continue;
        const double v = model_->phi(reflect_point(samples[i].point, nu_, lambda));
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    if (best == samples.size()) return std::nullopt;

    // polish the maximum along the neighbouring arcs
    const double xtol = std::max(1e-12, 1e-3 * model_->tol().tol_a / model_->tol().resolution);
    const auto obj = [&](double s) {
        const Vec x = model_->local_arc_point(best, s);
        if (!(x.dot(nu_.vec()) < cut)) return kInf;
        return -model_->phi(reflect_point(x, nu_, lambda));
    };
    const auto [s, v] = golden_section_min(obj, -1.0, 1.0, xtol);
    if (-v > best_v) return Margin{-v, model_->local_arc_point(best, s)};
    return Margin{best_v, samples[best].point};
}

CapSlice PlaneSweep::slice(double lambda) const {
    CapSlice out{nu_, lambda, {}, {}};
    const auto& samples = model_->boundary().samples;
    const double cut = lambda - model_->tol().tol_T;
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (sample_f_[i] < cut) out.cap_boundary.push_back(samples[i]);
    const ImplicitDomain& domain = model_->domain();
    for (const auto& x : section_points(lambda)) {
        const Vec g = domain.grad_phi(x);
        out.section.push_back({x, -g / g.norm(), 0.0});
    }
    return out;
}

bool PlaneSweep::holds(double lambda) const {
    const double tol = model_->tol().tol_event;
    const auto e2 = orthogonality(lambda);
    if (e2 && e2->value <= tol) return false;
    const auto m = tangency(lambda);
    return !(m && m->value >= -tol);
}

double orthogonality_margin(const DomainModel& model, const Direction& nu, double lambda) {
    const auto e2 = PlaneSweep(model, nu).orthogonality(lambda);
    if (!e2)
        fail(ErrorKind::EmptySection,
             fmt::format("hyperplane x.nu = {} misses the boundary", lambda));
    return e2->value;
}

double tangency_margin(const DomainModel& model, const Direction& nu, double lambda) {
    const auto m = PlaneSweep(model, nu).tangency(lambda);
    if (!m) fail(ErrorKind::EmptyCap, fmt::format("no cap boundary below lambda = {}", lambda));
    return m->value;
}

ConditionCheck check_conditions(const DomainModel& model, const Direction& nu, double lambda) {
    const PlaneSweep sweep(model, nu);
    const auto e2 = sweep.orthogonality(lambda);
    if (!e2)
        fail(ErrorKind::EmptySection,
             fmt::format("hyperplane x.nu = {} misses the boundary", lambda));
    const auto m = sweep.tangency(lambda);
    if (!m) fail(ErrorKind::EmptyCap, fmt::format("no cap boundary below lambda = {}", lambda));
    const double tol = model.tol().tol_event;
    return {e2->value > tol && m->value < -tol, e2->value, m->value};
}

Lambda1Result compute_lambda1(const DomainModel& model, const Direction& nu, double step,
                              double tol_lambda) {
    if (!(step > 0.0)) fail(ErrorKind::InvalidArgument, "step must be positive");
    if (!(tol_lambda > 0.0)) fail(ErrorKind::InvalidArgument, "tol_lambda must be positive");

    const PlaneSweep sweep(model, nu);
    const Tolerances& tol = model.tol();
    const double a = sweep.lower();
    const double b = sweep.upper();

    double lo = a;
    double hi = a + tol.delta0;
    bool found = false;
    while (hi < b) {
        if (!sweep.holds(hi)) {
            found = true;
            break;
        }
        lo = hi;
        hi += step;
    }
    if (!found) {
        hi = b - tol.delta0;
        if (hi > lo && !sweep.holds(hi)) found = true;
    }
    if (!found)
        fail(ErrorKind::NoEventFound,
             fmt::format("no stopping event before lambda = {} (direction {}, {})", b, nu[0], nu[1]));

    while (hi - lo > tol_lambda) {
        const double mid = 0.5 * (lo + hi);
        if (sweep.holds(mid)) lo = mid;
        else hi = mid;
    }

    // Each condition's own failure may sit up to one bracket width past hi;
    // a probe there decides whether both events share the bracket.
    const double probe = std::min(hi + tol_lambda, 0.5 * (hi + b));
    const auto e2_hi = sweep.orthogonality(hi);
    const auto m_hi = sweep.tangency(hi);
    const auto e2_probe = sweep.orthogonality(probe);
    const auto m_probe = sweep.tangency(probe);
    const auto fails_normal = [&](const std::optional<Margin>& e) {
        return e && e->value <= tol.tol_event;
    };
    const auto fails_tangent = [&](const std::optional<Margin>& m) {
        return m && m->value >= -tol.tol_event;
    };
    const bool tie = (fails_normal(e2_hi) || fails_normal(e2_probe)) &&
                     (fails_tangent(m_hi) || fails_tangent(m_probe));
    const bool normal_fails = fails_normal(e2_hi) || tie;
    const bool tangent_fails = fails_tangent(m_hi);
    const auto& e2 = fails_normal(e2_hi) ? e2_hi : e2_probe;
    const auto& m = m_hi;

    Lambda1Result res{nu, a, 0.5 * (lo + hi), {}, {lo, hi}, tie, tol};
    res.tolerances.step = step;
    res.tolerances.tol_lambda = tol_lambda;
    SweepEvent& ev = res.event;
    ev.lambda = res.lambda1;
    const ImplicitDomain& domain = model.domain();

    if (normal_fails) {
        ev.kind = EventKind::NormalOrthogonal;
        ev.witness = e2->witness;
        // Move the witness to the boundary point where nu(x).nu crosses zero,
        // starting from the nearest section point on the holding side (the
        // minimizer there may sit on another branch when several tie).
        const double d_hi = normal_dot(domain, e2->witness, nu);
        std::optional<Vec> near;
        for (const Vec& x : sweep.section_points(lo))
            if (!near || (x - e2->witness).norm() < (*near - e2->witness).norm()) near = x;
        if (near && std::abs(d_hi) > tol.tol_event &&
            (*near - e2->witness).norm() <= 4.0 * tol.resolution) {
            const Vec& p = *near;
            const Vec& q = e2->witness;
            const auto h = [&](double t) {
                return normal_dot(domain, chord_point(domain, p, q, t, tol.tol_proj), nu);
            };
            const double d_lo = normal_dot(domain, p, nu);
            if ((d_lo > 0.0) != (d_hi > 0.0)) {
                const double t = illinois_root(h, 0.0, 1.0, d_lo, d_hi, 1e-15);
                ev.witness = chord_point(domain, p, q, t, tol.tol_proj);
            }
        }
        ev.lambda = ev.witness.dot(nu.vec());
    } else if (tangent_fails) {
        ev.kind = EventKind::InternalTangency;
        ev.witness = m->witness;
        const auto g = [&](double lam) { return domain.phi(reflect_point(m->witness, nu, lam)); };
        const double g_lo = g(lo), g_hi = g(hi);
        if ((g_lo > 0.0) != (g_hi > 0.0)) ev.lambda = illinois_root(g, lo, hi, g_lo, g_hi, 1e-15);
    } else {
        fail(ErrorKind::NoEventFound, "bisection lost the stopping event");
    }
    return res;
}

Lambda1Result compute_lambda1(const DomainModel& model, const Direction& nu) {
    return compute_lambda1(model, nu, model.tol().step, model.tol().tol_lambda);
}

}  // namespace movplane
