#include "movplane/plap_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/SparseCholesky>
#include <fmt/format.h>
#include <fmt/ostream.h>

namespace movplane {

double GridSolution::interpolate(const Vec& x) const {
    const double fx = (x[0] - origin[0]) / h;
    const double fy = (x[1] - origin[1]) / h;
    const int i = static_cast<int>(std::floor(fx));
    const int j = static_cast<int>(std::floor(fy));
    const double tx = fx - i, ty = fy - j;
    return (1 - tx) * (1 - ty) * value(i, j) + tx * (1 - ty) * value(i + 1, j) +
           (1 - tx) * ty * value(i, j + 1) + tx * ty * value(i + 1, j + 1);
}

bool GridSolution::covers(const Vec& x) const {
    const int i = static_cast<int>(std::lround((x[0] - origin[0]) / h));
    const int j = static_cast<int>(std::lround((x[1] - origin[1]) / h));
    return inside(i, j);
}

PLaplaceEnergy::PLaplaceEnergy(int nx, int ny, std::vector<char> mask, double h, double p,
                               double epsilon)
    : nx_(nx), ny_(ny), mask_(std::move(mask)), h_(h), p_(p), eps_(epsilon) {
    std::vector<int> id(mask_.size(), -1);
    for (std::size_t c = 0; c < mask_.size(); ++c) {
        if (mask_[c]) {
            id[c] = static_cast<int>(cells_.size());
            cells_.push_back(c);
        }
    }
    const auto at = [&](int i, int j) -> int {
        if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return -1;
        return id[static_cast<std::size_t>(j) * nx_ + i];
    };
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            const Stencil s{at(i, j), at(i + 1, j), at(i, j + 1)};
            if (s.c >= 0 || s.x >= 0 || s.y >= 0) stencils_.push_back(s);
        }
    }
}

double PLaplaceEnergy::value(const Eigen::VectorXd& u) const {
    const auto get = [&](int k) { return k >= 0 ? u[k] : 0.0; };
    double e = 0.0;
    for (const Stencil& s : stencils_) {
        const double uc = get(s.c);
        const double gx = (get(s.x) - uc) / h_;
        const double gy = (get(s.y) - uc) / h_;
        e += std::pow(gx * gx + gy * gy + eps_ * eps_, 0.5 * p_) / p_;
    }
    return h_ * h_ * (e - u.sum());
}

Eigen::VectorXd PLaplaceEnergy::gradient(const Eigen::VectorXd& u) const {
    const auto get = [&](int k) { return k >= 0 ? u[k] : 0.0; };
    Eigen::VectorXd g = Eigen::VectorXd::Constant(u.size(), -h_ * h_);
    for (const Stencil& s : stencils_) {
        const double uc = get(s.c);
        const double gx = (get(s.x) - uc) / h_;
        const double gy = (get(s.y) - uc) / h_;
        const double w = std::pow(gx * gx + gy * gy + eps_ * eps_, 0.5 * p_ - 1.0) * h_;
        if (s.c >= 0) g[s.c] -= w * (gx + gy);
        if (s.x >= 0) g[s.x] += w * gx;
        if (s.y >= 0) g[s.y] += w * gy;
    }
    return g;
}

Eigen::SparseMatrix<double> PLaplaceEnergy::hessian(const Eigen::VectorXd& u) const {
    const auto get = [&](int k) { return k >= 0 ? u[k] : 0.0; };
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(stencils_.size() * 9);
    // local derivative rows of (gx, gy) * h with respect to (c, x, y)
    static constexpr double B[2][3] = {{-1.0, 1.0, 0.0}, {-1.0, 0.0, 1.0}};
    for (const Stencil& s : stencils_) {
        const double uc = get(s.c);
        const double gx = (get(s.x) - uc) / h_;
        const double gy = (get(s.y) - uc) / h_;
        const double q = gx * gx + gy * gy + eps_ * eps_;
        const double w = std::pow(q, 0.5 * p_ - 1.0);
        const double w2 = (p_ - 2.0) * std::pow(q, 0.5 * p_ - 2.0);
        const double K[2][2] = {{w + w2 * gx * gx, w2 * gx * gy}, {w2 * gx * gy, w + w2 * gy * gy}};
        const int ids[3] = {s.c, s.x, s.y};
        for (int a = 0; a < 3; ++a) {
            if (ids[a] < 0) continue;
            for (int b = 0; b < 3; ++b) {
                if (ids[b] < 0) continue;
                double v = 0.0;
                for (int r = 0; r < 2; ++r)
                    for (int t = 0; t < 2; ++t) v += B[r][a] * K[r][t] * B[t][b];
                if (v != 0.0) trips.emplace_back(ids[a], ids[b], v);
            }
        }
    }
    Eigen::SparseMatrix<double> H(unknowns(), unknowns());
    H.setFromTriplets(trips.begin(), trips.end());
    return H;
}

GridSolution solve_torsion(const ImplicitDomain& domain, double h, double p, double epsilon,
                           int max_iters, double tol_res) {
    if (domain.dim() != 2) fail(ErrorKind::InvalidArgument, "the grid solver is 2D only");
    if (!(p > 1.0 && p <= 2.0)) fail(ErrorKind::InvalidArgument, "p must lie in (1, 2]");
    if (!(h > 0.0)) fail(ErrorKind::InvalidArgument, "grid spacing must be positive");
    if (!(epsilon > 0.0)) fail(ErrorKind::InvalidArgument, "epsilon must be positive");
    if (max_iters < 1) fail(ErrorKind::InvalidArgument, "max_iters must be positive");

    GridSolution sol;
    sol.h = h;
    sol.p = p;
    sol.epsilon = epsilon;
    const Box& box = domain.bounding_box();
    const int i0 = static_cast<int>(std::floor(box.lo[0] / h)) - 1;
    const int j0 = static_cast<int>(std::floor(box.lo[1] / h)) - 1;
    const int i1 = static_cast<int>(std::ceil(box.hi[0] / h)) + 1;
    const int j1 = static_cast<int>(std::ceil(box.hi[1] / h)) + 1;
    sol.origin = vec2(i0 * h, j0 * h);
    sol.nx = i1 - i0 + 1;
    sol.ny = j1 - j0 + 1;
    sol.mask.assign(static_cast<std::size_t>(sol.nx) * sol.ny, 0);
    sol.u.assign(sol.mask.size(), 0.0);
    for (int j = 0; j < sol.ny; ++j)
        for (int i = 0; i < sol.nx; ++i)
            sol.mask[sol.index(i, j)] = domain.phi(sol.center(i, j)) < 0.0;

    const PLaplaceEnergy energy(sol.nx, sol.ny, sol.mask, h, p, epsilon);
    const int n = energy.unknowns();
    if (n == 0) fail(ErrorKind::EmptyMask, "no grid cell lies inside the domain");

    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    double J = energy.value(u);
    sol.energy_trace.push_back(J);

    // Start from the p = 2 torsion function; it has the right shape and
    // keeps the first Newton steps away from the degenerate u = 0.
    if (p < 2.0) {
        const PLaplaceEnergy linear(sol.nx, sol.ny, sol.mask, h, 2.0, epsilon);
        ldlt.compute(linear.hessian(u));
        const Eigen::VectorXd u2 = ldlt.solve(-linear.gradient(u));
        // best multiple of u2 along the ray, by a few golden steps on J
        double lo = 0.0, hi = 1.0;
        for (int k = 0; k < 40; ++k) {
            const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            if (energy.value(m1 * u2) < energy.value(m2 * u2)) hi = m2;
            else lo = m1;
        }
        const Eigen::VectorXd start = 0.5 * (lo + hi) * u2;
        const double Js = energy.value(start);
        if (Js < J) {
            u = start;
            J = Js;
            sol.energy_trace.push_back(J);
        }
    }

    bool analysed = false;
    for (int it = 0; it < max_iters; ++it) {
        const Eigen::VectorXd g = energy.gradient(u);
        const Eigen::SparseMatrix<double> H = energy.hessian(u);
        if (!analysed) {
            ldlt.analyzePattern(H);
            analysed = true;
        }
        ldlt.factorize(H);
        if (ldlt.info() != Eigen::Success) break;
        const Eigen::VectorXd d = ldlt.solve(-g);
        const double slope = g.dot(d);
        // half the Newton decrement predicts the remaining energy decrease
        if (!(slope < 0.0) || -0.5 * slope <= 1e-6 * tol_res * std::abs(J)) {
            sol.converged = true;
            break;
        }
        double t = 1.0;
        double Jt = energy.value(u + d);
        while (Jt > J + 1e-4 * t * slope && t > 1e-12) {
            t *= 0.5;
            Jt = energy.value(u + t * d);
        }
        sol.iterations = it + 1;
        if (!(J - Jt > 16.0 * std::numeric_limits<double>::epsilon() * std::abs(J))) {
            // energy stalled at roundoff: accept if the decrement is small
            sol.converged = -0.5 * slope <= std::sqrt(tol_res) * std::abs(J);
            if (Jt < J) u += t * d;
            break;
        }
        u += t * d;
        J = Jt;
        sol.energy_trace.push_back(J);
    }

    const Eigen::VectorXd g = energy.gradient(u);
    sol.residual = g.cwiseAbs().maxCoeff() / (h * h);
    for (int k = 0; k < n; ++k) sol.u[energy.cell(k)] = std::max(u[k], 0.0);
    return sol;
}

namespace {

double partial(const GridSolution& s, int i, int j, int di, int dj) {
    const bool fwd = s.inside(i + di, j + dj);
    const bool bwd = s.inside(i - di, j - dj);
    const double uc = s.value(i, j);
    if (fwd && !bwd) return (s.value(i + di, j + dj) - uc) / s.h;
    if (bwd && !fwd) return (uc - s.value(i - di, j - dj)) / s.h;
    return (s.value(i + di, j + dj) - s.value(i - di, j - dj)) / (2.0 * s.h);
}

}  // namespace

std::vector<double> directional_derivative_field(const GridSolution& solution,
                                                 const Direction& nu) {
    std::vector<double> out(solution.u.size(), 0.0);
    for (int j = 0; j < solution.ny; ++j)
        for (int i = 0; i < solution.nx; ++i)
            if (solution.inside(i, j))
                out[solution.index(i, j)] = nu[0] * partial(solution, i, j, 1, 0) +
                                            nu[1] * partial(solution, i, j, 0, 1);
    return out;
}

std::vector<double> gradient_norm_field(const GridSolution& solution) {
    std::vector<double> out(solution.u.size(), 0.0);
    for (int j = 0; j < solution.ny; ++j)
        for (int i = 0; i < solution.nx; ++i)
            if (solution.inside(i, j))
                out[solution.index(i, j)] =
                    std::hypot(partial(solution, i, j, 1, 0), partial(solution, i, j, 0, 1));
    return out;
}

MonotonicityReport verify_monotonicity(const GridSolution& solution, const DomainModel& model,
                                       const Direction& nu, double lambda1, int n_lambda) {
    if (!solution.converged) fail(ErrorKind::UnconvergedInput, "solution did not converge");
    if (n_lambda < 1) fail(ErrorKind::InvalidArgument, "n_lambda must be positive");
    const double h = solution.h;
    const double a = support_min(model, nu);
    const double top = -support_min(model, -nu);
    if (!(lambda1 > a + 2.0 * h) || lambda1 > top + model.tol().tol_lambda)
        fail(ErrorKind::LambdaOutOfRange,
             fmt::format("lambda1 = {} outside ({}, {}]", lambda1, a + 2.0 * h, top));

    MonotonicityReport rep{nu, {}};
    const double start = a + 2.0 * h;
    for (int k = 1; k <= n_lambda; ++k)
        rep.lambdas_tested.push_back(start + (lambda1 - start) * k / n_lambda);

    double worst = -std::numeric_limits<double>::infinity();
    for (double lam : rep.lambdas_tested) {
        for (int j = 0; j < solution.ny; ++j) {
            for (int i = 0; i < solution.nx; ++i) {
                if (!solution.inside(i, j)) continue;
                const Vec x = solution.center(i, j);
                if (!(x.dot(nu.vec()) < lam)) continue;
                const Vec y = reflect_point(x, nu, lam);
                if (!solution.covers(y)) continue;
                worst = std::max(worst, solution.value(i, j) - solution.interpolate(y));
                ++rep.pairs_tested;
            }
        }
    }
    rep.max_violation = rep.pairs_tested > 0 ? worst : 0.0;

    const auto dnu = directional_derivative_field(solution, nu);
    const auto gnorm = gradient_norm_field(solution);
    const double gmax = *std::max_element(gnorm.begin(), gnorm.end());
    rep.grad_floor = 10.0 * h * gmax;
    std::size_t mask_cells = 0, critical = 0;
    double min_d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < solution.ny; ++j) {
        for (int i = 0; i < solution.nx; ++i) {
            if (!solution.inside(i, j)) continue;
            const std::size_t c = solution.index(i, j);
            ++mask_cells;
            if (gnorm[c] <= rep.grad_floor) {
                ++critical;
                continue;
            }
            if (!(solution.center(i, j).dot(nu.vec()) < lambda1)) continue;
            min_d = std::min(min_d, dnu[c]);
            ++rep.cells_checked;
        }
    }
    rep.critical_set_measure = static_cast<double>(critical) / static_cast<double>(mask_cells);
    rep.min_directional_derivative = rep.cells_checked > 0 ? min_d : 0.0;
    return rep;
}

void write_grid_csv(std::ostream& os, const GridSolution& s) {
    fmt::print(os, "h,origin_x,origin_y,nx,ny,p,epsilon\n");
    fmt::print(os, "{},{},{},{},{},{},{}\n", s.h, s.origin[0], s.origin[1], s.nx, s.ny, s.p,
               s.epsilon);
    for (int j = 0; j < s.ny; ++j) {
        for (int i = 0; i < s.nx; ++i) {
            if (i > 0) os << ',';
            fmt::print(os, "{}", s.value(i, j));
        }
        os << '\n';
    }
}

}  // namespace movplane
