#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"

#include "movplane/moving_plane.hpp"
#include "movplane/plap_solver.hpp"
#include "movplane/shapes.hpp"

using namespace movplane;

namespace {

std::vector<char> square_mask(int n) {
    std::vector<char> mask(static_cast<std::size_t>(n) * n, 0);
    for (int j = 1; j < n - 1; ++j)
        for (int i = 1; i < n - 1; ++i) mask[static_cast<std::size_t>(j) * n + i] = 1;
    return mask;
}

/// Grid indices of the cell at x (the solution grid sits on multiples of h).
std::pair<int, int> cell_of(const GridSolution& s, const Vec& x) {
    return {static_cast<int>(std::lround((x[0] - s.origin[0]) / s.h)),
            static_cast<int>(std::lround((x[1] - s.origin[1]) / s.h))};
}

double at(const GridSolution& s, double x, double y) {
    const auto [i, j] = cell_of(s, vec2(x, y));
    return s.value(i, j);
}

bool non_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1]) return false;
    return true;
}

}  // namespace

TEST_SUITE("plap_solver") {

TEST_CASE("energy gradient and Hessian match finite differences") {
    for (double p : {1.5, 2.0, 1.2}) {
        CAPTURE(p);
        const PLaplaceEnergy energy(10, 10, square_mask(10), 0.1, p, 1e-2);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> U(0.0, 0.1);
        Eigen::VectorXd u(energy.unknowns());
        for (Eigen::Index k = 0; k < u.size(); ++k) u[k] = U(rng);
        const Eigen::VectorXd g = energy.gradient(u);
        const Eigen::MatrixXd H(energy.hessian(u));
        double gerr = 0.0, herr = 0.0;
        for (Eigen::Index k = 0; k < u.size(); ++k) {
            const double d = 1e-6;
            Eigen::VectorXd up = u, um = u;
            up[k] += d;
            um[k] -= d;
            gerr = std::max(gerr, std::abs((energy.value(up) - energy.value(um)) / (2 * d) - g[k]));
            const Eigen::VectorXd hc = (energy.gradient(up) - energy.gradient(um)) / (2 * d);
            herr = std::max(herr, (hc - H.col(k)).cwiseAbs().maxCoeff());
        }
        CHECK(gerr / g.cwiseAbs().maxCoeff() <= 1e-5);
        CHECK(herr / H.cwiseAbs().maxCoeff() <= 1e-5);
        CHECK((H - H.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * H.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("p = 2 disk torsion matches (1 - r^2) / 4") {
    const GridSolution s = solve_torsion(make_disk(1.0), 1.0 / 64, 2.0, 1e-8);
    CHECK(s.converged);
    CHECK(std::abs(at(s, 0.0, 0.0) - 0.25) <= 0.005);
    double err = 0.0;
    for (int j = 0; j < s.ny; ++j)
        for (int i = 0; i < s.nx; ++i)
            if (s.inside(i, j)) err = std::max(err, std::abs(s.value(i, j) - 0.25 * (1.0 - s.center(i, j).squaredNorm())));
    CHECK(err <= 0.005);
    CHECK(non_increasing(s.energy_trace));
}

TEST_CASE("p = 2 disk solution is symmetric under 90 degree rotations") {
    const GridSolution s = solve_torsion(make_disk(1.0), 1.0 / 64, 2.0, 1e-6);
    double worst = 0.0;
    for (int j = 0; j < s.ny; ++j) {
        for (int i = 0; i < s.nx; ++i) {
            const Vec x = s.center(i, j);
            const Vec rx = vec2(-x[1], x[0]);
            const auto [ri, rj] = cell_of(s, rx);
            worst = std::max(worst, std::abs(s.value(i, j) - s.value(ri, rj)));
        }
    }
    CHECK(worst <= 5e-3);
}

TEST_CASE("stadium p = 1.5 solve is positive and monotone in energy") {
    const GridSolution s = solve_torsion(make_stadium(2.0, 1.0), 1.0 / 64, 1.5, 1e-6);
    CHECK(s.converged);
    CHECK(non_increasing(s.energy_trace));
    double umax = 0.0;
    int imax = 0, jmax = 0;
    for (int j = 0; j < s.ny; ++j) {
        for (int i = 0; i < s.nx; ++i) {
            CHECK(s.u[s.index(i, j)] >= 0.0);
            if (!s.inside(i, j)) {
                CHECK(s.u[s.index(i, j)] == 0.0);
                continue;
            }
            const bool interior =
                s.inside(i + 1, j) && s.inside(i - 1, j) && s.inside(i, j + 1) && s.inside(i, j - 1);
            if (interior) CHECK(s.value(i, j) > 0.0);
            if (s.value(i, j) > umax) {
                umax = s.value(i, j);
                imax = i;
                jmax = j;
            }
        }
    }
    // maximum principle proxy: the maximum sits away from the mask edge
    CHECK(s.inside(imax + 1, jmax));
    CHECK(s.inside(imax - 1, jmax));
    CHECK(s.inside(imax, jmax + 1));
    CHECK(s.inside(imax, jmax - 1));
}

TEST_CASE("mesh refinement is consistent") {
    const ImplicitDomain st = make_stadium(2.0, 1.0);
    const GridSolution u1 = solve_torsion(st, 1.0 / 16, 1.5, 1e-6);
    const GridSolution u2 = solve_torsion(st, 1.0 / 32, 1.5, 1e-6);
    const GridSolution u3 = solve_torsion(st, 1.0 / 64, 1.5, 1e-6);
    // compare on the coarse cells deep inside the domain
    double d12 = 0.0, d23 = 0.0;
    for (int j = 0; j < u1.ny; ++j) {
        for (int i = 0; i < u1.nx; ++i) {
            const Vec x = u1.center(i, j);
            if (st.phi(x) > -0.1) continue;
            d12 = std::max(d12, std::abs(u1.value(i, j) - u2.interpolate(x)));
            d23 = std::max(d23, std::abs(u2.interpolate(x) - u3.interpolate(x)));
        }
    }
    CHECK(d12 > 0.0);
    CHECK(d23 <= 3.0 * d12);
}

TEST_CASE("directional derivative field of the p = 2 disk is about -x1 / 2") {
    const GridSolution s = solve_torsion(make_disk(1.0), 1.0 / 64, 2.0, 1e-8);
    const auto f = directional_derivative_field(s, Direction(vec2(1.0, 0.0)));
    double err = 0.0;
    for (int j = 0; j < s.ny; ++j) {
        for (int i = 0; i < s.nx; ++i) {
            if (!s.inside(i, j)) {
                CHECK(f[s.index(i, j)] == 0.0);
                continue;
            }
            const Vec x = s.center(i, j);
            if (x.norm() > 0.9) continue;
            err = std::max(err, std::abs(f[s.index(i, j)] + 0.5 * x[0]));
            if (x[0] < -0.05) CHECK(f[s.index(i, j)] > 0.0);
        }
    }
    CHECK(err <= 0.01);
}

TEST_CASE("directional derivative of a zero field is zero") {
    GridSolution s;
    s.h = 0.1;
    s.nx = s.ny = 6;
    s.mask = square_mask(6);
    s.u.assign(36, 0.0);
    for (double v : directional_derivative_field(s, Direction(vec2(1.0, 1.0)))) CHECK(v == 0.0);
    for (double v : gradient_norm_field(s)) CHECK(v == 0.0);
}

TEST_CASE("verify_monotonicity examples") {
    const Direction nu(vec2(1.0, 0.0));
    SUBCASE("disk p = 2") {
        const ImplicitDomain disk = make_disk(1.0);
        const DomainModel model(disk);
        const GridSolution s = solve_torsion(disk, 1.0 / 64, 2.0, 1e-8);
        const MonotonicityReport r = verify_monotonicity(s, model, nu, 0.0, 10);
        CHECK(r.max_violation <= 5e-3);
        CHECK(r.min_directional_derivative > 0.0);
        CHECK(r.pairs_tested > 0);
        CHECK(r.lambdas_tested.size() == 10);
        CHECK(r.lambdas_tested.back() == 0.0);
        for (double l : r.lambdas_tested) CHECK(l > -1.0);
    }
    SUBCASE("stadium p = 1.5") {
        const ImplicitDomain st = make_stadium(2.0, 1.0);
        const DomainModel model(st);
        const GridSolution s = solve_torsion(st, 1.0 / 64, 1.5, 1e-6);
        const Lambda1Result l1 = compute_lambda1(model, nu);
        const MonotonicityReport r = verify_monotonicity(s, model, nu, l1.lambda1, 10);
        CHECK(r.max_violation <= 5e-3);
        CHECK(r.min_directional_derivative > 0.0);
        CHECK(r.critical_set_measure > 0.0);
        CHECK(r.critical_set_measure < 1.0);
    }
    SUBCASE("hyperplane next to a(nu) leaves a near-empty cap") {
        const ImplicitDomain disk = make_disk(1.0);
        const DomainModel model(disk);
        const double h = 1.0 / 64;
        const GridSolution s = solve_torsion(disk, h, 1.5, 1e-6);
        const double lam = support_min(model, nu) + 2.0 * h + 1e-9;
        const MonotonicityReport r = verify_monotonicity(s, model, nu, lam, 4);
        CHECK(r.max_violation <= 0.0);
    }
}

TEST_CASE("solver and verifier errors") {
    const ImplicitDomain disk = make_disk(1.0);
    CHECK_THROWS_AS(solve_torsion(disk, 1.0 / 16, 2.5, 1e-6), Error);
    CHECK_THROWS_AS(solve_torsion(disk, 1.0 / 16, 1.0, 1e-6), Error);
    CHECK_THROWS_AS(solve_torsion(disk, 1.0 / 16, 1.5, 0.0), Error);
    const ImplicitDomain off_grid(
        [](const Vec& x) { return (x - vec2(0.5, 0.5)).norm() - 0.1; },
        [](const Vec& x) { return Vec((x - vec2(0.5, 0.5)).normalized()); },
        Box{vec2(0.3, 0.3), vec2(0.7, 0.7)}, 1.0, ShapeSpec{});
    try {
        solve_torsion(off_grid, 1.0, 2.0, 1e-6);
        FAIL("expected EmptyMask");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyMask);
    }

    const DomainModel model(disk);
    const Direction nu(vec2(1.0, 0.0));
    GridSolution s = solve_torsion(disk, 1.0 / 16, 2.0, 1e-6);
    try {
        verify_monotonicity(s, model, nu, -1.0, 4);
        FAIL("expected LambdaOutOfRange");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::LambdaOutOfRange);
    }
    CHECK_THROWS_AS(verify_monotonicity(s, model, nu, 1.5, 4), Error);
    s.converged = false;
    try {
        verify_monotonicity(s, model, nu, 0.0, 4);
        FAIL("expected UnconvergedInput");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnconvergedInput);
    }
}

TEST_CASE("non-convergence returns the best iterate with the flag cleared") {
    const GridSolution s = solve_torsion(make_stadium(2.0, 1.0), 1.0 / 32, 1.2, 1e-6, 1);
    CHECK_FALSE(s.converged);
    CHECK(s.iterations == 1);
    CHECK(non_increasing(s.energy_trace));
}

TEST_CASE("grid CSV export") {
    const GridSolution s = solve_torsion(make_disk(1.0), 0.25, 2.0, 1e-6);
    std::ostringstream os;
    write_grid_csv(os, s);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "h,origin_x,origin_y,nx,ny,p,epsilon");
    std::getline(in, line);
    CHECK(line.rfind("0.25,", 0) == 0);
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == s.nx - 1);
    }
    CHECK(rows == s.ny);
}

}  // TEST_SUITE
