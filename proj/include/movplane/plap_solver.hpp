#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "movplane/geometry.hpp"

namespace movplane {

/// Cell-centred grid function; cell (i, j) sits at origin + h * (i, j).
/// Cells outside the mask carry u = 0.
struct GridSolution {
    double h = 0.0;
    Vec origin = vec2(0.0, 0.0);
    int nx = 0;
    int ny = 0;
    std::vector<char> mask;
    std::vector<double> u;
    double p = 2.0;
    double epsilon = 0.0;
    std::vector<double> energy_trace;
    double residual = 0.0;
    bool converged = false;
    int iterations = 0;

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    bool inside(int i, int j) const {
        return i >= 0 && j >= 0 && i < nx && j < ny && mask[index(i, j)];
    }
    double value(int i, int j) const { return inside(i, j) ? u[index(i, j)] : 0.0; }
    Vec center(int i, int j) const { return origin + h * vec2(i, j); }
    /// Bilinear interpolation of u (zero outside the mask).
    double interpolate(const Vec& x) const;
    /// Whether the cell nearest to x belongs to the mask.
    bool covers(const Vec& x) const;
};

/// Discrete p-energy on a masked grid:
///   J(u) = sum_cells [ (|D u|^2 + eps^2)^{p/2} / p - u ] h^2
/// with forward differences D. Unknowns are the mask cells.
class PLaplaceEnergy {
public:
    PLaplaceEnergy(int nx, int ny, std::vector<char> mask, double h, double p, double epsilon);

    int unknowns() const noexcept { return static_cast<int>(cells_.size()); }
    /// Grid index of unknown k.
    std::size_t cell(int k) const { return cells_[k]; }

    double value(const Eigen::VectorXd& u) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& u) const;
    Eigen::SparseMatrix<double> hessian(const Eigen::VectorXd& u) const;

private:
    struct Stencil {
        int c, x, y;  // unknown ids of the cell and its +x / +y neighbours, -1 if fixed
    };

    int nx_, ny_;
    std::vector<char> mask_;
    double h_, p_, eps_;
    std::vector<std::size_t> cells_;
    std::vector<Stencil> stencils_;
};

/// -Delta_p u = 1 in the domain, u = 0 outside, by damped Newton on the
/// regularized energy. Requires 1 < p <= 2 and epsilon > 0.
GridSolution solve_torsion(const ImplicitDomain& domain, double h, double p, double epsilon,
                           int max_iters = 200, double tol_res = 1e-12);

struct MonotonicityReport {
    Direction nu;
    std::vector<double> lambdas_tested;
    double max_violation = 0.0;     // max of u(x) - u(x reflected)
    std::size_t pairs_tested = 0;
    double critical_set_measure = 0.0;
    double grad_floor = 0.0;
    double min_directional_derivative = 0.0;
    std::size_t cells_checked = 0;
};

/// Central-difference du/dnu per cell (one-sided next to the mask edge).
std::vector<double> directional_derivative_field(const GridSolution& solution,
                                                 const Direction& nu);

/// Gradient magnitude per cell, same stencil as directional_derivative_field.
std::vector<double> gradient_norm_field(const GridSolution& solution);

MonotonicityReport verify_monotonicity(const GridSolution& solution, const DomainModel& model,
                                       const Direction& nu, double lambda1, int n_lambda);

/// Header line "h,origin_x,origin_y,nx,ny,p,epsilon", its values, then ny
/// rows of nx values of u (row j = 0 first).
void write_grid_csv(std::ostream& os, const GridSolution& solution);

}  // namespace movplane
