#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "movplane/moving_plane.hpp"

namespace movplane {

/// a(nu) and lambda_1(nu) sampled at nu = (cos theta, sin theta).
struct DirectionProfile {
    std::vector<double> thetas;
    std::vector<double> a_values;
    std::vector<double> lambda1_values;
    std::vector<EventKind> event_kinds;

    std::size_t size() const noexcept { return thetas.size(); }
};

DirectionProfile scan_thetas(const DomainModel& model, std::span<const double> thetas,
                             int threads = 1);

/// Uniform scan theta_i = 2 pi i / M, M >= 8.
DirectionProfile scan_directions(const DomainModel& model, int M, int threads = 1);

struct LipschitzCheck {
    double max_ratio = 0.0;
    bool pass = false;
};

/// max over cyclically adjacent samples of |a_i - a_j| / |nu_i - nu_j|,
/// compared against r_max.
LipschitzCheck lipschitz_check_a(const DirectionProfile& profile, double r_max,
                                 double tol_a = 0.0);

enum class JumpDirection { ValueBelowNeighbors, ValueAboveNeighbors };
enum class Classification { Continuous, LscCompatibleJump, LscViolation };

std::string_view to_string(JumpDirection d) noexcept;
std::string_view to_string(Classification c) noexcept;

struct Jump {
    std::size_t theta_index = 0;  // index into the finest profile
    double theta = 0.0;
    double gap = 0.0;             // at the finest level
    JumpDirection direction = JumpDirection::ValueBelowNeighbors;
    /// A step between two plateaus rather than an isolated value.
    bool step = false;
};

struct RefinementLevel {
    int M = 0;                    // uniform sample count of the level
    std::size_t samples = 0;      // including inserted axis directions
    double max_adjacent_gap = 0.0;
};

struct DiscontinuityReport {
    std::vector<Jump> jumps;
    std::vector<RefinementLevel> refinement_trace;
    Classification classification = Classification::Continuous;
    double gap_floor = 0.0;
    DirectionProfile finest;
};

struct ClassifyOptions {
    /// 0 means 10 * tol_lambda of the model.
    double gap_floor = 0.0;
    /// A feature persists if its gap decays slower than spacing^exponent
    /// between every pair of consecutive levels (a jump has exponent 0).
    double max_decay_exponent = 0.15;
    int threads = 1;
};

/// Scans at M0, 2 M0, ..., always including the axis directions, and
/// classifies the features of lambda_1 that survive refinement.
DiscontinuityReport classify_discontinuities(const DomainModel& model, int M0, int levels,
                                             const ClassifyOptions& options = {});

/// Same classification rules applied to an arbitrary function of theta
/// (options.gap_floor must be set).
DiscontinuityReport classify_function(const std::function<double(double)>& f, int M0,
                                      int levels, const ClassifyOptions& options);

struct SideValue {
    double theta = 0.0;
    double lambda1 = 0.0;
};

struct CounterexampleReport {
    double L = 0.0;
    double r = 0.0;
    double lambda1_at_axis = 0.0;
    double limit_from_side = 0.0;
    double jump = 0.0;
    double eps_jump = 0.0;
    /// jump >= L/2 - eps_jump
    bool claim_holds = false;
    std::vector<SideValue> side_values;
};

/// lambda_1 of the stadium at nu = (1, 0) versus nearby directions
/// theta = +-theta_window * {1, 1e-1, 1e-2}.
CounterexampleReport counterexample_report(double L, double r, double theta_window,
                                           const Tolerances& tolerances = {},
                                           double eps_jump = 0.0, int threads = 1);

}  // namespace movplane
