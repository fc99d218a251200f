#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "movplane/geometry.hpp"

namespace movplane {

enum class EventKind { NormalOrthogonal, InternalTangency };

std::string_view to_string(EventKind kind) noexcept;

/// The condition that stops the sweep.
///
/// NormalOrthogonal: a boundary point on the hyperplane has its inward normal
/// orthogonal to nu. InternalTangency: the reflected cap touches the boundary
/// at a point off the hyperplane.
struct SweepEvent {
    EventKind kind = EventKind::NormalOrthogonal;
    double lambda = 0.0;
    Vec witness;
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

struct Lambda1Result {
    Direction nu;
    double a_nu = 0.0;
    double lambda1 = 0.0;
    SweepEvent event;
    Bracket bracket;
    /// Both conditions failed inside the final bracket.
    bool tie = false;
    Tolerances tolerances;
};

/// Boundary split by the hyperplane {x.nu = lambda}.
struct CapSlice {
    Direction nu;
    double lambda = 0.0;
    std::vector<BoundarySample> cap_boundary;  // x.nu < lambda - tol_T
    std::vector<BoundarySample> section;       // boundary points with x.nu = lambda
};

struct Margin {
    double value = 0.0;
    Vec witness;
};

struct ConditionCheck {
    bool holds = false;
    double e2 = 0.0;
    double m = 0.0;
};

/// Sweep state for one direction. Precomputes x.nu along the boundary with
/// the local extrema refined, so sections can be located for any lambda.
class PlaneSweep {
public:
    PlaneSweep(const DomainModel& model, const Direction& nu);

    const DomainModel& model() const noexcept { return *model_; }
    const Direction& nu() const noexcept { return nu_; }

    /// min x.nu over the boundary, i.e. a(nu).
    double lower() const noexcept { return lower_; }
    /// max x.nu over the boundary, i.e. -a(-nu).
    double upper() const noexcept { return upper_; }

    /// Boundary points on the hyperplane, root-polished along the boundary.
    std::vector<Vec> section_points(double lambda) const;

    /// min over the section of nu(x).nu; nullopt for an empty section.
    std::optional<Margin> orthogonality(double lambda) const;
    /// max over cap boundary samples (off the tol_T band) of phi(R(x));
    /// nullopt for an empty cap.
    std::optional<Margin> tangency(double lambda) const;

    CapSlice slice(double lambda) const;

    /// Both conditions at lambda; an empty section or cap counts as holding.
    bool holds(double lambda) const;

private:
    struct Node {
        Vec point;
        double f;
    };

    const DomainModel* model_;
    Direction nu_;
    std::vector<std::vector<Node>> loops_;
    std::vector<double> sample_f_;
    double lower_ = 0.0;
    double upper_ = 0.0;
};

/// e2(lambda): condition on the hyperplane section holds iff e2 > 0.
double orthogonality_margin(const DomainModel& model, const Direction& nu, double lambda);

/// m(lambda): reflected cap strictly inside the domain iff m < 0.
double tangency_margin(const DomainModel& model, const Direction& nu, double lambda);

ConditionCheck check_conditions(const DomainModel& model, const Direction& nu, double lambda);

/// lambda_1(nu): march from a(nu) in increments of `step`, bisect the first
/// failure down to `tol_lambda`.
Lambda1Result compute_lambda1(const DomainModel& model, const Direction& nu, double step,
                              double tol_lambda);
Lambda1Result compute_lambda1(const DomainModel& model, const Direction& nu);

}  // namespace movplane
