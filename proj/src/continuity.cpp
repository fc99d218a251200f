#include "movplane/continuity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>

#include <fmt/format.h>

#include "movplane/parallel.hpp"
#include "movplane/shapes.hpp"

namespace movplane {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Direction angle as an exact fraction of a full turn, so grids at different
/// refinement levels can be matched without floating-point comparisons.
struct Turn {
    std::int64_t num;
    std::int64_t den;

    static Turn make(std::int64_t n, std::int64_t d) {
        const std::int64_t g = std::gcd(n, d);
        return {n / g, d / g};
    }
    double theta() const { return kTwoPi * static_cast<double>(num) / static_cast<double>(den); }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator<(const Turn& x, const Turn& y) { return x.num * y.den < y.num * x.den; }
    friend bool operator==(const Turn& x, const Turn& y) { return x.num == y.num && x.den == y.den; }
};

std::vector<Turn> level_grid(std::int64_t M) {
    std::vector<Turn> g;
    for (std::int64_t i = 0; i < M; ++i) g.push_back(Turn::make(i, M));
    for (std::int64_t j = 0; j < 4; ++j) g.push_back(Turn::make(j, 4));
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

struct Isolated {
    double gap;
    double spacing;  // wider of the two neighbour distances
    JumpDirection direction;
    std::size_t index;
};

struct StepFeature {
    double lo;  // turn fractions; hi may exceed 1 for the wrap-around pair
    double hi;
    double gap;
    std::size_t lower_index;
};

struct LevelFeatures {
    std::map<std::pair<std::int64_t, std::int64_t>, Isolated> isolated;
    std::vector<StepFeature> steps;
    double max_gap = 0.0;
};

LevelFeatures find_features(const std::vector<Turn>& grid, const std::vector<double>& v,
                            double gap_floor) {
    LevelFeatures out;
    const std::size_t n = v.size();
    std::vector<char> isolated(n, 0);
    const auto gap_to = [&](std::size_t i, std::size_t j) {
        const double d = grid[j].value() - grid[i].value();
        return d <= 0.0 ? d + 1.0 : d;
    };
    const auto spacing = [&](std::size_t i) {
        return std::max(gap_to((i + n - 1) % n, i), gap_to(i, (i + 1) % n));
    };
    for (std::size_t i = 0; i < n; ++i) {
        const double dl = v[i] - v[(i + n - 1) % n];
        const double dr = v[i] - v[(i + 1) % n];
        out.max_gap = std::max(out.max_gap, std::abs(dr));
        if (std::min(dl, dr) > gap_floor) {
            out.isolated[{grid[i].num, grid[i].den}] =
                {std::min(dl, dr), spacing(i), JumpDirection::ValueAboveNeighbors, i};
            isolated[i] = 1;
        } else if (std::max(dl, dr) < -gap_floor) {
            out.isolated[{grid[i].num, grid[i].den}] =
                {std::min(-dl, -dr), spacing(i), JumpDirection::ValueBelowNeighbors, i};
            isolated[i] = 1;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const double gap = std::abs(v[i] - v[j]);
        if (gap <= gap_floor || isolated[i] || isolated[j]) continue;
        const double lo = grid[i].value();
        const double hi = j == 0 ? 1.0 + grid[j].value() : grid[j].value();
        out.steps.push_back({lo, hi, gap, v[i] < v[j] ? i : j});
    }
    return out;
}

bool contains(const StepFeature& coarse, double x) {
    for (double shift : {-1.0, 0.0, 1.0}) {
        const double y = x + shift;
        if (y >= coarse.lo && y <= coarse.hi) return true;
    }
    return false;
}

}  // namespace

std::string_view to_string(JumpDirection d) noexcept {
    return d == JumpDirection::ValueBelowNeighbors ? "value_below_neighbors"
                                                   : "value_above_neighbors";
}

std::string_view to_string(Classification c) noexcept {
    switch (c) {
        case Classification::Continuous: return "continuous";
        case Classification::LscCompatibleJump: return "lsc_compatible_jump";
        case Classification::LscViolation: return "lsc_violation";
    }
    return "continuous";
}

DirectionProfile scan_thetas(const DomainModel& model, std::span<const double> thetas,
                             int threads) {
    const std::size_t n = thetas.size();
    DirectionProfile p;
    p.thetas.assign(thetas.begin(), thetas.end());
    p.a_values.resize(n);
    p.lambda1_values.resize(n);
    p.event_kinds.resize(n);
    parallel_for(n, threads, [&](std::size_t i) {
        try {
            const Lambda1Result r = compute_lambda1(model, Direction::from_angle(thetas[i]));
            p.a_values[i] = r.a_nu;
            p.lambda1_values[i] = r.lambda1;
            p.event_kinds[i] = r.event.kind;
        } catch (const Error& e) {
            throw Error(e.kind(), fmt::format("direction #{} (theta = {}): {}", i, thetas[i], e.what()));
        }
    });
    return p;
}

DirectionProfile scan_directions(const DomainModel& model, int M, int threads) {
    if (M < 8) fail(ErrorKind::InvalidArgument, "direction scan needs M >= 8");
    std::vector<double> thetas(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) thetas[i] = kTwoPi * i / M;
    return scan_thetas(model, thetas, threads);
}

LipschitzCheck lipschitz_check_a(const DirectionProfile& profile, double r_max, double tol_a) {
    const std::size_t n = profile.size();
    LipschitzCheck out;
    double slack = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const double dnu = 2.0 * std::abs(std::sin(0.5 * (profile.thetas[j] - profile.thetas[i])));
        if (dnu == 0.0) continue;
        out.max_ratio = std::max(out.max_ratio,
                                 std::abs(profile.a_values[i] - profile.a_values[j]) / dnu);
        slack = std::max(slack, 2.0 * tol_a / dnu);
    }
    out.pass = out.max_ratio <= r_max * (1.0 + 1e-3) + slack;
    return out;
}

namespace {

using LevelScan = std::function<DirectionProfile(std::span<const double>)>;

DiscontinuityReport classify_levels(const LevelScan& scan, int M0, int levels, double gap_floor,
                                    const ClassifyOptions& options) {
    if (M0 < 8) fail(ErrorKind::InvalidArgument, "classification needs M0 >= 8");
    if (levels < 3) fail(ErrorKind::InvalidArgument, "classification needs at least 3 levels");
    if (!(gap_floor > 0.0)) fail(ErrorKind::InvalidArgument, "gap floor must be positive");

    DiscontinuityReport rep;
    rep.gap_floor = gap_floor;

    std::vector<LevelFeatures> feats;
    std::vector<Turn> grid;
    for (int l = 0; l < levels; ++l) {
        const std::int64_t M = static_cast<std::int64_t>(M0) << l;
        grid = level_grid(M);
        std::vector<double> thetas;
        for (const Turn& t : grid) thetas.push_back(t.theta());
        rep.finest = scan(thetas);
        feats.push_back(find_features(grid, rep.finest.lambda1_values, rep.gap_floor));
        rep.refinement_trace.push_back({static_cast<int>(M), grid.size(), feats.back().max_gap});
    }

    // gap ~ spacing^alpha: alpha = 0 for a jump, alpha > 0 for any continuous
    // (Hoelder) feature, however slowly it closes.
    const auto persists = [&](double coarse_gap, double coarse_h, double fine_gap, double fine_h) {
        const double alpha = std::log(coarse_gap / fine_gap) / std::log(coarse_h / fine_h);
        return alpha < options.max_decay_exponent;
    };

    // A feature is a jump only if it decays like a jump between every pair
    // of consecutive levels; a cusp can look jump-like on coarse grids that
    // have not reached its asymptotic regime yet.
    bool violation = false;
    for (const auto& [key, fine] : feats.back().isolated) {
        std::vector<const Isolated*> chain;
        for (int l = 0; l < levels; ++l) {
            const auto it = feats[l].isolated.find(key);
            if (it == feats[l].isolated.end() || it->second.direction != fine.direction) break;
            chain.push_back(&it->second);
        }
        bool jump = static_cast<int>(chain.size()) == levels;
        for (std::size_t l = 1; jump && l < chain.size(); ++l)
            jump = persists(chain[l - 1]->gap, chain[l - 1]->spacing, chain[l]->gap, chain[l]->spacing);
        if (!jump) continue;
        rep.jumps.push_back({fine.index, rep.finest.thetas[fine.index], fine.gap, fine.direction, false});
        violation = violation || fine.direction == JumpDirection::ValueAboveNeighbors;
    }

    for (const StepFeature& fine : feats.back().steps) {
        const double mid = 0.5 * (fine.lo + fine.hi);
        std::vector<const StepFeature*> chain{&fine};
        for (int l = levels - 2; l >= 0; --l) {
            const auto& steps = feats[l].steps;
            const auto it = std::find_if(steps.begin(), steps.end(),
                                         [&](const StepFeature& s) { return contains(s, mid); });
            if (it == steps.end()) break;
            chain.push_back(&*it);
        }
        bool jump = static_cast<int>(chain.size()) == levels;
        // chain runs fine to coarse
        for (std::size_t l = 1; jump && l < chain.size(); ++l)
            jump = persists(chain[l]->gap, chain[l]->hi - chain[l]->lo, chain[l - 1]->gap,
                            chain[l - 1]->hi - chain[l - 1]->lo);
        if (!jump) continue;
        rep.jumps.push_back({fine.lower_index, rep.finest.thetas[fine.lower_index], fine.gap,
                             JumpDirection::ValueBelowNeighbors, true});
    }

    std::sort(rep.jumps.begin(), rep.jumps.end(),
              [](const Jump& x, const Jump& y) { return x.theta_index < y.theta_index; });
    if (violation) rep.classification = Classification::LscViolation;
    else if (!rep.jumps.empty()) rep.classification = Classification::LscCompatibleJump;
    else rep.classification = Classification::Continuous;
    return rep;
}

}  // namespace

DiscontinuityReport classify_discontinuities(const DomainModel& model, int M0, int levels,
                                             const ClassifyOptions& options) {
    const double floor = options.gap_floor > 0.0 ? options.gap_floor : 10.0 * model.tol().tol_lambda;
    const LevelScan scan = [&](std::span<const double> thetas) {
        return scan_thetas(model, thetas, options.threads);
    };
    return classify_levels(scan, M0, levels, floor, options);
}

DiscontinuityReport classify_function(const std::function<double(double)>& f, int M0,
                                      int levels, const ClassifyOptions& options) {
    const LevelScan scan = [&](std::span<const double> thetas) {
        DirectionProfile p;
        for (double t : thetas) {
            p.thetas.push_back(t);
            p.a_values.push_back(0.0);
            p.lambda1_values.push_back(f(t));
            p.event_kinds.push_back(EventKind::NormalOrthogonal);
        }
        return p;
    };
    return classify_levels(scan, M0, levels, options.gap_floor, options);
}

CounterexampleReport counterexample_report(double L, double r, double theta_window,
                                           const Tolerances& tolerances, double eps_jump,
                                           int threads) {
    if (!(L > 0.0)) fail(ErrorKind::InvalidArgument, "stadium length L must be positive");
    if (!(r > 0.0)) fail(ErrorKind::InvalidArgument, "stadium radius r must be positive");
    if (!(theta_window > 0.0)) fail(ErrorKind::InvalidArgument, "theta window must be positive");

    const DomainModel model(make_stadium(L, r), tolerances);
    std::vector<double> thetas{0.0};
    for (double scale : {1.0, 1e-1, 1e-2}) {
        thetas.push_back(scale * theta_window);
        thetas.push_back(-scale * theta_window);
    }
    const DirectionProfile p = scan_thetas(model, thetas, threads);

    CounterexampleReport rep;
    rep.L = L;
    rep.r = r;
    rep.eps_jump = eps_jump > 0.0 ? eps_jump : 0.02 * L;
    rep.lambda1_at_axis = p.lambda1_values[0];
    rep.jump = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < p.size(); ++i) {
        rep.side_values.push_back({p.thetas[i], p.lambda1_values[i]});
        rep.jump = std::min(rep.jump, p.lambda1_values[i] - rep.lambda1_at_axis);
    }
    // smallest |theta| is the last +- pair
    rep.limit_from_side = std::min(p.lambda1_values[p.size() - 2], p.lambda1_values[p.size() - 1]);
    rep.claim_holds = rep.jump >= 0.5 * L - rep.eps_jump;
    return rep;
}

}  // namespace movplane
