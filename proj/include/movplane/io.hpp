#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "movplane/continuity.hpp"
#include "movplane/moving_plane.hpp"
#include "movplane/plap_solver.hpp"

namespace movplane {

using Json = nlohmann::ordered_json;

/// {"shape": "stadium", "L": 2.0, "r": 1.0} and the analogues for disk
/// (R, dim), ellipse (a, b), superellipse (a, b, m) and rounded_polygon
/// (vertices, rho). Throws InvalidArgument on unknown shapes or bad fields.
ShapeSpec shape_from_json(const Json& j);
Json shape_to_json(const ShapeSpec& spec);

Json to_json(const Vec& v);
Json to_json(const Tolerances& t);
Json to_json(const Lambda1Result& r);
Json to_json(const DiscontinuityReport& r);
Json to_json(const CounterexampleReport& r);
Json to_json(const MonotonicityReport& r);
Json to_json(const LipschitzCheck& c);

/// Header "theta,a,lambda1,event_kind", one row per direction.
void write_profile_csv(std::ostream& os, const DirectionProfile& profile);

/// Static polar plot of lambda_1(theta) (and a(theta) for reference).
void write_profile_svg(std::ostream& os, const DirectionProfile& profile);

/// Shortest decimal that round-trips, always with a decimal point ("-1.0").
std::string format_real(double x);

}  // namespace movplane
