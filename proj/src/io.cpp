#include "movplane/io.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace movplane {

namespace {

double number(const Json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (!v.is_number()) fail(ErrorKind::InvalidArgument, fmt::format("field '{}' must be a number", key));
    return v.get<double>();
}

int integer(const Json& j, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (!v.is_number_integer())
        fail(ErrorKind::InvalidArgument, fmt::format("field '{}' must be an integer", key));
    return v.get<int>();
}

}  // namespace

ShapeSpec shape_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("shape") || !j.at("shape").is_string())
        fail(ErrorKind::InvalidArgument, "shape spec needs a string field 'shape'");
    const std::string name = j.at("shape").get<std::string>();
    ShapeSpec s;
    if (name == "disk") {
        s.kind = ShapeKind::Disk;
        s.R = number(j, "R", s.R);
        s.dim = integer(j, "dim", s.dim);
    } else if (name == "ellipse") {
        s.kind = ShapeKind::Ellipse;
        s.a = number(j, "a", s.a);
        s.b = number(j, "b", s.b);
    } else if (name == "superellipse") {
        s.kind = ShapeKind::Superellipse;
        s.a = number(j, "a", s.a);
        s.b = number(j, "b", s.b);
        s.m = integer(j, "m", s.m);
    } else if (name == "stadium") {
        s.kind = ShapeKind::Stadium;
        s.L = number(j, "L", s.L);
        s.r = number(j, "r", s.r);
    } else if (name == "rounded_polygon") {
        s.kind = ShapeKind::RoundedPolygon;
        s.rho = number(j, "rho", s.rho);
        if (!j.contains("vertices") || !j.at("vertices").is_array())
            fail(ErrorKind::InvalidArgument, "rounded_polygon needs a 'vertices' array");
        for (const Json& v : j.at("vertices")) {
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
                fail(ErrorKind::InvalidArgument, "each vertex must be [x, y]");
            s.vertices.push_back(vec2(v[0].get<double>(), v[1].get<double>()));
        }
    } else {
        fail(ErrorKind::InvalidArgument, fmt::format("unknown shape '{}'", name));
    }
    return s;
}

Json shape_to_json(const ShapeSpec& s) {
    Json j;
    j["shape"] = shape_name(s.kind);
    switch (s.kind) {
        case ShapeKind::Disk:
            j["R"] = s.R;
            if (s.dim != 2) j["dim"] = s.dim;
            break;
        case ShapeKind::Ellipse:
            j["a"] = s.a;
            j["b"] = s.b;
            break;
        case ShapeKind::Superellipse:
            j["a"] = s.a;
            j["b"] = s.b;
            j["m"] = s.m;
            break;
        case ShapeKind::Stadium:
            j["L"] = s.L;
            j["r"] = s.r;
            break;
        case ShapeKind::RoundedPolygon: {
            Json verts = Json::array();
            for (const Vec& v : s.vertices) verts.push_back(to_json(v));
            j["vertices"] = verts;
            j["rho"] = s.rho;
            break;
        }
        case ShapeKind::Custom:
            break;
    }
    return j;
}

Json to_json(const Vec& v) {
    Json j = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

Json to_json(const Tolerances& t) {
    return Json{{"resolution", t.resolution}, {"tol_proj", t.tol_proj}, {"tol_a", t.tol_a},
                {"tol_T", t.tol_T},           {"tol_event", t.tol_event}, {"step", t.step},
                {"tol_lambda", t.tol_lambda}, {"delta0", t.delta0}};
}

Json to_json(const Lambda1Result& r) {
    Json j;
    j["nu"] = to_json(r.nu.vec());
    j["a"] = r.a_nu;
    j["lambda1"] = r.lambda1;
    j["event"] = Json{{"kind", std::string(to_string(r.event.kind))},
                      {"lambda", r.event.lambda},
                      {"witness", to_json(r.event.witness)}};
    j["bracket"] = Json::array({r.bracket.lo, r.bracket.hi});
    j["tie"] = r.tie;
    j["tolerances"] = to_json(r.tolerances);
    return j;
}

Json to_json(const DiscontinuityReport& r) {
    Json j;
    j["classification"] = std::string(to_string(r.classification));
    j["gap_floor"] = r.gap_floor;
    Json jumps = Json::array();
    for (const Jump& jp : r.jumps)
        jumps.push_back(Json{{"theta_index", jp.theta_index},
                             {"theta", jp.theta},
                             {"gap", jp.gap},
                             {"direction", std::string(to_string(jp.direction))},
                             {"step", jp.step}});
    j["jumps"] = jumps;
    Json trace = Json::array();
    for (const RefinementLevel& l : r.refinement_trace)
        trace.push_back(
            Json{{"M", l.M}, {"samples", l.samples}, {"max_adjacent_gap", l.max_adjacent_gap}});
    j["refinement_trace"] = trace;
    return j;
}

Json to_json(const CounterexampleReport& r) {
    Json j;
    j["L"] = r.L;
    j["r"] = r.r;
    j["lambda1_at_axis"] = r.lambda1_at_axis;
    j["limit_from_side"] = r.limit_from_side;
    j["jump"] = r.jump;
    j["eps_jump"] = r.eps_jump;
    j["claim_holds"] = r.claim_holds;
    Json sides = Json::array();
    for (const SideValue& s : r.side_values)
        sides.push_back(Json{{"theta", s.theta}, {"lambda1", s.lambda1}});
    j["side_values"] = sides;
    return j;
}

Json to_json(const MonotonicityReport& r) {
    Json j;
    j["nu"] = to_json(r.nu.vec());
    j["lambdas_tested"] = r.lambdas_tested;
    j["max_violation"] = r.max_violation;
    j["pairs_tested"] = r.pairs_tested;
    j["critical_set_measure"] = r.critical_set_measure;
    j["grad_floor"] = r.grad_floor;
    j["min_directional_derivative"] = r.min_directional_derivative;
    j["cells_checked"] = r.cells_checked;
    return j;
}

Json to_json(const LipschitzCheck& c) {
    return Json{{"max_ratio", c.max_ratio}, {"pass", c.pass}};
}

std::string format_real(double x) {
    std::string s = fmt::format("{}", x);
    if (std::isfinite(x) && s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

void write_profile_csv(std::ostream& os, const DirectionProfile& p) {
    os << "theta,a,lambda1,event_kind\n";
    for (std::size_t i = 0; i < p.size(); ++i)
        fmt::print(os, "{},{},{},{}\n", format_real(p.thetas[i]), format_real(p.a_values[i]),
                   format_real(p.lambda1_values[i]), to_string(p.event_kinds[i]));
}

void write_profile_svg(std::ostream& os, const DirectionProfile& p) {
    constexpr double size = 400.0, c = size / 2.0, rmax = 0.45 * size;
    double lo = 0.0, hi = 0.0;
    if (p.size() > 0) {
        lo = std::min(*std::min_element(p.lambda1_values.begin(), p.lambda1_values.end()),
                      *std::min_element(p.a_values.begin(), p.a_values.end()));
        hi = *std::max_element(p.lambda1_values.begin(), p.lambda1_values.end());
    }
    // radius grows affinely with the value so negative values stay visible
    const double span = std::max(hi - lo, 1e-12);
    const auto radius = [&](double v) { return rmax * (0.1 + 0.9 * (v - lo) / span); };
    const auto path = [&](const std::vector<double>& vals) {
        std::string d;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double rr = radius(vals[i]);
            d += fmt::format("{}{:.3f},{:.3f} ", i == 0 ? "M" : "L", c + rr * std::cos(p.thetas[i]),
                             c - rr * std::sin(p.thetas[i]));
        }
        return d + "Z";
    };
    fmt::print(os,
               "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" "
               "viewBox=\"0 0 {0} {0}\">\n",
               size);
    fmt::print(os, "<circle cx=\"{0}\" cy=\"{0}\" r=\"{1:.3f}\" fill=\"none\" stroke=\"#ccc\"/>\n",
               c, radius(0.0 > lo && 0.0 < hi ? 0.0 : lo));
    if (p.size() > 0) {
        fmt::print(os, "<path d=\"{}\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n",
                   path(p.a_values));
        fmt::print(os, "<path d=\"{}\" fill=\"none\" stroke=\"#c22\"/>\n", path(p.lambda1_values));
    }
    fmt::print(os, "<text x=\"8\" y=\"16\" font-size=\"12\">lambda1 (red), a (dashed); "
                   "range [{:.4g}, {:.4g}]</text>\n</svg>\n",
               lo, hi);
}

}  // namespace movplane
