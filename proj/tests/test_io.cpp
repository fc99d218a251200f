#include <sstream>

#include "doctest.h"

#include "movplane/io.hpp"
#include "movplane/shapes.hpp"

using namespace movplane;

TEST_SUITE("io") {

TEST_CASE("shape specs round-trip through JSON") {
    const std::vector<Json> specs{
        Json::parse(R"({"shape": "disk", "R": 1.5})"),
        Json::parse(R"({"shape": "ellipse", "a": 2.0, "b": 1.0})"),
        Json::parse(R"({"shape": "superellipse", "a": 1.0, "b": 2.0, "m": 6})"),
        Json::parse(R"({"shape": "stadium", "L": 2.0, "r": 1.0})"),
        Json::parse(R"({"shape": "rounded_polygon", "vertices": [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], "rho": 0.2})")};
    for (const Json& j : specs) {
        CAPTURE(j.dump());
        const ShapeSpec s = shape_from_json(j);
        CHECK(shape_to_json(s) == j);
        const ImplicitDomain d = make_domain(s);
        CHECK(d.shape().kind == s.kind);
    }
}

TEST_CASE("shape parsing errors") {
    CHECK_THROWS_AS(shape_from_json(Json::parse(R"({"shape": "triangle"})")), Error);
    CHECK_THROWS_AS(shape_from_json(Json::parse(R"({"R": 1.0})")), Error);
    CHECK_THROWS_AS(shape_from_json(Json::parse(R"({"shape": "disk", "R": "one"})")), Error);
    CHECK_THROWS_AS(shape_from_json(Json::parse(R"({"shape": "rounded_polygon", "vertices": [[0]]})")),
                    Error);
    CHECK_THROWS_AS(make_domain(shape_from_json(Json::parse(R"({"shape": "disk", "R": -1})"))), Error);
}

TEST_CASE("format_real keeps a decimal point") {
    CHECK(format_real(-1.0) == "-1.0");
    CHECK(format_real(0.0) == "0.0");
    CHECK(format_real(0.1) == "0.1");
    CHECK(format_real(1e-20) == "1e-20");
}

TEST_CASE("Lambda1Result JSON layout") {
    const DomainModel model(make_stadium(2.0, 1.0));
    const Json j = to_json(compute_lambda1(model, Direction(vec2(1.0, 0.0))));
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"nu", "a", "lambda1", "event", "bracket", "tie", "tolerances"});
    CHECK(j["event"]["kind"] == "NormalOrthogonal");
    CHECK(j["event"]["witness"].size() == 2);
    CHECK(j["bracket"].size() == 2);
    CHECK(j["tolerances"]["tol_lambda"].get<double>() > 0.0);
    CHECK(j["lambda1"].get<double>() == doctest::Approx(-1.0).epsilon(1e-7));
}

TEST_CASE("report JSON fields") {
    const DomainModel disk(make_disk(1.0));
    const Json d = to_json(classify_discontinuities(disk, 16, 3));
    CHECK(d["classification"] == "continuous");
    CHECK(d["refinement_trace"].size() == 3);
    CHECK(d["refinement_trace"][0]["M"] == 16);
    const Json c = to_json(counterexample_report(2.0, 1.0, 1e-2));
    for (const char* k : {"L", "r", "lambda1_at_axis", "limit_from_side", "jump", "eps_jump",
                          "claim_holds", "side_values"})
        CHECK(c.contains(k));
    MonotonicityReport m{Direction(vec2(1.0, 0.0)), {0.1, 0.2}};
    const Json mj = to_json(m);
    CHECK(mj["lambdas_tested"].size() == 2);
    CHECK(mj.contains("critical_set_measure"));
    CHECK(mj.contains("min_directional_derivative"));
}

TEST_CASE("profile CSV and SVG") {
    const DomainModel disk(make_disk(1.0));
    const DirectionProfile p = scan_directions(disk, 8);
    std::ostringstream csv;
    write_profile_csv(csv, p);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "theta,a,lambda1,event_kind");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(line.find("NormalOrthogonal") != std::string::npos);
    }
    CHECK(rows == 8);

    std::ostringstream s1, s2;
    write_profile_svg(s1, p);
    write_profile_svg(s2, p);
    CHECK(s1.str() == s2.str());
    CHECK(s1.str().rfind("<svg", 0) == 0);
    CHECK(s1.str().find("</svg>") != std::string::npos);
}

}  // TEST_SUITE
