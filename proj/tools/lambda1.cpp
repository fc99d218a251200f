// Command-line front end: support, lambda1, scan, classify, counterexample,
// solve and verify. Exit codes: 0 success, 1 counterexample claim fails,
// 2 domain or input error, 3 numeric error.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "movplane/continuity.hpp"
#include "movplane/io.hpp"
#include "movplane/moving_plane.hpp"
#include "movplane/plap_solver.hpp"
#include "movplane/shapes.hpp"

using namespace movplane;

namespace {

constexpr int kExitClaimFails = 1;
constexpr int kExitDomain = 2;
constexpr int kExitNumeric = 3;

/// Every parameter of a run. Tolerance fields left at 0 take their defaults.
struct RunConfig {
    std::string command;
    Json shape = Json{{"shape", "disk"}, {"R", 1.0}};
    std::vector<double> nu{1.0, 0.0};
    Tolerances tol;
    int M = 360;
    int M0 = 180;
    int levels = 3;
    double theta_window = 1e-2;
    double eps_jump = 0.0;
    double h = 1.0 / 64.0;
    double p = 1.5;
    double epsilon = 1e-6;
    int max_iters = 200;
    double tol_res = 1e-12;
    int n_lambda = 10;
    std::string out;
    std::string svg;
};

Json config_to_json(const RunConfig& c) {
    Json j;
    j["command"] = c.command;
    j["shape"] = c.shape;
    j["nu"] = c.nu;
    j["tolerances"] = to_json(c.tol);
    j["M"] = c.M;
    j["M0"] = c.M0;
    j["levels"] = c.levels;
    j["theta_window"] = c.theta_window;
    j["eps_jump"] = c.eps_jump;
    j["h"] = c.h;
    j["p"] = c.p;
    j["epsilon"] = c.epsilon;
    j["max_iters"] = c.max_iters;
    j["tol_res"] = c.tol_res;
    j["n_lambda"] = c.n_lambda;
    j["out"] = c.out;
    j["svg"] = c.svg;
    return j;
}

template <typename T>
void read_field(const Json& j, const char* key, T& dst) {
    if (j.contains(key)) dst = j.at(key).get<T>();
}

RunConfig config_from_json(const Json& j) {
    RunConfig c;
    read_field(j, "command", c.command);
    if (j.contains("shape")) c.shape = j.at("shape");
    read_field(j, "nu", c.nu);
    if (j.contains("tolerances")) {
        const Json& t = j.at("tolerances");
        read_field(t, "resolution", c.tol.resolution);
        read_field(t, "tol_proj", c.tol.tol_proj);
        read_field(t, "tol_a", c.tol.tol_a);
        read_field(t, "tol_T", c.tol.tol_T);
        read_field(t, "tol_event", c.tol.tol_event);
        read_field(t, "step", c.tol.step);
        read_field(t, "tol_lambda", c.tol.tol_lambda);
        read_field(t, "delta0", c.tol.delta0);
    }
    read_field(j, "M", c.M);
    read_field(j, "M0", c.M0);
    read_field(j, "levels", c.levels);
    read_field(j, "theta_window", c.theta_window);
    read_field(j, "eps_jump", c.eps_jump);
    read_field(j, "h", c.h);
    read_field(j, "p", c.p);
    read_field(j, "epsilon", c.epsilon);
    read_field(j, "max_iters", c.max_iters);
    read_field(j, "tol_res", c.tol_res);
    read_field(j, "n_lambda", c.n_lambda);
    read_field(j, "out", c.out);
    read_field(j, "svg", c.svg);
    return c;
}

std::vector<double> parse_reals(const std::string& text, char sep) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos)
            fail(ErrorKind::InvalidArgument, fmt::format("cannot parse number '{}'", item));
        v.push_back(x);
    }
    return v;
}

Direction direction_of(const RunConfig& c) {
    Vec v(static_cast<Eigen::Index>(c.nu.size()));
    for (std::size_t i = 0; i < c.nu.size(); ++i) v[static_cast<Eigen::Index>(i)] = c.nu[i];
    return Direction(v);
}

/// Writes to the file named by `path`, or stdout when it is empty.
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
    if (path.empty()) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::InvalidArgument, fmt::format("cannot open '{}' for writing", path));
    write(f);
}

void emit_json(const std::string& path, const Json& j) {
    emit(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

std::string support_text(double a) {
    // round away sub-tolerance noise so "-1.0" prints as such
    std::string s = fmt::format("{:.9f}", a);
    while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
    if (s == "-0.0") s = "0.0";
    return s;
}

int run(const RunConfig& c, int threads) {
    if (c.command == "counterexample") {
        const ShapeSpec s = shape_from_json(c.shape);
        const double L = s.kind == ShapeKind::Stadium ? s.L : 2.0;
        const double r = s.kind == ShapeKind::Stadium ? s.r : 1.0;
        const CounterexampleReport rep =
            counterexample_report(L, r, c.theta_window, c.tol, c.eps_jump, threads);
        emit_json(c.out.empty() ? "report.json" : c.out, to_json(rep));
        if (!rep.claim_holds) {
            std::cerr << fmt::format("claim fails: jump {} < L/2 - eps_jump = {}\n", rep.jump,
                                     0.5 * L - rep.eps_jump);
            return kExitClaimFails;
        }
        return 0;
    }

    const ImplicitDomain domain = make_domain(shape_from_json(c.shape));
    if (c.command == "solve") {
        const GridSolution sol = solve_torsion(domain, c.h, c.p, c.epsilon, c.max_iters, c.tol_res);
        emit(c.out, [&](std::ostream& os) { write_grid_csv(os, sol); });
        if (!sol.converged) {
            std::cerr << fmt::format("solver did not converge after {} iterations\n",
                                     sol.iterations);
            return kExitNumeric;
        }
        return 0;
    }

    const DomainModel model(domain, c.tol);
    if (c.command == "support") {
        const double a = support_min(model, direction_of(c));
        emit(c.out, [&](std::ostream& os) { os << support_text(a) << '\n'; });
    } else if (c.command == "lambda1") {
        emit_json(c.out, to_json(compute_lambda1(model, direction_of(c))));
    } else if (c.command == "scan") {
        const DirectionProfile prof = scan_directions(model, c.M, threads);
        emit(c.out, [&](std::ostream& os) { write_profile_csv(os, prof); });
        if (!c.svg.empty()) emit(c.svg, [&](std::ostream& os) { write_profile_svg(os, prof); });
    } else if (c.command == "classify") {
        ClassifyOptions opts;
        opts.threads = threads;
        const DiscontinuityReport rep = classify_discontinuities(model, c.M0, c.levels, opts);
        emit_json(c.out, to_json(rep));
        if (!c.svg.empty())
            emit(c.svg, [&](std::ostream& os) { write_profile_svg(os, rep.finest); });
    } else if (c.command == "verify") {
        const Direction nu = direction_of(c);
        const Lambda1Result l1 = compute_lambda1(model, nu);
        const GridSolution sol = solve_torsion(domain, c.h, c.p, c.epsilon, c.max_iters, c.tol_res);
        const MonotonicityReport rep = verify_monotonicity(sol, model, nu, l1.lambda1, c.n_lambda);
        Json j = to_json(rep);
        j["lambda1"] = l1.lambda1;
        j["solver"] = Json{{"h", sol.h},
                           {"p", sol.p},
                           {"epsilon", sol.epsilon},
                           {"iterations", sol.iterations},
                           {"residual", sol.residual},
                           {"energy", sol.energy_trace.back()}};
        emit_json(c.out, j);
    } else {
        fail(ErrorKind::InvalidArgument, fmt::format("unknown command '{}'", c.command));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moving-plane quantities a(nu) and lambda_1(nu) for planar domains"};
    app.require_subcommand(0, 1);

    RunConfig cfg;
    std::string shape_name, shape_file, nu_text, vertices_text, config_file;
    std::optional<double> R, a, b, L, r, rho, theta;
    std::optional<int> m, dim;
    int threads = 0;
    bool emit_config = false;

    app.add_option("--config", config_file, "Run the configuration in this JSON file");
    app.add_flag("--emit-config", emit_config, "Print the effective configuration and exit");
    app.add_option("--shape", shape_name,
                   "disk, ellipse, superellipse, stadium or rounded_polygon");
    app.add_option("--shape-file", shape_file, "JSON shape spec");
    app.add_option("--R", R, "Disk radius");
    app.add_option("--dim", dim, "Disk dimension");
    app.add_option("--a", a, "Semi-axis along x");
    app.add_option("--b", b, "Semi-axis along y");
    app.add_option("--m", m, "Superellipse exponent (even)");
    app.add_option("--L", L, "Stadium flat length");
    app.add_option("--r", r, "Stadium cap radius");
    app.add_option("--vertices", vertices_text, "Polygon vertices 'x,y;x,y;...'");
    app.add_option("--rho", rho, "Polygon corner radius");
    app.add_option("--out", cfg.out, "Output file (default stdout)");
    app.add_option("--tol-lambda", cfg.tol.tol_lambda, "Bisection width");
    app.add_option("--resolution", cfg.tol.resolution, "Boundary sampling cell size");
    app.add_option("--tol-proj", cfg.tol.tol_proj, "Boundary projection tolerance");
    app.add_option("--tol-a", cfg.tol.tol_a, "Support refinement tolerance");
    app.add_option("--tol-T", cfg.tol.tol_T, "Hyperplane band thickness");
    app.add_option("--tol-event", cfg.tol.tol_event, "Condition margin threshold");
    app.add_option("--step", cfg.tol.step, "Sweep step");
    app.add_option("--delta0", cfg.tol.delta0, "Sweep start offset");
    app.add_option("--threads", threads, "Worker threads (env LAMBDA1_THREADS)");

    const auto with_nu = [&](CLI::App* sub) {
        sub->add_option("--nu", nu_text, "Direction 'x,y'");
        sub->add_option("--theta", theta, "Direction angle in radians");
    };
    const auto with_solver = [&](CLI::App* sub) {
        sub->set_help_flag("--help", "Print this help message and exit");
        sub->add_option("--h", cfg.h, "Grid spacing");
        sub->add_option("--p", cfg.p, "Exponent in (1, 2]");
        sub->add_option("--epsilon", cfg.epsilon, "Gradient regularization");
        sub->add_option("--max-iters", cfg.max_iters, "Newton iteration cap");
        sub->add_option("--tol-res", cfg.tol_res, "Relative energy decrease tolerance");
    };

    CLI::App* support = app.add_subcommand("support", "Print a(nu) = min x.nu");
    with_nu(support);
    CLI::App* lambda1 = app.add_subcommand("lambda1", "lambda_1(nu) as JSON");
    with_nu(lambda1);
    CLI::App* scan = app.add_subcommand("scan", "CSV of a and lambda_1 over M directions");
    scan->add_option("--M", cfg.M, "Number of directions");
    scan->add_option("--svg", cfg.svg, "Also write a polar plot");
    CLI::App* classify = app.add_subcommand("classify", "Discontinuity report as JSON");
    classify->add_option("--M0", cfg.M0, "Coarsest direction count");
    classify->add_option("--levels", cfg.levels, "Refinement levels (>= 3)");
    classify->add_option("--svg", cfg.svg, "Also write a polar plot of the finest level");
    CLI::App* counter =
        app.add_subcommand("counterexample", "Stadium jump check (exit 1 if the claim fails)");
    counter->add_option("--theta-window", cfg.theta_window, "Largest side angle");
    counter->add_option("--eps-jump", cfg.eps_jump, "Jump slack (default 0.02 L)");
    CLI::App* solve = app.add_subcommand("solve", "p-torsion solution as a CSV grid");
    with_solver(solve);
    CLI::App* verify = app.add_subcommand("verify", "Monotonicity report as JSON");
    with_nu(verify);
    with_solver(verify);
    verify->add_option("--n-lambda", cfg.n_lambda, "Number of hyperplane positions");
    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitDomain;
    }

    try {
        if (!config_file.empty()) {
            std::ifstream f(config_file);
            if (!f) fail(ErrorKind::InvalidArgument, fmt::format("cannot read '{}'", config_file));
            Json j;
            try {
                j = Json::parse(f);
            } catch (const Json::exception& e) {
                fail(ErrorKind::InvalidArgument, fmt::format("bad config: {}", e.what()));
            }
            cfg = config_from_json(j);
        } else {
            for (CLI::App* sub : app.get_subcommands())
                if (sub->parsed()) cfg.command = sub->get_name();
            if (cfg.command.empty()) {
                std::cerr << app.help();
                return kExitDomain;
            }
            if (!shape_file.empty()) {
                std::ifstream f(shape_file);
                if (!f)
                    fail(ErrorKind::InvalidArgument, fmt::format("cannot read '{}'", shape_file));
                try {
                    cfg.shape = Json::parse(f);
                } catch (const Json::exception& e) {
                    fail(ErrorKind::InvalidArgument, fmt::format("bad shape file: {}", e.what()));
                }
            } else if (!shape_name.empty() || cfg.command == "counterexample") {
                Json s{{"shape", shape_name.empty() ? std::string("stadium") : shape_name}};
                if (R) s["R"] = *R;
                if (dim) s["dim"] = *dim;
                if (a) s["a"] = *a;
                if (b) s["b"] = *b;
                if (m) s["m"] = *m;
                if (L) s["L"] = *L;
                if (r) s["r"] = *r;
                if (rho) s["rho"] = *rho;
                if (!vertices_text.empty()) {
                    Json verts = Json::array();
                    std::stringstream ss(vertices_text);
                    std::string pair;
                    while (std::getline(ss, pair, ';')) {
                        const auto xy = parse_reals(pair, ',');
                        if (xy.size() != 2)
                            fail(ErrorKind::InvalidArgument, "each vertex must be 'x,y'");
                        verts.push_back(xy);
                    }
                    s["vertices"] = verts;
                }
                cfg.shape = s;
            }
            // normalize through ShapeSpec so defaults appear explicitly
            cfg.shape = shape_to_json(shape_from_json(cfg.shape));
            if (theta) cfg.nu = {std::cos(*theta), std::sin(*theta)};
            if (!nu_text.empty()) cfg.nu = parse_reals(nu_text, ',');
        }
        direction_of(cfg);  // validate early

        if (emit_config) {
            std::cout << config_to_json(cfg).dump(2) << '\n';
            return 0;
        }
        if (threads <= 0) {
            const char* env = std::getenv("LAMBDA1_THREADS");
            threads = env ? std::max(1, std::atoi(env)) : 1;
        }
        return run(cfg, threads);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.family() == ErrorFamily::Numeric ? kExitNumeric : kExitDomain;
    } catch (const Json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    }
}
