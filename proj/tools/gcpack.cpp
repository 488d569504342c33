// gcpack: check, solve, face and render subcommands.
//
// Exit codes: 0 success / admissible, 1 parse, validation or usage error,
// 2 infeasible targets, 3 no convergence within the step or time budget.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcpack/errors.hpp"
#include "gcpack/flow.hpp"
#include "gcpack/io.hpp"
#include "gcpack/realize.hpp"
#include "gcpack/render.hpp"
#include "gcpack/surface.hpp"
#include "gcpack/tangency.hpp"

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNoConvergence = 3;

struct RunConfig {
    std::string tri_path;
    std::string targets_path;
    std::string out_path;
    std::string trajectory_path;
    double tol = 1e-10;
    double class_tol = gcp::kClassTolerance;
    std::string stepper = "adaptive";
    bool no_newton = false;
    int max_steps = 200000;
    double max_time = 1e4;
    std::vector<double> k;
};

std::string format(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw gcp::Error("cannot write " + path);
    out << text;
}

// Triangulation and targets; the targets file defaults to the triangulation file
std::pair<gcp::Triangulation, std::vector<double>> load_inputs(const RunConfig& cfg)
{
    gcp::Triangulation tri = gcp::load_triangulation(cfg.tri_path);
    const std::string& targets_path = cfg.targets_path.empty() ? cfg.tri_path : cfg.targets_path;
    std::vector<double> targets = gcp::load_targets(targets_path, tri.num_vertices());
    return {std::move(tri), std::move(targets)};
}

bool report_defects(const gcp::Triangulation& tri)
{
    const std::vector<gcp::Defect> defects = gcp::validate(tri);
    for (const gcp::Defect& d : defects) std::cerr << "defect: " << d.message << "\n";
    return defects.empty();
}

std::string subset_string(const std::vector<int>& subset)
{
    std::string s = "{";
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(subset[i]);
    }
    return s + "}";
}

int cmd_check(const RunConfig& cfg)
{
    auto [tri, targets] = load_inputs(cfg);
    if (!report_defects(tri)) return kExitError;
    std::cout << "triangulation: " << tri.num_vertices() << " vertices, " << tri.num_edges() << " edges, "
              << tri.num_faces() << " faces, euler characteristic " << gcp::euler_characteristic(tri) << "\n";
    const gcp::AdmissibilityResult verdict = gcp::check_admissible(tri, targets);
    if (const auto* ok = std::get_if<gcp::Admissible>(&verdict)) {
        std::cout << "admissible: margin " << format(ok->margin) << "\n";
        return kExitOk;
    }
    const auto& bad = std::get<gcp::Violated>(verdict);
    std::cout << "infeasible: witness " << subset_string(bad.witness) << ", excess " << format(bad.excess) << "\n";
    return kExitInfeasible;
}

int cmd_solve(const RunConfig& cfg)
{
    auto [tri, targets] = load_inputs(cfg);
    if (!report_defects(tri)) return kExitError;

    gcp::FlowConfig flow;
    flow.residual_tol = cfg.tol;
    flow.stepper = cfg.stepper == "rk4" ? gcp::Stepper::RK4 : gcp::Stepper::AdaptiveRK;
    flow.use_newton = !cfg.no_newton;
    flow.max_steps = cfg.max_steps;
    flow.max_time = cfg.max_time;
    if (!(flow.newton_switch_tol > flow.residual_tol)) flow.newton_switch_tol = 10.0 * flow.residual_tol;
    flow.validate();

    const gcp::VectorX<double> target_vec = Eigen::Map<const Eigen::VectorXd>(targets.data(), targets.size());
    const gcp::SolveResult<double> result = gcp::solve(tri, target_vec, flow);

    std::optional<gcp::RealizedMetric<double>> metric;
    if (result.status == gcp::SolveStatus::Converged) metric = gcp::realize(tri, result.K, cfg.class_tol);
    const std::optional<gcp::RateEstimate> rate = gcp::rate_estimate(result.trace, flow);

    const std::string report = gcp::solve_report({tri, targets, flow, cfg.class_tol}, result, metric, rate);
    if (cfg.out_path.empty()) {
        std::cout << report;
    } else {
        write_text(cfg.out_path, report);
        std::cout << "status: " << gcp::to_string(result.status) << "\n";
    }
    if (!cfg.trajectory_path.empty()) {
        std::ofstream csv(cfg.trajectory_path, std::ios::binary);
        if (!csv) throw gcp::Error("cannot write " + cfg.trajectory_path);
        gcp::write_trajectory_csv(csv, result.trace, tri.num_vertices());
    }

    switch (result.status) {
    case gcp::SolveStatus::Converged: return kExitOk;
    case gcp::SolveStatus::Infeasible:
        std::cerr << "infeasible: " << result.message;
        if (!result.witness.empty()) std::cerr << ", witness " << subset_string(result.witness);
        std::cerr << "\n";
        return kExitInfeasible;
    case gcp::SolveStatus::MaxStepsExceeded:
        std::cerr << "no convergence: " << result.message << "\n";
        return kExitNoConvergence;
    }
    return kExitError;
}

const char* case_name(gcp::FaceCase c)
{
    switch (c) {
    case gcp::FaceCase::Triangle: return "triangle";
    case gcp::FaceCase::Quadrilateral: return "quadrilateral";
    case gcp::FaceCase::Pentagon: return "pentagon";
    case gcp::FaceCase::Hexagon: return "hexagon";
    case gcp::FaceCase::Ideal: return "ideal";
    }
    return "";
}

const char* kind_name(gcp::CurveKind k)
{
    switch (k) {
    case gcp::CurveKind::Circle: return "circle";
    case gcp::CurveKind::Horocycle: return "horocycle";
    case gcp::CurveKind::Hypercycle: return "hypercycle";
    }
    return "";
}

int cmd_face(const RunConfig& cfg)
{
    const gcp::FaceGeometry<double> face = gcp::solve_face(cfg.k[0], cfg.k[1], cfg.k[2]);
    std::cout << "case: " << case_name(face.face_case) << "\n";
    for (int c = 0; c < 3; ++c) {
        const auto& corner = face.corners[c];
        std::cout << "corner " << c << ": k " << format(cfg.k[c]) << ", " << kind_name(corner.kind);
        if (corner.generalized_angle) {
            std::cout << (corner.kind == gcp::CurveKind::Circle ? ", angle " : ", axis segment ")
                      << format(*corner.generalized_angle);
        }
        std::cout << ", l " << format(corner.arc_length) << ", L " << format(corner.total_curvature) << "\n";
    }
    std::cout << "area: " << format(face.area) << "\n";
    if (!cfg.out_path.empty()) write_text(cfg.out_path, gcp::render_face_svg(cfg.k[0], cfg.k[1], cfg.k[2]));
    return kExitOk;
}

int cmd_render(const RunConfig& cfg)
{
    const std::string svg = gcp::render_face_svg(cfg.k[0], cfg.k[1], cfg.k[2]);
    if (cfg.out_path.empty()) {
        std::cout << svg;
    } else {
        write_text(cfg.out_path, svg);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Generalized hyperbolic circle packings with prescribed total geodesic curvature"};
    app.set_config("--config", "", "TOML/INI file with option defaults; command-line flags take precedence");
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_inputs = [&](CLI::App* sub) {
        sub->add_option("--tri", cfg.tri_path, "Triangulation JSON")->required()->check(CLI::ExistingFile);
        sub->add_option("--targets", cfg.targets_path, "Target JSON with L_hat (default: --tri file)")
            ->check(CLI::ExistingFile);
    };
    auto add_curvatures = [&](CLI::App* sub) {
        sub->add_option("--k", cfg.k, "Three curvatures")->required()->expected(3);
    };

    CLI::App* check = app.add_subcommand("check", "Validate the surface and test admissibility of the targets");
    add_inputs(check);

    CLI::App* solve = app.add_subcommand("solve", "Solve for the packing and report its geometry");
    add_inputs(solve);
    solve->add_option("--out", cfg.out_path, "Report path (default: stdout)");
    solve->add_option("--trajectory", cfg.trajectory_path, "CSV of accepted flow steps");
    solve->add_option("--tol", cfg.tol, "Max-norm residual tolerance")->check(CLI::PositiveNumber);
    solve->add_option("--class-tol", cfg.class_tol, "Tolerance for |k - 1| classification")
        ->check(CLI::PositiveNumber);
    solve->add_option("--stepper", cfg.stepper, "Time integrator")->check(CLI::IsMember({"adaptive", "rk4"}));
    solve->add_flag("--no-newton", cfg.no_newton, "Integrate the flow all the way");
    solve->add_option("--max-steps", cfg.max_steps, "Flow step budget")->check(CLI::PositiveNumber);
    solve->add_option("--max-time", cfg.max_time, "Flow time budget")->check(CLI::PositiveNumber);

    CLI::App* face = app.add_subcommand("face", "Solve a single three-circle configuration");
    add_curvatures(face);
    face->add_option("--out", cfg.out_path, "Also write an SVG picture");

    CLI::App* render = app.add_subcommand("render", "Draw a three-circle configuration in the disk");
    add_curvatures(render);
    render->add_option("--out", cfg.out_path, "SVG path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (*check) return cmd_check(cfg);
        if (*solve) return cmd_solve(cfg);
        if (*face) return cmd_face(cfg);
        if (*render) return cmd_render(cfg);
    } catch (const gcp::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitError;
    } catch (const gcp::StiffnessError& e) {
        std::cerr << "integration failed at t = " << e.time() << " (step " << e.step() << "): " << e.what()
                  << "\n";
        return kExitError;
    } catch (const gcp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
