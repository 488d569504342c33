#pragma once

// JSON input documents, solve reports and trajectory export.
//
// Triangulation:  {"num_vertices": 4, "faces": [[0, 1, 2], ...]}   (0-based)
// Targets:        {"L_hat": [1.0, 1.0, 1.0, 1.0]}
//
// Both may live in one file. Errors are ParseError with a 1-based line and a
// field path such as "faces[3][1]".

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gcpack/flow.hpp"
#include "gcpack/realize.hpp"
#include "gcpack/surface.hpp"

namespace gcp
{

inline constexpr int kReportSchemaVersion = 1;

Triangulation parse_triangulation(const std::string& text);
Triangulation load_triangulation(const std::string& path);

/** L_hat entries; must number num_vertices and be positive */
std::vector<double> parse_targets(const std::string& text, int num_vertices);
std::vector<double> load_targets(const std::string& path, int num_vertices);

std::string read_file(const std::string& path);

struct ReportContext {
    const Triangulation& tri;
    const std::vector<double>& targets;
    const FlowConfig& config;
    double class_tol;
};

/**
 * @brief Solve report as pretty-printed JSON with a fixed key order.
 *
 * Vertex records and the global audit block are present only when the
 * solve converged; `witness` only when it is infeasible.
 */
std::string solve_report(const ReportContext& ctx, const SolveResult<double>& result,
                         const std::optional<RealizedMetric<double>>& metric,
                         const std::optional<RateEstimate>& rate);

/**
 * @brief One row per flow sample: t, residual_max, residual_2norm, K_0..K_{n-1}.
 *
 * Preceded by a comment line "# vertices=N" and a header row.
 */
void write_trajectory_csv(std::ostream& out, const FlowTrace<double>& trace, int num_vertices);

}  // namespace gcp
