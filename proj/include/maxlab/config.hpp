#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "maxlab/estimate.hpp"
#include "maxlab/grid.hpp"
#include "maxlab/maximal_solver.hpp"

namespace maxlab {

/// Everything one experiment needs. Parsed from INI text; every field has a
/// scenario default, so a file only has to name the scenario.
///
///   [scenario] name
///   [metric]   kind, params
///   [chart]    x0, x1, y0, y1
///   [domain]   shape (rectangle | annulus), center_x, center_y, inner_radius, outer_radius
///   [boundary] kind, params
///   [grid]     resolution (run, sweep), study (converge); nodes per side
///   [disc]     center_x, center_y, pairs ("auto" or "r:R r:R ...")
///   [solver]   max_newton_iters, residual_tol, spacelike_guard, max_backtracks
///   [estimate] ineq_relative, pointwise_factor, report_min_depth, report_margin,
///              maximal_tol, rigidity_tol
///   [converge] identity_order_min, distance_order_min, solution_order_min
///   [output]   dir
struct ExperimentConfig {
    std::string scenario;

    std::string metric = "flat";
    std::vector<double> metric_params;
    Chart chart{-1.0, 1.0, -1.0, 1.0};
    DomainShape domain;

    std::string boundary = "constant";
    std::vector<double> boundary_params{0.0};

    int resolution = 129;
    std::vector<int> study{65, 129, 257};

    double center_x = 0.0;
    double center_y = 0.0;
    /// Empty: the standard nine pairs scaled to the available radius.
    std::vector<std::pair<double, double>> pairs;

    int max_newton_iters = 50;
    double residual_tol = 1e-10;
    double spacelike_guard = 1e-3;
    int max_backtracks = 30;

    double ineq_relative = 0.05;
    double pointwise_factor = 10.0;
    int report_min_depth = 2;
    double report_margin = 0.0;
    double maximal_tol = 1e-8;
    double rigidity_tol = 1e-6;

    double identity_order_min = 1.9;
    double distance_order_min = 0.9;
    double solution_order_min = 1.8;

    std::string out_dir = "out";

    bool operator==(const ExperimentConfig&) const = default;

    SolverSettings solver_settings() const;
    EstimateTolerances estimate_tolerances() const;
    ReportRegion report_region() const;
};

/// Throws ConfigError on unknown sections or keys, malformed values and
/// violated invariants (r < R, strictly increasing study resolutions, ...).
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_string(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Checks the invariants parse_config enforces; for configs built in code.
void validate(const ExperimentConfig& cfg);

/// Canonical INI text listing every field; parses back to an equal config.
std::string to_ini(const ExperimentConfig& cfg);

}  // namespace maxlab
