#pragma once

#include <string>
#include <vector>

#include "maxlab/config.hpp"
#include "maxlab/estimate.hpp"
#include "maxlab/geodesic.hpp"
#include "maxlab/maximal_solver.hpp"
#include "maxlab/surface_geometry.hpp"

namespace maxlab {

/// One asserted property. `relation` reads "value relation limit".
struct Assertion {
    std::string name;
    bool pass = false;
    double value = 0.0;
    std::string relation;
    double limit = 0.0;
};

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

/// Sup-norms of the identity residuals and of the Gauss cross-check.
struct IdentitySummary {
    double gradient_theta = 0.0;
    double norm_gradient_theta = 0.0;
    double laplacian_theta = 0.0;
    double t_top_norm = 0.0;
    double gauss_difference = 0.0;
};

/// Everything computed for one configuration at one resolution.
struct PipelineResult {
    explicit PipelineResult(MetricSpec m) : metric(std::move(m)) {}

    ExperimentConfig config;
    int resolution = 0;
    MetricSpec metric;
    std::shared_ptr<const Domain> domain;
    std::vector<double> boundary;
    SolveResult solve;
    double max_mean_curvature = 0.0;
    /// sup over interior nodes of |u - exact|; NaN without a closed form.
    double solution_error = 0.0;
    bool solution_exact = false;

    SurfaceGeometry geom;
    IdentityReport identities;         // report region of the config
    IdentitySummary identity_region;
    IdentitySummary identity_two_ring;
    GaussCurvatureComparison gauss;
    double max_theta = -1.0;

    TriMesh mesh;
    int center = -1;
    DistanceField distance;
    /// max relative distance error at vertices with a closed form and
    /// distance >= 10 h; NaN without one.
    double distance_error = 0.0;
    int distance_samples = 0;
    /// max over edges of d(v) - d(w) - len(vw)
    double triangle_consistency = 0.0;
    double available_radius = 0.0;

    std::vector<EstimateReport> estimates;
    std::vector<GeodesicDisc> discs;   // D(p, r) of each estimate
    std::vector<double> psi_lap_discrete;
    std::vector<double> psi_lap_fields;
    std::vector<double> eq17_margins;  // every node of depth >= 1
    double eq17_min = 0.0;
    double eq17_flat_max_abs = 0.0;    // over nodes with kappa_M == 0
    Rigidity rigidity = Rigidity::non_totally_geodesic;

    std::vector<StageTiming> timings;
};

/// Solve, geometry, geodesics and estimates. Stage errors propagate as
/// maxlab::Error subclasses.
PipelineResult execute_pipeline(const ExperimentConfig& cfg, int resolution, Exec exec = Exec::parallel);

/// Properties asserted for every run; names carry `prefix`.
std::vector<Assertion> pipeline_assertions(const PipelineResult& result, const std::string& prefix = "");

/// Least-squares slope of log(error) against log(h); NaN with fewer than two
/// finite positive errors.
double observed_order(const std::vector<double>& h, const std::vector<double>& error);

struct ConvergenceRow {
    int resolution = 0;
    double h = 0.0;
    double solution_error = 0.0;
    IdentitySummary identities;
    double distance_error = 0.0;
};

struct ConvergenceOrders {
    double solution = 0.0;
    double gradient_theta = 0.0;
    double norm_gradient_theta = 0.0;
    double laplacian_theta = 0.0;
    double t_top_norm = 0.0;
    double gauss_difference = 0.0;
    double distance = 0.0;
};

ConvergenceOrders convergence_orders(const std::vector<ConvergenceRow>& rows);

struct RunReport {
    std::string command;
    ExperimentConfig config;
    std::vector<PipelineResult> runs;
    std::vector<ConvergenceRow> convergence;
    ConvergenceOrders orders;
    std::vector<Assertion> assertions;

    bool passed() const;
};

struct RunOptions {
    bool quiet = false;
    bool write_outputs = true;
    Exec exec = Exec::parallel;
};

/// Full pipeline at cfg.resolution; writes report, estimates, geometry and
/// plot files to cfg.out_dir.
RunReport run(const ExperimentConfig& cfg, const RunOptions& options = {});
/// Pipeline at cfg.resolution, one CSV row per (r, R) pair.
RunReport sweep(const ExperimentConfig& cfg, const RunOptions& options = {});
/// Pipeline at every study resolution, convergence table and order checks.
RunReport converge(const ExperimentConfig& cfg, const RunOptions& options = {});

/// Deterministic JSON of the report (no timings).
std::string report_json(const RunReport& report);
std::string estimate_json(const EstimateReport& e);
std::string estimate_csv_header();
std::string estimate_csv_row(const EstimateReport& e);

/// 0 when every assertion passes, 1 otherwise.
int exit_code(const RunReport& report);

}  // namespace maxlab
