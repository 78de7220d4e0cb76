#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "maxlab/area_functional.hpp"
#include "maxlab/chart_metric.hpp"
#include "maxlab/grid.hpp"

namespace maxlab {

struct SolverSettings {
    int max_newton_iters = 50;
    double residual_tol = 1e-10;
    /// Every accepted iterate keeps 1 - |Du|^2_g >= spacelike_guard.
    double spacelike_guard = 1e-3;
    int max_backtracks = 30;
    Exec exec = Exec::parallel;
};

/// Discrete spacelike graph u over a domain.
struct GraphFunction {
    std::shared_ptr<const Domain> domain;
    std::vector<double> u;
    /// Central-difference chart gradient at nodes of depth >= 1 (zero elsewhere).
    std::vector<std::array<double, 2>> grad_u;
    /// min over interior nodes of 1 - |Du|^2_g
    double spacelike_margin = 1.0;
};

/// Builds a GraphFunction from node values, filling the gradient cache.
GraphFunction make_graph(std::shared_ptr<const Domain> domain, const MetricSpec& metric, std::vector<double> u);

struct SolveStats {
    int newton_iterations = 0;   // across all continuation stages
    int factorisations = 0;      // Hessian factorisations (stale ones are reused)
    int stages = 1;              // > 1 when boundary-data continuation was needed
    double final_residual = 0.0;
    double initial_residual = 0.0;
    /// Area after each accepted Newton step of the final stage (first entry is
    /// the stage's starting iterate).
    std::vector<double> area_history;
    /// Smallest cell margin seen over all accepted iterates.
    double min_margin_seen = 1.0;
};

struct SolveResult {
    GraphFunction graph;
    SolveStats stats;
};

/// Critical point of the discrete area functional with Dirichlet data taken
/// from `boundary` at boundary nodes (values elsewhere are ignored).
///
/// Damped Newton with backtracking: a step is accepted once the guard holds
/// and either the area or the residual improves. The start is the harmonic
/// extension of the data; if that violates the guard the data is scaled down
/// and brought back to full size through continuation stages.
SolveResult solve_maximal_graph(const MetricSpec& metric, std::shared_ptr<const Domain> domain,
                                std::span<const double> boundary, const SolverSettings& settings = {});

/// Harmonic extension of the boundary values (interior nodes overwritten).
std::vector<double> harmonic_extension(const MetricSpec& metric, std::shared_ptr<const Domain> domain,
                                       std::span<const double> boundary);

/// Discrete Div(Du / sqrt(1 - |Du|^2)) at interior nodes, consistent with the
/// area gradient; zero at non-interior nodes.
std::vector<double> divergence_field(const GraphFunction& g, const MetricSpec& metric, Exec exec = Exec::parallel);

/// Sup-norm over interior nodes of `divergence_field`.
double pde_residual(const GraphFunction& g, const MetricSpec& metric, Exec exec = Exec::parallel);

/// H = Div(...) / 2 at interior nodes.
std::vector<double> mean_curvature_of_graph(const GraphFunction& g, const MetricSpec& metric,
                                            Exec exec = Exec::parallel);

}  // namespace maxlab
