#include "maxlab/maximal_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "maxlab/error.hpp"

namespace maxlab {

namespace {

// -H and the Dirichlet matrix are symmetric positive definite.
using SpdSolver = Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>;

double sup_interior(const Domain& domain, const std::vector<double>& field) {
    double sup = 0.0;
    for (int node : domain.interior_nodes()) sup = std::max(sup, std::abs(field[node]));
    return sup;
}

double residual_of(const AreaFunctional& area, std::span<const double> u, std::vector<double>& grad, Exec exec) {
    area.gradient(u, grad, exec);
    double sup = 0.0;
    for (int node : area.domain().interior_nodes()) {
        sup = std::max(sup, std::abs(area.divergence_from_gradient(node, grad[node])));
    }
    return sup;
}

// Central-difference spacelike margin over interior nodes.
double nodal_margin(const Domain& domain, const MetricSpec& metric, std::span<const double> u) {
    const Grid& g = domain.grid();
    const int nx = g.nx();
    double margin = std::numeric_limits<double>::infinity();
    for (int node : domain.interior_nodes()) {
        const int i = node % nx;
        const int j = node / nx;
        const double ux = (u[node + 1] - u[node - 1]) / (2.0 * g.hx());
        const double uy = (u[node + nx] - u[node - nx]) / (2.0 * g.hy());
        const double m = 1.0 - (ux * ux + uy * uy) / metric.conformal_scale(g.x(i), g.y(j));
        if (std::isnan(m)) return -std::numeric_limits<double>::infinity();
        margin = std::min(margin, m);
    }
    return margin;
}

struct Workspace {
    Eigen::SparseMatrix<double> hessian;
    SpdSolver solver;
    bool analyzed = false;
    bool factor_current = false;  // factorisation of -H at the current iterate
    bool factor_valid = false;    // some factorisation is available
    int factorisations = 0;
};

// A stale factorisation is kept while it still contracts the residual at
// least this much per step (chord Newton); otherwise the Hessian is rebuilt.
constexpr double kChordContraction = 0.5;

// Relative rounding band of the summed area below which changes are noise.
constexpr double kAreaRoundoff = 1e-13;

struct StageOutcome {
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> area_history;
    double min_margin = 1.0;
};

void refactorise(const AreaFunctional& area, std::span<const double> u, const SolverSettings& settings,
                 Workspace& ws, double residual, int iterations) {
    if (!ws.analyzed) {
        ws.hessian = area.hessian(u, settings.exec);
    } else {
        area.hessian_values(u, ws.hessian, settings.exec);
    }
    // Maximisation: solve (-H) delta = grad A.
    const Eigen::SparseMatrix<double> negated = -ws.hessian;
    if (!ws.analyzed) {
        ws.solver.analyzePattern(negated);
        ws.analyzed = true;
    }
    ws.solver.factorize(negated);
    if (ws.solver.info() != Eigen::Success) {
        throw SolverFailure("Hessian factorisation failed", residual, iterations);
    }
    ws.factor_current = true;
    ws.factor_valid = true;
    ++ws.factorisations;
}

// Damped Newton on one boundary-data stage. `u` holds the start and the result.
StageOutcome newton_stage(const AreaFunctional& area, const MetricSpec& metric, std::vector<double>& u,
                          double tol, int max_iters, const SolverSettings& settings, Workspace& ws) {
    const Domain& domain = area.domain();
    const auto& interior = domain.interior_nodes();
    const int n = static_cast<int>(interior.size());
    std::vector<double> grad(u.size(), 0.0);
    std::vector<double> trial(u.size());
    std::vector<double> trial_grad(u.size(), 0.0);

    StageOutcome out;
    out.residual = residual_of(area, u, grad, settings.exec);
    double current_area = area.value(u, settings.exec);
    out.area_history.push_back(current_area);
    out.min_margin = area.min_cell_margin(u, settings.exec);
    ws.factor_current = false;

    Eigen::VectorXd rhs(n);
    while (out.residual > tol) {
        if (out.iterations >= max_iters) {
            std::ostringstream msg;
            msg << "Newton did not converge in " << max_iters << " iterations (residual " << out.residual << ")";
            throw SolverFailure(msg.str(), out.residual, out.iterations);
        }
        if (!ws.factor_valid) refactorise(area, u, settings, ws, out.residual, out.iterations);
        for (int k = 0; k < n; ++k) rhs[k] = grad[interior[k]];
        const Eigen::VectorXd delta = ws.solver.solve(rhs);

        double step = 1.0;
        bool accepted = false;
        bool guard_ever_held = false;
        const double previous_residual = out.residual;
        for (int bt = 0; bt <= settings.max_backtracks; ++bt, step *= 0.5) {
            trial = u;
            for (int k = 0; k < n; ++k) trial[interior[k]] += step * delta[k];
            const double cell_margin = area.min_cell_margin(trial, settings.exec);
            if (cell_margin < settings.spacelike_guard) continue;
            if (nodal_margin(domain, metric, trial) < settings.spacelike_guard) continue;
            guard_ever_held = true;
            const double trial_area = area.value(trial, settings.exec);
            const double trial_residual = residual_of(area, trial, trial_grad, settings.exec);
            // Area may not drop beyond summation rounding; within that band a
            // smaller residual is progress.
            const bool area_kept = trial_area >= current_area - kAreaRoundoff * std::abs(current_area);
            if (area_kept && (trial_area > current_area || trial_residual < out.residual)) {
                u.swap(trial);
                grad.swap(trial_grad);
                current_area = trial_area;
                out.residual = trial_residual;
                out.min_margin = std::min(out.min_margin, cell_margin);
                accepted = true;
                break;
            }
        }
        if (!accepted && !ws.factor_current) {
            // The stale factorisation gave a poor direction: retry with a fresh one.
            refactorise(area, u, settings, ws, out.residual, out.iterations);
            continue;
        }
        ++out.iterations;
        if (!accepted) {
            if (!guard_ever_held) {
                throw SpacelikeBreakdown("every damped Newton step leaves the spacelike set; boundary data too steep?");
            }
            throw SolverFailure("no damped Newton step improves the area or the residual", out.residual,
                                out.iterations);
        }
        out.area_history.push_back(current_area);
        ws.factor_current = false;
        if (out.residual > kChordContraction * previous_residual) ws.factor_valid = false;
    }
    return out;
}

}  // namespace

GraphFunction make_graph(std::shared_ptr<const Domain> domain, const MetricSpec& metric, std::vector<double> u) {
    const Grid& g = domain->grid();
    if (u.size() != g.node_count()) throw DomainError("graph values do not match the grid");
    GraphFunction out;
    out.u = std::move(u);
    out.grad_u.assign(g.node_count(), {0.0, 0.0});
    const int nx = g.nx();
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < nx; ++i) {
            const int node = g.index(i, j);
            if (domain->depth(node) < 1) continue;
            out.grad_u[node] = {(out.u[node + 1] - out.u[node - 1]) / (2.0 * g.hx()),
                                (out.u[node + nx] - out.u[node - nx]) / (2.0 * g.hy())};
        }
    }
    out.spacelike_margin = nodal_margin(*domain, metric, out.u);
    out.domain = std::move(domain);
    return out;
}

std::vector<double> harmonic_extension(const MetricSpec& metric, std::shared_ptr<const Domain> domain,
                                       std::span<const double> boundary) {
    const AreaFunctional energy(domain, metric, AreaFunctional::Kind::dirichlet);
    std::vector<double> u(boundary.begin(), boundary.end());
    for (int node : domain->interior_nodes()) u[node] = 0.0;
    std::vector<double> grad(u.size(), 0.0);
    energy.gradient(u, grad, Exec::parallel);
    const Eigen::SparseMatrix<double> k = energy.hessian(u, Exec::parallel);
    SpdSolver solver(k);
    if (solver.info() != Eigen::Success) throw SolverFailure("harmonic extension factorisation failed", 0.0, 0);
    const auto& interior = domain->interior_nodes();
    Eigen::VectorXd rhs(interior.size());
    for (std::size_t i = 0; i < interior.size(); ++i) rhs[i] = -grad[interior[i]];
    const Eigen::VectorXd x = solver.solve(rhs);
    for (std::size_t i = 0; i < interior.size(); ++i) u[interior[i]] = x[i];
    // One refinement step: the correction is small, so its own rounding is
    // negligible and affine data comes back affine to the last bit.
    energy.gradient(u, grad, Exec::parallel);
    for (std::size_t i = 0; i < interior.size(); ++i) rhs[i] = -grad[interior[i]];
    const Eigen::VectorXd dx = solver.solve(rhs);
    for (std::size_t i = 0; i < interior.size(); ++i) u[interior[i]] += dx[i];
    return u;
}

SolveResult solve_maximal_graph(const MetricSpec& metric, std::shared_ptr<const Domain> domain,
                                std::span<const double> boundary, const SolverSettings& settings) {
    if (!(settings.residual_tol > 0.0)) throw ConfigError("residual_tol must be positive");
    if (!(settings.spacelike_guard > 0.0 && settings.spacelike_guard < 1.0)) {
        throw ConfigError("spacelike guard must lie in (0, 1)");
    }
    if (boundary.size() != domain->grid().node_count()) throw DomainError("boundary data does not match the grid");

    const AreaFunctional area(domain, metric, AreaFunctional::Kind::area);
    const std::vector<double> harmonic = harmonic_extension(metric, domain, boundary);

    auto guard_holds = [&](const std::vector<double>& v) {
        return area.min_cell_margin(v, settings.exec) >= settings.spacelike_guard &&
               nodal_margin(*domain, metric, v) >= settings.spacelike_guard;
    };
    auto scaled = [](const std::vector<double>& v, double factor) {
        std::vector<double> out(v);
        for (double& x : out) x *= factor;
        return out;
    };

    // Largest scale t = 2^-k at which the harmonic extension respects the guard.
    double t = 1.0;
    while (!guard_holds(scaled(harmonic, t))) {
        t *= 0.5;
        if (t < 1e-6) throw SpacelikeBreakdown("harmonic extension is not spacelike at any scale");
    }

    SolveStats stats;
    Workspace ws;
    std::vector<double> u = scaled(harmonic, t);
    stats.stages = 0;
    stats.min_margin_seen = std::numeric_limits<double>::infinity();
    // Intermediate stages only need to land inside the Newton basin of the next one.
    const double stage_tol = std::max(settings.residual_tol, 1e-4);
    {
        std::vector<double> grad(u.size());
        stats.initial_residual = residual_of(area, u, grad, settings.exec);
    }

    for (;;) {
        const bool final_stage = t >= 1.0;
        StageOutcome stage = newton_stage(area, metric, u, final_stage ? settings.residual_tol : stage_tol,
                                          settings.max_newton_iters, settings, ws);
        ++stats.stages;
        stats.newton_iterations += stage.iterations;
        stats.factorisations = ws.factorisations;
        stats.min_margin_seen = std::min(stats.min_margin_seen, stage.min_margin);
        if (final_stage) {
            stats.final_residual = stage.residual;
            stats.area_history = std::move(stage.area_history);
            break;
        }
        // Grow the data scale; shrink the increment while the rescaled start
        // violates the guard.
        auto rescaled = [&](double target) {
            std::vector<double> out = scaled(u, target / t);
            for (std::size_t node = 0; node < out.size(); ++node) {
                if (domain->kind(static_cast<int>(node)) == NodeKind::boundary) out[node] = target * boundary[node];
            }
            return out;
        };
        double next = std::min(1.0, 2.0 * t);
        std::vector<double> start = rescaled(next);
        while (!guard_holds(start)) {
            next = t + 0.5 * (next - t);
            if (next - t < 1e-6) throw SpacelikeBreakdown("continuation stalled: boundary data too steep");
            start = rescaled(next);
        }
        u.swap(start);
        t = next;
    }

    SolveResult result{make_graph(domain, metric, std::move(u)), std::move(stats)};
    return result;
}

std::vector<double> divergence_field(const GraphFunction& g, const MetricSpec& metric, Exec exec) {
    const AreaFunctional area(g.domain, metric, AreaFunctional::Kind::area);
    std::vector<double> grad(g.u.size(), 0.0);
    area.gradient(g.u, grad, exec);
    std::vector<double> div(g.u.size(), 0.0);
    for (int node : g.domain->interior_nodes()) div[node] = area.divergence_from_gradient(node, grad[node]);
    return div;
}

double pde_residual(const GraphFunction& g, const MetricSpec& metric, Exec exec) {
    return sup_interior(*g.domain, divergence_field(g, metric, exec));
}

std::vector<double> mean_curvature_of_graph(const GraphFunction& g, const MetricSpec& metric, Exec exec) {
    std::vector<double> h = divergence_field(g, metric, exec);
    for (double& v : h) v *= 0.5;
    return h;
}

}  // namespace maxlab
