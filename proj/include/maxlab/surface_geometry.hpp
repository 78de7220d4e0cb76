#pragma once

#include <array>
#include <memory>
#include <vector>

#include "maxlab/area_functional.hpp"
#include "maxlab/chart_metric.hpp"
#include "maxlab/maximal_solver.hpp"

namespace maxlab {

struct SymTensor2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    double det() const { return xx * yy - xy * xy; }
};

/// Mixed (1,1) tensor, row index up: m[i][j] = A^i_j.
struct Tensor2 {
    double xx = 0.0;
    double xy = 0.0;
    double yx = 0.0;
    double yy = 0.0;

    double trace() const { return xx + yy; }
    /// tr(A^2)
    double trace_of_square() const { return xx * xx + 2.0 * xy * yx + yy * yy; }
};

/// Pointwise Lorentzian geometry of a graph in M x R_1 with the future
/// pointing normal (<N, d_t> < 0).
///
/// First-order fields are filled at nodes of depth >= 1 (central differences
/// of u on the 3x3 stencil); everything built from differences of those
/// fields (gradients of Theta, Laplace-Beltrami, intrinsic curvature) is
/// filled at depth >= 2. Other entries are NaN.
struct SurfaceGeometry {
    std::shared_ptr<const Domain> domain;

    std::vector<SymTensor2> induced_g;   // exp(2 lambda) delta - du du
    std::vector<double> theta;           // <N, d_t> = -1 / sqrt(1 - |Du|^2_g)
    std::vector<SymTensor2> second_form; // h_ij = <nabla-bar_{e_i} e_j, N>
    std::vector<Tensor2> shape_op;       // A = g^{-1} h
    std::vector<double> a_norm_sq;
    std::vector<double> gauss_K;         // kappa_M Theta^2 + |A|^2 / 2
    std::vector<double> mean_H;          // -tr(A) / 2
    std::vector<double> psi;             // arctan(Theta)
    std::vector<double> t_top_norm_sq;   // g(d_t^T, d_t^T) from g^{-1}
    std::vector<std::array<double, 2>> t_top; // components of d_t^T in the e_i frame
    std::vector<double> kappa_M;

    // Laplace-Beltrami coefficients sqrt(det g) g^{ij}, sqrt(det g)
    std::vector<SymTensor2> lb_coefficients;
    std::vector<double> sqrt_det;

    bool valid(int node, int min_depth = 1) const { return domain->depth(node) >= min_depth; }
};

/// Induced metric at nodes of depth >= 1. Throws GeometryError at a node that
/// is not spacelike.
std::vector<SymTensor2> induced_metric(const GraphFunction& g, const MetricSpec& metric);

/// Theta at nodes of depth >= 1.
std::vector<double> gauss_map_theta(const GraphFunction& g, const MetricSpec& metric);

/// Shape operator at nodes of depth >= 1.
std::vector<Tensor2> shape_operator(const GraphFunction& g, const MetricSpec& metric);

/// All first-order fields in one pass over the nodes.
SurfaceGeometry compute_geometry(const GraphFunction& g, const MetricSpec& metric, Exec exec = Exec::parallel);

inline double a_norm_sq(const Tensor2& a) { return a.trace_of_square(); }

/// Divergence-form Laplace-Beltrami of a node field with respect to the
/// induced metric, at nodes of depth >= 2 (NaN elsewhere). The field must be
/// finite on nodes of depth >= 1. At depth >= 3 the diagonal fluxes step by 2h
/// so that the stencil stays on one checkerboard sublattice.
std::vector<double> laplace_beltrami(const SurfaceGeometry& geom, const std::vector<double>& field,
                                     Exec exec = Exec::parallel);

/// Covariant chart derivatives (d_x f, d_y f) by central differences, depth >= 2.
std::vector<std::array<double, 2>> chart_gradient(const SurfaceGeometry& geom, const std::vector<double>& field);

/// Brioschi curvature of the induced metric by finite differences, depth >= 2.
/// Pure second derivatives step by 2h at depth >= 3.
std::vector<double> intrinsic_curvature(const SurfaceGeometry& geom);

/// Nodes entering a reported sup-norm: depth >= min_depth and chart distance
/// >= margin from the non-interior set. The default is the two-ring rule; a
/// positive margin fixes a physical region independent of the spacing, which
/// is what a convergence order needs.
struct ReportRegion {
    int min_depth = 2;
    double margin = 0.0;

    bool contains(const Domain& domain, int node) const {
        return domain.depth(node) >= min_depth && domain.clearance(node) >= margin;
    }
};

double sup_over(const Domain& domain, const std::vector<double>& field, const ReportRegion& region);

struct GaussCurvatureComparison {
    std::vector<double> from_gauss_equation;  // kappa_M Theta^2 + |A|^2 / 2
    std::vector<double> intrinsic;            // Brioschi
    std::vector<double> difference;
    double sup_difference = 0.0;              // over the report region
};

/// Both evaluations of K. Refuses (GeometryError) unless the graph is
/// maximal: sup |H| of the solver-consistent mean curvature must not exceed
/// `maximal_tol`.
GaussCurvatureComparison gauss_curvature_sigma(const SurfaceGeometry& geom, const GraphFunction& graph,
                                               const MetricSpec& metric, double maximal_tol = 1e-8,
                                               ReportRegion region = {});

struct IdentityField {
    std::vector<double> residual;
    double sup = 0.0;
};

/// Residuals of the maximal-surface identities:
///   gradient_theta       |grad Theta + A d_t^T| (induced norm)
///   norm_gradient_theta  |grad Theta|^2 - |A|^2 (Theta^2 - 1) / 2
///   laplacian_theta      Lap Theta - Theta (kappa_M (Theta^2 - 1) + |A|^2)
///   t_top_norm           |d_t^T|^2 - (Theta^2 - 1)
/// Sup-norms are taken over the report region (depth >= 2 is always required).
struct IdentityReport {
    IdentityField gradient_theta;
    IdentityField norm_gradient_theta;
    IdentityField laplacian_theta;
    IdentityField t_top_norm;
};

IdentityReport identity_checks(const SurfaceGeometry& geom, ReportRegion region = {}, Exec exec = Exec::parallel);

}  // namespace maxlab
