#include "maxlab/surface_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxlab/error.hpp"

namespace maxlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct NodeGeometry {
    SymTensor2 g;
    SymTensor2 h;
    Tensor2 shape;
    double theta;
    double t_top_norm_sq;
    std::array<double, 2> t_top;
    bool spacelike;
};

// The one-point cell scheme couples u only along cell diagonals, so the two
// checkerboard sublattices carry slightly different discrete solutions.
// Pure second differences therefore step by 2h where the depth allows, which
// keeps every stencil on one sublattice; mixed and first differences already do.
double second_difference(const double* f, int stride, double h, bool wide) {
    if (wide) return (f[2 * stride] - 2.0 * f[0] + f[-2 * stride]) / (4.0 * h * h);
    return (f[stride] - 2.0 * f[0] + f[-stride]) / (h * h);
}

// Geometry at an interior node from the stencil of u. `lam` is the conformal
// factor at the node; `wide` needs depth >= 2.
NodeGeometry evaluate_node(const double* u, int nx, double hx, double hy, const ConformalFactor& lam, bool wide) {
    const double e = u[1];
    const double w = u[-1];
    const double n = u[nx];
    const double s = u[-nx];
    const double ux = (e - w) / (2.0 * hx);
    const double uy = (n - s) / (2.0 * hy);
    const double uxx = second_difference(u, 1, hx, wide);
    const double uyy = second_difference(u, nx, hy, wide);
    const double uxy = (u[nx + 1] - u[nx - 1] - u[-nx + 1] + u[-nx - 1]) / (4.0 * hx * hy);

    NodeGeometry out{};
    const double a = std::exp(2.0 * lam.value);
    out.g = {a - ux * ux, -ux * uy, a - uy * uy};
    const double det = out.g.det();
    const double slope = (ux * ux + uy * uy) / a;
    out.spacelike = slope < 1.0 && det > 0.0;
    if (!out.spacelike) return out;

    const double root = std::sqrt(1.0 - slope);
    out.theta = -1.0 / root;

    // Hessian of u on M: u_ij - Gamma^k_ij u_k for the conformal metric.
    const double hess_xx = uxx - (lam.dx * ux - lam.dy * uy);
    const double hess_xy = uxy - (lam.dy * ux + lam.dx * uy);
    const double hess_yy = uyy - (lam.dy * uy - lam.dx * ux);
    out.h = {-hess_xx / root, -hess_xy / root, -hess_yy / root};

    const double gi_xx = out.g.yy / det;
    const double gi_xy = -out.g.xy / det;
    const double gi_yy = out.g.xx / det;
    out.shape.xx = gi_xx * out.h.xx + gi_xy * out.h.xy;
    out.shape.xy = gi_xx * out.h.xy + gi_xy * out.h.yy;
    out.shape.yx = gi_xy * out.h.xx + gi_yy * out.h.xy;
    out.shape.yy = gi_xy * out.h.xy + gi_yy * out.h.yy;

    // <d_t^T, e_j> = <d_t, e_j> = -u_j
    out.t_top = {-(gi_xx * ux + gi_xy * uy), -(gi_xy * ux + gi_yy * uy)};
    out.t_top_norm_sq = -(out.t_top[0] * ux + out.t_top[1] * uy);
    return out;
}

template <typename T>
void fill_nan(std::vector<T>& v, std::size_t n);

template <>
void fill_nan(std::vector<double>& v, std::size_t n) {
    v.assign(n, kNaN);
}
template <>
void fill_nan(std::vector<SymTensor2>& v, std::size_t n) {
    v.assign(n, {kNaN, kNaN, kNaN});
}
template <>
void fill_nan(std::vector<Tensor2>& v, std::size_t n) {
    v.assign(n, {kNaN, kNaN, kNaN, kNaN});
}
template <>
void fill_nan(std::vector<std::array<double, 2>>& v, std::size_t n) {
    v.assign(n, {kNaN, kNaN});
}

}  // namespace

double sup_over(const Domain& domain, const std::vector<double>& field, const ReportRegion& region) {
    double sup = 0.0;
    for (int node = 0; node < static_cast<int>(field.size()); ++node) {
        if (region.contains(domain, node)) sup = std::max(sup, std::abs(field[node]));
    }
    return sup;
}

SurfaceGeometry compute_geometry(const GraphFunction& graph, const MetricSpec& metric, Exec exec) {
    const Domain& domain = *graph.domain;
    const Grid& grid = domain.grid();
    const std::size_t count = grid.node_count();
    const int nx = grid.nx();

    SurfaceGeometry geom;
    geom.domain = graph.domain;
    fill_nan(geom.induced_g, count);
    fill_nan(geom.theta, count);
    fill_nan(geom.second_form, count);
    fill_nan(geom.shape_op, count);
    fill_nan(geom.a_norm_sq, count);
    fill_nan(geom.gauss_K, count);
    fill_nan(geom.mean_H, count);
    fill_nan(geom.psi, count);
    fill_nan(geom.t_top_norm_sq, count);
    fill_nan(geom.t_top, count);
    fill_nan(geom.kappa_M, count);
    fill_nan(geom.lb_coefficients, count);
    fill_nan(geom.sqrt_det, count);

    int bad_node = -1;
    const int total = static_cast<int>(count);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (int node = 0; node < total; ++node) {
        if (domain.depth(node) < 1) continue;
        const double x = grid.x(node % nx);
        const double y = grid.y(node / nx);
        const NodeGeometry ng = evaluate_node(graph.u.data() + node, nx, grid.hx(), grid.hy(), metric.lambda(x, y),
                                               domain.depth(node) >= 2);
        if (!ng.spacelike) {
#pragma omp critical
            bad_node = std::max(bad_node, node);
            continue;
        }
        const double kappa = metric.curvature(x, y);
        const double a2 = ng.shape.trace_of_square();
        geom.induced_g[node] = ng.g;
        geom.theta[node] = ng.theta;
        geom.second_form[node] = ng.h;
        geom.shape_op[node] = ng.shape;
        geom.a_norm_sq[node] = a2;
        geom.kappa_M[node] = kappa;
        geom.gauss_K[node] = kappa * ng.theta * ng.theta + 0.5 * a2;
        geom.mean_H[node] = -0.5 * ng.shape.trace();
        geom.psi[node] = std::atan(ng.theta);
        geom.t_top_norm_sq[node] = ng.t_top_norm_sq;
        geom.t_top[node] = ng.t_top;
        const double det = ng.g.det();
        const double root = std::sqrt(det);
        geom.sqrt_det[node] = root;
        geom.lb_coefficients[node] = {root * ng.g.yy / det, -root * ng.g.xy / det, root * ng.g.xx / det};
    }
    if (bad_node >= 0) {
        throw GeometryError("graph is not spacelike at node " + std::to_string(bad_node));
    }
    return geom;
}

std::vector<SymTensor2> induced_metric(const GraphFunction& g, const MetricSpec& metric) {
    return compute_geometry(g, metric).induced_g;
}

std::vector<double> gauss_map_theta(const GraphFunction& g, const MetricSpec& metric) {
    return compute_geometry(g, metric).theta;
}

std::vector<Tensor2> shape_operator(const GraphFunction& g, const MetricSpec& metric) {
    return compute_geometry(g, metric).shape_op;
}

std::vector<double> laplace_beltrami(const SurfaceGeometry& geom, const std::vector<double>& f, Exec exec) {
    const Domain& domain = *geom.domain;
    const Grid& grid = domain.grid();
    const int nx = grid.nx();
    const double hx = grid.hx();
    const double hy = grid.hy();
    const int total = static_cast<int>(grid.node_count());
    std::vector<double> out(total, kNaN);
    const auto& c = geom.lb_coefficients;
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (int k = 0; k < total; ++k) {
        if (domain.depth(k) < 2) continue;
        const int e = k + 1;
        const int w = k - 1;
        const int n = k + nx;
        const int s = k - nx;
        double xx;
        double yy;
        if (domain.depth(k) >= 3) {
            // node-centred coefficients at k +- 1, values at k and k +- 2
            xx = (c[e].xx * (f[k + 2] - f[k]) - c[w].xx * (f[k] - f[k - 2])) / (4.0 * hx * hx);
            yy = (c[n].yy * (f[k + 2 * nx] - f[k]) - c[s].yy * (f[k] - f[k - 2 * nx])) / (4.0 * hy * hy);
        } else {
            const double axx_e = 0.5 * (c[k].xx + c[e].xx);
            const double axx_w = 0.5 * (c[k].xx + c[w].xx);
            const double ayy_n = 0.5 * (c[k].yy + c[n].yy);
            const double ayy_s = 0.5 * (c[k].yy + c[s].yy);
            xx = (axx_e * (f[e] - f[k]) - axx_w * (f[k] - f[w])) / (hx * hx);
            yy = (ayy_n * (f[n] - f[k]) - ayy_s * (f[k] - f[s])) / (hy * hy);
        }
        const double fy_e = (f[e + nx] - f[e - nx]) / (2.0 * hy);
        const double fy_w = (f[w + nx] - f[w - nx]) / (2.0 * hy);
        const double fx_n = (f[n + 1] - f[n - 1]) / (2.0 * hx);
        const double fx_s = (f[s + 1] - f[s - 1]) / (2.0 * hx);
        const double xy = (c[e].xy * fy_e - c[w].xy * fy_w) / (2.0 * hx);
        const double yx = (c[n].xy * fx_n - c[s].xy * fx_s) / (2.0 * hy);
        out[k] = (xx + yy + xy + yx) / geom.sqrt_det[k];
    }
    return out;
}

std::vector<std::array<double, 2>> chart_gradient(const SurfaceGeometry& geom, const std::vector<double>& f) {
    const Domain& domain = *geom.domain;
    const Grid& grid = domain.grid();
    const int nx = grid.nx();
    std::vector<std::array<double, 2>> out(grid.node_count(), {kNaN, kNaN});
    for (int k = 0; k < static_cast<int>(grid.node_count()); ++k) {
        if (domain.depth(k) < 2) continue;
        out[k] = {(f[k + 1] - f[k - 1]) / (2.0 * grid.hx()), (f[k + nx] - f[k - nx]) / (2.0 * grid.hy())};
    }
    return out;
}

std::vector<double> intrinsic_curvature(const SurfaceGeometry& geom) {
    const Domain& domain = *geom.domain;
    const Grid& grid = domain.grid();
    const int nx = grid.nx();
    const double hx = grid.hx();
    const double hy = grid.hy();
    const auto& g = geom.induced_g;
    std::vector<double> out(grid.node_count(), kNaN);
    for (int k = 0; k < static_cast<int>(grid.node_count()); ++k) {
        if (domain.depth(k) < 2) continue;
        const int e = k + 1, w = k - 1, n = k + nx, s = k - nx;
        const double E = g[k].xx, F = g[k].xy, G = g[k].yy;
        const double Eu = (g[e].xx - g[w].xx) / (2 * hx);
        const double Ev = (g[n].xx - g[s].xx) / (2 * hy);
        const double Fu = (g[e].xy - g[w].xy) / (2 * hx);
        const double Fv = (g[n].xy - g[s].xy) / (2 * hy);
        const double Gu = (g[e].yy - g[w].yy) / (2 * hx);
        const double Gv = (g[n].yy - g[s].yy) / (2 * hy);
        const bool wide = domain.depth(k) >= 3;
        const double Evv = wide ? (g[k + 2 * nx].xx - 2 * E + g[k - 2 * nx].xx) / (4 * hy * hy)
                                : (g[n].xx - 2 * E + g[s].xx) / (hy * hy);
        const double Guu = wide ? (g[k + 2].yy - 2 * G + g[k - 2].yy) / (4 * hx * hx)
                                : (g[e].yy - 2 * G + g[w].yy) / (hx * hx);
        const double Fuv = (g[n + 1].xy - g[n - 1].xy - g[s + 1].xy + g[s - 1].xy) / (4 * hx * hy);

        // Brioschi formula
        const double m11 = -0.5 * Evv + Fuv - 0.5 * Guu;
        const double m12 = 0.5 * Eu;
        const double m13 = Fu - 0.5 * Ev;
        const double m21 = Fv - 0.5 * Gu;
        const double m31 = 0.5 * Gv;
        const double det1 = m11 * (E * G - F * F) - m12 * (m21 * G - F * m31) + m13 * (m21 * F - E * m31);
        const double a = 0.5 * Ev;
        const double b = 0.5 * Gu;
        const double det2 = -a * (a * G - F * b) + b * (a * F - E * b);
        const double d = E * G - F * F;
        out[k] = (det1 - det2) / (d * d);
    }
    return out;
}

GaussCurvatureComparison gauss_curvature_sigma(const SurfaceGeometry& geom, const GraphFunction& graph,
                                               const MetricSpec& metric, double maximal_tol, ReportRegion region) {
    const std::vector<double> h = mean_curvature_of_graph(graph, metric);
    double sup_h = 0.0;
    for (int node : graph.domain->interior_nodes()) sup_h = std::max(sup_h, std::abs(h[node]));
    if (sup_h > maximal_tol) {
        throw GeometryError("Gauss equation for maximal surfaces needs H = 0; sup|H| = " + std::to_string(sup_h));
    }
    GaussCurvatureComparison out;
    out.from_gauss_equation = geom.gauss_K;
    out.intrinsic = intrinsic_curvature(geom);
    out.difference.assign(out.intrinsic.size(), kNaN);
    for (std::size_t k = 0; k < out.intrinsic.size(); ++k) {
        if (geom.domain->depth(static_cast<int>(k)) >= 2) out.difference[k] = out.intrinsic[k] - out.from_gauss_equation[k];
    }
    region.min_depth = std::max(2, region.min_depth);
    out.sup_difference = sup_over(*geom.domain, out.difference, region);
    return out;
}

IdentityReport identity_checks(const SurfaceGeometry& geom, ReportRegion region, Exec exec) {
    const Domain& domain = *geom.domain;
    const std::size_t count = domain.grid().node_count();
    region.min_depth = std::max(2, region.min_depth);
    const auto dtheta = chart_gradient(geom, geom.theta);
    const auto lap = laplace_beltrami(geom, geom.theta, exec);

    IdentityReport r;
    r.gradient_theta.residual.assign(count, kNaN);
    r.norm_gradient_theta.residual.assign(count, kNaN);
    r.laplacian_theta.residual.assign(count, kNaN);
    r.t_top_norm.residual.assign(count, kNaN);
    for (std::size_t idx = 0; idx < count; ++idx) {
        const int k = static_cast<int>(idx);
        if (domain.depth(k) < 1) continue;
        const double th = geom.theta[k];
        r.t_top_norm.residual[k] = geom.t_top_norm_sq[k] - (th * th - 1.0);
        if (domain.depth(k) < 2) continue;
        const SymTensor2& g = geom.induced_g[k];
        const double det = g.det();
        const double gi_xx = g.yy / det, gi_xy = -g.xy / det, gi_yy = g.xx / det;
        const double gx = gi_xx * dtheta[k][0] + gi_xy * dtheta[k][1];
        const double gy = gi_xy * dtheta[k][0] + gi_yy * dtheta[k][1];
        const Tensor2& A = geom.shape_op[k];
        const auto& t = geom.t_top[k];
        const double rx = gx + A.xx * t[0] + A.xy * t[1];
        const double ry = gy + A.yx * t[0] + A.yy * t[1];
        r.gradient_theta.residual[k] = std::sqrt(std::max(0.0, g.xx * rx * rx + 2.0 * g.xy * rx * ry + g.yy * ry * ry));
        const double grad_norm_sq = dtheta[k][0] * gx + dtheta[k][1] * gy;
        r.norm_gradient_theta.residual[k] = grad_norm_sq - 0.5 * geom.a_norm_sq[k] * (th * th - 1.0);
        r.laplacian_theta.residual[k] = lap[k] - th * (geom.kappa_M[k] * (th * th - 1.0) + geom.a_norm_sq[k]);
    }
    r.gradient_theta.sup = sup_over(domain, r.gradient_theta.residual, region);
    r.norm_gradient_theta.sup = sup_over(domain, r.norm_gradient_theta.residual, region);
    r.laplacian_theta.sup = sup_over(domain, r.laplacian_theta.residual, region);
    r.t_top_norm.sup = sup_over(domain, r.t_top_norm.residual, region);
    return r;
}

}  // namespace maxlab
