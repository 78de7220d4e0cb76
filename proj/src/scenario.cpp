#include "maxlab/scenario.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "maxlab/boundary_data.hpp"
#include "maxlab/error.hpp"

namespace maxlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ExperimentConfig base(const std::string& name) {
    ExperimentConfig cfg;
    cfg.scenario = name;
    cfg.out_dir = "out/" + name;
    return cfg;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {"flat-plane",   "tilted-plane",     "catenoid-annulus",
                                                   "sphere-slice", "sphere-perturbed", "bump-metric-perturbed"};
    return names;
}

ExperimentConfig scenario_config(const std::string& name) {
    ExperimentConfig cfg = base(name);
    if (name == "flat-plane") {
        cfg.boundary = "constant";
        cfg.boundary_params = {0.0};
    } else if (name == "tilted-plane") {
        cfg.boundary = "affine";
        cfg.boundary_params = {0.0, 0.6, 0.0};
    } else if (name == "catenoid-annulus") {
        cfg.chart = {-3.0, 3.0, -3.0, 3.0};
        cfg.domain = {DomainShape::Kind::annulus, 0.0, 0.0, 0.5, 3.0};
        cfg.boundary = "radial-asinh";
        cfg.boundary_params = {1.0};
        cfg.resolution = 257;
        cfg.study = {129, 257, 513};
        cfg.center_x = 1.5;
        cfg.center_y = 0.0;
        // Identity residuals near the neck carry truncation constants that
        // grow like rho^-7; sup-norms are taken one inner radius away from
        // both circles so that refinement compares a fixed region.
        cfg.report_margin = 0.5;
    } else if (name == "sphere-slice") {
        cfg.metric = "sphere";
        cfg.chart = {-2.0, 2.0, -2.0, 2.0};
        cfg.boundary = "constant";
        cfg.boundary_params = {0.7};
    } else if (name == "sphere-perturbed") {
        cfg.metric = "sphere";
        cfg.chart = {-2.0, 2.0, -2.0, 2.0};
        cfg.boundary = "polynomial";
        cfg.boundary_params = {0, 0, 0.7, 1, 0, 0.1, 1, 1, 0.05};
    } else if (name == "bump-metric-perturbed") {
        cfg.metric = "bump";
        cfg.metric_params = {0.25};
        cfg.chart = {-1.2, 1.2, -1.2, 1.2};
        cfg.boundary = "polynomial";
        cfg.boundary_params = {1, 0, 0.1, 0, 2, 0.05};
    } else {
        std::string known;
        for (const auto& n : scenario_names()) known += " " + n;
        throw ConfigError("unknown scenario '" + name + "' (catalog:" + known + ")");
    }
    return cfg;
}

References references_for(const ExperimentConfig& cfg) {
    References refs;
    const BoundaryFunction data = BoundaryFunction::from_catalog(cfg.boundary, cfg.boundary_params);
    const auto& q = data.params();
    const bool flat = cfg.metric == "flat";

    // Slices are maximal in every product; affine graphs are maximal in flat
    // Minkowski space.
    if (data.kind() == BoundaryFunction::Kind::constant || (flat && data.kind() == BoundaryFunction::Kind::affine)) {
        refs.solution = data;
        refs.solution_discrete = true;
    }
    // c asinh(rho / c) is the catenoid; its data must stay away from the axis.
    if (flat && data.kind() == BoundaryFunction::Kind::radial_asinh && cfg.domain.kind == DomainShape::Kind::annulus &&
        cfg.domain.inner_radius > 0.0) {
        const double x0 = q.size() == 3 ? q[1] : 0.0;
        const double y0 = q.size() == 3 ? q[2] : 0.0;
        if (x0 == cfg.domain.center_x && y0 == cfg.domain.center_y) {
            refs.solution = data;
            const double c = q[0];
            // Meridians are geodesics with arclength sqrt(rho^2 + c^2).
            refs.distance = [c, x0, y0](double cx, double cy, double x, double y) {
                const double ax = cx - x0, ay = cy - y0, bx = x - x0, by = y - y0;
                const double ra = std::hypot(ax, ay), rb = std::hypot(bx, by);
                const double cross = ax * by - ay * bx;
                if (std::abs(cross) > 1e-12 * ra * rb || ax * bx + ay * by < 0.0) return kNaN;
                return std::abs(std::sqrt(rb * rb + c * c) - std::sqrt(ra * ra + c * c));
            };
        }
    }

    if (flat && data.kind() == BoundaryFunction::Kind::constant) {
        refs.distance = [](double cx, double cy, double x, double y) { return std::hypot(x - cx, y - cy); };
        refs.distance_everywhere = true;
    } else if (flat && data.kind() == BoundaryFunction::Kind::affine) {
        // Constant induced metric I - grad u grad u^T on a convex chart.
        const double a = q[1], b = q[2];
        refs.distance = [a, b](double cx, double cy, double x, double y) {
            const double dx = x - cx, dy = y - cy;
            const double along = a * dx + b * dy;
            return std::sqrt(dx * dx + dy * dy - along * along);
        };
        refs.distance_everywhere = true;
    } else if (cfg.metric == "sphere" && data.kind() == BoundaryFunction::Kind::constant) {
        // Chart coordinate w is twice the stereographic coordinate of the
        // unit sphere; the formula is the round distance, which is intrinsic
        // as long as the minimising arc stays in the chart (always the case
        // from the origin).
        refs.distance = [](double cx, double cy, double x, double y) {
            const std::complex<double> z1(cx / 2.0, cy / 2.0), z2(x / 2.0, y / 2.0);
            return 2.0 * std::atan(std::abs(z1 - z2) / std::abs(1.0 + std::conj(z1) * z2));
        };
        refs.distance_everywhere = cfg.center_x == 0.0 && cfg.center_y == 0.0;
    }
    return refs;
}

}  // namespace maxlab
