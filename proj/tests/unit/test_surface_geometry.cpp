#include <cmath>
#include <memory>
#include <numbers>

#include <gtest/gtest.h>

#include "maxlab/boundary_data.hpp"
#include "maxlab/error.hpp"
#include "maxlab/maximal_solver.hpp"
#include "maxlab/surface_geometry.hpp"

using namespace maxlab;

namespace {

const Chart kSquare{-1.0, 1.0, -1.0, 1.0};
const Chart kCatenoidChart{-3.0, 3.0, -3.0, 3.0};
const DomainShape kRing{DomainShape::Kind::annulus, 0.0, 0.0, 0.5, 3.0};

GraphFunction graph_of(std::shared_ptr<const Domain> d, const MetricSpec& m, double (*f)(double, double)) {
    const Grid& g = d->grid();
    std::vector<double> u(g.node_count(), 0.0);
    for (int n = 0; n < static_cast<int>(u.size()); ++n) {
        if (d->is_active(n)) u[n] = f(g.x(g.col(n)), g.y(g.row(n)));
    }
    return make_graph(d, m, std::move(u));
}

double zero(double, double) { return 0.0; }
double slice(double, double) { return 0.7; }
double tilted(double x, double) { return 0.6 * x; }
double catenoid(double x, double y) { return std::asinh(std::hypot(x, y)); }

// Catenoid solved on a grid with nodes at rho = 1, 1.5, 2 on the x axis.
class Catenoid : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        metric_ = std::make_unique<MetricSpec>(MetricKind::flat, kCatenoidChart);
        domain_ = std::make_shared<const Domain>(Grid(kCatenoidChart, 241, 241), kRing);
        const auto data = BoundaryFunction::from_catalog("radial-asinh", {1.0}).sample(*domain_);
        solved_ = std::make_unique<SolveResult>(solve_maximal_graph(*metric_, domain_, data));
        geom_ = std::make_unique<SurfaceGeometry>(compute_geometry(solved_->graph, *metric_));
    }
    static void TearDownTestSuite() {
        geom_.reset();
        solved_.reset();
        domain_.reset();
        metric_.reset();
    }
    static int node_at(double x) { return domain_->grid().nearest_node(x, 0.0); }

    static std::unique_ptr<MetricSpec> metric_;
    static std::shared_ptr<const Domain> domain_;
    static std::unique_ptr<SolveResult> solved_;
    static std::unique_ptr<SurfaceGeometry> geom_;
};

std::unique_ptr<MetricSpec> Catenoid::metric_;
std::shared_ptr<const Domain> Catenoid::domain_;
std::unique_ptr<SolveResult> Catenoid::solved_;
std::unique_ptr<SurfaceGeometry> Catenoid::geom_;

}  // namespace

TEST(InducedMetric, FlatZeroIsIdentity) {
    const MetricSpec flat(MetricKind::flat, kSquare);
    const auto d = std::make_shared<const Domain>(Grid(kSquare, 17, 17), DomainShape{});
    const auto g = induced_metric(graph_of(d, flat, zero), flat);
    for (int n : d->interior_nodes()) {
        EXPECT_EQ(g[n].xx, 1.0);
        EXPECT_EQ(g[n].xy, 0.0);
        EXPECT_EQ(g[n].yy, 1.0);
    }
}

TEST(InducedMetric, TiltedPlane) {
    const MetricSpec flat(MetricKind::flat, kSquare);
    const auto d = std::make_shared<const Domain>(Grid(kSquare, 17, 17), DomainShape{});
    const auto g = induced_metric(graph_of(d, flat, tilted), flat);
    for (int n : d->interior_nodes()) {
        EXPECT_NEAR(g[n].xx, 0.64, 1e-14);
        EXPECT_NEAR(g[n].xy, 0.0, 1e-14);
        EXPECT_NEAR(g[n].yy, 1.0, 1e-14);
    }
}

TEST(InducedMetric, NonSpacelikeNodeThrows) {
    const MetricSpec flat(MetricKind::flat, kSquare);
    const auto d = std::make_shared<const Domain>(Grid(kSquare, 17, 17), DomainShape{});
    EXPECT_THROW(induced_metric(graph_of(d, flat, [](double x, double) { return 1.2 * x; }), flat), GeometryError);
}

TEST(GaussMap, SliceAndTiltedPlane) {
    const MetricSpec sphere(MetricKind::sphere, kSquare);
    const MetricSpec flat(MetricKind::flat, kSquare);
    const auto d = std::make_shared<const Domain>(Grid(kSquare, 17, 17), DomainShape{});
    const auto t_slice = gauss_map_theta(graph_of(d, sphere, slice), sphere);
    const auto t_tilt = gauss_map_theta(graph_of(d, flat, tilted), flat);
    for (int n : d->interior_nodes()) {
        EXPECT_EQ(t_slice[n], -1.0);
        EXPECT_NEAR(t_tilt[n], -1.25, 1e-14);
    }
}

TEST(ShapeOperator, TotallyGeodesicCasesVanish) {
    const MetricSpec sphere(MetricKind::sphere, kSquare);
    const MetricSpec flat(MetricKind::flat, kSquare);
    const auto d = std::make_shared<const Domain>(Grid(kSquare, 17, 17), DomainShape{});
    const auto a_slice = shape_operator(graph_of(d, sphere, slice), sphere);
    const auto a_tilt = shape_operator(graph_of(d, flat, tilted), flat);
    for (int n : d->interior_nodes()) {
        EXPECT_NEAR(a_norm_sq(a_slice[n]), 0.0, 1e-24);
        EXPECT_NEAR(a_norm_sq(a_tilt[n]), 0.0, 1e-24);
    }
}

TEST(Identities, SliceResidualsVanish) {
    const MetricSpec sphere(MetricKind::sphere, kSquare);
    const auto d = std::make_shared<const Domain>(Grid(kSquare, 33, 33), DomainShape{});
    const SurfaceGeometry geom = compute_geometry(graph_of(d, sphere, slice), sphere);
    const IdentityReport ids = identity_checks(geom);
    EXPECT_EQ(ids.gradient_theta.sup, 0.0);
    EXPECT_EQ(ids.norm_gradient_theta.sup, 0.0);
    EXPECT_LE(ids.laplacian_theta.sup, 1e-14);
    EXPECT_EQ(ids.t_top_norm.sup, 0.0);
}

TEST(Identities, TiltedPlaneLaplacianIdentityIsTrivial) {
    const MetricSpec flat(MetricKind::flat, kSquare);
    const auto d = std::make_shared<const Domain>(Grid(kSquare, 33, 33), DomainShape{});
    const SurfaceGeometry geom = compute_geometry(graph_of(d, flat, tilted), flat);
    const IdentityReport ids = identity_checks(geom);
    EXPECT_LE(ids.laplacian_theta.sup, 1e-10);
    EXPECT_LE(ids.t_top_norm.sup, 1e-14);
}

TEST(GaussCurvature, SphereSliceIsOneBothWays) {
    const MetricSpec sphere(MetricKind::sphere, Chart{-2, 2, -2, 2});
    const auto d = std::make_shared<const Domain>(Grid(Chart{-2, 2, -2, 2}, 129, 129), DomainShape{});
    const GraphFunction g = graph_of(d, sphere, slice);
    const GaussCurvatureComparison k = gauss_curvature_sigma(compute_geometry(g, sphere), g, sphere);
    for (int n = 0; n < static_cast<int>(k.intrinsic.size()); ++n) {
        if (d->depth(n) < 2) continue;
        EXPECT_NEAR(k.from_gauss_equation[n], 1.0, 1e-12);
        EXPECT_NEAR(k.intrinsic[n], 1.0, 2e-3);
    }
}

TEST(GaussCurvature, FlatSliceIsZeroBothWays) {
    const MetricSpec flat(MetricKind::flat, kSquare);
    const auto d = std::make_shared<const Domain>(Grid(kSquare, 17, 17), DomainShape{});
    const GraphFunction g = graph_of(d, flat, zero);
    const GaussCurvatureComparison k = gauss_curvature_sigma(compute_geometry(g, flat), g, flat);
    EXPECT_EQ(k.sup_difference, 0.0);
}

TEST(GaussCurvature, RefusesNonMaximalGraph) {
    const MetricSpec flat(MetricKind::flat, kSquare);
    const auto d = std::make_shared<const Domain>(Grid(kSquare, 17, 17), DomainShape{});
    const GraphFunction g = graph_of(d, flat, [](double x, double y) { return 0.3 * (x * x + y * y); });
    EXPECT_THROW(gauss_curvature_sigma(compute_geometry(g, flat), g, flat), GeometryError);
}

TEST(LaplaceBeltrami, ConformalSliceIsScaledFlatLaplacian) {
    const Chart chart{-2, 2, -2, 2};
    const MetricSpec sphere(MetricKind::sphere, chart);
    std::vector<double> errors;
    for (int n : {65, 129}) {
        const auto d = std::make_shared<const Domain>(Grid(chart, n, n), DomainShape{});
        const SurfaceGeometry geom = compute_geometry(graph_of(d, sphere, slice), sphere);
        const Grid& g = d->grid();
        std::vector<double> f(g.node_count());
        for (int k = 0; k < static_cast<int>(f.size()); ++k) {
            const double x = g.x(g.col(k)), y = g.y(g.row(k));
            f[k] = x * x + std::sin(y);
        }
        const auto lap = laplace_beltrami(geom, f, Exec::serial);
        const auto lap_par = laplace_beltrami(geom, f, Exec::parallel);
        double err = 0.0;
        for (int k = 0; k < static_cast<int>(f.size()); ++k) {
            if (d->depth(k) < 2) continue;
            EXPECT_EQ(lap[k], lap_par[k]);
            // The order is measured on a fixed region.
            if (d->clearance(k) < 0.25) continue;
            const double x = g.x(g.col(k)), y = g.y(g.row(k));
            const double exact = (2.0 - std::sin(y)) / sphere.conformal_scale(x, y);
            err = std::max(err, std::abs(lap[k] - exact));
        }
        errors.push_back(err);
    }
    EXPECT_GT(std::log2(errors[0] / errors[1]), 1.8);
}

TEST_F(Catenoid, InducedMetricOnTheAxis) {
    for (double rho : {1.0, 1.5, 2.0}) {
        const SymTensor2& g = geom_->induced_g[node_at(rho)];
        EXPECT_NEAR(g.xx, rho * rho / (rho * rho + 1.0), 1e-3);
        // Symmetric only up to the solver tolerance.
        EXPECT_NEAR(g.xy, 0.0, 1e-8);
        EXPECT_NEAR(g.yy, 1.0, 1e-3);
    }
}

TEST_F(Catenoid, ThetaAndShapeOperator) {
    EXPECT_NEAR(geom_->theta[node_at(1.0)], -std::sqrt(2.0), 1e-3);
    EXPECT_NEAR(geom_->a_norm_sq[node_at(1.0)], 2.0, 1e-2);
    EXPECT_NEAR(geom_->a_norm_sq[node_at(2.0)], 0.125, 1e-3);
}

TEST_F(Catenoid, GaussCurvatureBothWays) {
    const GaussCurvatureComparison k = gauss_curvature_sigma(*geom_, solved_->graph, *metric_);
    for (double rho : {1.0, 1.5, 2.0}) {
        const int n = node_at(rho);
        const double exact = 1.0 / std::pow(rho, 4);
        EXPECT_NEAR(k.from_gauss_equation[n], exact, 1e-2 * exact);
        EXPECT_NEAR(k.intrinsic[n], exact, 1e-2 * exact);
    }
}

TEST_F(Catenoid, NormGradientIdentityAtUnitRadius) {
    const IdentityReport ids = identity_checks(*geom_);
    EXPECT_LT(std::abs(ids.norm_gradient_theta.residual[node_at(1.0)]), 1e-2);
    EXPECT_LT(std::abs(ids.gradient_theta.residual[node_at(1.0)]), 1e-2);
}

TEST_F(Catenoid, PointwiseInvariants) {
    const auto H = mean_curvature_of_graph(solved_->graph, *metric_);
    for (int n = 0; n < static_cast<int>(geom_->theta.size()); ++n) {
        if (!geom_->valid(n)) continue;
        const double t = geom_->theta[n];
        EXPECT_LE(t, -1.0);
        EXPECT_GE(t * std::atan(t), std::numbers::pi / 4.0 - 1e-15);
        EXPECT_GE(geom_->a_norm_sq[n], -1e-15);
        EXPECT_GT(geom_->induced_g[n].det(), 0.0);
        EXPECT_LE(std::abs(H[n]), 0.5e-10);
        // A lowered by g is the second fundamental form, which is symmetric.
        const SymTensor2& g = geom_->induced_g[n];
        const Tensor2& a = geom_->shape_op[n];
        const double lowered_xy = g.xx * a.xy + g.xy * a.yy;
        const double lowered_yx = g.xy * a.xx + g.yy * a.yx;
        EXPECT_NEAR(lowered_xy, lowered_yx, 1e-12);
        EXPECT_NEAR(geom_->psi[n], std::atan(t), 0.0);
    }
}

TEST_F(Catenoid, SerialAndParallelGeometryAgree) {
    const SurfaceGeometry serial = compute_geometry(solved_->graph, *metric_, Exec::serial);
    for (int n = 0; n < static_cast<int>(serial.theta.size()); ++n) {
        if (!serial.valid(n)) continue;
        EXPECT_EQ(serial.theta[n], geom_->theta[n]);
        EXPECT_EQ(serial.a_norm_sq[n], geom_->a_norm_sq[n]);
    }
    const IdentityReport a = identity_checks(*geom_, {}, Exec::serial);
    const IdentityReport b = identity_checks(*geom_, {}, Exec::parallel);
    EXPECT_EQ(a.laplacian_theta.sup, b.laplacian_theta.sup);
}

TEST_F(Catenoid, ReportRegionShrinksTheSup) {
    const IdentityReport ring = identity_checks(*geom_);
    const IdentityReport region = identity_checks(*geom_, ReportRegion{2, 0.5});
    EXPECT_LE(region.laplacian_theta.sup, ring.laplacian_theta.sup);
    EXPECT_EQ(sup_over(*domain_, ring.laplacian_theta.residual, ReportRegion{2, 0.5}), region.laplacian_theta.sup);
}
