#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include <gtest/gtest.h>

#include "catenoid_oracle.hpp"
#include "maxlab/boundary_data.hpp"
#include "maxlab/error.hpp"
#include "maxlab/estimate.hpp"

using namespace maxlab;

namespace {

constexpr double kPi = std::numbers::pi;

// Solved surface plus the machinery the engine borrows.
struct Pipeline {
    MetricSpec metric;
    std::shared_ptr<const Domain> domain;
    SolveResult solved;
    SurfaceGeometry geom;
    TriMesh mesh;

    Pipeline(MetricKind kind, double parameter, Chart chart, DomainShape shape, int n, const std::string& data,
             std::vector<double> params)
        : metric(kind, chart, parameter), domain(std::make_shared<const Domain>(Grid(chart, n, n), shape)) {
        solved = solve_maximal_graph(metric, domain, BoundaryFunction::from_catalog(data, params).sample(*domain));
        geom = compute_geometry(solved.graph, metric);
        mesh = triangulate(solved.graph, metric);
    }

    int node(double x, double y) const { return domain->grid().nearest_node(x, y); }
};

const Chart kSquare{-1, 1, -1, 1};
const Chart kSphereChart{-2, 2, -2, 2};

}  // namespace

TEST(Constants, CrAtOneAndRootTwo) {
    EXPECT_NEAR(c_r(1.0), 4.0 * kPi, 1e-12);
    const double s = std::sqrt(2.0);
    EXPECT_NEAR(c_r(s), 9.0 * kPi * kPi / (4.0 * s * std::atan(s)), 1e-12);
    EXPECT_NEAR(c_r(s), 16.436900762822, 1e-10);
    EXPECT_THROW(c_r(0.99), DomainError);
}

TEST(Constants, PhiValues) {
    EXPECT_NEAR(phi(-1.0), kPi / 8.0, 1e-12);
    EXPECT_NEAR(phi(-2.0), 4.0 * std::atan(2.0) / 25.0, 1e-15);
    EXPECT_NEAR(phi(-2.0), 0.177144, 1e-6);
    EXPECT_GT(phi(-1.0), phi(-1.5));
    EXPECT_GT(phi(-1.5), phi(-2.0));
}

TEST(Constants, MonotonicityOnDenseSamples) {
    int cr_violations = 0, phi_violations = 0;
    double previous_cr = c_r(1.0), previous_phi = phi(-50.0);
    for (int k = 1; k < 1000; ++k) {
        const double alpha = 1.0 + 20.0 * k / 999.0;
        const double s = -50.0 + 49.0 * k / 999.0;
        if (!(c_r(alpha) > previous_cr)) ++cr_violations;
        if (!(phi(s) > previous_phi)) ++phi_violations;
        previous_cr = c_r(alpha);
        previous_phi = phi(s);
    }
    EXPECT_EQ(cr_violations, 0);
    EXPECT_EQ(phi_violations, 0);
}

TEST(Constants, FieldExpressionOfPsiLaplacian) {
    // Flat M: the expression collapses to phi(Theta) |A|^2.
    EXPECT_EQ(psi_laplacian_from_fields(-1.3, 0.4, 0.0), phi(-1.3) * 0.4);
    // Slice: Theta = -1 kills the curvature term.
    EXPECT_EQ(psi_laplacian_from_fields(-1.0, 0.0, 1.0), 0.0);
    const double t = -2.0, a = 0.5, k = 0.7;
    const double expected = 2.0 * t * std::atan(t) / 25.0 * a + 3.0 * t * std::atan(t) / 5.0 * k;
    EXPECT_NEAR(psi_laplacian_from_fields(t, a, k), expected, 1e-15);
}

TEST(Corollary2, SyntheticAndUndefined) {
    EstimateReport rep;
    rep.r = 0.2;
    rep.c_r = 4.0 * kPi;
    rep.L_r = 1.3;
    rep.lhs = rep.c_r * rep.L_r / rep.r;
    const auto [cr, rmax] = corollary2_bound(rep);
    EXPECT_NEAR(cr, 1.0, 1e-15);
    EXPECT_NEAR(rmax, 0.2 * std::exp(1.0), 1e-15);
    rep.lhs = 0.0;
    EXPECT_THROW(corollary2_bound(rep), UndefinedBound);
}

TEST(SweepPairs, NinePairsScaledToRadius) {
    const auto pairs = standard_sweep_pairs(2.0);
    ASSERT_EQ(pairs.size(), 9u);
    EXPECT_DOUBLE_EQ(pairs.front().first, 0.3);
    EXPECT_DOUBLE_EQ(pairs.front().second, 0.45);
    EXPECT_DOUBLE_EQ(pairs.back().first, 0.7);
    EXPECT_DOUBLE_EQ(pairs.back().second, 2.1);
}

TEST(Theorem1, TiltedPlaneHasZeroIntegral) {
    const Pipeline s(MetricKind::flat, 0.0, kSquare, DomainShape{}, 65, "affine", {0.0, 0.6, 0.0});
    EstimateEngine engine(s.geom, s.mesh);
    const int p = s.node(0, 0);
    const EstimateReport rep = engine.theorem1_check(p, 0.2, 0.4);
    EXPECT_NEAR(rep.alpha_r, 1.25, 1e-12);
    EXPECT_LE(std::abs(rep.lhs), 1e-10);
    EXPECT_GT(rep.rhs, 0.0);
    EXPECT_GT(rep.slack, 0.0);
    EXPECT_FALSE(rep.C_r.has_value());
    EXPECT_TRUE(rep.lemma_holds());
    for (const auto& row : engine.rigidity_asymptotics(p, 0.1, {0.2, 0.3, 0.5})) EXPECT_LE(std::abs(row.lhs), 1e-10);
    EXPECT_EQ(rigidity_probe(s.geom), Rigidity::totally_geodesic_nonslice);
}

TEST(Theorem1, SphereSlice) {
    const Pipeline s(MetricKind::sphere, 0.0, kSphereChart, DomainShape{}, 65, "constant", {0.7});
    EstimateEngine engine(s.geom, s.mesh);
    const EstimateReport rep = engine.theorem1_check(s.node(0, 0), 0.3, 0.6);
    EXPECT_EQ(rep.alpha_r, 1.0);
    EXPECT_NEAR(rep.c_r, 4.0 * kPi, 1e-12);
    EXPECT_EQ(rep.lhs, 0.0);
    EXPECT_NEAR(rep.rhs, 4.0 * kPi * rep.L_r / (0.3 * std::log(2.0)), 1e-12);
    EXPECT_EQ(rep.lemma_lhs, 0.0);
    EXPECT_GT(rep.lemma_rhs, 0.0);
    EXPECT_EQ(rep.eq17_min_margin, 0.0);
    EXPECT_EQ(rigidity_probe(s.geom), Rigidity::totally_geodesic_slice);
}

TEST(Theorem1, ArgumentsValidated) {
    const Pipeline s(MetricKind::flat, 0.0, kSquare, DomainShape{}, 33, "constant", {0.0});
    EstimateEngine engine(s.geom, s.mesh);
    EXPECT_THROW(engine.theorem1_check(s.node(0, 0), 0.3, 0.2), DomainError);
    EXPECT_THROW(engine.theorem1_check(s.node(0, 0), 0.3, 0.95), ContainmentError);
}

TEST(Eq17, FlatMetricIsExactEquality) {
    const Pipeline s(MetricKind::flat, 0.0, kSquare, DomainShape{}, 65, "polynomial", {1, 0, 0.1, 0, 2, 0.05});
    const EstimateEngine engine(s.geom, s.mesh);
    const auto margins = engine.eq17_margins();
    for (std::size_t k = 0; k < margins.size(); ++k) {
        if (!std::isnan(margins[k])) EXPECT_EQ(margins[k], 0.0);
    }
}

TEST(Eq17, SpherePerturbedIsStrictlyPositiveWhereTilted) {
    const Pipeline s(MetricKind::sphere, 0.0, kSphereChart, DomainShape{}, 65, "polynomial",
                     {0, 0, 0.7, 1, 0, 0.1, 1, 1, 0.05});
    const EstimateEngine engine(s.geom, s.mesh);
    const auto margins = engine.eq17_margins();
    for (std::size_t k = 0; k < margins.size(); ++k) {
        if (std::isnan(margins[k])) continue;
        EXPECT_GE(margins[k], 0.0);
        if (s.geom.theta[k] < -1.0 - 1e-9) EXPECT_GT(margins[k], 0.0);
    }
    EXPECT_EQ(rigidity_probe(s.geom), Rigidity::non_totally_geodesic);
}

TEST(Theorem1, CatenoidMatchesOracle) {
    const Pipeline s(MetricKind::flat, 0.0, Chart{-3, 3, -3, 3},
                     DomainShape{DomainShape::Kind::annulus, 0, 0, 0.5, 3.0}, 257, "radial-asinh", {1.0});
    EstimateEngine engine(s.geom, s.mesh, EstimateTolerances{0.05, 10.0, ReportRegion{2, 0.5}});
    const int p = s.node(1.5, 0.0);
    const EstimateReport rep = engine.theorem1_check(p, 0.2, 0.4);
    const oracle::CatenoidDisc exact(1.5);
    EXPECT_NEAR(rep.lhs / exact.a_norm_integral(0.2), 1.0, 0.02);
    EXPECT_NEAR(rep.L_r / exact.circle_length(0.2), 1.0, 0.02);
    // alpha is the closed form at the smallest rho reached, up to one spacing.
    const double rho = exact.min_rho(0.2);
    EXPECT_NEAR(rep.alpha_r, std::sqrt(rho * rho + 1.0) / rho, 0.02);
    EXPECT_GT(rep.slack, 0.0);
    EXPECT_TRUE(rep.lemma_holds());
    EXPECT_GE(rep.eq17_min_margin, 0.0);
    ASSERT_TRUE(rep.C_r.has_value());
    EXPECT_LE(rep.R, *rep.R_max);
    // C_r is in the thousands here, so R_max overflows to infinity.
    if (std::isfinite(*rep.R_max)) {
        EXPECT_NEAR(*rep.R_max, rep.r * std::exp(*rep.C_r), 1e-12 * *rep.R_max);
    } else {
        EXPECT_GT(*rep.C_r, std::log(std::numeric_limits<double>::max()) - std::log(rep.r));
    }
    EXPECT_EQ(rigidity_probe(s.geom), Rigidity::non_totally_geodesic);
    EXPECT_LT(rep.psi_laplacian_gap, 0.05);
}
