#pragma once

#include <map>
#include <optional>
#include <vector>

#include "maxlab/geodesic.hpp"
#include "maxlab/surface_geometry.hpp"

namespace maxlab {

/// sup of cosh(theta) = -Theta over the disc vertices.
double alpha_r(const GeodesicDisc& disc, const std::vector<double>& theta);

/// pi^2 (1 + alpha^2)^2 / (4 alpha arctan(alpha)); DomainError for alpha < 1.
double c_r(double alpha);

/// 2 s arctan(s) / (1 + s^2)^2
double phi(double s);

/// psi Lap psi for psi = arctan(Theta) on a maximal surface, written through
/// the pointwise fields: phi(Theta) |A|^2 + (Theta^2 - 1) Theta arctan(Theta) kappa_M / (1 + Theta^2).
double psi_laplacian_from_fields(double theta, double a_norm_sq, double kappa_M);

/// Integrals below this are treated as zero (totally geodesic discs).
inline constexpr double kZeroIntegral = 1e-10;

struct EstimateTolerances {
    /// slack >= -ineq_relative * rhs
    double ineq_relative = 0.05;
    /// tol_pt = pointwise_factor * sup of the Laplacian identity residual
    double pointwise_factor = 10.0;
    /// Nodes over which that sup and the pointwise lemma hypothesis are taken.
    ReportRegion region{};
};

struct EstimateReport {
    int p = -1;
    double px = 0.0;
    double py = 0.0;
    double r = 0.0;
    double R = 0.0;
    double alpha_r = 1.0;
    double c_r = 0.0;
    double lhs = 0.0;
    double L_r = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    std::optional<double> C_r;
    std::optional<double> R_max;
    double lemma_lhs = 0.0;
    double lemma_rhs = 0.0;
    /// Lemma bound with sup psi^2 replaced by the global pi^2 / 4.
    double lemma_rhs_global = 0.0;
    double lemma_pointwise_min = 0.0;
    double eq17_min_margin = 0.0;
    /// sup over the disc of |discrete psi Lap psi - field expression|
    double psi_laplacian_gap = 0.0;
    double disc_area = 0.0;
    double tol_ineq = 0.0;
    double tol_pt = 0.0;
    bool multi_component = false;

    bool inequality_holds() const { return slack >= -tol_ineq; }
    bool lemma_holds() const { return lemma_lhs <= lemma_rhs && lemma_pointwise_min >= -tol_pt; }
};

struct LemmaCheck {
    double lemma_lhs = 0.0;
    double lemma_rhs = 0.0;
    double lemma_rhs_global = 0.0;
    double pointwise_min = 0.0;   // min psi Lap psi over the report region
    bool hypothesis_ok = true;    // pointwise_min >= -tol_pt
};

enum class Rigidity { totally_geodesic_slice, totally_geodesic_nonslice, non_totally_geodesic };

const char* to_string(Rigidity r);

/// Classifies by sup |A| and sup |Theta + 1| over nodes of depth >= 1.
Rigidity rigidity_probe(const SurfaceGeometry& geom, double tol = 1e-6);

struct AsymptoticRow {
    double R = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double rhs_log = 0.0;  // rhs * log(R / r)
};

/// Assembles the local integral estimate and its companions on one surface.
/// Distance fields are cached per source vertex.
class EstimateEngine {
public:
    EstimateEngine(const SurfaceGeometry& geom, const TriMesh& mesh, EstimateTolerances tol = {},
                   Exec exec = Exec::parallel);

    const DistanceField& distance_from(int p);
    GeodesicDisc disc(int p, double r);

    EstimateReport theorem1_check(int p, double r, double R);
    LemmaCheck lemma1_check(int p, double r, double R);

    /// min over the disc vertices of (field expression of psi Lap psi) - phi(Theta) |A|^2
    double eq17_check(const GeodesicDisc& disc) const;

    /// Same margin at every node of depth >= 1.
    std::vector<double> eq17_margins() const;

    std::vector<AsymptoticRow> rigidity_asymptotics(int p, double r, const std::vector<double>& radii);

    /// Largest radius usable for D(p, R) (first ineligible vertex).
    double available_radius(int p);

    const std::vector<double>& psi_laplacian_discrete() const { return psi_lap_discrete_; }
    const std::vector<double>& psi_laplacian_fields() const { return psi_lap_fields_; }
    double tol_pt() const { return tol_pt_; }

private:
    const SurfaceGeometry& geom_;
    const TriMesh& mesh_;
    EstimateTolerances tol_;
    std::vector<double> psi_lap_discrete_;
    std::vector<double> psi_lap_fields_;
    double tol_pt_ = 0.0;
    double pointwise_min_ = 0.0;
    std::map<int, DistanceField> distances_;
};

/// C_r = c_r L(r) / (r lhs) and R_max = r exp(C_r). UndefinedBound when lhs
/// is (numerically) zero.
std::pair<double, double> corollary2_bound(const EstimateReport& report);

/// Nine (r, R) pairs: r in {0.15, 0.25, 0.35} * R_available, R / r in {1.5, 2, 3}.
std::vector<std::pair<double, double>> standard_sweep_pairs(double r_available);

}  // namespace maxlab
