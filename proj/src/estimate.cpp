#include "maxlab/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "maxlab/error.hpp"

namespace maxlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Fraction of the containment radius reached by the largest sweep radius.
constexpr double kSweepReach = 0.8;
constexpr double kLargestSweepFactor = 0.35 * 3.0;

}  // namespace

double alpha_r(const GeodesicDisc& disc, const std::vector<double>& theta) {
    double alpha = 1.0;
    for (int v : disc.vertices) alpha = std::max(alpha, -theta[v]);
    return alpha;
}

double c_r(double alpha) {
    if (!(alpha >= 1.0)) throw DomainError("c_r needs alpha >= 1");
    const double q = 1.0 + alpha * alpha;
    return kPi * kPi * q * q / (4.0 * alpha * std::atan(alpha));
}

double phi(double s) {
    const double q = 1.0 + s * s;
    return 2.0 * s * std::atan(s) / (q * q);
}

double psi_laplacian_from_fields(double theta, double a_norm_sq, double kappa_M) {
    const double t2 = theta * theta;
    return phi(theta) * a_norm_sq + (t2 - 1.0) * theta * std::atan(theta) / (1.0 + t2) * kappa_M;
}

const char* to_string(Rigidity r) {
    switch (r) {
        case Rigidity::totally_geodesic_slice: return "totally-geodesic-slice";
        case Rigidity::totally_geodesic_nonslice: return "totally-geodesic-nonslice";
        case Rigidity::non_totally_geodesic: return "non-totally-geodesic";
    }
    return "";
}

Rigidity rigidity_probe(const SurfaceGeometry& geom, double tol) {
    double sup_a = 0.0;
    double sup_tilt = 0.0;
    for (int node = 0; node < static_cast<int>(geom.theta.size()); ++node) {
        if (!geom.valid(node)) continue;
        sup_a = std::max(sup_a, std::sqrt(std::max(0.0, geom.a_norm_sq[node])));
        sup_tilt = std::max(sup_tilt, std::abs(geom.theta[node] + 1.0));
    }
    if (sup_a >= tol) return Rigidity::non_totally_geodesic;
    return sup_tilt < tol ? Rigidity::totally_geodesic_slice : Rigidity::totally_geodesic_nonslice;
}

EstimateEngine::EstimateEngine(const SurfaceGeometry& geom, const TriMesh& mesh, EstimateTolerances tol, Exec exec)
    : geom_(geom), mesh_(mesh), tol_(tol) {
    const std::size_t n = geom.theta.size();
    const std::vector<double> lap = laplace_beltrami(geom, geom.psi, exec);
    psi_lap_discrete_.assign(n, std::numeric_limits<double>::quiet_NaN());
    psi_lap_fields_.assign(n, std::numeric_limits<double>::quiet_NaN());
    pointwise_min_ = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        const int node = static_cast<int>(k);
        if (geom.valid(node, 1)) {
            psi_lap_fields_[k] = psi_laplacian_from_fields(geom.theta[k], geom.a_norm_sq[k], geom.kappa_M[k]);
        }
        if (geom.valid(node, 2)) {
            psi_lap_discrete_[k] = geom.psi[k] * lap[k];
            if (tol_.region.contains(*geom.domain, node)) {
                pointwise_min_ = std::min(pointwise_min_, psi_lap_discrete_[k]);
            }
        }
    }
    const IdentityReport ids = identity_checks(geom, tol_.region, exec);
    tol_pt_ = tol_.pointwise_factor * ids.laplacian_theta.sup;
}

const DistanceField& EstimateEngine::distance_from(int p) {
    auto it = distances_.find(p);
    if (it == distances_.end()) it = distances_.emplace(p, geodesic_distance(mesh_, p)).first;
    return it->second;
}

GeodesicDisc EstimateEngine::disc(int p, double r) { return disc_extract(mesh_, distance_from(p), r, 2); }

double EstimateEngine::available_radius(int p) {
    return kSweepReach * containment_radius(mesh_, distance_from(p), 2) / kLargestSweepFactor;
}

double EstimateEngine::eq17_check(const GeodesicDisc& d) const {
    double margin = std::numeric_limits<double>::infinity();
    for (int v : d.vertices) {
        margin = std::min(margin, psi_lap_fields_[v] - phi(geom_.theta[v]) * geom_.a_norm_sq[v]);
    }
    return margin;
}

std::vector<double> EstimateEngine::eq17_margins() const {
    std::vector<double> out(psi_lap_fields_.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (geom_.valid(static_cast<int>(k), 1)) out[k] = psi_lap_fields_[k] - phi(geom_.theta[k]) * geom_.a_norm_sq[k];
    }
    return out;
}

LemmaCheck EstimateEngine::lemma1_check(int p, double r, double R) {
    if (!(r > 0.0 && R > r)) throw DomainError("lemma check needs 0 < r < R");
    const GeodesicDisc inner = disc(p, r);
    const GeodesicDisc outer = disc(p, R);
    LemmaCheck out;
    out.lemma_lhs = disc_integral(mesh_, inner, psi_lap_discrete_);
    double sup_psi2 = 0.0;
    for (int v : outer.vertices) sup_psi2 = std::max(sup_psi2, geom_.psi[v] * geom_.psi[v]);
    const double factor = 2.0 * inner.length / (r * std::log(R / r));
    out.lemma_rhs = factor * sup_psi2;
    out.lemma_rhs_global = factor * kPi * kPi / 4.0;
    out.pointwise_min = pointwise_min_;
    out.hypothesis_ok = pointwise_min_ >= -tol_pt_;
    return out;
}

EstimateReport EstimateEngine::theorem1_check(int p, double r, double R) {
    if (!(r > 0.0 && R > r)) throw DomainError("estimate needs 0 < r < R");
    const GeodesicDisc inner = disc(p, r);
    // D(p, R) must be compactly contained as well.
    const GeodesicDisc outer = disc(p, R);
    const Grid& grid = geom_.domain->grid();

    EstimateReport rep;
    rep.p = p;
    rep.px = grid.x(grid.col(p));
    rep.py = grid.y(grid.row(p));
    rep.r = r;
    rep.R = R;
    rep.alpha_r = alpha_r(inner, geom_.theta);
    rep.c_r = c_r(rep.alpha_r);
    rep.lhs = disc_integral(mesh_, inner, geom_.a_norm_sq);
    rep.L_r = inner.length;
    rep.rhs = rep.c_r * rep.L_r / (r * std::log(R / r));
    rep.slack = rep.rhs - rep.lhs;
    rep.tol_ineq = tol_.ineq_relative * rep.rhs;
    rep.tol_pt = tol_pt_;
    rep.disc_area = inner.area;
    rep.multi_component = inner.multi_component;

    const LemmaCheck lemma = lemma1_check(p, r, R);
    rep.lemma_lhs = lemma.lemma_lhs;
    rep.lemma_rhs = lemma.lemma_rhs;
    rep.lemma_rhs_global = lemma.lemma_rhs_global;
    rep.lemma_pointwise_min = lemma.pointwise_min;
    rep.eq17_min_margin = eq17_check(inner);
    for (int v : inner.vertices) {
        rep.psi_laplacian_gap = std::max(rep.psi_laplacian_gap, std::abs(psi_lap_discrete_[v] - psi_lap_fields_[v]));
    }
    (void)outer;

    if (rep.lhs > kZeroIntegral) {
        const auto [cr, rmax] = corollary2_bound(rep);
        rep.C_r = cr;
        rep.R_max = rmax;
    }
    return rep;
}

std::vector<AsymptoticRow> EstimateEngine::rigidity_asymptotics(int p, double r, const std::vector<double>& radii) {
    std::vector<AsymptoticRow> rows;
    for (double R : radii) {
        const EstimateReport rep = theorem1_check(p, r, R);
        rows.push_back({R, rep.lhs, rep.rhs, rep.rhs * std::log(R / r)});
    }
    return rows;
}

std::pair<double, double> corollary2_bound(const EstimateReport& report) {
    if (!(report.lhs > kZeroIntegral)) {
        throw UndefinedBound("radius bound needs a disc that is not totally geodesic (integral of |A|^2 is zero)");
    }
    const double cr = report.c_r * report.L_r / (report.r * report.lhs);
    return {cr, report.r * std::exp(cr)};
}

std::vector<std::pair<double, double>> standard_sweep_pairs(double r_available) {
    std::vector<std::pair<double, double>> pairs;
    for (double f : {0.15, 0.25, 0.35}) {
        for (double k : {1.5, 2.0, 3.0}) pairs.emplace_back(f * r_available, k * f * r_available);
    }
    return pairs;
}

}  // namespace maxlab
