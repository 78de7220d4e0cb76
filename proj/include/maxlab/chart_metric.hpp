#pragma once

#include <string>
#include <vector>

#include "maxlab/grid.hpp"

namespace maxlab {

/// Conformal factor lambda and the partial derivatives needed by the
/// geometry: g_M = exp(2 lambda) (dx^2 + dy^2).
struct ConformalFactor {
    double value = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    double dxx = 0.0;
    double dyy = 0.0;
};

/// Chart-component metric tensor.
struct MetricTensor {
    double g11 = 1.0;
    double g12 = 0.0;
    double g22 = 1.0;
};

/// Catalog of closed-form conformal factors (rho^2 = x^2 + y^2):
///
///   name     parameter   lambda
///   flat     -           0
///   sphere   -           -log(1 + rho^2 / 4)   (unit round sphere, K_M = 1)
///   bump     a           -a rho^2              (K_M = 4 a exp(2 a rho^2))
///
/// Every entry is real-analytic; `bump` with a < 0 is kept because it is the
/// canonical negatively curved counterexample for the curvature validation.
enum class MetricKind { flat, sphere, bump };

class MetricSpec {
public:
    MetricSpec(MetricKind kind, Chart chart, double parameter = 0.0);

    /// Builds a catalog entry by name ("flat", "sphere", "bump").
    static MetricSpec from_catalog(const std::string& name, const std::vector<double>& params, Chart chart);

    MetricKind kind() const { return kind_; }
    const Chart& chart() const { return chart_; }
    double parameter() const { return parameter_; }
    const std::string& name() const { return name_; }

    /// Closed-form lambda; no domain check (callers inside hot loops).
    ConformalFactor lambda(double x, double y) const;

    /// exp(2 lambda)
    double conformal_scale(double x, double y) const;

    /// -exp(-2 lambda) (lambda_xx + lambda_yy), no domain check.
    double curvature(double x, double y) const;

private:
    MetricKind kind_;
    Chart chart_;
    double parameter_;
    std::string name_;
};

/// g11 = g22 = exp(2 lambda), g12 = 0. Throws DomainError outside the chart.
MetricTensor metric_at(const MetricSpec& spec, double x, double y);

/// Gaussian curvature of M from the closed-form derivatives of lambda.
double gaussian_curvature_M(const MetricSpec& spec, double x, double y);

struct CurvatureValidation {
    bool nonnegative = true;
    double min_curvature = 0.0;
};

inline constexpr double kCurvatureTolerance = 1e-10;

/// Checks K_M >= -tol on every grid node and reports the minimum.
CurvatureValidation validate_nonnegative_curvature(const MetricSpec& spec, const Grid& grid,
                                                   double tol = kCurvatureTolerance);

}  // namespace maxlab
