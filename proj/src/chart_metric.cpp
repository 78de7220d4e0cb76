#include "maxlab/chart_metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxlab/error.hpp"

namespace maxlab {

namespace {

ConformalFactor flat_factor(double, double, double) { return {}; }

ConformalFactor sphere_factor(double, double x, double y) {
    // lambda = -log(q), q = 1 + (x^2 + y^2)/4
    const double q = 1.0 + 0.25 * (x * x + y * y);
    ConformalFactor f;
    f.value = -std::log(q);
    f.dx = -0.5 * x / q;
    f.dy = -0.5 * y / q;
    f.dxx = -0.5 / q + 0.25 * x * x / (q * q);
    f.dyy = -0.5 / q + 0.25 * y * y / (q * q);
    return f;
}

ConformalFactor bump_factor(double a, double x, double y) {
    ConformalFactor f;
    f.value = -a * (x * x + y * y);
    f.dx = -2.0 * a * x;
    f.dy = -2.0 * a * y;
    f.dxx = -2.0 * a;
    f.dyy = -2.0 * a;
    return f;
}

struct CatalogEntry {
    const char* name;
    MetricKind kind;
    int parameter_count;
    ConformalFactor (*factor)(double, double, double);
};

constexpr CatalogEntry kCatalog[] = {
    {"flat", MetricKind::flat, 0, flat_factor},
    {"sphere", MetricKind::sphere, 0, sphere_factor},
    {"bump", MetricKind::bump, 1, bump_factor},
};

const CatalogEntry& entry_for(MetricKind kind) {
    for (const auto& e : kCatalog) {
        if (e.kind == kind) return e;
    }
    throw ConfigError("unknown metric kind");
}

}  // namespace

MetricSpec::MetricSpec(MetricKind kind, Chart chart, double parameter)
    : kind_(kind), chart_(chart), parameter_(parameter), name_(entry_for(kind).name) {
    if (!(chart.x1 > chart.x0) || !(chart.y1 > chart.y0)) throw DomainError("metric chart has zero measure");
    if (kind == MetricKind::bump && !std::isfinite(parameter)) throw ConfigError("bump parameter must be finite");
}

MetricSpec MetricSpec::from_catalog(const std::string& name, const std::vector<double>& params, Chart chart) {
    for (const auto& e : kCatalog) {
        if (name != e.name) continue;
        if (static_cast<int>(params.size()) != e.parameter_count) {
            throw ConfigError("metric '" + name + "' takes " + std::to_string(e.parameter_count) +
                              " parameter(s), got " + std::to_string(params.size()));
        }
        return MetricSpec(e.kind, chart, params.empty() ? 0.0 : params.front());
    }
    throw ConfigError("unknown metric '" + name + "'");
}

ConformalFactor MetricSpec::lambda(double x, double y) const {
    return entry_for(kind_).factor(parameter_, x, y);
}

double MetricSpec::conformal_scale(double x, double y) const {
    switch (kind_) {
        case MetricKind::flat:
            return 1.0;
        case MetricKind::sphere: {
            const double q = 1.0 + 0.25 * (x * x + y * y);
            return 1.0 / (q * q);
        }
        case MetricKind::bump:
            return std::exp(-2.0 * parameter_ * (x * x + y * y));
    }
    return 1.0;
}

double MetricSpec::curvature(double x, double y) const {
    const ConformalFactor f = lambda(x, y);
    return -std::exp(-2.0 * f.value) * (f.dxx + f.dyy);
}

MetricTensor metric_at(const MetricSpec& spec, double x, double y) {
    if (!spec.chart().contains(x, y)) throw DomainError("point outside metric chart");
    const double s = std::exp(2.0 * spec.lambda(x, y).value);
    return {s, 0.0, s};
}

double gaussian_curvature_M(const MetricSpec& spec, double x, double y) {
    if (!spec.chart().contains(x, y)) throw DomainError("point outside metric chart");
    return spec.curvature(x, y);
}

CurvatureValidation validate_nonnegative_curvature(const MetricSpec& spec, const Grid& grid, double tol) {
    CurvatureValidation out;
    out.min_curvature = std::numeric_limits<double>::infinity();
    for (int j = 0; j < grid.ny(); ++j) {
        for (int i = 0; i < grid.nx(); ++i) {
            out.min_curvature = std::min(out.min_curvature, gaussian_curvature_M(spec, grid.x(i), grid.y(j)));
        }
    }
    out.nonnegative = out.min_curvature >= -tol;
    return out;
}

}  // namespace maxlab
