#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "maxlab/config.hpp"

namespace maxlab {

/// Catalog: flat-plane, tilted-plane, catenoid-annulus, sphere-slice,
/// sphere-perturbed, bump-metric-perturbed. ConfigError for other names.
ExperimentConfig scenario_config(const std::string& name);

const std::vector<std::string>& scenario_names();

/// Closed forms known for a configuration. They are derived from the metric
/// and the boundary data rather than the scenario name, so overriding a
/// parameter keeps them honest (or drops them).
struct References {
    /// Exact maximal graph with this Dirichlet data.
    std::function<double(double, double)> solution;
    /// The closed form also solves the discrete problem (affine data), so the
    /// solver must reproduce it to rounding.
    bool solution_discrete = false;
    /// Intrinsic distance from the chart point (cx, cy) to (x, y); NaN where no
    /// closed form is available.
    std::function<double(double cx, double cy, double x, double y)> distance;
    /// False when `distance` is only defined on a subset (NaN elsewhere).
    bool distance_everywhere = false;
};

References references_for(const ExperimentConfig& cfg);

}  // namespace maxlab
