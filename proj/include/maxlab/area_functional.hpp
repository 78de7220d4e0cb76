#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "maxlab/chart_metric.hpp"
#include "maxlab/grid.hpp"

namespace maxlab {

/// Loop strategy for the data-parallel kernels. `serial` runs the plain
/// reference loops, `parallel` the OpenMP versions; both are deterministic.
enum class Exec { serial, parallel };

/// One-point quadrature state of a grid cell: bilinear gradient (p, q) at the
/// cell centre, conformal scale a = exp(2 lambda) there, margin 1 - |Du|^2_g and
/// w = 1 / sqrt(margin).
struct CellState {
    double p = 0.0;
    double q = 0.0;
    double a = 1.0;
    double margin = 1.0;
    double w = 1.0;
};

/// Discrete functional over the active cells of a domain.
///
/// `area`:      A(u) = sum_c sqrt(1 - |Du_c|^2_g) exp(2 lambda_c) hx hy
/// `dirichlet`: E(u) = sum_c |grad u_c|^2 hx hy / 2  (used for harmonic extension)
///
/// Gradients are returned per node (non-interior entries are zero); the
/// Hessian lives on the interior unknowns with a fixed 9-point pattern.
class AreaFunctional {
public:
    enum class Kind { area, dirichlet };

    AreaFunctional(std::shared_ptr<const Domain> domain, const MetricSpec& metric, Kind kind = Kind::area);

    const Domain& domain() const { return *domain_; }
    Kind kind() const { return kind_; }

    /// Cell states for all active cells (inactive entries are left default).
    void cell_states(std::span<const double> u, std::span<CellState> states, Exec exec) const;

    /// Minimum of 1 - |Du|^2_g over active cells.
    double min_cell_margin(std::span<const double> u, Exec exec) const;

    double value(std::span<const double> u, Exec exec) const;

    /// Serial reference scatters cell contributions; the parallel version
    /// gathers the four cells around each node.
    void gradient(std::span<const double> u, std::span<double> grad, Exec exec) const;

    /// Sparse Hessian on interior unknowns (column-major, full symmetric).
    Eigen::SparseMatrix<double> hessian(std::span<const double> u, Exec exec) const;

    /// Refills `h` in place; `h` must come from `hessian()` on the same domain.
    void hessian_values(std::span<const double> u, Eigen::SparseMatrix<double>& h, Exec exec) const;

    /// Discrete divergence Div(Du / sqrt(1 - |Du|^2)) at interior node `node`
    /// from the area gradient: grad / (exp(2 lambda_node) hx hy).
    double divergence_from_gradient(int node, double grad) const {
        return grad * inv_node_measure_[node];
    }

    const std::vector<double>& cell_scale() const { return cell_scale_; }

private:
    CellState state_at(int ci, int cj, std::span<const double> u) const;
    Eigen::SparseMatrix<double> pattern() const;

    std::shared_ptr<const Domain> domain_;
    Kind kind_;
    std::vector<double> cell_scale_;        // exp(2 lambda) at cell centres
    std::vector<double> inv_node_measure_;  // 1 / (exp(2 lambda) hx hy) at nodes
    std::vector<std::array<int, 9>> slots_; // per unknown column: value offsets of its 3x3 rows
    std::vector<unsigned char> active_;     // per cell
};

}  // namespace maxlab
