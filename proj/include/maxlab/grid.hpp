#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace maxlab {

/// Rectangle [x0,x1] x [y0,y1] in chart coordinates.
struct Chart {
    double x0 = 0.0;
    double x1 = 1.0;
    double y0 = 0.0;
    double y1 = 1.0;

    bool contains(double x, double y, double slack = 1e-12) const {
        return x >= x0 - slack && x <= x1 + slack && y >= y0 - slack && y <= y1 + slack;
    }
    bool operator==(const Chart&) const = default;
};

/// Uniform node grid on a chart. Node (i, j) has linear index j * nx + i.
class Grid {
public:
    Grid(Chart chart, int nx, int ny);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }
    const Chart& chart() const { return chart_; }

    std::size_t node_count() const { return static_cast<std::size_t>(nx_) * ny_; }
    std::size_t cell_count() const { return static_cast<std::size_t>(nx_ - 1) * (ny_ - 1); }

    int index(int i, int j) const { return j * nx_ + i; }
    int cell_index(int i, int j) const { return j * (nx_ - 1) + i; }
    int col(int node) const { return node % nx_; }
    int row(int node) const { return node / nx_; }

    double x(int i) const { return chart_.x0 + i * hx_; }
    double y(int j) const { return chart_.y0 + j * hy_; }

    /// Nearest node to a chart point (clamped to the grid).
    int nearest_node(double x, double y) const;

private:
    Chart chart_;
    int nx_;
    int ny_;
    double hx_;
    double hy_;
};

enum class NodeKind : std::uint8_t { interior, boundary, exterior };

/// Which part of the chart carries the graph.
struct DomainShape {
    enum class Kind { rectangle, annulus };
    Kind kind = Kind::rectangle;
    double center_x = 0.0;
    double center_y = 0.0;
    double inner_radius = 0.0;
    double outer_radius = 0.0;

    bool operator==(const DomainShape&) const = default;
};

/// Grid plus node classification. Interior nodes are unknowns of the solver,
/// boundary nodes carry Dirichlet data and exterior nodes are never touched.
///
/// `depth(n)` is the chessboard distance from `n` to the nearest non-interior
/// node: boundary/exterior nodes have depth 0, interior nodes adjacent to the
/// boundary depth 1, and so on. A stencil of half-width k centred at a node of
/// depth >= k only reads interior or boundary values.
class Domain {
public:
    Domain(Grid grid, DomainShape shape);

    const Grid& grid() const { return grid_; }
    const DomainShape& shape() const { return shape_; }

    NodeKind kind(int node) const { return kinds_[node]; }
    int depth(int node) const { return depth_[node]; }
    /// Euclidean chart distance from `node` to the nearest non-interior node.
    double clearance(int node) const { return clearance_[node]; }
    bool is_interior(int node) const { return kinds_[node] == NodeKind::interior; }
    bool is_active(int node) const { return kinds_[node] != NodeKind::exterior; }

    /// A cell is active when at least one corner is interior; all its corners
    /// are then interior or boundary.
    bool cell_active(int ci, int cj) const;

    const std::vector<int>& interior_nodes() const { return interior_; }
    /// Position of a node in `interior_nodes()`, or -1.
    int unknown_index(int node) const { return unknown_[node]; }

    std::size_t interior_count() const { return interior_.size(); }

private:
    void compute_clearance();

    Grid grid_;
    DomainShape shape_;
    std::vector<NodeKind> kinds_;
    std::vector<int> depth_;
    std::vector<double> clearance_;
    std::vector<int> interior_;
    std::vector<int> unknown_;
};

}  // namespace maxlab
