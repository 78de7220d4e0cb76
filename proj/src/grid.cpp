#include "maxlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "maxlab/error.hpp"

namespace maxlab {

namespace {

// Lower envelope of parabolas (Felzenszwalb-Huttenlocher): squared distance
// transform of one line with sample spacing h, in place.
void distance_transform_1d(std::vector<double>& f, double h) {
    const int n = static_cast<int>(f.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<int> v;
    std::vector<double> z;
    for (int q = 0; q < n; ++q) {
        if (f[q] == inf) continue;
        const double pq = q * h;
        double s = -inf;
        while (!v.empty()) {
            const double pv = v.back() * h;
            s = ((f[q] + pq * pq) - (f[v.back()] + pv * pv)) / (2.0 * (pq - pv));
            if (s > z.back()) break;
            v.pop_back();
            z.pop_back();
            s = -inf;
        }
        v.push_back(q);
        z.push_back(v.size() == 1 ? -inf : s);
    }
    if (v.empty()) return;
    z.push_back(inf);
    std::vector<double> out(n);
    std::size_t j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[j + 1] < q * h) ++j;
        const double d = (q - v[j]) * h;
        out[q] = d * d + f[v[j]];
    }
    f.swap(out);
}

}  // namespace

Grid::Grid(Chart chart, int nx, int ny) : chart_(chart), nx_(nx), ny_(ny) {
    if (nx < 9 || ny < 9) {
        throw DomainError("grid needs at least 9 nodes per direction, got " + std::to_string(nx) +
                          "x" + std::to_string(ny));
    }
    if (!(chart.x1 > chart.x0) || !(chart.y1 > chart.y0)) {
        throw DomainError("chart has zero or negative measure");
    }
    hx_ = (chart.x1 - chart.x0) / (nx - 1);
    hy_ = (chart.y1 - chart.y0) / (ny - 1);
}

int Grid::nearest_node(double x, double y) const {
    const int i = std::clamp(static_cast<int>(std::lround((x - chart_.x0) / hx_)), 0, nx_ - 1);
    const int j = std::clamp(static_cast<int>(std::lround((y - chart_.y0) / hy_)), 0, ny_ - 1);
    return index(i, j);
}

Domain::Domain(Grid grid, DomainShape shape) : grid_(std::move(grid)), shape_(shape) {
    const int nx = grid_.nx();
    const int ny = grid_.ny();
    const std::size_t n = grid_.node_count();
    kinds_.assign(n, NodeKind::exterior);

    if (shape_.kind == DomainShape::Kind::annulus &&
        !(shape_.outer_radius > shape_.inner_radius && shape_.inner_radius >= 0.0)) {
        throw DomainError("annulus needs 0 <= inner radius < outer radius");
    }

    for (int j = 1; j < ny - 1; ++j) {
        for (int i = 1; i < nx - 1; ++i) {
            bool inside = true;
            if (shape_.kind == DomainShape::Kind::annulus) {
                const double rho = std::hypot(grid_.x(i) - shape_.center_x, grid_.y(j) - shape_.center_y);
                inside = rho > shape_.inner_radius && rho < shape_.outer_radius;
            }
            if (inside) kinds_[grid_.index(i, j)] = NodeKind::interior;
        }
    }

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int node = grid_.index(i, j);
            if (kinds_[node] == NodeKind::interior) continue;
            bool touches = false;
            for (int dj = -1; dj <= 1 && !touches; ++dj) {
                for (int di = -1; di <= 1; ++di) {
                    const int ii = i + di;
                    const int jj = j + dj;
                    if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
                    if (kinds_[grid_.index(ii, jj)] == NodeKind::interior) {
                        touches = true;
                        break;
                    }
                }
            }
            if (touches) kinds_[node] = NodeKind::boundary;
        }
    }

    unknown_.assign(n, -1);
    for (std::size_t k = 0; k < n; ++k) {
        if (kinds_[k] == NodeKind::interior) {
            unknown_[k] = static_cast<int>(interior_.size());
            interior_.push_back(static_cast<int>(k));
        }
    }
    if (interior_.empty()) throw DomainError("domain has no interior nodes");

    // Multi-source BFS over the 8-neighbourhood gives the chessboard distance.
    depth_.assign(n, -1);
    std::deque<int> queue;
    for (std::size_t k = 0; k < n; ++k) {
        if (kinds_[k] != NodeKind::interior) {
            depth_[k] = 0;
            queue.push_back(static_cast<int>(k));
        }
    }
    while (!queue.empty()) {
        const int node = queue.front();
        queue.pop_front();
        const int i = grid_.col(node);
        const int j = grid_.row(node);
        for (int dj = -1; dj <= 1; ++dj) {
            for (int di = -1; di <= 1; ++di) {
                const int ii = i + di;
                const int jj = j + dj;
                if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
                const int next = grid_.index(ii, jj);
                if (depth_[next] < 0) {
                    depth_[next] = depth_[node] + 1;
                    queue.push_back(next);
                }
            }
        }
    }
    compute_clearance();
}

void Domain::compute_clearance() {
    const int nx = grid_.nx();
    const int ny = grid_.ny();
    const double inf = std::numeric_limits<double>::infinity();
    clearance_.assign(grid_.node_count(), inf);
    for (std::size_t k = 0; k < clearance_.size(); ++k) {
        if (kinds_[k] != NodeKind::interior) clearance_[k] = 0.0;
    }
    std::vector<double> line(ny);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) line[j] = clearance_[grid_.index(i, j)];
        distance_transform_1d(line, grid_.hy());
        for (int j = 0; j < ny; ++j) clearance_[grid_.index(i, j)] = line[j];
    }
    line.resize(nx);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) line[i] = clearance_[grid_.index(i, j)];
        distance_transform_1d(line, grid_.hx());
        for (int i = 0; i < nx; ++i) clearance_[grid_.index(i, j)] = std::sqrt(line[i]);
    }
}

bool Domain::cell_active(int ci, int cj) const {
    const int n00 = grid_.index(ci, cj);
    const int nx = grid_.nx();
    return is_interior(n00) || is_interior(n00 + 1) || is_interior(n00 + nx) || is_interior(n00 + nx + 1);
}

}  // namespace maxlab
