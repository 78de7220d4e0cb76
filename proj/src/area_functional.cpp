#include "maxlab/area_functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxlab/error.hpp"

namespace maxlab {

namespace {

// Corner roles of a cell: 0 = (0,0), 1 = (1,0), 2 = (0,1), 3 = (1,1).
constexpr int kRoleDx[4] = {0, 1, 0, 1};
constexpr int kRoleDy[4] = {0, 0, 1, 1};
constexpr double kRoleSx[4] = {-1.0, 1.0, -1.0, 1.0};
constexpr double kRoleSy[4] = {-1.0, -1.0, 1.0, 1.0};

}  // namespace

AreaFunctional::AreaFunctional(std::shared_ptr<const Domain> domain, const MetricSpec& metric, Kind kind)
    : domain_(std::move(domain)), kind_(kind) {
    const Grid& g = domain_->grid();
    const int cx = g.nx() - 1;
    const int cy = g.ny() - 1;
    cell_scale_.assign(g.cell_count(), 1.0);
    active_.assign(g.cell_count(), 0);
    for (int j = 0; j < cy; ++j) {
        for (int i = 0; i < cx; ++i) {
            const int c = g.cell_index(i, j);
            cell_scale_[c] = metric.conformal_scale(g.x(i) + 0.5 * g.hx(), g.y(j) + 0.5 * g.hy());
            active_[c] = domain_->cell_active(i, j) ? 1 : 0;
        }
    }
    inv_node_measure_.assign(g.node_count(), 0.0);
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            inv_node_measure_[g.index(i, j)] = 1.0 / (metric.conformal_scale(g.x(i), g.y(j)) * g.hx() * g.hy());
        }
    }

    const Eigen::SparseMatrix<double> pat = pattern();
    const auto& interior = domain_->interior_nodes();
    slots_.assign(interior.size(), {});
    const int nx = g.nx();
    for (std::size_t col = 0; col < interior.size(); ++col) {
        slots_[col].fill(-1);
        const int node = interior[col];
        const int begin = pat.outerIndexPtr()[col];
        const int end = pat.outerIndexPtr()[col + 1];
        for (int pos = begin; pos < end; ++pos) {
            const int other = interior[pat.innerIndexPtr()[pos]];
            const int dx = g.col(other) - g.col(node);
            const int dy = (other - node - dx) / nx;
            slots_[col][(dy + 1) * 3 + (dx + 1)] = pos;
        }
    }
}

CellState AreaFunctional::state_at(int ci, int cj, std::span<const double> u) const {
    const Grid& g = domain_->grid();
    const int n00 = g.index(ci, cj);
    const int nx = g.nx();
    const double u00 = u[n00];
    const double u10 = u[n00 + 1];
    const double u01 = u[n00 + nx];
    const double u11 = u[n00 + nx + 1];
    CellState s;
    s.p = ((u10 - u00) + (u11 - u01)) / (2.0 * g.hx());
    s.q = ((u01 - u00) + (u11 - u10)) / (2.0 * g.hy());
    s.a = cell_scale_[g.cell_index(ci, cj)];
    s.margin = 1.0 - (s.p * s.p + s.q * s.q) / s.a;
    s.w = s.margin > 0.0 ? 1.0 / std::sqrt(s.margin) : std::numeric_limits<double>::quiet_NaN();
    return s;
}

void AreaFunctional::cell_states(std::span<const double> u, std::span<CellState> states, Exec exec) const {
    const Grid& g = domain_->grid();
    const int cx = g.nx() - 1;
    const int cy = g.ny() - 1;
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (int j = 0; j < cy; ++j) {
        for (int i = 0; i < cx; ++i) {
            const int c = g.cell_index(i, j);
            if (active_[c]) states[c] = state_at(i, j, u);
        }
    }
}

double AreaFunctional::min_cell_margin(std::span<const double> u, Exec exec) const {
    const Grid& g = domain_->grid();
    const int cx = g.nx() - 1;
    const int cy = g.ny() - 1;
    double result = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(min : result) if (exec == Exec::parallel)
    for (int j = 0; j < cy; ++j) {
        for (int i = 0; i < cx; ++i) {
            if (!active_[g.cell_index(i, j)]) continue;
            const double m = state_at(i, j, u).margin;
            // NaN propagates as a failed check
            result = std::isnan(m) ? -std::numeric_limits<double>::infinity() : std::min(result, m);
        }
    }
    return result;
}

double AreaFunctional::value(std::span<const double> u, Exec exec) const {
    const Grid& g = domain_->grid();
    const int cx = g.nx() - 1;
    const int cy = g.ny() - 1;
    const double cell_measure = g.hx() * g.hy();
    auto integrand = [&](const CellState& s) {
        if (kind_ == Kind::dirichlet) return 0.5 * (s.p * s.p + s.q * s.q) * cell_measure;
        return s.a * std::sqrt(s.margin) * cell_measure;
    };

    if (exec == Exec::serial) {
        double sum = 0.0;
        for (int j = 0; j < cy; ++j) {
            for (int i = 0; i < cx; ++i) {
                if (active_[g.cell_index(i, j)]) sum += integrand(state_at(i, j, u));
            }
        }
        return sum;
    }

    // Row partials summed in a fixed order keep the result thread-count independent.
    std::vector<double> rows(cy, 0.0);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < cy; ++j) {
        double sum = 0.0;
        for (int i = 0; i < cx; ++i) {
            if (active_[g.cell_index(i, j)]) sum += integrand(state_at(i, j, u));
        }
        rows[j] = sum;
    }
    double total = 0.0;
    for (double r : rows) total += r;
    return total;
}

void AreaFunctional::gradient(std::span<const double> u, std::span<double> grad, Exec exec) const {
    const Grid& g = domain_->grid();
    const int nx = g.nx();
    const int cx = nx - 1;
    const int cy = g.ny() - 1;
    const double cell_measure = g.hx() * g.hy();
    const double ihx = 1.0 / (2.0 * g.hx());
    const double ihy = 1.0 / (2.0 * g.hy());
    // dW/dp and dW/dq are (coef p, coef q) * cell_measure
    auto coefficient = [&](const CellState& s) { return kind_ == Kind::dirichlet ? 1.0 : -s.w; };

    if (exec == Exec::serial) {
        std::fill(grad.begin(), grad.end(), 0.0);
        for (int j = 0; j < cy; ++j) {
            for (int i = 0; i < cx; ++i) {
                if (!active_[g.cell_index(i, j)]) continue;
                const CellState s = state_at(i, j, u);
                const double k = coefficient(s) * cell_measure;
                for (int r = 0; r < 4; ++r) {
                    const int node = g.index(i + kRoleDx[r], j + kRoleDy[r]);
                    if (!domain_->is_interior(node)) continue;
                    grad[node] += k * (s.p * kRoleSx[r] * ihx + s.q * kRoleSy[r] * ihy);
                }
            }
        }
        return;
    }

    std::vector<CellState> states(g.cell_count());
    cell_states(u, states, Exec::parallel);
    const auto& interior = domain_->interior_nodes();
    const int count = static_cast<int>(interior.size());
#pragma omp parallel for schedule(static)
    for (int k = 0; k < count; ++k) {
        const int node = interior[k];
        const int i = node % nx;
        const int j = node / nx;
        double sum = 0.0;
        // cells (i-1, j-1), (i, j-1), (i-1, j), (i, j): node plays roles 3, 2, 1, 0
        for (int b = 0; b < 2; ++b) {
            for (int a = 0; a < 2; ++a) {
                const CellState& s = states[g.cell_index(i - 1 + a, j - 1 + b)];
                const int r = (1 - a) + 2 * (1 - b);
                sum += coefficient(s) * cell_measure * (s.p * kRoleSx[r] * ihx + s.q * kRoleSy[r] * ihy);
            }
        }
        grad[node] = sum;
    }
    for (int node = 0; node < static_cast<int>(grad.size()); ++node) {
        if (!domain_->is_interior(node)) grad[node] = 0.0;
    }
}

Eigen::SparseMatrix<double> AreaFunctional::pattern() const {
    const Grid& g = domain_->grid();
    const auto& interior = domain_->interior_nodes();
    const int n = static_cast<int>(interior.size());
    Eigen::SparseMatrix<double> h(n, n);
    h.reserve(Eigen::VectorXi::Constant(n, 9));
    const int nx = g.nx();
    for (int col = 0; col < n; ++col) {
        const int node = interior[col];
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int row = domain_->unknown_index(node + dy * nx + dx);
                if (row >= 0) h.insert(row, col) = 0.0;
            }
        }
    }
    h.makeCompressed();
    return h;
}

Eigen::SparseMatrix<double> AreaFunctional::hessian(std::span<const double> u, Exec exec) const {
    Eigen::SparseMatrix<double> h = pattern();
    hessian_values(u, h, exec);
    return h;
}

void AreaFunctional::hessian_values(std::span<const double> u, Eigen::SparseMatrix<double>& h, Exec exec) const {
    const Grid& g = domain_->grid();
    const int nx = g.nx();
    const double cell_measure = g.hx() * g.hy();
    const double ihx = 1.0 / (2.0 * g.hx());
    const double ihy = 1.0 / (2.0 * g.hy());
    std::vector<CellState> states(g.cell_count());
    cell_states(u, states, exec);

    const auto& interior = domain_->interior_nodes();
    const int count = static_cast<int>(interior.size());
    double* values = h.valuePtr();
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (int col = 0; col < count; ++col) {
        const auto& slot = slots_[col];
        for (int s = 0; s < 9; ++s) {
            if (slot[s] >= 0) values[slot[s]] = 0.0;
        }
        const int node = interior[col];
        const int i = node % nx;
        const int j = node / nx;
        for (int b = 0; b < 2; ++b) {
            for (int a = 0; a < 2; ++a) {
                const int ci = i - 1 + a;
                const int cj = j - 1 + b;
                const CellState& st = states[g.cell_index(ci, cj)];
                // Hessian of the cell integrand in (p, q)
                double m11, m12, m22;
                if (kind_ == Kind::dirichlet) {
                    m11 = cell_measure;
                    m12 = 0.0;
                    m22 = cell_measure;
                } else {
                    const double w3a = st.w * st.w * st.w / st.a;
                    m11 = -cell_measure * (st.w + w3a * st.p * st.p);
                    m12 = -cell_measure * (w3a * st.p * st.q);
                    m22 = -cell_measure * (st.w + w3a * st.q * st.q);
                }
                const int rl = (1 - a) + 2 * (1 - b);
                const double lx = kRoleSx[rl] * ihx;
                const double ly = kRoleSy[rl] * ihy;
                const double mlx = m11 * lx + m12 * ly;
                const double mly = m12 * lx + m22 * ly;
                for (int r = 0; r < 4; ++r) {
                    const int dx = ci + kRoleDx[r] - i;
                    const int dy = cj + kRoleDy[r] - j;
                    const int pos = slot[(dy + 1) * 3 + (dx + 1)];
                    if (pos < 0) continue;
                    values[pos] += kRoleSx[r] * ihx * mlx + kRoleSy[r] * ihy * mly;
                }
            }
        }
    }
}

}  // namespace maxlab
