#include "maxlab/boundary_data.hpp"

#include <cmath>

#include "maxlab/error.hpp"

namespace maxlab {

BoundaryFunction::BoundaryFunction(Kind kind, std::vector<double> params)
    : kind_(kind), params_(std::move(params)) {
    switch (kind_) {
        case Kind::constant:
            if (params_.size() != 1) throw ConfigError("constant boundary data takes 1 parameter");
            break;
        case Kind::affine:
            if (params_.size() != 3) throw ConfigError("affine boundary data takes 3 parameters");
            break;
        case Kind::radial_asinh:
            if (params_.size() != 1 && params_.size() != 3) {
                throw ConfigError("radial-asinh boundary data takes 1 or 3 parameters");
            }
            if (!(params_[0] > 0.0)) throw ConfigError("radial-asinh needs c > 0");
            break;
        case Kind::polynomial:
            if (params_.empty() || params_.size() % 3 != 0) {
                throw ConfigError("polynomial boundary data takes (i j coefficient) triples");
            }
            for (std::size_t k = 0; k < params_.size(); k += 3) {
                if (params_[k] < 0 || params_[k + 1] < 0 || params_[k] != std::floor(params_[k]) ||
                    params_[k + 1] != std::floor(params_[k + 1])) {
                    throw ConfigError("polynomial exponents must be non-negative integers");
                }
            }
            break;
    }
}

BoundaryFunction BoundaryFunction::from_catalog(const std::string& name, const std::vector<double>& params) {
    if (name == "constant") return BoundaryFunction(Kind::constant, params);
    if (name == "affine") return BoundaryFunction(Kind::affine, params);
    if (name == "radial-asinh") return BoundaryFunction(Kind::radial_asinh, params);
    if (name == "polynomial") return BoundaryFunction(Kind::polynomial, params);
    throw ConfigError("unknown boundary function '" + name + "'");
}

std::string BoundaryFunction::name() const {
    switch (kind_) {
        case Kind::constant: return "constant";
        case Kind::affine: return "affine";
        case Kind::radial_asinh: return "radial-asinh";
        case Kind::polynomial: return "polynomial";
    }
    return "";
}

double BoundaryFunction::operator()(double x, double y) const {
    switch (kind_) {
        case Kind::constant:
            return params_[0];
        case Kind::affine:
            return params_[0] + params_[1] * x + params_[2] * y;
        case Kind::radial_asinh: {
            const double c = params_[0];
            const double x0 = params_.size() == 3 ? params_[1] : 0.0;
            const double y0 = params_.size() == 3 ? params_[2] : 0.0;
            return c * std::asinh(std::hypot(x - x0, y - y0) / c);
        }
        case Kind::polynomial: {
            double sum = 0.0;
            for (std::size_t k = 0; k < params_.size(); k += 3) {
                sum += params_[k + 2] * std::pow(x, static_cast<int>(params_[k])) *
                       std::pow(y, static_cast<int>(params_[k + 1]));
            }
            return sum;
        }
    }
    return 0.0;
}

std::vector<double> BoundaryFunction::sample(const Domain& domain) const {
    const Grid& grid = domain.grid();
    std::vector<double> values(grid.node_count(), 0.0);
    for (int j = 0; j < grid.ny(); ++j) {
        for (int i = 0; i < grid.nx(); ++i) {
            const int node = grid.index(i, j);
            if (domain.is_active(node)) values[node] = (*this)(grid.x(i), grid.y(j));
        }
    }
    return values;
}

}  // namespace maxlab
