#pragma once

#include <string>
#include <vector>

#include "maxlab/grid.hpp"

namespace maxlab {

/// Closed-form Dirichlet data for the graph solver.
///
///   constant      c0
///   affine        c0 cx cy                  c0 + cx x + cy y
///   radial-asinh  c [x0 y0]                 c asinh(|(x,y) - (x0,y0)| / c)
///   polynomial    i1 j1 a1  i2 j2 a2 ...    sum_k a_k x^i_k y^j_k
class BoundaryFunction {
public:
    enum class Kind { constant, affine, radial_asinh, polynomial };

    BoundaryFunction(Kind kind, std::vector<double> params);
    static BoundaryFunction from_catalog(const std::string& name, const std::vector<double>& params);

    Kind kind() const { return kind_; }
    const std::vector<double>& params() const { return params_; }
    std::string name() const;

    double operator()(double x, double y) const;

    /// Values at every active node (interior nodes get the same closed form,
    /// which the solver overwrites).
    std::vector<double> sample(const Domain& domain) const;

private:
    Kind kind_;
    std::vector<double> params_;
};

}  // namespace maxlab
