#pragma once

// Independent reference values for the unit catenoid u = asinh(rho), built
// from geodesic polar coordinates about a point on the meridian y = 0. In the
// arclength coordinate s = sqrt(rho^2 + 1) the induced metric is
// ds^2 + (s^2 - 1) dphi^2, the Gauss curvature is 1 / (s^2 - 1)^2 and
// |A|^2 = 2 / (s^2 - 1)^2. Geodesics and the Jacobi field are integrated with
// odeint; the angular integral uses adaptive Gauss-Kronrod.

#include <array>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

namespace oracle {

class CatenoidDisc {
public:
    explicit CatenoidDisc(double rho0) : s0_(std::sqrt(rho0 * rho0 + 1.0)) {}

    /// Integral of |A|^2 over the geodesic disc of radius r.
    double a_norm_integral(double r) const { return angular(r, Quantity::integral); }
    /// Length of the geodesic circle of radius r.
    double circle_length(double r) const { return angular(r, Quantity::length); }
    /// Area of the geodesic disc of radius r.
    double disc_area(double r) const { return angular(r, Quantity::area); }
    /// Smallest rho on the geodesic circle of radius r (the disc is star shaped
    /// and rho decreases outward toward the neck).
    double min_rho(double r) const {
        // Along the meridian toward the neck s decreases at unit speed.
        const double s = s0_ - r;
        return std::sqrt(s * s - 1.0);
    }

private:
    enum class Quantity { integral, length, area };

    // state: s, phi, s', phi', J, J', int |A|^2 J dt, int J dt
    using State = std::array<double, 8>;

    State shoot(double theta, double r) const {
        using namespace boost::numeric::odeint;
        State x{s0_, 0.0, std::cos(theta), std::sin(theta) / std::sqrt(s0_ * s0_ - 1.0), 0.0, 1.0, 0.0, 0.0};
        auto rhs = [](const State& y, State& dy, double) {
            const double s = y[0];
            const double g = s * s - 1.0;
            const double curvature = 1.0 / (g * g);
            dy[0] = y[2];
            dy[1] = y[3];
            dy[2] = s * y[3] * y[3];
            dy[3] = -2.0 * s / g * y[2] * y[3];
            dy[4] = y[5];
            dy[5] = -curvature * y[4];
            dy[6] = 2.0 * curvature * y[4];
            dy[7] = y[4];
        };
        integrate_adaptive(make_controlled(1e-13, 1e-13, runge_kutta_dopri5<State>()), rhs, x, 0.0, r, r / 64);
        return x;
    }

    double angular(double r, Quantity q) const {
        auto f = [&](double theta) {
            const State x = shoot(theta, r);
            switch (q) {
                case Quantity::integral: return x[6];
                case Quantity::length: return x[4];
                case Quantity::area: return x[7];
            }
            return 0.0;
        };
        using boost::math::quadrature::gauss_kronrod;
        return gauss_kronrod<double, 31>::integrate(f, 0.0, 2.0 * M_PI, 8, 1e-12);
    }

    double s0_;
};

}  // namespace oracle
