#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "wgb/mesh.hpp"
#include "wgb/projection.hpp"

namespace wgb {

/// Closed-form reference solution of the Brinkman model
///   -laplace(u) + grad(p) + kappa_inv u = f,   div u = 0,   u = 0 on the boundary
/// on the unit square, with everything needed by the refinement studies.
struct ManufacturedCase {
    std::string name;
    double kappa_inv = 0.0;
    VectorField velocity;
    std::function<Eigen::Matrix2d(const Vec2&)> velocity_gradient;  ///< row i = grad u_i
    ScalarField pressure;
    VectorField forcing;
    /// Polynomial degrees of forcing and velocity, so load and projection
    /// quadratures can be exact; negative for non-polynomial cases.
    int forcing_degree = -1;
    int velocity_degree = -1;
};

/// Divergence-free polynomial vortex from the stream function
/// psi = -4 a(x) a(y) with a(t) = t^2 (1-t)^2, so u = (psi_y, -psi_x)
/// vanishes on the whole boundary together with its normal derivative.
/// Pressure is the mean-zero cubic (x - 1/2)^3.
inline ManufacturedCase quartic_vortex_case(double kappa_inv) {
    auto a = [](double t) { return t * t * (1.0 - t) * (1.0 - t); };
    auto da = [](double t) { return 2.0 * t - 6.0 * t * t + 4.0 * t * t * t; };
    auto dda = [](double t) { return 2.0 - 12.0 * t + 12.0 * t * t; };
    auto ddda = [](double t) { return -12.0 + 24.0 * t; };

    ManufacturedCase mc;
    mc.name = "quartic_vortex";
    mc.kappa_inv = kappa_inv;
    mc.forcing_degree = 7;
    mc.velocity_degree = 7;
    mc.velocity = [=](const Vec2& p) -> Vec2 {
        return {-4.0 * a(p.x) * da(p.y), 4.0 * da(p.x) * a(p.y)};
    };
    mc.velocity_gradient = [=](const Vec2& p) {
        Eigen::Matrix2d g;
        g(0, 0) = -4.0 * da(p.x) * da(p.y);
        g(0, 1) = -4.0 * a(p.x) * dda(p.y);
        g(1, 0) = 4.0 * dda(p.x) * a(p.y);
        g(1, 1) = 4.0 * da(p.x) * da(p.y);
        return g;
    };
    mc.pressure = [](const Vec2& p) {
        const double t = p.x - 0.5;
        return t * t * t;
    };
    mc.forcing = [=](const Vec2& p) -> Vec2 {
        const double lap_u1 = -4.0 * (dda(p.x) * da(p.y) + a(p.x) * ddda(p.y));
        const double lap_u2 = 4.0 * (ddda(p.x) * a(p.y) + da(p.x) * dda(p.y));
        const double dp_dx = 3.0 * (p.x - 0.5) * (p.x - 0.5);
        const Vec2 u = {-4.0 * a(p.x) * da(p.y), 4.0 * da(p.x) * a(p.y)};
        return {-lap_u1 + dp_dx + kappa_inv * u.x, -lap_u2 + kappa_inv * u.y};
    };
    return mc;
}

/// Consistency case with zero velocity and a mean-zero polynomial pressure of
/// degree `pressure_degree` (so it lies in the discrete pressure space for
/// k >= pressure_degree + 1): f = grad p, and the scheme must reproduce
/// (u, p) exactly up to roundoff.
inline ManufacturedCase polynomial_pressure_case(int pressure_degree, double kappa_inv) {
    ManufacturedCase mc;
    mc.kappa_inv = kappa_inv;
    mc.velocity = [](const Vec2&) -> Vec2 { return {0.0, 0.0}; };
    mc.velocity_gradient = [](const Vec2&) { return Eigen::Matrix2d::Zero().eval(); };
    mc.velocity_degree = 0;
    switch (pressure_degree) {
        case 0:
            mc.name = "zero_data";
            mc.forcing_degree = 0;
            mc.pressure = [](const Vec2&) { return 0.0; };
            mc.forcing = [](const Vec2&) -> Vec2 { return {0.0, 0.0}; };
            break;
        case 1:
            mc.name = "linear_pressure";
            mc.forcing_degree = 0;
            mc.pressure = [](const Vec2& p) { return p.x - 0.5; };
            mc.forcing = [](const Vec2&) -> Vec2 { return {1.0, 0.0}; };
            break;
        case 2:
            mc.name = "quadratic_pressure";
            mc.forcing_degree = 1;
            // x^2 - x y + y^2 shifted to zero mean over the unit square
            mc.pressure = [](const Vec2& p) {
                return p.x * p.x - p.x * p.y + p.y * p.y - 5.0 / 12.0;
            };
            mc.forcing = [](const Vec2& p) -> Vec2 {
                return {2.0 * p.x - p.y, -p.x + 2.0 * p.y};
            };
            break;
        default:
            throw std::invalid_argument(
                "polynomial_pressure_case: pressure_degree must be 0, 1, or 2");
    }
    return mc;
}

}  // namespace wgb
