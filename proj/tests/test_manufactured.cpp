#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "wgb/manufactured.hpp"
#include "wgb/mesh.hpp"
#include "wgb/quadrature.hpp"

using namespace wgb;

namespace {

// Central finite differences, the independent oracle for every closed-form
// derivative in the reference cases.
Vec2 fd_gradient(const ScalarField& f, const Vec2& p, double h) {
    return {(f({p.x + h, p.y}) - f({p.x - h, p.y})) / (2 * h),
            (f({p.x, p.y + h}) - f({p.x, p.y - h})) / (2 * h)};
}

double fd_laplacian(const ScalarField& f, const Vec2& p, double h) {
    return (f({p.x + h, p.y}) + f({p.x - h, p.y}) + f({p.x, p.y + h}) + f({p.x, p.y - h}) -
            4.0 * f(p)) /
           (h * h);
}

std::vector<Vec2> interior_sample_points(int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(0.05, 0.95);
    std::vector<Vec2> pts;
    for (int i = 0; i < count; ++i) pts.push_back({dist(rng), dist(rng)});
    return pts;
}

}  // namespace

TEST_CASE("vortex case: velocity vanishes on the whole boundary") {
    const ManufacturedCase mc = quartic_vortex_case(1.0);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int i = 0; i < 250; ++i) {
        const double t = dist(rng);
        for (const Vec2& p : {Vec2{t, 0.0}, Vec2{t, 1.0}, Vec2{0.0, t}, Vec2{1.0, t}}) {
            const Vec2 u = mc.velocity(p);
            CHECK(std::abs(u.x) < 1e-15);
            CHECK(std::abs(u.y) < 1e-15);
        }
    }
}

TEST_CASE("vortex case: pinned sample value") {
    // u1(1/2, 1/4) = -4 a(1/2) da(1/4) with a(1/2) = 1/16, da(1/4) = 3/16:
    // -4 / 16 * 3/16 = -3/64
    const ManufacturedCase mc = quartic_vortex_case(0.0);
    CHECK(mc.velocity({0.5, 0.25}).x == Catch::Approx(-3.0 / 64.0).epsilon(1e-14));
    CHECK(mc.velocity({0.5, 0.5}).x == Catch::Approx(0.0).margin(1e-15));  // da(1/2) = 0
}

TEST_CASE("vortex case: divergence free") {
    const ManufacturedCase mc = quartic_vortex_case(3.0);
    for (const Vec2& p : interior_sample_points(50, 11)) {
        const Eigen::Matrix2d g = mc.velocity_gradient(p);
        CHECK(std::abs(g(0, 0) + g(1, 1)) < 1e-14);
        // finite-difference divergence as the independent check
        const ScalarField u1 = [&](const Vec2& q) { return mc.velocity(q).x; };
        const ScalarField u2 = [&](const Vec2& q) { return mc.velocity(q).y; };
        const double div_fd = fd_gradient(u1, p, 1e-6).x + fd_gradient(u2, p, 1e-6).y;
        CHECK(std::abs(div_fd) < 1e-8);
    }
}

TEST_CASE("vortex case: gradient matrix matches finite differences") {
    const ManufacturedCase mc = quartic_vortex_case(0.0);
    const ScalarField u1 = [&](const Vec2& q) { return mc.velocity(q).x; };
    const ScalarField u2 = [&](const Vec2& q) { return mc.velocity(q).y; };
    for (const Vec2& p : interior_sample_points(25, 23)) {
        const Eigen::Matrix2d g = mc.velocity_gradient(p);
        const Vec2 g1 = fd_gradient(u1, p, 1e-5);
        const Vec2 g2 = fd_gradient(u2, p, 1e-5);
        CHECK(g(0, 0) == Catch::Approx(g1.x).margin(1e-8));
        CHECK(g(0, 1) == Catch::Approx(g1.y).margin(1e-8));
        CHECK(g(1, 0) == Catch::Approx(g2.x).margin(1e-8));
        CHECK(g(1, 1) == Catch::Approx(g2.y).margin(1e-8));
    }
}

TEST_CASE("vortex case: forcing assembles the momentum equation") {
    // f = -laplace(u) + grad(p) + kappa_inv u, checked against second-order
    // finite differences of the velocity and pressure alone.
    for (const double kappa_inv : {0.0, 1.0, 250.0}) {
        const ManufacturedCase mc = quartic_vortex_case(kappa_inv);
        const ScalarField u1 = [&](const Vec2& q) { return mc.velocity(q).x; };
        const ScalarField u2 = [&](const Vec2& q) { return mc.velocity(q).y; };
        const double h = 1e-4;
        for (const Vec2& p : interior_sample_points(25, 31)) {
            const Vec2 f = mc.forcing(p);
            const Vec2 gp = fd_gradient(mc.pressure, p, h);
            const Vec2 u = mc.velocity(p);
            const double f1 = -fd_laplacian(u1, p, h) + gp.x + kappa_inv * u.x;
            const double f2 = -fd_laplacian(u2, p, h) + gp.y + kappa_inv * u.y;
            CHECK(f.x == Catch::Approx(f1).margin(2e-5 * (1.0 + std::abs(f1))));
            CHECK(f.y == Catch::Approx(f2).margin(2e-5 * (1.0 + std::abs(f2))));
        }
    }
}

TEST_CASE("vortex case: permeability enters the forcing linearly") {
    const ManufacturedCase stokes = quartic_vortex_case(0.0);
    const ManufacturedCase darcy = quartic_vortex_case(1e6);
    for (const Vec2& p : interior_sample_points(20, 41)) {
        const Vec2 diff = {darcy.forcing(p).x - stokes.forcing(p).x,
                           darcy.forcing(p).y - stokes.forcing(p).y};
        const Vec2 u = stokes.velocity(p);
        CHECK(diff.x == Catch::Approx(1e6 * u.x).margin(1e-9 * (1.0 + 1e6 * std::abs(u.x))));
        CHECK(diff.y == Catch::Approx(1e6 * u.y).margin(1e-9 * (1.0 + 1e6 * std::abs(u.y))));
    }
}

TEST_CASE("pressures have zero mean over the unit square") {
    const PolygonalMesh mesh = build_triangle_mesh(3);
    for (const ManufacturedCase& mc :
         {quartic_vortex_case(1.0), polynomial_pressure_case(1, 0.0),
          polynomial_pressure_case(2, 1.0)}) {
        double mean = 0.0;
        for (int c = 0; c < mesh.n_cells(); ++c)
            for (const QuadPoint& q : cell_quadrature(mesh, c, 6)) mean += q.w * mc.pressure(q.p);
        INFO(mc.name);
        CHECK(std::abs(mean) < 1e-13);
    }
}

TEST_CASE("polynomial pressure cases: f = grad p with zero velocity") {
    for (int degree : {0, 1, 2}) {
        const ManufacturedCase mc = polynomial_pressure_case(degree, 2.0);
        for (const Vec2& p : interior_sample_points(20, 53)) {
            CHECK(mc.velocity(p).x == 0.0);
            CHECK(mc.velocity(p).y == 0.0);
            CHECK(mc.velocity_gradient(p).norm() == 0.0);
            const Vec2 gp = fd_gradient(mc.pressure, p, 1e-6);
            CHECK(mc.forcing(p).x == Catch::Approx(gp.x).margin(1e-9));
            CHECK(mc.forcing(p).y == Catch::Approx(gp.y).margin(1e-9));
        }
    }
    CHECK(polynomial_pressure_case(0, 0.0).name == "zero_data");
    CHECK(polynomial_pressure_case(1, 0.0).name == "linear_pressure");
    CHECK(polynomial_pressure_case(2, 0.0).name == "quadratic_pressure");
    CHECK_THROWS(polynomial_pressure_case(3, 0.0));
}

TEST_CASE("stated polynomial degrees are honest") {
    // projecting the forcing onto P_degree on a coarse cell and evaluating the
    // residual at fresh points must give zero when the stated degree is right
    const ManufacturedCase mc = quartic_vortex_case(1.0);
    CHECK(mc.forcing_degree == 7);
    CHECK(mc.velocity_degree == 7);
    const PolygonalMesh mesh = build_triangle_mesh(1);
    const MonomialBasis basis(7, mesh, 0);
    const ScalarField f1 = [&](const Vec2& p) { return mc.forcing(p).x; };
    const Eigen::VectorXd coeffs = project_cell(mesh, 0, basis, f1, 16);
    for (const Vec2& p : {Vec2{0.31, 0.17}, Vec2{0.62, 0.05}, Vec2{0.81, 0.13}}) {
        // points inside cell 0 (below the diagonal)
        CHECK(basis.evaluate(coeffs, p) == Catch::Approx(f1(p)).margin(1e-9));
    }
}
