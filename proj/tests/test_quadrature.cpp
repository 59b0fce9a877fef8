#include <catch_amalgamated.hpp>

#include <cmath>

#include "wgb/quadrature.hpp"

using namespace wgb;

namespace {

// Exact monomial integral over the reference triangle (0,0)-(1,0)-(0,1):
// integral of x^a y^b = a! b! / (a+b+2)!.
double ref_triangle_moment(int a, int b) {
    auto fact = [](int n) {
        double f = 1.0;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    return fact(a) * fact(b) / fact(a + b + 2);
}

// Exact monomial integral over an axis-aligned rectangle.
double rect_moment(double x0, double x1, double y0, double y1, int a, int b) {
    return (std::pow(x1, a + 1) - std::pow(x0, a + 1)) / (a + 1) *
           (std::pow(y1, b + 1) - std::pow(y0, b + 1)) / (b + 1);
}

PolygonalMesh single_cell(std::vector<Vec2> pts) {
    PolygonalMesh mesh;
    mesh.vertices = std::move(pts);
    std::vector<int> loop(mesh.vertices.size());
    for (std::size_t i = 0; i < loop.size(); ++i) loop[i] = static_cast<int>(i);
    mesh.cells.push_back(loop);
    finalize_mesh(mesh);
    return mesh;
}

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate monomials exactly") {
    for (int n = 1; n <= 16; ++n) {
        std::vector<double> t, w;
        gauss_legendre(n, t, w);
        double sum = 0.0;
        for (double wi : w) sum += wi;
        CHECK(sum == Catch::Approx(2.0).epsilon(1e-14));
        for (int deg = 0; deg <= 2 * n - 1; ++deg) {
            double quad = 0.0;
            for (int i = 0; i < n; ++i) quad += w[i] * std::pow(t[i], deg);
            const double exact = (deg % 2 == 0) ? 2.0 / (deg + 1) : 0.0;
            INFO("n=" << n << " deg=" << deg);
            CHECK(quad == Catch::Approx(exact).margin(1e-13));
        }
    }
}

TEST_CASE("segment quadrature integrates arclength polynomials") {
    const Vec2 a{0.2, -0.3}, b{1.4, 0.9};
    const double len = norm(b - a);
    for (int deg = 0; deg <= 9; ++deg) {
        // integrate s^deg where s is arclength from a: exact len^{deg+1}/(deg+1)
        double quad = 0.0;
        for (const QuadPoint& q : segment_quadrature(a, b, deg)) {
            const double s = norm(q.p - a);
            quad += q.w * std::pow(s, deg);
        }
        CHECK(quad == Catch::Approx(std::pow(len, deg + 1) / (deg + 1)).epsilon(1e-13));
    }
}

TEST_CASE("reference triangle rules are exact for all requested degrees") {
    // covers both the compact symmetric tables (<= 5) and the collapsed
    // tensor construction above that
    const PolygonalMesh ref = single_cell({{0, 0}, {1, 0}, {0, 1}});
    for (int deg = 0; deg <= 20; ++deg) {
        const auto pts = cell_quadrature(ref, 0, deg);
        for (int a = 0; a + 0 <= deg; ++a) {
            for (int b = 0; a + b <= deg; ++b) {
                double quad = 0.0;
                for (const QuadPoint& q : pts) quad += q.w * std::pow(q.p.x, a) * std::pow(q.p.y, b);
                INFO("deg=" << deg << " monomial x^" << a << " y^" << b);
                CHECK(quad == Catch::Approx(ref_triangle_moment(a, b)).margin(1e-14));
            }
        }
    }
}

TEST_CASE("symmetric tables and tensor fallback agree on a skew triangle") {
    const PolygonalMesh tri = single_cell({{0.1, 0.2}, {1.3, 0.5}, {0.4, 1.7}});
    for (int deg = 2; deg <= 5; ++deg) {
        // same integrand, table rule vs high-degree tensor rule
        auto poly = [deg](const Vec2& p) {
            double v = 0.0;
            for (int a = 0; a <= deg; ++a)
                for (int b = 0; a + b <= deg; ++b)
                    v += (1.0 + a - 0.5 * b) * std::pow(p.x, a) * std::pow(p.y, b);
            return v;
        };
        double low = 0.0, high = 0.0;
        for (const QuadPoint& q : cell_quadrature(tri, 0, deg)) low += q.w * poly(q.p);
        for (const QuadPoint& q : cell_quadrature(tri, 0, deg + 10)) high += q.w * poly(q.p);
        CHECK(low == Catch::Approx(high).epsilon(1e-13));
    }
}

TEST_CASE("cell quadrature on the L-shaped hexagon matches rectangle sums") {
    // The L-shape (0,0)(1,0)(1,1)(1/2,1)(1/2,1/2)(0,1/2) is the union of the
    // rectangles [0,1]x[0,1/2] and [1/2,1]x[1/2,1]; monomial moments follow
    // from the closed rectangle formula.  In particular the x^2 moment is
    // 1/6 + 7/48 = 5/16.
    const PolygonalMesh mesh =
        single_cell({{0, 0}, {1, 0}, {1, 1}, {0.5, 1}, {0.5, 0.5}, {0, 0.5}});
    for (int a = 0; a <= 4; ++a) {
        for (int b = 0; a + b <= 4; ++b) {
            const double exact = rect_moment(0, 1, 0, 0.5, a, b) + rect_moment(0.5, 1, 0.5, 1, a, b);
            double quad = 0.0;
            for (const QuadPoint& q : cell_quadrature(mesh, 0, a + b))
                quad += q.w * std::pow(q.p.x, a) * std::pow(q.p.y, b);
            INFO("x^" << a << " y^" << b);
            CHECK(quad == Catch::Approx(exact).margin(1e-14));
        }
    }
    double x2 = 0.0;
    for (const QuadPoint& q : cell_quadrature(mesh, 0, 2)) x2 += q.w * q.p.x * q.p.x;
    CHECK(x2 == Catch::Approx(5.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("cell quadrature handles non-convex generated cells") {
    const PolygonalMesh mesh = build_nonconvex_mesh(NonconvexFamily::CrossSplit, 1);
    for (int c = 0; c < mesh.n_cells(); ++c) {
        double area = 0.0;
        for (const QuadPoint& q : cell_quadrature(mesh, c, 0)) area += q.w;
        CHECK(area == Catch::Approx(mesh.cell_area[c]).epsilon(1e-13));
    }
}

TEST_CASE("edge quadrature runs along the canonical direction") {
    const PolygonalMesh mesh = build_triangle_mesh(1);
    for (int e = 0; e < mesh.n_edges(); ++e) {
        const Vec2 a = mesh.vertices[mesh.edges[e].a];
        const Vec2 b = mesh.vertices[mesh.edges[e].b];
        double len = 0.0;
        for (const QuadPoint& q : edge_quadrature(mesh, e, 3)) {
            len += q.w;
            // each point lies on the segment
            const double t = dot(q.p - a, b - a) / dot(b - a, b - a);
            CHECK((t > 0.0 && t < 1.0));
            CHECK(std::abs(cross(q.p - a, b - a)) < 1e-14);
        }
        CHECK(len == Catch::Approx(mesh.edge_length(e)).epsilon(1e-14));
    }
}

TEST_CASE("quadrature argument validation") {
    std::vector<double> t, w;
    CHECK_THROWS_AS(gauss_legendre(0, t, w), std::invalid_argument);
    std::vector<QuadPoint> out;
    CHECK_THROWS_AS(append_triangle_quadrature({0, 0}, {0, 1}, {1, 0}, 2, out),
                    std::runtime_error);  // clockwise triangle
}
