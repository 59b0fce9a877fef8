#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "wgb/mesh.hpp"

namespace wgb {

struct QuadPoint {
    Vec2 p;
    double w = 0.0;
};

/// Gauss-Legendre nodes/weights on [-1, 1]; exact for polynomials of degree
/// 2n - 1.  Nodes found by Newton iteration on P_n, seeded with the Chebyshev
/// estimate (the classic gauleg construction).
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

/// Quadrature along a straight segment [a, b], exact for polynomials (in the
/// arclength parameter) of degree `exactness`.  Weights sum to |b - a|.
inline std::vector<QuadPoint> segment_quadrature(const Vec2& a, const Vec2& b, int exactness) {
    const int n = std::max(1, (exactness + 2) / 2);
    std::vector<double> t, w;
    gauss_legendre(n, t, w);
    const double len = norm(b - a);
    std::vector<QuadPoint> out(n);
    for (int i = 0; i < n; ++i) {
        const double s = 0.5 * (1.0 + t[i]);
        out[i].p = a + (b - a) * s;
        out[i].w = 0.5 * len * w[i];
    }
    return out;
}

namespace detail {

struct RefTriPoint {
    double x, y, w;  // on the reference triangle (0,0)-(1,0)-(0,1); weights sum to 1/2
};

/// Append a fully symmetric barycentric orbit.  `l` are the barycentric
/// coordinates of one representative; `w` is the weight of each point with
/// the convention that all weights over the triangle sum to 1.
inline void push_orbit(std::vector<RefTriPoint>& rule, double l1, double l2, double l3, double w) {
    const std::array<std::array<double, 3>, 6> perms = {{{l1, l2, l3},
                                                         {l2, l3, l1},
                                                         {l3, l1, l2},
                                                         {l1, l3, l2},
                                                         {l3, l2, l1},
                                                         {l2, l1, l3}}};
    std::vector<std::array<double, 3>> unique;
    for (const auto& p : perms) {
        bool seen = false;
        for (const auto& q : unique)
            seen = seen || (std::abs(p[0] - q[0]) < 1e-12 && std::abs(p[1] - q[1]) < 1e-12);
        if (!seen) unique.push_back(p);
    }
    for (const auto& p : unique)
        rule.push_back({p[1], p[2], 0.5 * w});  // x = lambda_2, y = lambda_3
}

/// Compact symmetric rules for low exactness; weights sum to 1/2.
inline std::vector<RefTriPoint> symmetric_triangle_rule(int degree) {
    std::vector<RefTriPoint> rule;
    switch (degree) {
        case 0:
        case 1:
            push_orbit(rule, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0);
            break;
        case 2:
            push_orbit(rule, 2.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 3);
            break;
        case 3:
            push_orbit(rule, 1.0 / 3, 1.0 / 3, 1.0 / 3, -9.0 / 16);
            push_orbit(rule, 0.6, 0.2, 0.2, 25.0 / 48);
            break;
        case 4:
            push_orbit(rule, 0.816847572980459, 0.091576213509771, 0.091576213509771,
                       0.109951743655322);
            push_orbit(rule, 0.108103018168070, 0.445948490915965, 0.445948490915965,
                       0.223381589678011);
            break;
        case 5:
            push_orbit(rule, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225);
            push_orbit(rule, 0.797426985353087, 0.101286507323456, 0.101286507323456,
                       0.125939180544827);
            push_orbit(rule, 0.059715871789770, 0.470142064105115, 0.470142064105115,
                       0.132394152788506);
            break;
        default:
            throw std::invalid_argument("symmetric_triangle_rule: no table for degree " +
                                        std::to_string(degree));
    }
    return rule;
}

/// Collapsed-coordinate tensor rule on the reference triangle, exact for any
/// requested degree: map the unit square by (u, v) -> (u, v(1-u)) and fold
/// the Jacobian (1-u) into the weights.
inline std::vector<RefTriPoint> duffy_triangle_rule(int degree) {
    const int n = std::max(1, (degree + 3) / 2);  // covers the +1 from the Jacobian
    std::vector<double> t, w;
    gauss_legendre(n, t, w);
    std::vector<RefTriPoint> rule;
    rule.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const double u = 0.5 * (1.0 + t[i]);
        const double wu = 0.5 * w[i];
        for (int j = 0; j < n; ++j) {
            const double v = 0.5 * (1.0 + t[j]);
            const double wv = 0.5 * w[j];
            rule.push_back({u, v * (1.0 - u), wu * wv * (1.0 - u)});
        }
    }
    return rule;
}

inline const std::vector<RefTriPoint>& reference_triangle_rule(int degree) {
    static thread_local std::vector<std::vector<RefTriPoint>> cache;
    if (degree < 0) degree = 0;
    if (static_cast<int>(cache.size()) <= degree) cache.resize(degree + 1);
    if (cache[degree].empty())
        cache[degree] = (degree <= 5) ? symmetric_triangle_rule(degree) : duffy_triangle_rule(degree);
    return cache[degree];
}

}  // namespace detail

/// Quadrature over one triangle given by its corners, exact to `exactness`.
inline void append_triangle_quadrature(const Vec2& v0, const Vec2& v1, const Vec2& v2,
                                       int exactness, std::vector<QuadPoint>& out) {
    const double a2 = cross(v1 - v0, v2 - v0);  // twice the signed area
    if (!(a2 > 0.0))
        throw std::runtime_error("append_triangle_quadrature: degenerate or CW triangle");
    const auto& ref = detail::reference_triangle_rule(exactness);
    for (const auto& q : ref) {
        QuadPoint qp;
        qp.p = v0 + (v1 - v0) * q.x + (v2 - v0) * q.y;
        qp.w = q.w * a2;  // ref weights sum to 1/2; physical weights to the area
        out.push_back(qp);
    }
}

/// Quadrature over a mesh cell, composed over an ear-clipping triangulation;
/// exact for polynomials of degree `exactness` on the cell.
inline std::vector<QuadPoint> cell_quadrature(const PolygonalMesh& mesh, int c, int exactness) {
    std::vector<QuadPoint> out;
    for (const auto& tri : triangulate_cell(mesh, c))
        append_triangle_quadrature(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                   mesh.vertices[tri[2]], exactness, out);
    return out;
}

/// Quadrature along edge `e` of the mesh in its canonical a -> b direction.
inline std::vector<QuadPoint> edge_quadrature(const PolygonalMesh& mesh, int e, int exactness) {
    const Edge& ed = mesh.edges[e];
    return segment_quadrature(mesh.vertices[ed.a], mesh.vertices[ed.b], exactness);
}

}  // namespace wgb
