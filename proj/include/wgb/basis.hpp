#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "wgb/mesh.hpp"

namespace wgb {

/// Scaled monomial basis on a cell: ((x - xc)/h)^a ((y - yc)/h)^b, ordered by
/// total degree and then by increasing y-power, so index 0 is the constant.
/// Centering at the centroid makes the two linear modes integrate to zero;
/// scaling by the cell diameter keeps the mass matrix well conditioned on
/// small cells.
class MonomialBasis {
  public:
    MonomialBasis(int degree, const Vec2& center, double scale)
        : degree_(degree), center_(center), scale_(scale) {
        if (degree < 0) throw std::invalid_argument("MonomialBasis: degree must be >= 0");
        if (!(scale > 0.0)) throw std::invalid_argument("MonomialBasis: scale must be positive");
        for (int d = 0; d <= degree; ++d)
            for (int b = 0; b <= d; ++b) exponents_.push_back({d - b, b});
    }

    MonomialBasis(int degree, const PolygonalMesh& mesh, int cell)
        : MonomialBasis(degree, mesh.cell_centroid[cell], mesh.cell_diameter[cell]) {}

    int degree() const { return degree_; }
    int dim() const { return static_cast<int>(exponents_.size()); }
    static int dimension(int degree) { return (degree + 1) * (degree + 2) / 2; }

    Eigen::VectorXd values(const Vec2& p) const {
        const auto [xi, eta] = local_powers(p);
        Eigen::VectorXd out(dim());
        for (int i = 0; i < dim(); ++i) out[i] = xi[exponents_[i][0]] * eta[exponents_[i][1]];
        return out;
    }

    /// Gradient of every basis function: column 0 is d/dx, column 1 is d/dy.
    Eigen::MatrixX2d gradients(const Vec2& p) const {
        const auto [xi, eta] = local_powers(p);
        Eigen::MatrixX2d out(dim(), 2);
        for (int i = 0; i < dim(); ++i) {
            const int a = exponents_[i][0];
            const int b = exponents_[i][1];
            out(i, 0) = (a > 0) ? a / scale_ * xi[a - 1] * eta[b] : 0.0;
            out(i, 1) = (b > 0) ? b / scale_ * xi[a] * eta[b - 1] : 0.0;
        }
        return out;
    }

    double value(int i, const Vec2& p) const {
        const auto [xi, eta] = local_powers(p);
        return xi[exponents_[i][0]] * eta[exponents_[i][1]];
    }

    /// Evaluate the polynomial with the given coefficient vector.
    double evaluate(const Eigen::VectorXd& coeffs, const Vec2& p) const {
        return coeffs.dot(values(p));
    }

    const std::array<int, 2>& exponent(int i) const { return exponents_[i]; }

  private:
    std::pair<std::vector<double>, std::vector<double>> local_powers(const Vec2& p) const {
        const double xi = (p.x - center_.x) / scale_;
        const double eta = (p.y - center_.y) / scale_;
        std::vector<double> xs(degree_ + 1, 1.0), ys(degree_ + 1, 1.0);
        for (int d = 1; d <= degree_; ++d) {
            xs[d] = xs[d - 1] * xi;
            ys[d] = ys[d - 1] * eta;
        }
        return {xs, ys};
    }

    int degree_;
    Vec2 center_;
    double scale_;
    std::vector<std::array<int, 2>> exponents_;
};

/// Legendre basis along a mesh edge, parameterized by arclength from the
/// canonical first endpoint (lower vertex id) mapped to t in [-1, 1].  Both
/// cells sharing the edge see the same functions, and the edge mass matrix is
/// diagonal: integral of P_i P_j over the edge = |e|/(2i+1) delta_ij.
class EdgeBasis {
  public:
    EdgeBasis(int degree, const Vec2& a, const Vec2& b) : degree_(degree), a_(a) {
        if (degree < 0) throw std::invalid_argument("EdgeBasis: degree must be >= 0");
        const Vec2 d = b - a;
        length_ = norm(d);
        if (!(length_ > 0.0)) throw std::invalid_argument("EdgeBasis: degenerate edge");
        dir_ = d * (1.0 / length_);
    }

    EdgeBasis(int degree, const PolygonalMesh& mesh, int edge)
        : EdgeBasis(degree, mesh.vertices[mesh.edges[edge].a], mesh.vertices[mesh.edges[edge].b]) {}

    int degree() const { return degree_; }
    int dim() const { return degree_ + 1; }
    double length() const { return length_; }

    /// Map a point on the edge to the reference parameter t in [-1, 1].
    double parameter(const Vec2& p) const { return 2.0 * dot(p - a_, dir_) / length_ - 1.0; }

    Eigen::VectorXd values(const Vec2& p) const {
        const double t = parameter(p);
        Eigen::VectorXd out(dim());
        out[0] = 1.0;
        if (degree_ >= 1) out[1] = t;
        for (int j = 1; j < degree_; ++j)
            out[j + 1] = ((2.0 * j + 1.0) * t * out[j] - j * out[j - 1]) / (j + 1.0);
        return out;
    }

    double evaluate(const Eigen::VectorXd& coeffs, const Vec2& p) const {
        return coeffs.dot(values(p));
    }

    /// Diagonal of the edge mass matrix.
    Eigen::VectorXd mass_diagonal() const {
        Eigen::VectorXd d(dim());
        for (int i = 0; i < dim(); ++i) d[i] = length_ / (2.0 * i + 1.0);
        return d;
    }

  private:
    int degree_;
    Vec2 a_;
    Vec2 dir_;
    double length_ = 0.0;
};

}  // namespace wgb
