#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <vector>

#include "wgb/local_integrals.hpp"
#include "wgb/mesh.hpp"
#include "wgb/projection.hpp"
#include "wgb/weak_operators.hpp"

namespace wgb {

/// L2 distance of the interior parts of two discrete velocity fields:
/// sqrt( sum_T || a0 - b0 ||_T^2 ), edge parts ignored.
inline double l2_velocity_error(const PolygonalMesh& mesh, const ProjectedField& a,
                                const ProjectedField& b) {
    double sq = 0.0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const MonomialBasis basis(a.k, mesh, c);
        const Eigen::MatrixXd M = mass_matrix(mesh, c, basis);
        const Eigen::VectorXd d = a.cell_coeffs[c] - b.cell_coeffs[c];
        const int n = basis.dim();
        sq += d.head(n).dot(M * d.head(n)) + d.tail(n).dot(M * d.tail(n));
    }
    return std::sqrt(sq);
}

/// Energy (triple-bar) seminorm squared of a discrete field on one cell:
/// || grad_w v ||_T^2 + kappa_inv || v0 ||_T^2, given prebuilt operators.
inline double energy_norm_sq_cell(const CellWeakOps& ops, const Eigen::VectorXd& dofs,
                                  double kappa_inv) {
    double sq = 0.0;
    for (int comp = 0; comp < 2; ++comp) {
        const Eigen::VectorXd s = ops.scalar_component(dofs, comp);
        const Eigen::VectorXd gx = ops.Sx * s;
        const Eigen::VectorXd gy = ops.Sy * s;
        sq += gx.dot(ops.Mr * gx) + gy.dot(ops.Mr * gy);
        if (kappa_inv != 0.0) {
            const Eigen::VectorXd v0 = s.head(ops.layout.dim_interior);
            sq += kappa_inv * v0.dot(ops.Mk * v0);
        }
    }
    return sq;
}

/// Energy norm of a discrete field over the whole mesh.
inline double energy_norm(const PolygonalMesh& mesh, int k, int r, double kappa_inv,
                          const ProjectedField& v) {
    double sq = 0.0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const CellWeakOps ops = build_cell_weak_ops(mesh, c, k, r);
        sq += energy_norm_sq_cell(ops, local_dofs(mesh, c, v), kappa_inv);
    }
    return std::sqrt(sq);
}

/// Energy distance ||| a - b ||| of two discrete fields.
inline double energy_error(const PolygonalMesh& mesh, int k, int r, double kappa_inv,
                           const ProjectedField& a, const ProjectedField& b) {
    double sq = 0.0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const CellWeakOps ops = build_cell_weak_ops(mesh, c, k, r);
        const Eigen::VectorXd d = local_dofs(mesh, c, a) - local_dofs(mesh, c, b);
        sq += energy_norm_sq_cell(ops, d, kappa_inv);
    }
    return std::sqrt(sq);
}

/// L2 distance between an exact pressure and a cellwise polynomial pressure.
inline double l2_pressure_error(const PolygonalMesh& mesh, int k, const ScalarField& p_exact,
                                const std::vector<Eigen::VectorXd>& p_coeffs,
                                int exactness = -1) {
    if (exactness < 0) exactness = 2 * k + 4;
    double sq = 0.0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const MonomialBasis basis(k - 1, mesh, c);
        for (const QuadPoint& q : cell_quadrature(mesh, c, exactness)) {
            const double d = p_exact(q.p) - basis.evaluate(p_coeffs[c], q.p);
            sq += q.w * d * d;
        }
    }
    return std::sqrt(sq);
}

/// Discrete H1-type norm of a discrete velocity field:
///   sum_T ( || grad v0 ||_T^2 + kappa_inv || v0 ||_T^2
///           + h_T^{-1} || v0 - vb ||_{boundary of T}^2 ).
inline double discrete_h1_norm(const PolygonalMesh& mesh, double kappa_inv,
                               const ProjectedField& v) {
    const int k = v.k;
    double sq = 0.0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const MonomialBasis basis(k, mesh, c);
        const Eigen::MatrixXd K = stiffness_matrix(mesh, c, basis);
        const Eigen::MatrixXd M = mass_matrix(mesh, c, basis);
        const int n = basis.dim();
        const Eigen::VectorXd& coeffs = v.cell_coeffs[c];
        for (int comp = 0; comp < 2; ++comp) {
            const Eigen::VectorXd v0 = coeffs.segment(comp * n, n);
            sq += v0.dot(K * v0);
            if (kappa_inv != 0.0) sq += kappa_inv * v0.dot(M * v0);
        }
        const int n_edges = static_cast<int>(mesh.cell_edges[c].size());
        const double inv_h = 1.0 / mesh.cell_diameter[c];
        for (int i = 0; i < n_edges; ++i) {
            const int e = mesh.cell_edges[c][i];
            const EdgeBasis eb(k, mesh, e);
            for (const QuadPoint& q : edge_quadrature(mesh, e, 2 * k + 2)) {
                const Eigen::VectorXd bv = basis.values(q.p);
                const Eigen::VectorXd ev = eb.values(q.p);
                for (int comp = 0; comp < 2; ++comp) {
                    const double interior = coeffs.segment(comp * n, n).dot(bv);
                    const double edge =
                        v.edge_coeffs[e].segment(comp * (k + 1), k + 1).dot(ev);
                    const double d = interior - edge;
                    sq += inv_h * q.w * d * d;
                }
            }
        }
    }
    return std::sqrt(sq);
}

/// One row of a refinement study.
struct LevelRecord {
    int level = 0;
    double h = 0.0;
    int n_cells = 0;
    int n_dofs = 0;            ///< total unknowns including multiplier
    double err_u_l2 = 0.0;     ///< || Q_h u - u_h || (interior L2)
    double err_energy = 0.0;   ///< ||| Q_h u - u_h |||
    double err_p_l2 = 0.0;     ///< || p - p_h ||
    double wdiv_residual = 0.0;
    double solve_residual = 0.0;
};

struct ErrorReport {
    int k = 0;
    int r = 0;
    double kappa_inv = 0.0;
    std::string family;
    std::vector<LevelRecord> rows;
};

/// Observed order between two consecutive errors under mesh halving:
/// log2(coarse / fine).  Returns nullopt when either error is zero.
inline std::optional<double> observed_order(double coarse, double fine) {
    if (!(coarse > 0.0) || !(fine > 0.0)) return std::nullopt;
    return std::log2(coarse / fine);
}

/// Orders column for a report: entry i is the order between rows i-1 and i.
inline std::vector<std::optional<double>> convergence_orders(
    const std::vector<double>& errors) {
    std::vector<std::optional<double>> orders(errors.size());
    for (std::size_t i = 1; i < errors.size(); ++i)
        orders[i] = observed_order(errors[i - 1], errors[i]);
    return orders;
}

}  // namespace wgb
