#pragma once

#include <Eigen/Dense>

#include "wgb/basis.hpp"
#include "wgb/mesh.hpp"
#include "wgb/quadrature.hpp"

namespace wgb {

/// Exactness used for volume integrals of products of cell polynomials of
/// degrees k and r.  The +2 margin absorbs the centroid/scale mapping and is
/// the default safety bump throughout.
inline int volume_exactness(int k, int r) { return 2 * std::max(k, r) + 2; }

/// Exactness used for edge integrals of (edge poly of degree k) x (cell poly
/// of degree r) x (constant normal component).
inline int edge_exactness(int k, int r) { return k + r + 2; }

/// Cell mass matrix M_ij = integral over the cell of b_i b_j.
inline Eigen::MatrixXd mass_matrix(const PolygonalMesh& mesh, int c, const MonomialBasis& basis,
                                   int exactness = -1) {
    if (exactness < 0) exactness = 2 * basis.degree() + 2;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
    for (const QuadPoint& q : cell_quadrature(mesh, c, exactness)) {
        const Eigen::VectorXd v = basis.values(q.p);
        M.noalias() += q.w * v * v.transpose();
    }
    return 0.5 * (M + M.transpose());
}

/// Rectangular mass matrix between two bases on the same cell:
/// M_ij = integral of trial_i test_j.
inline Eigen::MatrixXd mixed_mass_matrix(const PolygonalMesh& mesh, int c,
                                         const MonomialBasis& trial, const MonomialBasis& test,
                                         int exactness = -1) {
    if (exactness < 0) exactness = volume_exactness(trial.degree(), test.degree());
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(trial.dim(), test.dim());
    for (const QuadPoint& q : cell_quadrature(mesh, c, exactness)) {
        const Eigen::VectorXd u = trial.values(q.p);
        const Eigen::VectorXd v = test.values(q.p);
        M.noalias() += q.w * u * v.transpose();
    }
    return M;
}

/// Derivative couplings Gx_ij = integral of b_i d(q_j)/dx (and Gy with d/dy)
/// for trial basis b and test basis q on one cell.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> grad_coupling(const PolygonalMesh& mesh, int c,
                                                                 const MonomialBasis& trial,
                                                                 const MonomialBasis& test,
                                                                 int exactness = -1) {
    if (exactness < 0) exactness = volume_exactness(trial.degree(), test.degree());
    Eigen::MatrixXd Gx = Eigen::MatrixXd::Zero(trial.dim(), test.dim());
    Eigen::MatrixXd Gy = Eigen::MatrixXd::Zero(trial.dim(), test.dim());
    for (const QuadPoint& q : cell_quadrature(mesh, c, exactness)) {
        const Eigen::VectorXd u = trial.values(q.p);
        const Eigen::MatrixX2d g = test.gradients(q.p);
        Gx.noalias() += q.w * u * g.col(0).transpose();
        Gy.noalias() += q.w * u * g.col(1).transpose();
    }
    return {Gx, Gy};
}

/// Stiffness-type matrix K_ij = integral of grad b_i . grad b_j.
inline Eigen::MatrixXd stiffness_matrix(const PolygonalMesh& mesh, int c,
                                        const MonomialBasis& basis, int exactness = -1) {
    if (exactness < 0) exactness = 2 * basis.degree() + 2;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
    for (const QuadPoint& q : cell_quadrature(mesh, c, exactness)) {
        const Eigen::MatrixX2d g = basis.gradients(q.p);
        K.noalias() += q.w * (g * g.transpose());
    }
    return 0.5 * (K + K.transpose());
}

/// Moments m_j = integral over the cell of q_j.
inline Eigen::VectorXd basis_moments(const PolygonalMesh& mesh, int c, const MonomialBasis& basis,
                                     int exactness = -1) {
    if (exactness < 0) exactness = basis.degree() + 2;
    Eigen::VectorXd m = Eigen::VectorXd::Zero(basis.dim());
    for (const QuadPoint& q : cell_quadrature(mesh, c, exactness)) m += q.w * basis.values(q.p);
    return m;
}

/// Edge/normal couplings for the i-th loop edge of cell c:
///   Ex_mj = integral over the edge of beta_m q_j n_x,
///   Ey_mj = integral over the edge of beta_m q_j n_y,
/// where beta is the (global) edge basis, q the cell test basis, and n the
/// outward normal of cell c on that edge.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> edge_normal_coupling(
    const PolygonalMesh& mesh, int c, int local_edge, const EdgeBasis& edge_basis,
    const MonomialBasis& test, int exactness = -1) {
    if (exactness < 0) exactness = edge_exactness(edge_basis.degree(), test.degree());
    const int e = mesh.cell_edges[c][local_edge];
    const Vec2 n = outward_normal(mesh, c, local_edge);
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(edge_basis.dim(), test.dim());
    for (const QuadPoint& q : edge_quadrature(mesh, e, exactness)) {
        const Eigen::VectorXd beta = edge_basis.values(q.p);
        const Eigen::VectorXd v = test.values(q.p);
        E.noalias() += q.w * beta * v.transpose();
    }
    return {E * n.x, E * n.y};
}

}  // namespace wgb
