#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "wgb/basis.hpp"
#include "wgb/linalg.hpp"
#include "wgb/local_integrals.hpp"
#include "wgb/mesh.hpp"

namespace wgb {

/// Layout of the local velocity unknowns of one cell.  A discrete velocity on
/// a cell is the pair (interior polynomial, one polynomial per edge); the
/// coefficient vector is ordered
///   [ interior x (dim P_k) | interior y (dim P_k) |
///     edge 0: x (k+1), y (k+1) | edge 1: ... ]          (edges in loop order).
struct LocalDofLayout {
    int k = 0;
    int n_edges = 0;
    int dim_interior = 0;  ///< dim P_k, per scalar component
    int n_edge_modes = 0;  ///< k+1, per edge and component

    LocalDofLayout() = default;
    LocalDofLayout(int k_, int n_edges_)
        : k(k_),
          n_edges(n_edges_),
          dim_interior(MonomialBasis::dimension(k_)),
          n_edge_modes(k_ + 1) {}

    int n_interior() const { return 2 * dim_interior; }
    int n_total() const { return n_interior() + n_edges * 2 * n_edge_modes; }

    /// Number of unknowns of one scalar component (interior + all edges).
    int n_scalar() const { return dim_interior + n_edges * n_edge_modes; }

    int interior_index(int comp, int mode) const { return comp * dim_interior + mode; }
    int edge_index(int local_edge, int comp, int mode) const {
        return n_interior() + local_edge * 2 * n_edge_modes + comp * n_edge_modes + mode;
    }

    /// Scalar-component indexing used by the weak gradient: interior modes
    /// first, then edge modes in loop order.
    int scalar_interior_index(int mode) const { return mode; }
    int scalar_edge_index(int local_edge, int mode) const {
        return dim_interior + local_edge * n_edge_modes + mode;
    }

    /// Map a scalar-component index to the full two-component layout.
    int scalar_to_full(int comp, int scalar_idx) const {
        if (scalar_idx < dim_interior) return interior_index(comp, scalar_idx);
        const int rest = scalar_idx - dim_interior;
        return edge_index(rest / n_edge_modes, comp, rest % n_edge_modes);
    }
};

/// Discrete weak operators of one cell.
///
/// The weak gradient of a scalar component v = (v0, vb) is the polynomial of
/// degree r whose moments against every test polynomial q satisfy
///     (grad_w v, q) = -(v0, dq/dx_j) + <vb, q n_j>   on the cell,
/// equivalently (after integrating by parts) the projection of the broken
/// gradient plus a boundary correction driven by vb - v0.  Sx and Sy map the
/// scalar coefficient vector to the x- and y-derivative coefficient vectors.
///
/// The weak divergence of a vector v maps to degree k-1 via
///     (div_w v, w) = -(v0, grad w) + <vb . n, w>.
struct CellWeakOps {
    LocalDofLayout layout;
    MonomialBasis basis_k;  ///< interior velocity basis, degree k
    MonomialBasis basis_r;  ///< weak gradient basis, degree r
    MonomialBasis basis_p;  ///< weak divergence / pressure basis, degree k-1 (k >= 1)
    std::vector<EdgeBasis> edge_bases;

    Eigen::MatrixXd Sx, Sy;  ///< dim P_r  x  n_scalar
    Eigen::MatrixXd D;       ///< dim P_{k-1}  x  n_total (empty when k == 0)
    Eigen::MatrixXd Mk, Mr, Mp;

    /// Weak gradient coefficients of one scalar component.
    Eigen::VectorXd weak_grad_x(const Eigen::VectorXd& scalar_dofs) const {
        return Sx * scalar_dofs;
    }
    Eigen::VectorXd weak_grad_y(const Eigen::VectorXd& scalar_dofs) const {
        return Sy * scalar_dofs;
    }

    /// Weak divergence coefficients of the full local vector.
    Eigen::VectorXd weak_divergence(const Eigen::VectorXd& dofs) const { return D * dofs; }

    /// Gram matrix of the weak gradient for one scalar component:
    /// K = Sx^T M_r Sx + Sy^T M_r Sy.  The full velocity energy matrix is
    /// this matrix applied to each component independently.
    Eigen::MatrixXd scalar_gradient_gram() const {
        return Sx.transpose() * Mr * Sx + Sy.transpose() * Mr * Sy;
    }

    /// Extract one component's scalar coefficient vector from full local dofs.
    Eigen::VectorXd scalar_component(const Eigen::VectorXd& dofs, int comp) const {
        Eigen::VectorXd out(layout.n_scalar());
        for (int i = 0; i < layout.n_scalar(); ++i) out[i] = dofs[layout.scalar_to_full(comp, i)];
        return out;
    }
};

/// Build the weak-operator matrices of cell `c` for interior degree `k` and
/// weak gradient degree `r`.  Every matrix involves only this cell's geometry
/// and bases, so cells can be processed independently.
inline CellWeakOps build_cell_weak_ops(const PolygonalMesh& mesh, int c, int k, int r) {
    if (k < 0) throw std::invalid_argument("build_cell_weak_ops: k must be >= 0");
    if (r < 0) throw std::invalid_argument("build_cell_weak_ops: gradient degree must be >= 0");

    const int n_edges = static_cast<int>(mesh.cell_edges[c].size());
    CellWeakOps ops{LocalDofLayout(k, n_edges),
                    MonomialBasis(k, mesh, c),
                    MonomialBasis(r, mesh, c),
                    MonomialBasis(std::max(k - 1, 0), mesh, c),
                    {},
                    {}, {}, {}, {}, {}, {}};

    ops.edge_bases.reserve(n_edges);
    for (int i = 0; i < n_edges; ++i)
        ops.edge_bases.emplace_back(k, mesh, mesh.cell_edges[c][i]);

    const int dim_r = ops.basis_r.dim();
    const int dim_p = ops.basis_p.dim();

    ops.Mk = mass_matrix(mesh, c, ops.basis_k, volume_exactness(k, k));
    ops.Mr = mass_matrix(mesh, c, ops.basis_r, volume_exactness(r, r));
    ops.Mp = mass_matrix(mesh, c, ops.basis_p, volume_exactness(k, k));

    // Weak gradient: right-hand sides for one scalar component.
    Eigen::MatrixXd Rx = Eigen::MatrixXd::Zero(dim_r, ops.layout.n_scalar());
    Eigen::MatrixXd Ry = Eigen::MatrixXd::Zero(dim_r, ops.layout.n_scalar());
    {
        const auto [Gx, Gy] = grad_coupling(mesh, c, ops.basis_k, ops.basis_r,
                                            volume_exactness(k, r));
        Rx.block(0, 0, dim_r, ops.layout.dim_interior) = -Gx.transpose();
        Ry.block(0, 0, dim_r, ops.layout.dim_interior) = -Gy.transpose();
        for (int i = 0; i < n_edges; ++i) {
            const auto [Ex, Ey] = edge_normal_coupling(mesh, c, i, ops.edge_bases[i], ops.basis_r,
                                                       edge_exactness(k, r));
            const int col = ops.layout.scalar_edge_index(i, 0);
            Rx.block(0, col, dim_r, ops.layout.n_edge_modes) = Ex.transpose();
            Ry.block(0, col, dim_r, ops.layout.n_edge_modes) = Ey.transpose();
        }
    }
    const RefinedSpdSolver solver_r(
        ops.Mr, "build_cell_weak_ops: gradient mass matrix of cell " + std::to_string(c));
    ops.Sx = solver_r.solve(Rx);
    ops.Sy = solver_r.solve(Ry);

    // Weak divergence, degree k-1 (defined for k >= 1).
    if (k >= 1) {
        Eigen::MatrixXd Rd = Eigen::MatrixXd::Zero(dim_p, ops.layout.n_total());
        const auto [Gx, Gy] = grad_coupling(mesh, c, ops.basis_k, ops.basis_p,
                                            volume_exactness(k, k - 1));
        for (int a = 0; a < ops.layout.dim_interior; ++a) {
            Rd.col(ops.layout.interior_index(0, a)) = -Gx.row(a).transpose();
            Rd.col(ops.layout.interior_index(1, a)) = -Gy.row(a).transpose();
        }
        for (int i = 0; i < n_edges; ++i) {
            const auto [Ex, Ey] = edge_normal_coupling(mesh, c, i, ops.edge_bases[i], ops.basis_p,
                                                       edge_exactness(k, k - 1));
            for (int m = 0; m < ops.layout.n_edge_modes; ++m) {
                Rd.col(ops.layout.edge_index(i, 0, m)) = Ex.row(m).transpose();
                Rd.col(ops.layout.edge_index(i, 1, m)) = Ey.row(m).transpose();
            }
        }
        const RefinedSpdSolver solver_p(
            ops.Mp, "build_cell_weak_ops: divergence mass matrix of cell " + std::to_string(c));
        ops.D = solver_p.solve(Rd);
    }

    return ops;
}

}  // namespace wgb
