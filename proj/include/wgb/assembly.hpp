#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "wgb/mesh.hpp"
#include "wgb/projection.hpp"
#include "wgb/weak_operators.hpp"

namespace wgb {

/// Global numbering of the saddle-point unknowns:
///   [ interior velocity (per cell, x block then y block)
///   | interior-edge velocity (per interior edge, x block then y block)
///   | pressure (per cell, degree k-1)
///   | one mean-value multiplier ].
/// Boundary edges carry no unknowns; the homogeneous velocity boundary value
/// is eliminated at assembly time.
struct DofMap {
    int k = 0;
    int dim_interior = 0;
    int n_edge_modes = 0;
    int dim_pressure = 0;
    int n_cells = 0;
    std::vector<int> edge_base;  ///< per edge: first velocity dof, or -1 on the boundary
    int n_velocity = 0;
    int n_pressure = 0;

    DofMap() = default;
    DofMap(const PolygonalMesh& mesh, int k_)
        : k(k_),
          dim_interior(MonomialBasis::dimension(k_)),
          n_edge_modes(k_ + 1),
          dim_pressure(MonomialBasis::dimension(k_ - 1)),
          n_cells(mesh.n_cells()) {
        edge_base.assign(mesh.n_edges(), -1);
        int next = 2 * dim_interior * n_cells;
        for (int e = 0; e < mesh.n_edges(); ++e) {
            if (mesh.edges[e].on_boundary()) continue;
            edge_base[e] = next;
            next += 2 * n_edge_modes;
        }
        n_velocity = next;
        n_pressure = dim_pressure * n_cells;
    }

    int interior_index(int cell, int comp, int mode) const {
        return cell * 2 * dim_interior + comp * dim_interior + mode;
    }
    /// -1 for boundary-edge unknowns (eliminated).
    int edge_index(int edge, int comp, int mode) const {
        const int base = edge_base[edge];
        return base < 0 ? -1 : base + comp * n_edge_modes + mode;
    }
    int pressure_index(int cell, int mode) const {
        return n_velocity + cell * dim_pressure + mode;
    }
    int multiplier_index() const { return n_velocity + n_pressure; }
    int n_total() const { return n_velocity + n_pressure + 1; }

    /// Global velocity indices of one cell's local layout (-1 = eliminated).
    std::vector<int> cell_velocity_dofs(const PolygonalMesh& mesh, int cell,
                                        const LocalDofLayout& layout) const {
        std::vector<int> g(layout.n_total(), -1);
        for (int comp = 0; comp < 2; ++comp)
            for (int a = 0; a < dim_interior; ++a)
                g[layout.interior_index(comp, a)] = interior_index(cell, comp, a);
        for (int i = 0; i < layout.n_edges; ++i) {
            const int e = mesh.cell_edges[cell][i];
            for (int comp = 0; comp < 2; ++comp)
                for (int m = 0; m < n_edge_modes; ++m)
                    g[layout.edge_index(i, comp, m)] = edge_index(e, comp, m);
        }
        return g;
    }
};

/// Assembled symmetric indefinite system
///   [ A   B^T  0 ] [u]   [F]
///   [ B   0    m ] [p] = [0]
///   [ 0   m^T  0 ] [l]   [0]
/// where A couples velocity with the weak-gradient energy plus the kappa^{-1}
/// mass term, B enforces weak incompressibility, and m pins the pressure mean
/// over the domain through the multiplier l.
struct SaddleSystem {
    DofMap dofs;
    int k = 0;
    int r = 0;
    double kappa_inv = 0.0;
    Eigen::SparseMatrix<double> K;    ///< full system, n_total x n_total
    Eigen::VectorXd rhs;
    Eigen::SparseMatrix<double> A;    ///< velocity block, for analysis
    Eigen::SparseMatrix<double> B;    ///< divergence block, n_pressure x n_velocity
    Eigen::SparseMatrix<double> Mp;   ///< pressure mass, for norms and probes
};

/// Assemble the discrete Brinkman saddle system on `mesh` with interior
/// velocity degree `k`, weak gradient degree `r`, constant inverse
/// permeability `kappa_inv`, forcing `f`, and homogeneous velocity boundary
/// values.  `load_exactness` controls the forcing quadrature (default
/// 2k + 2; raise it for high-degree or non-polynomial forcing).
inline SaddleSystem assemble_brinkman(const PolygonalMesh& mesh, int k, int r, double kappa_inv,
                                      const VectorField& f, int load_exactness = -1) {
    if (k < 1) throw std::invalid_argument("assemble_brinkman: k must be >= 1");
    if (r < k - 1)
        throw std::invalid_argument("assemble_brinkman: gradient degree must be >= k - 1");
    if (kappa_inv < 0.0)
        throw std::invalid_argument("assemble_brinkman: kappa_inv must be >= 0");
    if (load_exactness < 0) load_exactness = 2 * k + 2;

    SaddleSystem sys;
    sys.dofs = DofMap(mesh, k);
    sys.k = k;
    sys.r = r;
    sys.kappa_inv = kappa_inv;

    const DofMap& dm = sys.dofs;
    const int n_total = dm.n_total();
    sys.rhs = Eigen::VectorXd::Zero(n_total);

    std::vector<Eigen::Triplet<double>> trip_K, trip_A, trip_B, trip_Mp;

    for (int c = 0; c < mesh.n_cells(); ++c) {
        const CellWeakOps ops = build_cell_weak_ops(mesh, c, k, r);
        const LocalDofLayout& layout = ops.layout;
        const std::vector<int> g = dm.cell_velocity_dofs(mesh, c, layout);

        // Velocity block: weak-gradient energy on each component plus the
        // kappa^{-1} interior mass.
        const Eigen::MatrixXd Ks = ops.scalar_gradient_gram();
        Eigen::MatrixXd A_loc = Eigen::MatrixXd::Zero(layout.n_total(), layout.n_total());
        for (int comp = 0; comp < 2; ++comp)
            for (int i = 0; i < layout.n_scalar(); ++i)
                for (int j = 0; j < layout.n_scalar(); ++j)
                    A_loc(layout.scalar_to_full(comp, i), layout.scalar_to_full(comp, j)) +=
                        Ks(i, j);
        if (kappa_inv != 0.0)
            for (int comp = 0; comp < 2; ++comp)
                for (int a = 0; a < layout.dim_interior; ++a)
                    for (int b = 0; b < layout.dim_interior; ++b)
                        A_loc(layout.interior_index(comp, a), layout.interior_index(comp, b)) +=
                            kappa_inv * ops.Mk(a, b);

        const Eigen::MatrixXd B_loc = -ops.Mp * ops.D;
        const Eigen::VectorXd m_loc = basis_moments(mesh, c, ops.basis_p);

        for (int i = 0; i < layout.n_total(); ++i) {
            if (g[i] < 0) continue;
            for (int j = 0; j < layout.n_total(); ++j) {
                if (g[j] < 0 || A_loc(i, j) == 0.0) continue;
                trip_K.emplace_back(g[i], g[j], A_loc(i, j));
                trip_A.emplace_back(g[i], g[j], A_loc(i, j));
            }
        }
        for (int l = 0; l < dm.dim_pressure; ++l) {
            const int gp = dm.pressure_index(c, l);
            for (int j = 0; j < layout.n_total(); ++j) {
                if (g[j] < 0 || B_loc(l, j) == 0.0) continue;
                trip_K.emplace_back(gp, g[j], B_loc(l, j));
                trip_K.emplace_back(g[j], gp, B_loc(l, j));
                trip_B.emplace_back(gp - dm.n_velocity, g[j], B_loc(l, j));
            }
            if (m_loc[l] != 0.0) {
                trip_K.emplace_back(gp, dm.multiplier_index(), m_loc[l]);
                trip_K.emplace_back(dm.multiplier_index(), gp, m_loc[l]);
            }
            for (int l2 = 0; l2 < dm.dim_pressure; ++l2)
                trip_Mp.emplace_back(gp - dm.n_velocity,
                                     dm.pressure_index(c, l2) - dm.n_velocity, ops.Mp(l, l2));
        }

        // Forcing pairs with the interior velocity test functions only.
        Eigen::VectorXd fx = Eigen::VectorXd::Zero(layout.dim_interior);
        Eigen::VectorXd fy = Eigen::VectorXd::Zero(layout.dim_interior);
        for (const QuadPoint& q : cell_quadrature(mesh, c, load_exactness)) {
            const Vec2 fv = f(q.p);
            const Eigen::VectorXd b = ops.basis_k.values(q.p);
            fx += q.w * fv.x * b;
            fy += q.w * fv.y * b;
        }
        for (int a = 0; a < layout.dim_interior; ++a) {
            sys.rhs[dm.interior_index(c, 0, a)] = fx[a];
            sys.rhs[dm.interior_index(c, 1, a)] = fy[a];
        }
    }

    sys.K.resize(n_total, n_total);
    sys.K.setFromTriplets(trip_K.begin(), trip_K.end());
    sys.A.resize(dm.n_velocity, dm.n_velocity);
    sys.A.setFromTriplets(trip_A.begin(), trip_A.end());
    sys.B.resize(dm.n_pressure, dm.n_velocity);
    sys.B.setFromTriplets(trip_B.begin(), trip_B.end());
    sys.Mp.resize(dm.n_pressure, dm.n_pressure);
    sys.Mp.setFromTriplets(trip_Mp.begin(), trip_Mp.end());
    return sys;
}

/// MatrixMarket coordinate export (1-based indices, full precision).
inline void write_matrix_market(const Eigen::SparseMatrix<double>& M, std::ostream& os) {
    os << "%%MatrixMarket matrix coordinate real general\n";
    os.precision(17);
    os << M.rows() << " " << M.cols() << " " << M.nonZeros() << "\n";
    for (int k = 0; k < M.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(M, k); it; ++it)
            os << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
}

}  // namespace wgb
