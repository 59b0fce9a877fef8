#pragma once

#include <Eigen/Sparse>
#include <Eigen/UmfPackSupport>
#include <stdexcept>
#include <string>
#include <vector>

#include "wgb/assembly.hpp"
#include "wgb/linalg.hpp"
#include "wgb/projection.hpp"

namespace wgb {

/// Discrete solution of one Brinkman solve.  The velocity is stored like any
/// discrete field (boundary edges hold exact zeros, matching the eliminated
/// homogeneous boundary condition); the pressure is one degree-(k-1)
/// coefficient vector per cell.
struct DiscreteSolution {
    int k = 0;
    int r = 0;
    double kappa_inv = 0.0;
    ProjectedField u;
    std::vector<Eigen::VectorXd> pressure;
    double multiplier = 0.0;
    double residual = 0.0;          ///< relative linear-solve residual
    bool residual_warning = false;  ///< set when the residual exceeds 1e-8
    Eigen::VectorXd raw;            ///< full unknown vector, for reproducibility checks
};

namespace detail {

/// Cell-local data for the static condensation of interior velocity modes.
/// Interior modes couple only to their own cell's edge modes and pressure, so
/// the leading block of the saddle matrix is block-diagonal by cell and can be
/// eliminated exactly before the sparse factorization.
struct CellCondensation {
    std::vector<int> edge_cols;   ///< global indices of the kept edge modes
    std::vector<int> local_cols;  ///< matching local column slots
    Eigen::LLT<Eigen::MatrixXd> A_II;
    Eigen::MatrixXd A_IE;   ///< interior x kept-edge block
    Eigen::MatrixXd B_I;    ///< pressure x interior block
    Eigen::MatrixXd S_EE;   ///< A_EE - A_IE^T A_II^{-1} A_IE
    Eigen::MatrixXd B_E;    ///< pressure x kept-edge block, condensed
    Eigen::MatrixXd C;      ///< B_I A_II^{-1} B_I^T
    Eigen::VectorXd m;      ///< pressure moments (mean constraint column)
};

}  // namespace detail

/// Direct sparse solve of the assembled saddle system.  Interior velocity
/// unknowns are condensed out cell by cell (exact block elimination), the
/// remaining edge/pressure saddle system is factorized with UMFPACK using its
/// symmetric strategy, and the full solution is recovered and polished with
/// iterative refinement against the uncondensed matrix.  Every step is
/// deterministic, so repeated runs on the same inputs reproduce the solution
/// bit for bit.
inline DiscreteSolution solve_brinkman(const PolygonalMesh& mesh, const SaddleSystem& sys) {
    const DofMap& dm = sys.dofs;
    const int n_full = dm.n_total();
    const int n_iv = 2 * dm.dim_interior * dm.n_cells;  // condensed-away interior modes
    const int n_red = n_full - n_iv;
    const auto red = [&](int g) { return g - n_iv; };  // interior modes come first

    // Pass 1: per-cell blocks and the condensed sparse system.
    std::vector<detail::CellCondensation> cells(mesh.n_cells());
    std::vector<Eigen::Triplet<double>> trip;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const CellWeakOps ops = build_cell_weak_ops(mesh, c, sys.k, sys.r);
        const LocalDofLayout& layout = ops.layout;
        const int n_loc = layout.n_total();
        const int n_int = 2 * layout.dim_interior;

        Eigen::MatrixXd A_loc = Eigen::MatrixXd::Zero(n_loc, n_loc);
        const Eigen::MatrixXd K_sc = ops.scalar_gradient_gram();
        for (int comp = 0; comp < 2; ++comp)
            for (int i = 0; i < K_sc.rows(); ++i)
                for (int j = 0; j < K_sc.cols(); ++j)
                    A_loc(layout.scalar_to_full(comp, i), layout.scalar_to_full(comp, j)) +=
                        K_sc(i, j);
        if (sys.kappa_inv != 0.0)
            for (int comp = 0; comp < 2; ++comp)
                for (int i = 0; i < layout.dim_interior; ++i)
                    for (int j = 0; j < layout.dim_interior; ++j)
                        A_loc(layout.interior_index(comp, i), layout.interior_index(comp, j)) +=
                            sys.kappa_inv * ops.Mk(i, j);
        const Eigen::MatrixXd B_loc = -ops.Mp * ops.D;

        detail::CellCondensation& cc = cells[c];
        const std::vector<int> g = dm.cell_velocity_dofs(mesh, c, layout);
        for (int j = n_int; j < n_loc; ++j)
            if (g[j] >= 0) {
                cc.edge_cols.push_back(g[j]);
                cc.local_cols.push_back(j);
            }
        const int n_e = static_cast<int>(cc.edge_cols.size());

        Eigen::MatrixXd A_EE(n_e, n_e);
        cc.A_IE.resize(n_int, n_e);
        Eigen::MatrixXd B_E_raw(B_loc.rows(), n_e);
        for (int a = 0; a < n_e; ++a) {
            for (int b = 0; b < n_e; ++b) A_EE(a, b) = A_loc(cc.local_cols[a], cc.local_cols[b]);
            cc.A_IE.col(a) = A_loc.block(0, cc.local_cols[a], n_int, 1);
            B_E_raw.col(a) = B_loc.col(cc.local_cols[a]);
        }
        cc.B_I = B_loc.leftCols(n_int);

        cc.A_II.compute(A_loc.topLeftCorner(n_int, n_int));
        if (cc.A_II.info() != Eigen::Success)
            throw std::runtime_error(
                "solve_brinkman: interior velocity block of cell " + std::to_string(c) +
                " is not positive definite (weak-gradient degree too low for this order?)");
        const Eigen::MatrixXd AinvAIE = cc.A_II.solve(cc.A_IE);
        const Eigen::MatrixXd AinvBIT = cc.A_II.solve(cc.B_I.transpose());
        cc.S_EE = A_EE - cc.A_IE.transpose() * AinvAIE;
        cc.B_E = B_E_raw - cc.B_I * AinvAIE;
        cc.C = cc.B_I * AinvBIT;
        cc.m = basis_moments(mesh, c, ops.basis_p);

        for (int a = 0; a < n_e; ++a)
            for (int b = 0; b < n_e; ++b)
                if (cc.S_EE(a, b) != 0.0)
                    trip.emplace_back(red(cc.edge_cols[a]), red(cc.edge_cols[b]), cc.S_EE(a, b));
        for (int l = 0; l < cc.B_E.rows(); ++l) {
            const int gp = red(dm.pressure_index(c, l));
            for (int a = 0; a < n_e; ++a)
                if (cc.B_E(l, a) != 0.0) {
                    trip.emplace_back(gp, red(cc.edge_cols[a]), cc.B_E(l, a));
                    trip.emplace_back(red(cc.edge_cols[a]), gp, cc.B_E(l, a));
                }
            for (int l2 = 0; l2 < cc.C.rows(); ++l2)
                if (cc.C(l, l2) != 0.0)
                    trip.emplace_back(gp, red(dm.pressure_index(c, l2)), -cc.C(l, l2));
            trip.emplace_back(gp, red(dm.multiplier_index()), cc.m[l]);
            trip.emplace_back(red(dm.multiplier_index()), gp, cc.m[l]);
        }
    }

    Eigen::SparseMatrix<double> K_red(n_red, n_red);
    K_red.setFromTriplets(trip.begin(), trip.end());
    trip.clear();
    trip.shrink_to_fit();
    K_red.makeCompressed();

    Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu;
    lu.umfpackControl()[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;
    lu.compute(K_red);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error(
            "solve_brinkman: sparse LU factorization failed (singular system?)");

    // Condense a full right-hand side, solve the reduced system, recover the
    // interior unknowns.
    const auto solve_full = [&](const Eigen::VectorXd& b) {
        Eigen::VectorXd b_red = b.tail(n_red);
        for (int c = 0; c < mesh.n_cells(); ++c) {
            const detail::CellCondensation& cc = cells[c];
            const int n_int = cc.A_IE.rows();
            Eigen::VectorXd b_I(n_int);
            for (int i = 0; i < n_int / 2; ++i)
                for (int comp = 0; comp < 2; ++comp)
                    b_I[comp * (n_int / 2) + i] = b[dm.interior_index(c, comp, i)];
            const Eigen::VectorXd Ainv_bI = cc.A_II.solve(b_I);
            const Eigen::VectorXd eb = cc.A_IE.transpose() * Ainv_bI;
            for (std::size_t a = 0; a < cc.edge_cols.size(); ++a)
                b_red[red(cc.edge_cols[a])] -= eb[a];
            const Eigen::VectorXd pb = cc.B_I * Ainv_bI;
            for (int l = 0; l < pb.size(); ++l) b_red[red(dm.pressure_index(c, l))] -= pb[l];
        }
        const Eigen::VectorXd x_red = lu.solve(b_red);
        Eigen::VectorXd x(n_full);
        x.tail(n_red) = x_red;
        for (int c = 0; c < mesh.n_cells(); ++c) {
            const detail::CellCondensation& cc = cells[c];
            const int n_int = cc.A_IE.rows();
            Eigen::VectorXd b_I(n_int);
            for (int i = 0; i < n_int / 2; ++i)
                for (int comp = 0; comp < 2; ++comp)
                    b_I[comp * (n_int / 2) + i] = b[dm.interior_index(c, comp, i)];
            Eigen::VectorXd rhs_I = b_I;
            for (std::size_t a = 0; a < cc.edge_cols.size(); ++a)
                rhs_I -= cc.A_IE.col(a) * x_red[red(cc.edge_cols[a])];
            Eigen::VectorXd p_c(cc.B_I.rows());
            for (int l = 0; l < p_c.size(); ++l) p_c[l] = x_red[red(dm.pressure_index(c, l))];
            rhs_I -= cc.B_I.transpose() * p_c;
            const Eigen::VectorXd x_I = cc.A_II.solve(rhs_I);
            for (int i = 0; i < n_int / 2; ++i)
                for (int comp = 0; comp < 2; ++comp)
                    x[dm.interior_index(c, comp, i)] = x_I[comp * (n_int / 2) + i];
        }
        return x;
    };

    Eigen::VectorXd x = solve_full(sys.rhs);
    const double rhs_norm = sys.rhs.norm();
    double res = (sys.K * x - sys.rhs).norm();
    for (int sweep = 0; sweep < 3 && res > 1e-14 * (1.0 + rhs_norm); ++sweep) {
        const Eigen::VectorXd corr = solve_full(sys.rhs - sys.K * x);
        x += corr;
        res = (sys.K * x - sys.rhs).norm();
    }
    const double rel_res = rhs_norm > 0.0 ? res / rhs_norm : res;
    if (!(rel_res < 1e-6))
        throw std::runtime_error(
            "solve_brinkman: solution residual " + std::to_string(rel_res) +
            " is far above roundoff (singular or unstable system?)");

    DiscreteSolution sol;
    sol.k = sys.k;
    sol.r = sys.r;
    sol.kappa_inv = sys.kappa_inv;
    sol.raw = x;
    sol.residual = rel_res;
    sol.residual_warning = rel_res > 1e-8;

    sol.u = ProjectedField::zeros(mesh, sys.k);
    for (int c = 0; c < mesh.n_cells(); ++c)
        for (int comp = 0; comp < 2; ++comp)
            for (int a = 0; a < dm.dim_interior; ++a)
                sol.u.cell_coeffs[c][comp * dm.dim_interior + a] =
                    x[dm.interior_index(c, comp, a)];
    for (int e = 0; e < mesh.n_edges(); ++e) {
        if (mesh.edges[e].on_boundary()) continue;
        for (int comp = 0; comp < 2; ++comp)
            for (int m = 0; m < dm.n_edge_modes; ++m)
                sol.u.edge_coeffs[e][comp * dm.n_edge_modes + m] = x[dm.edge_index(e, comp, m)];
    }
    sol.pressure.resize(mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c) {
        Eigen::VectorXd pc(dm.dim_pressure);
        for (int l = 0; l < dm.dim_pressure; ++l) pc[l] = x[dm.pressure_index(c, l)];
        sol.pressure[c] = pc;
    }
    sol.multiplier = x[dm.multiplier_index()];
    return sol;
}

/// Mean of the discrete pressure over the domain (should vanish).
inline double pressure_mean(const PolygonalMesh& mesh, const DiscreteSolution& sol) {
    double mean = 0.0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const MonomialBasis basis(sol.k - 1, mesh, c);
        mean += basis_moments(mesh, c, basis).dot(sol.pressure[c]);
    }
    return mean;
}

/// Root of the summed squared L2 norms of the cellwise weak divergence of a
/// discrete velocity field: sqrt( sum_T || div_w v ||_T^2 ).  The discrete
/// scheme drives this to machine precision.
inline double weak_div_residual(const PolygonalMesh& mesh, int k, int r,
                                const ProjectedField& v) {
    double sq = 0.0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const CellWeakOps ops = build_cell_weak_ops(mesh, c, k, r);
        const Eigen::VectorXd d = ops.weak_divergence(local_dofs(mesh, c, v));
        sq += d.dot(ops.Mp * d);
    }
    return std::sqrt(sq);
}

/// Euclidean norm of all velocity coefficients; used to normalize residuals.
inline double velocity_dof_norm(const ProjectedField& v) {
    double sq = 0.0;
    for (const auto& cv : v.cell_coeffs) sq += cv.squaredNorm();
    for (const auto& ev : v.edge_coeffs) sq += ev.squaredNorm();
    return std::sqrt(sq);
}

}  // namespace wgb
