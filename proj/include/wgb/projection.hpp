#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "wgb/basis.hpp"
#include "wgb/linalg.hpp"
#include "wgb/local_integrals.hpp"
#include "wgb/mesh.hpp"
#include "wgb/quadrature.hpp"
#include "wgb/weak_operators.hpp"

namespace wgb {

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;

/// L2 projection of a scalar function onto the given cell basis.  The default
/// quadrature is exact for polynomial f up to the basis degree plus two; pass
/// a higher exactness for non-polynomial integrands.
inline Eigen::VectorXd project_cell(const PolygonalMesh& mesh, int c, const MonomialBasis& basis,
                                    const ScalarField& f, int exactness = -1) {
    if (exactness < 0) exactness = 2 * basis.degree() + 2;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(basis.dim());
    for (const QuadPoint& q : cell_quadrature(mesh, c, exactness))
        rhs += q.w * f(q.p) * basis.values(q.p);
    return RefinedSpdSolver(mass_matrix(mesh, c, basis), "project_cell").solve(rhs);
}

/// L2 projection of a scalar function onto the Legendre basis of edge `e`.
/// The edge mass matrix is diagonal, so this is a scaled moment computation.
inline Eigen::VectorXd project_edge(const PolygonalMesh& mesh, int e, const EdgeBasis& basis,
                                    const ScalarField& f, int exactness = -1) {
    if (exactness < 0) exactness = 2 * basis.degree() + 2;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(basis.dim());
    for (const QuadPoint& q : edge_quadrature(mesh, e, exactness))
        rhs += q.w * f(q.p) * basis.values(q.p);
    return rhs.array() / basis.mass_diagonal().array();
}

/// A velocity-type discrete field: one interior polynomial pair per cell and
/// one polynomial pair per edge, stored as coefficient vectors
/// [x block | y block] in the cell monomial / edge Legendre bases.
struct ProjectedField {
    int k = 0;
    std::vector<Eigen::VectorXd> cell_coeffs;  ///< per cell, size 2 dim P_k
    std::vector<Eigen::VectorXd> edge_coeffs;  ///< per edge, size 2 (k+1)

    static ProjectedField zeros(const PolygonalMesh& mesh, int k) {
        ProjectedField f;
        f.k = k;
        f.cell_coeffs.assign(mesh.n_cells(),
                             Eigen::VectorXd::Zero(2 * MonomialBasis::dimension(k)));
        f.edge_coeffs.assign(mesh.n_edges(), Eigen::VectorXd::Zero(2 * (k + 1)));
        return f;
    }
};

/// Component-wise projection of a smooth vector field onto the discrete
/// velocity space: interior parts onto P_k of each cell, edge parts onto the
/// Legendre space of each edge.
inline ProjectedField project_velocity(const PolygonalMesh& mesh, int k, const VectorField& u,
                                       int cell_exactness = -1, int edge_exactness = -1) {
    ProjectedField out;
    out.k = k;
    out.cell_coeffs.resize(mesh.n_cells());
    out.edge_coeffs.resize(mesh.n_edges());
    auto ux = [&u](const Vec2& p) { return u(p).x; };
    auto uy = [&u](const Vec2& p) { return u(p).y; };
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const MonomialBasis basis(k, mesh, c);
        Eigen::VectorXd coeffs(2 * basis.dim());
        coeffs.head(basis.dim()) = project_cell(mesh, c, basis, ux, cell_exactness);
        coeffs.tail(basis.dim()) = project_cell(mesh, c, basis, uy, cell_exactness);
        out.cell_coeffs[c] = coeffs;
    }
    for (int e = 0; e < mesh.n_edges(); ++e) {
        const EdgeBasis basis(k, mesh, e);
        Eigen::VectorXd coeffs(2 * basis.dim());
        coeffs.head(basis.dim()) = project_edge(mesh, e, basis, ux, edge_exactness);
        coeffs.tail(basis.dim()) = project_edge(mesh, e, basis, uy, edge_exactness);
        out.edge_coeffs[e] = coeffs;
    }
    return out;
}

/// Gather the local coefficient vector of cell `c` (layout of LocalDofLayout)
/// from a discrete field.
inline Eigen::VectorXd local_dofs(const PolygonalMesh& mesh, int c, const ProjectedField& f) {
    const LocalDofLayout layout(f.k, static_cast<int>(mesh.cell_edges[c].size()));
    Eigen::VectorXd dofs(layout.n_total());
    dofs.head(layout.n_interior()) = f.cell_coeffs[c];
    for (int i = 0; i < layout.n_edges; ++i) {
        const int e = mesh.cell_edges[c][i];
        for (int comp = 0; comp < 2; ++comp)
            for (int m = 0; m < layout.n_edge_modes; ++m)
                dofs[layout.edge_index(i, comp, m)] =
                    f.edge_coeffs[e][comp * layout.n_edge_modes + m];
    }
    return dofs;
}

}  // namespace wgb
