#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <sstream>

#include "wgb/assembly.hpp"
#include "wgb/manufactured.hpp"
#include "wgb/mesh.hpp"
#include "wgb/projection.hpp"

using namespace wgb;

namespace {

// Scatter a projected velocity into the global unknown vector (boundary-edge
// coefficients are dropped; for admissible fields they vanish anyway).
Eigen::VectorXd global_velocity_vector(const PolygonalMesh& mesh, const DofMap& dm,
                                       const ProjectedField& f) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(dm.n_velocity);
    for (int c = 0; c < mesh.n_cells(); ++c)
        for (int comp = 0; comp < 2; ++comp)
            for (int a = 0; a < dm.dim_interior; ++a)
                u[dm.interior_index(c, comp, a)] =
                    f.cell_coeffs[c][comp * dm.dim_interior + a];
    for (int e = 0; e < mesh.n_edges(); ++e) {
        if (mesh.edges[e].on_boundary()) continue;
        for (int comp = 0; comp < 2; ++comp)
            for (int m = 0; m < dm.n_edge_modes; ++m)
                u[dm.edge_index(e, comp, m)] = f.edge_coeffs[e][comp * dm.n_edge_modes + m];
    }
    return u;
}

}  // namespace

TEST_CASE("dof map: coarsest triangular mesh with k=1 has 19 unknowns") {
    const PolygonalMesh mesh = build_triangle_mesh(1);
    const DofMap dm(mesh, 1);
    // 2 cells x 2 components x 3 interior modes = 12, one interior edge
    // contributing 2 x 2 = 4, two cell pressures, one multiplier
    CHECK(dm.n_velocity == 16);
    CHECK(dm.n_pressure == 2);
    CHECK(dm.n_total() == 19);
    CHECK(dm.multiplier_index() == 18);
    int interior_edges = 0;
    for (int e = 0; e < mesh.n_edges(); ++e)
        if (dm.edge_base[e] >= 0) ++interior_edges;
    CHECK(interior_edges == 1);
}

TEST_CASE("dof map: enumeration is a bijection with boundary edges eliminated") {
    const PolygonalMesh mesh = build_triangle_mesh(2);
    const int k = 2;
    const DofMap dm(mesh, k);
    // level 2: 8 cells, 16 edges of which 8 on the boundary
    CHECK(dm.n_velocity == 8 * 2 * 6 + 8 * 2 * 3);
    CHECK(dm.n_pressure == 8 * 3);
    CHECK(dm.n_total() == 144 + 24 + 1);

    std::set<int> seen;
    for (int c = 0; c < mesh.n_cells(); ++c)
        for (int comp = 0; comp < 2; ++comp)
            for (int a = 0; a < dm.dim_interior; ++a) {
                const int g = dm.interior_index(c, comp, a);
                CHECK(g >= 0);
                CHECK(g < dm.n_velocity);
                CHECK(seen.insert(g).second);
            }
    for (int e = 0; e < mesh.n_edges(); ++e) {
        if (mesh.edges[e].on_boundary()) {
            CHECK(dm.edge_index(e, 0, 0) == -1);
            continue;
        }
        for (int comp = 0; comp < 2; ++comp)
            for (int m = 0; m < dm.n_edge_modes; ++m) {
                const int g = dm.edge_index(e, comp, m);
                CHECK(g >= 2 * dm.dim_interior * dm.n_cells);
                CHECK(g < dm.n_velocity);
                CHECK(seen.insert(g).second);
            }
    }
    CHECK(static_cast<int>(seen.size()) == dm.n_velocity);
    for (int c = 0; c < mesh.n_cells(); ++c)
        for (int l = 0; l < dm.dim_pressure; ++l) {
            const int g = dm.pressure_index(c, l);
            CHECK(g >= dm.n_velocity);
            CHECK(g < dm.n_velocity + dm.n_pressure);
            CHECK(seen.insert(g).second);
        }

    // the per-cell gather agrees with the direct index functions
    const LocalDofLayout layout(k, 3);
    const std::vector<int> g = dm.cell_velocity_dofs(mesh, 3, layout);
    CHECK(g[layout.interior_index(1, 2)] == dm.interior_index(3, 1, 2));
    CHECK(g[layout.edge_index(1, 0, 1)] == dm.edge_index(mesh.cell_edges[3][1], 0, 1));
}

TEST_CASE("assembled system is symmetric") {
    const ManufacturedCase mc = quartic_vortex_case(1.0);
    const SaddleSystem sys = assemble_brinkman(build_triangle_mesh(2), 1, 2, 1.0, mc.forcing, 10);
    const Eigen::MatrixXd K(sys.K);
    CHECK((K - K.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(sys.K.rows() == sys.dofs.n_total());
    // lower-right saddle blocks are zero: pressure-pressure and multiplier diag
    const int np = sys.dofs.n_pressure;
    const int nv = sys.dofs.n_velocity;
    CHECK(K.block(nv, nv, np, np).cwiseAbs().maxCoeff() == 0.0);
    CHECK(K(sys.dofs.multiplier_index(), sys.dofs.multiplier_index()) == 0.0);
    // velocity-multiplier coupling is empty
    CHECK(K.block(0, sys.dofs.multiplier_index(), nv, 1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("permeability term enters the velocity block linearly") {
    const PolygonalMesh mesh = build_nonconvex_mesh(NonconvexFamily::LPair, 2);
    const VectorField zero = [](const Vec2&) { return Vec2{0.0, 0.0}; };
    const Eigen::MatrixXd A0(assemble_brinkman(mesh, 1, 4, 0.0, zero).A);
    const Eigen::MatrixXd A1(assemble_brinkman(mesh, 1, 4, 1.0, zero).A);
    const Eigen::MatrixXd A2(assemble_brinkman(mesh, 1, 4, 2.0, zero).A);
    const double scale = A1.cwiseAbs().maxCoeff();
    CHECK(((A2 - A0) - 2.0 * (A1 - A0)).cwiseAbs().maxCoeff() < 1e-13 * scale);
    // the kappa term only touches interior modes: edge-edge entries unchanged
    const int base = 2 * 3 * mesh.n_cells();
    CHECK((A1.bottomRightCorner(A1.rows() - base, A1.cols() - base) -
           A0.bottomRightCorner(A0.rows() - base, A0.cols() - base))
              .cwiseAbs()
              .maxCoeff() == 0.0);
}

TEST_CASE("constant forcing loads exactly the constant interior modes") {
    const PolygonalMesh mesh = build_triangle_mesh(2);
    const SaddleSystem sys =
        assemble_brinkman(mesh, 1, 2, 0.0, [](const Vec2&) { return Vec2{1.0, 0.0}; });
    for (int c = 0; c < mesh.n_cells(); ++c) {
        // x-component constant mode integrates the basis constant: the area
        CHECK(sys.rhs[sys.dofs.interior_index(c, 0, 0)] ==
              Catch::Approx(mesh.cell_area[c]).epsilon(1e-13));
        // centroid centering kills the linear modes, and the y block is empty
        CHECK(std::abs(sys.rhs[sys.dofs.interior_index(c, 0, 1)]) < 1e-15);
        CHECK(std::abs(sys.rhs[sys.dofs.interior_index(c, 0, 2)]) < 1e-15);
        for (int a = 0; a < 3; ++a) CHECK(sys.rhs[sys.dofs.interior_index(c, 1, a)] == 0.0);
    }
    // nothing loads edges, pressures, or the multiplier
    CHECK(sys.rhs.tail(sys.dofs.n_total() - 2 * 3 * mesh.n_cells()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("projected divergence-free field lies in the kernel of the divergence block") {
    const ManufacturedCase mc = quartic_vortex_case(0.0);
    for (int k : {1, 2}) {
        const PolygonalMesh mesh = build_triangle_mesh(3);
        const SaddleSystem sys = assemble_brinkman(mesh, k, k + 1, 0.0, mc.forcing, 12);
        const ProjectedField Qu = project_velocity(mesh, k, mc.velocity, 12, 12);
        const Eigen::VectorXd u = global_velocity_vector(mesh, sys.dofs, Qu);
        INFO("k " << k);
        CHECK((sys.B * u).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("assembly is deterministic") {
    const ManufacturedCase mc = quartic_vortex_case(1.0);
    const PolygonalMesh mesh = build_nonconvex_mesh(NonconvexFamily::CrossSplit, 2);
    const SaddleSystem s1 = assemble_brinkman(mesh, 1, 4, 1.0, mc.forcing, 10);
    const SaddleSystem s2 = assemble_brinkman(mesh, 1, 4, 1.0, mc.forcing, 10);
    CHECK((Eigen::MatrixXd(s1.K) - Eigen::MatrixXd(s2.K)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((s1.rhs - s2.rhs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("discrete stability: the pressure inf-sup constant does not degrade under refinement") {
    // beta_h = sqrt of the smallest nonzero eigenvalue of the pressure Schur
    // complement B A^{-1} B^T q = lambda M_p q; the one zero eigenvalue
    // belongs to the constant pressure handled by the mean constraint.
    const VectorField zero = [](const Vec2&) { return Vec2{0.0, 0.0}; };
    std::vector<double> betas;
    for (int level : {2, 3, 4}) {
        const PolygonalMesh mesh = build_triangle_mesh(level);
        const SaddleSystem sys = assemble_brinkman(mesh, 1, 2, 1.0, zero);
        const Eigen::MatrixXd A(sys.A);
        const Eigen::MatrixXd B(sys.B);
        const Eigen::MatrixXd Mp(sys.Mp);
        const Eigen::LLT<Eigen::MatrixXd> llt(A);
        REQUIRE(llt.info() == Eigen::Success);  // velocity block is SPD
        const Eigen::MatrixXd schur = B * llt.solve(B.transpose());
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
            0.5 * (schur + schur.transpose()), Mp);
        const Eigen::VectorXd ev = es.eigenvalues();
        CHECK(std::abs(ev[0]) < 1e-10);  // constant pressure mode
        CHECK(ev[1] > 1e-4);             // all other modes uniformly controlled
        betas.push_back(std::sqrt(ev[1]));
    }
    const double lo = *std::min_element(betas.begin(), betas.end());
    const double hi = *std::max_element(betas.begin(), betas.end());
    INFO("betas " << betas[0] << " " << betas[1] << " " << betas[2]);
    CHECK(hi / lo < 1.25);
    CHECK(lo > 0.05);
}

TEST_CASE("matrix export uses 1-based coordinate format") {
    Eigen::SparseMatrix<double> M(2, 3);
    std::vector<Eigen::Triplet<double>> t = {{0, 0, 1.5}, {1, 2, -2.0}, {1, 0, 0.25}};
    M.setFromTriplets(t.begin(), t.end());
    std::ostringstream os;
    write_matrix_market(M, os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "%%MatrixMarket matrix coordinate real general");
    std::getline(is, line);
    CHECK(line == "2 3 3");
    std::set<std::string> entries;
    while (std::getline(is, line))
        if (!line.empty()) entries.insert(line);
    CHECK(entries.count("1 1 1.5") == 1);
    CHECK(entries.count("2 1 0.25") == 1);
    CHECK(entries.count("2 3 -2") == 1);
    CHECK(entries.size() == 3);
}

TEST_CASE("assembly validates its inputs") {
    const PolygonalMesh mesh = build_triangle_mesh(1);
    const VectorField zero = [](const Vec2&) { return Vec2{0.0, 0.0}; };
    CHECK_THROWS(assemble_brinkman(mesh, 0, 1, 0.0, zero));
    CHECK_THROWS(assemble_brinkman(mesh, 2, 0, 0.0, zero));
    CHECK_THROWS(assemble_brinkman(mesh, 1, 2, -1.0, zero));
}
