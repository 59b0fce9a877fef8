// Command-line driver: mesh generation, single solves, and refinement
// studies for the weak Galerkin Brinkman solver.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wgb/convergence.hpp"
#include "wgb/solver.hpp"

namespace {

std::vector<int> parse_levels(const std::string& spec) {
    std::vector<int> levels;
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        const int lo = std::stoi(spec.substr(0, colon));
        const int hi = std::stoi(spec.substr(colon + 1));
        if (hi < lo) throw CLI::ValidationError("--levels", "range must be increasing");
        for (int l = lo; l <= hi; ++l) levels.push_back(l);
        return levels;
    }
    std::istringstream is(spec);
    std::string tok;
    while (std::getline(is, tok, ',')) levels.push_back(std::stoi(tok));
    if (levels.empty()) throw CLI::ValidationError("--levels", "no levels given");
    return levels;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    os << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stabilizer-free weak Galerkin solver for the Brinkman problem "
                 "on polygonal meshes"};
    app.require_subcommand(1);

    std::string family = "triangle";
    int level = 3;
    std::string levels_spec = "2:4";
    int k = 1;
    int grad_degree = -1;
    bool theory_grad = false;
    double kappa_inv = 1.0;
    std::string format = "markdown";
    std::string out;
    std::string mesh_path;
    std::string export_matrix;

    CLI::App* cmd_mesh = app.add_subcommand("mesh", "generate a mesh and write it as text");
    cmd_mesh->add_option("--family", family, "triangle|cross_split|zigzag|l_pair");
    cmd_mesh->add_option("--level", level, "refinement level (>= 1)")->check(CLI::PositiveNumber);
    cmd_mesh->add_option("--out", out, "output path (default stdout)");

    CLI::App* cmd_solve = app.add_subcommand("solve", "solve once and sample the solution");
    cmd_solve->add_option("--family", family, "triangle|cross_split|zigzag|l_pair");
    cmd_solve->add_option("--level", level, "refinement level (>= 1)")->check(CLI::PositiveNumber);
    cmd_solve->add_option("--mesh", mesh_path, "read the mesh from a file instead");
    cmd_solve->add_option("--k", k, "velocity degree (>= 1)")->check(CLI::PositiveNumber);
    cmd_solve->add_option("--grad-degree", grad_degree, "weak gradient degree (default k+1 "
                          "on triangle meshes, k+3 on the non-convex families)");
    cmd_solve->add_flag("--theory-grad", theory_grad,
                        "use the stability-theory gradient degree instead of the default");
    cmd_solve->add_option("--kappa-inv", kappa_inv, "inverse permeability (>= 0)");
    cmd_solve->add_option("--out", out, "output path for the sample CSV (default stdout)");
    cmd_solve->add_option("--export-matrix", export_matrix,
                          "write the assembled system in MatrixMarket format");

    CLI::App* cmd_conv = app.add_subcommand("converge", "refinement study with error table");
    cmd_conv->add_option("--family", family, "triangle|cross_split|zigzag|l_pair");
    cmd_conv->add_option("--levels", levels_spec, "levels as lo:hi or comma list");
    cmd_conv->add_option("--k", k, "velocity degree (>= 1)")->check(CLI::PositiveNumber);
    cmd_conv->add_option("--grad-degree", grad_degree, "weak gradient degree");
    cmd_conv->add_flag("--theory-grad", theory_grad,
                       "use the stability-theory gradient degree instead of the default");
    cmd_conv->add_option("--kappa-inv", kappa_inv, "inverse permeability (>= 0)");
    cmd_conv->add_option("--format", format, "markdown|csv")
        ->check(CLI::IsMember({"markdown", "csv"}));
    cmd_conv->add_option("--out", out, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_mesh->parsed()) {
            const wgb::PolygonalMesh mesh = wgb::build_family_mesh(family, level);
            std::ostringstream os;
            wgb::write_mesh(mesh, os);
            write_output(out, os.str());
            std::cerr << "mesh: " << mesh.n_cells() << " cells, " << mesh.n_vertices()
                      << " vertices, " << mesh.n_edges() << " edges, h = " << mesh.h << "\n";
            return 0;
        }

        if (cmd_solve->parsed()) {
            wgb::PolygonalMesh mesh;
            if (!mesh_path.empty()) {
                std::ifstream is(mesh_path);
                if (!is) throw std::runtime_error("cannot open mesh file: " + mesh_path);
                mesh = wgb::read_mesh(is);
            } else {
                mesh = wgb::build_family_mesh(family, level);
            }
            wgb::RunConfig cfg;
            cfg.family = family;
            cfg.k = k;
            cfg.grad_degree = theory_grad ? -2 : grad_degree;
            cfg.kappa_inv = kappa_inv;
            const int r = wgb::resolve_grad_degree(cfg, mesh);

            const wgb::ManufacturedCase mc = wgb::quartic_vortex_case(kappa_inv);
            const int load_exactness = std::max(2 * k + 2, k + mc.forcing_degree + 1);
            const wgb::SaddleSystem sys =
                wgb::assemble_brinkman(mesh, k, r, kappa_inv, mc.forcing, load_exactness);
            if (!export_matrix.empty()) {
                std::ofstream ms(export_matrix);
                if (!ms) throw std::runtime_error("cannot open matrix file: " + export_matrix);
                wgb::write_matrix_market(sys.K, ms);
            }
            const wgb::DiscreteSolution sol = wgb::solve_brinkman(mesh, sys);

            std::ostringstream os;
            os << "cell,cx,cy,u1,u2,p\n";
            os.precision(17);
            for (int c = 0; c < mesh.n_cells(); ++c) {
                const wgb::Vec2 ctr = mesh.cell_centroid[c];
                const wgb::MonomialBasis bk(k, mesh, c);
                const wgb::MonomialBasis bp(k - 1, mesh, c);
                const int n = bk.dim();
                const double u1 = bk.evaluate(sol.u.cell_coeffs[c].head(n), ctr);
                const double u2 = bk.evaluate(sol.u.cell_coeffs[c].tail(n), ctr);
                const double p = bp.evaluate(sol.pressure[c], ctr);
                os << c << "," << ctr.x << "," << ctr.y << "," << u1 << "," << u2 << "," << p
                   << "\n";
            }
            write_output(out, os.str());
            std::cerr << "solve: " << sys.dofs.n_total() << " unknowns (k=" << k << ", r=" << r
                      << "), relative residual " << sol.residual << ", weak divergence "
                      << wgb::weak_div_residual(mesh, k, r, sol.u) << "\n";
            return 0;
        }

        // converge
        wgb::RunConfig cfg;
        cfg.family = family;
        cfg.k = k;
        cfg.grad_degree = theory_grad ? -2 : grad_degree;
        cfg.kappa_inv = kappa_inv;
        cfg.levels = parse_levels(levels_spec);
        const wgb::ErrorReport rep = wgb::run_convergence(cfg, wgb::quartic_vortex_case(kappa_inv));
        write_output(out, format == "csv" ? wgb::render_csv(rep) : wgb::render_markdown(rep));
        return 0;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}
