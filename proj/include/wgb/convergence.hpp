#pragma once

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "wgb/assembly.hpp"
#include "wgb/errors.hpp"
#include "wgb/manufactured.hpp"
#include "wgb/solver.hpp"

namespace wgb {

inline PolygonalMesh build_family_mesh(const std::string& family, int level) {
    if (family == "triangle") return build_triangle_mesh(level);
    if (family == "cross_split") return build_nonconvex_mesh(NonconvexFamily::CrossSplit, level);
    if (family == "zigzag") return build_nonconvex_mesh(NonconvexFamily::Zigzag, level);
    if (family == "l_pair") return build_nonconvex_mesh(NonconvexFamily::LPair, level);
    throw std::invalid_argument("unknown mesh family '" + family +
                                "' (triangle, cross_split, zigzag, l_pair)");
}

inline bool family_is_convex(const std::string& family) { return family == "triangle"; }

/// Default weak-gradient degree: k+1 on convex-cell families, k+3 on the
/// non-convex ones.  These are the degrees the refinement studies run at.
inline int default_grad_degree(const std::string& family, int k) {
    return family_is_convex(family) ? k + 1 : k + 3;
}

/// Gradient degree backed by the stability theory: N+k-1 on convex cells and
/// 2N+k-1 on non-convex ones, with N the largest edge count in the mesh.
inline int theory_grad_degree(const PolygonalMesh& mesh, const std::string& family, int k) {
    int n_max = 0;
    for (const auto& loop : mesh.cells) n_max = std::max<int>(n_max, loop.size());
    return family_is_convex(family) ? n_max + k - 1 : 2 * n_max + k - 1;
}

struct RunConfig {
    std::string family = "triangle";
    int k = 1;
    int grad_degree = -1;          ///< -1: family default; -2: theory rule
    double kappa_inv = 1.0;
    std::vector<int> levels;
};

inline int resolve_grad_degree(const RunConfig& cfg, const PolygonalMesh& mesh) {
    if (cfg.grad_degree == -1) return default_grad_degree(cfg.family, cfg.k);
    if (cfg.grad_degree == -2) return theory_grad_degree(mesh, cfg.family, cfg.k);
    if (cfg.grad_degree < 0)
        throw std::invalid_argument("grad_degree must be >= 0 (or -1/-2 for the named rules)");
    return cfg.grad_degree;
}

/// Solve one level of a study and measure errors against the reference
/// projections Q_h u and the exact pressure.
inline LevelRecord run_level(const PolygonalMesh& mesh, int level, const RunConfig& cfg, int r,
                             const ManufacturedCase& mc) {
    const int k = cfg.k;
    const int load_exactness =
        std::max(2 * k + 2, mc.forcing_degree >= 0 ? k + mc.forcing_degree + 1 : 2 * k + 8);
    const SaddleSystem sys =
        assemble_brinkman(mesh, k, r, cfg.kappa_inv, mc.forcing, load_exactness);
    const DiscreteSolution sol = solve_brinkman(mesh, sys);

    const int proj_exactness =
        std::max(2 * k + 2, mc.velocity_degree >= 0 ? k + mc.velocity_degree + 1 : 2 * k + 8);
    const ProjectedField qh_u = project_velocity(mesh, k, mc.velocity, proj_exactness,
                                                 proj_exactness);

    LevelRecord row;
    row.level = level;
    row.h = mesh.h;
    row.n_cells = mesh.n_cells();
    row.n_dofs = sys.dofs.n_total();
    row.err_u_l2 = l2_velocity_error(mesh, qh_u, sol.u);
    row.err_energy = energy_error(mesh, k, r, cfg.kappa_inv, qh_u, sol.u);
    row.err_p_l2 = l2_pressure_error(mesh, k, mc.pressure, sol.pressure);
    row.wdiv_residual = weak_div_residual(mesh, k, r, sol.u);
    row.solve_residual = sol.residual;
    return row;
}

/// Refinement study over cfg.levels.
inline ErrorReport run_convergence(const RunConfig& cfg, const ManufacturedCase& mc) {
    if (cfg.levels.empty()) throw std::invalid_argument("run_convergence: no levels given");
    ErrorReport report;
    report.k = cfg.k;
    report.kappa_inv = cfg.kappa_inv;
    report.family = cfg.family;
    for (int level : cfg.levels) {
        const PolygonalMesh mesh = build_family_mesh(cfg.family, level);
        const int r = resolve_grad_degree(cfg, mesh);
        report.r = r;
        report.rows.push_back(run_level(mesh, level, cfg, r, mc));
    }
    return report;
}

namespace detail {
inline std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}
}  // namespace detail

/// Human-readable table: one row per level with the three error columns and
/// the observed order between consecutive levels.
inline std::string render_markdown(const ErrorReport& rep) {
    std::ostringstream os;
    os << "family=" << rep.family << " k=" << rep.k << " r=" << rep.r
       << " kappa_inv=" << detail::fmt("%g", rep.kappa_inv) << "\n\n";
    os << "| level | h | velocity L2 | order | energy | order | pressure L2 | order |\n";
    os << "|---|---|---|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const LevelRecord& row = rep.rows[i];
        auto order_cell = [&](double prev, double cur) -> std::string {
            if (i == 0) return "-";
            const auto o = observed_order(prev, cur);
            return o ? detail::fmt("%.1f", *o) : "-";
        };
        const LevelRecord* prev = i > 0 ? &rep.rows[i - 1] : nullptr;
        os << "| " << row.level << " | " << detail::fmt("%.4e", row.h) << " | "
           << detail::fmt("%.3e", row.err_u_l2) << " | "
           << (prev ? order_cell(prev->err_u_l2, row.err_u_l2) : "-") << " | "
           << detail::fmt("%.3e", row.err_energy) << " | "
           << (prev ? order_cell(prev->err_energy, row.err_energy) : "-") << " | "
           << detail::fmt("%.3e", row.err_p_l2) << " | "
           << (prev ? order_cell(prev->err_p_l2, row.err_p_l2) : "-") << " |\n";
    }
    return os.str();
}

/// Machine-readable table; every floating-point field is printed with 17
/// significant digits so parsing recovers the report exactly.
inline std::string render_csv(const ErrorReport& rep) {
    std::ostringstream os;
    os << "family,k,r,kappa_inv,level,h,n_cells,n_dofs,err_u_l2,err_energy,err_p_l2,"
          "wdiv_residual,solve_residual\n";
    for (const LevelRecord& row : rep.rows) {
        os << rep.family << "," << rep.k << "," << rep.r << ","
           << detail::fmt("%.17g", rep.kappa_inv) << "," << row.level << ","
           << detail::fmt("%.17g", row.h) << "," << row.n_cells << "," << row.n_dofs << ","
           << detail::fmt("%.17g", row.err_u_l2) << "," << detail::fmt("%.17g", row.err_energy)
           << "," << detail::fmt("%.17g", row.err_p_l2) << ","
           << detail::fmt("%.17g", row.wdiv_residual) << ","
           << detail::fmt("%.17g", row.solve_residual) << "\n";
    }
    return os.str();
}

inline ErrorReport parse_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("parse_csv: empty input");
    ErrorReport rep;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        std::string field;
        auto next = [&]() {
            if (!std::getline(ls, field, ','))
                throw std::runtime_error("parse_csv: truncated row: " + line);
            return field;
        };
        const std::string family = next();
        const int k = std::stoi(next());
        const int r = std::stoi(next());
        const double kappa_inv = std::stod(next());
        if (first) {
            rep.family = family;
            rep.k = k;
            rep.r = r;
            rep.kappa_inv = kappa_inv;
            first = false;
        }
        LevelRecord row;
        row.level = std::stoi(next());
        row.h = std::stod(next());
        row.n_cells = std::stoi(next());
        row.n_dofs = std::stoi(next());
        row.err_u_l2 = std::stod(next());
        row.err_energy = std::stod(next());
        row.err_p_l2 = std::stod(next());
        row.wdiv_residual = std::stod(next());
        row.solve_residual = std::stod(next());
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace wgb
