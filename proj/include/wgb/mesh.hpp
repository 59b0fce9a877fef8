#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace wgb {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }

/// Undirected mesh edge.  Endpoints are stored with `a < b`; the direction
/// a -> b is the canonical orientation shared by every consumer (edge bases,
/// degrees of freedom), independent of which cell is looking at the edge.
struct Edge {
    int a = -1;
    int b = -1;
    int cell_left = -1;   ///< first cell that referenced the edge
    int cell_right = -1;  ///< second cell, or -1 on the boundary

    bool on_boundary() const { return cell_right < 0; }
};

/// Conforming mesh of simple polygons (convex or not) stored as CCW vertex
/// loops.  Cell geometry (area, centroid, diameter) is precomputed once in
/// finalize() and kept alongside the connectivity.
struct PolygonalMesh {
    std::vector<Vec2> vertices;
    std::vector<std::vector<int>> cells;  ///< CCW vertex loops
    std::vector<Edge> edges;

    /// cell_edges[c][i] is the edge id of the loop segment
    /// (cells[c][i], cells[c][i+1]); cell_edge_forward[c][i] tells whether the
    /// loop traverses that edge in its canonical a -> b direction.
    std::vector<std::vector<int>> cell_edges;
    std::vector<std::vector<bool>> cell_edge_forward;

    std::vector<double> cell_area;
    std::vector<Vec2> cell_centroid;
    std::vector<double> cell_diameter;  ///< max pairwise vertex distance h_T

    double h = 0.0;  ///< max of cell_diameter

    int n_cells() const { return static_cast<int>(cells.size()); }
    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_edges() const { return static_cast<int>(edges.size()); }

    double edge_length(int e) const {
        return norm(vertices[edges[e].b] - vertices[edges[e].a]);
    }

    Vec2 edge_midpoint(int e) const {
        return (vertices[edges[e].a] + vertices[edges[e].b]) * 0.5;
    }
};

enum class NonconvexFamily { CrossSplit, Zigzag, LPair };

inline const char* family_name(NonconvexFamily f) {
    switch (f) {
        case NonconvexFamily::CrossSplit: return "cross_split";
        case NonconvexFamily::Zigzag: return "zigzag";
        case NonconvexFamily::LPair: return "l_pair";
    }
    return "?";
}

namespace detail {

inline double polygon_area(const std::vector<Vec2>& pts) {
    double twice = 0.0;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = pts[i];
        const Vec2& q = pts[(i + 1) % n];
        twice += cross(p, q);
    }
    return 0.5 * twice;
}

inline Vec2 polygon_centroid(const std::vector<Vec2>& pts, double area) {
    double cx = 0.0, cy = 0.0;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = pts[i];
        const Vec2& q = pts[(i + 1) % n];
        const double w = cross(p, q);
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    const double s = 1.0 / (6.0 * area);
    return {cx * s, cy * s};
}

/// Deduplicating vertex store.  All generated meshes place vertices at dyadic
/// coordinates, which doubles represent exactly, so exact keying is safe.
class VertexPool {
  public:
    explicit VertexPool(std::vector<Vec2>& out) : out_(out) {}

    int insert(double x, double y) {
        auto key = std::make_pair(x, y);
        auto it = index_.find(key);
        if (it != index_.end()) return it->second;
        const int id = static_cast<int>(out_.size());
        out_.push_back({x, y});
        index_.emplace(key, id);
        return id;
    }

  private:
    std::vector<Vec2>& out_;
    std::map<std::pair<double, double>, int> index_;
};

}  // namespace detail

/// Build edge tables and cell geometry.  Throws if a cell loop is not CCW,
/// degenerate, or if more than two cells reference one edge.
inline void finalize_mesh(PolygonalMesh& mesh) {
    const int nc = mesh.n_cells();
    mesh.edges.clear();
    mesh.cell_edges.assign(nc, {});
    mesh.cell_edge_forward.assign(nc, {});
    mesh.cell_area.assign(nc, 0.0);
    mesh.cell_centroid.assign(nc, Vec2{});
    mesh.cell_diameter.assign(nc, 0.0);

    std::map<std::pair<int, int>, int> edge_index;
    for (int c = 0; c < nc; ++c) {
        const std::vector<int>& loop = mesh.cells[c];
        const int nv = static_cast<int>(loop.size());
        if (nv < 3)
            throw std::runtime_error("mesh: cell " + std::to_string(c) +
                                     " has fewer than 3 vertices");

        std::vector<Vec2> pts(nv);
        for (int i = 0; i < nv; ++i) {
            const int v = loop[i];
            if (v < 0 || v >= mesh.n_vertices())
                throw std::runtime_error("mesh: cell " + std::to_string(c) +
                                         " references invalid vertex " + std::to_string(v));
            pts[i] = mesh.vertices[v];
        }

        const double area = detail::polygon_area(pts);
        if (!(area > 0.0))
            throw std::runtime_error("mesh: cell " + std::to_string(c) +
                                     " is not counter-clockwise or is degenerate (area " +
                                     std::to_string(area) + ")");
        mesh.cell_area[c] = area;
        mesh.cell_centroid[c] = detail::polygon_centroid(pts, area);

        double diam = 0.0;
        for (int i = 0; i < nv; ++i)
            for (int j = i + 1; j < nv; ++j) diam = std::max(diam, norm(pts[i] - pts[j]));
        mesh.cell_diameter[c] = diam;

        mesh.cell_edges[c].resize(nv);
        mesh.cell_edge_forward[c].resize(nv);
        for (int i = 0; i < nv; ++i) {
            const int v0 = loop[i];
            const int v1 = loop[(i + 1) % nv];
            if (v0 == v1)
                throw std::runtime_error("mesh: cell " + std::to_string(c) +
                                         " repeats vertex " + std::to_string(v0));
            const int lo = std::min(v0, v1);
            const int hi = std::max(v0, v1);
            auto key = std::make_pair(lo, hi);
            auto it = edge_index.find(key);
            int eid;
            if (it == edge_index.end()) {
                eid = static_cast<int>(mesh.edges.size());
                Edge e;
                e.a = lo;
                e.b = hi;
                e.cell_left = c;
                mesh.edges.push_back(e);
                edge_index.emplace(key, eid);
            } else {
                eid = it->second;
                Edge& e = mesh.edges[eid];
                if (e.cell_right >= 0)
                    throw std::runtime_error("mesh: edge (" + std::to_string(lo) + "," +
                                             std::to_string(hi) +
                                             ") is referenced by more than two cells");
                e.cell_right = c;
            }
            mesh.cell_edges[c][i] = eid;
            mesh.cell_edge_forward[c][i] = (v0 == lo);
        }
    }

    mesh.h = 0.0;
    for (double d : mesh.cell_diameter) mesh.h = std::max(mesh.h, d);
}

/// Outward unit normal of cell `c` on its `i`-th loop edge.
inline Vec2 outward_normal(const PolygonalMesh& mesh, int c, int i) {
    const std::vector<int>& loop = mesh.cells[c];
    const int nv = static_cast<int>(loop.size());
    const Vec2 t = mesh.vertices[loop[(i + 1) % nv]] - mesh.vertices[loop[i]];
    const double len = norm(t);
    return {t.y / len, -t.x / len};
}

/// Indices (into the cell loop) of the reflex vertices of cell `c`.
inline std::vector<int> reflex_vertices(const PolygonalMesh& mesh, int c) {
    const std::vector<int>& loop = mesh.cells[c];
    const int nv = static_cast<int>(loop.size());
    std::vector<int> out;
    for (int i = 0; i < nv; ++i) {
        const Vec2& prev = mesh.vertices[loop[(i + nv - 1) % nv]];
        const Vec2& cur = mesh.vertices[loop[i]];
        const Vec2& next = mesh.vertices[loop[(i + 1) % nv]];
        if (cross(cur - prev, next - cur) < 0.0) out.push_back(i);
    }
    return out;
}

/// Uniform triangulation of the unit square.  Level 1 is the square split
/// along one diagonal into two right triangles; each level halves h.
inline PolygonalMesh build_triangle_mesh(int level) {
    if (level < 1) throw std::invalid_argument("build_triangle_mesh: level must be >= 1");
    const int n = 1 << (level - 1);
    PolygonalMesh mesh;
    mesh.vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            mesh.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});

    auto vid = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            // split along the SW-NE diagonal
            mesh.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            mesh.cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    finalize_mesh(mesh);
    return mesh;
}

/// Families of meshes of the unit square in which every cell is a simple
/// non-convex polygon; h halves per level.
///
///  - CrossSplit: each grid square is cut into four hexagons by an interior
///    cross whose arms are kinked, parking one reflex vertex in each piece.
///  - Zigzag: each grid square is cut into two heptagons by a zigzag
///    polyline running bottom to top.
///  - LPair: each grid square is cut into two L-shaped hexagons by a
///    staircase; the staircase direction alternates per row so vertical
///    neighbors agree on the split points.
inline PolygonalMesh build_nonconvex_mesh(NonconvexFamily family, int level) {
    if (level < 1) throw std::invalid_argument("build_nonconvex_mesh: level must be >= 1");
    const int n = 1 << (level - 1);
    const double s = 1.0 / n;

    PolygonalMesh mesh;
    detail::VertexPool pool(mesh.vertices);

    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double x0 = i * s;
            const double y0 = j * s;
            switch (family) {
                case NonconvexFamily::CrossSplit: {
                    const double e = s / 8.0;
                    const int c00 = pool.insert(x0, y0);
                    const int c10 = pool.insert(x0 + s, y0);
                    const int c11 = pool.insert(x0 + s, y0 + s);
                    const int c01 = pool.insert(x0, y0 + s);
                    const int mb = pool.insert(x0 + s / 2, y0);
                    const int mr = pool.insert(x0 + s, y0 + s / 2);
                    const int mt = pool.insert(x0 + s / 2, y0 + s);
                    const int ml = pool.insert(x0, y0 + s / 2);
                    const int ctr = pool.insert(x0 + s / 2, y0 + s / 2);
                    // Arm kinks; each bulges into the piece counter-clockwise
                    // of its arm, handing that piece its reflex vertex.
                    const int jb = pool.insert(x0 + s / 2 - e, y0 + s / 4);
                    const int jr = pool.insert(x0 + 3 * s / 4, y0 + s / 2 - e);
                    const int jt = pool.insert(x0 + s / 2 + e, y0 + 3 * s / 4);
                    const int jl = pool.insert(x0 + s / 4, y0 + s / 2 + e);
                    mesh.cells.push_back({c00, mb, jb, ctr, jl, ml});
                    mesh.cells.push_back({c10, mr, jr, ctr, jb, mb});
                    mesh.cells.push_back({c11, mt, jt, ctr, jr, mr});
                    mesh.cells.push_back({c01, ml, jl, ctr, jt, mt});
                    break;
                }
                case NonconvexFamily::Zigzag: {
                    const double d = s / 8.0;
                    const int c00 = pool.insert(x0, y0);
                    const int c10 = pool.insert(x0 + s, y0);
                    const int c11 = pool.insert(x0 + s, y0 + s);
                    const int c01 = pool.insert(x0, y0 + s);
                    const int mb = pool.insert(x0 + s / 2, y0);
                    const int mt = pool.insert(x0 + s / 2, y0 + s);
                    const int z1 = pool.insert(x0 + s / 2 - d, y0 + s / 4);
                    const int z2 = pool.insert(x0 + s / 2 + d, y0 + s / 2);
                    const int z3 = pool.insert(x0 + s / 2 - d, y0 + 3 * s / 4);
                    mesh.cells.push_back({c00, mb, z1, z2, z3, mt, c01});
                    mesh.cells.push_back({c10, c11, mt, z3, z2, z1, mb});
                    break;
                }
                case NonconvexFamily::LPair: {
                    // Staircase split points at 1/4 and 3/4 of the side,
                    // swapped on odd rows so the splits meet across rows.
                    const double a = (j % 2 == 0) ? 0.25 : 0.75;
                    const double b = 1.0 - a;
                    const int c00 = pool.insert(x0, y0);
                    const int c10 = pool.insert(x0 + s, y0);
                    const int c11 = pool.insert(x0 + s, y0 + s);
                    const int c01 = pool.insert(x0, y0 + s);
                    const int pa0 = pool.insert(x0 + a * s, y0);
                    const int pam = pool.insert(x0 + a * s, y0 + s / 2);
                    const int pbm = pool.insert(x0 + b * s, y0 + s / 2);
                    const int pb1 = pool.insert(x0 + b * s, y0 + s);
                    mesh.cells.push_back({c00, pa0, pam, pbm, pb1, c01});
                    mesh.cells.push_back({pa0, c10, c11, pb1, pbm, pam});
                    break;
                }
            }
        }
    }
    finalize_mesh(mesh);
    return mesh;
}

/// Ear-clipping triangulation of cell `c`.  Returns triangles as triples of
/// global vertex ids, each CCW.  Works for any simple polygon, convex or not.
inline std::vector<std::array<int, 3>> triangulate_cell(const PolygonalMesh& mesh, int c) {
    std::vector<int> loop = mesh.cells[c];
    std::vector<std::array<int, 3>> tris;
    tris.reserve(loop.size() - 2);

    auto pt = [&](int v) -> const Vec2& { return mesh.vertices[v]; };
    auto tri_contains = [&](const Vec2& a, const Vec2& b, const Vec2& cc, const Vec2& p) {
        // strict interior test; boundary points do not block an ear
        const double d1 = cross(b - a, p - a);
        const double d2 = cross(cc - b, p - b);
        const double d3 = cross(a - cc, p - cc);
        return d1 > 0.0 && d2 > 0.0 && d3 > 0.0;
    };

    const double scale = mesh.cell_diameter[c];
    const double area_eps = 1e-14 * scale * scale;

    int guard = 0;
    const int max_iter = static_cast<int>(loop.size()) * static_cast<int>(loop.size()) + 16;
    while (loop.size() > 3) {
        if (++guard > max_iter)
            throw std::runtime_error("triangulate_cell: cell " + std::to_string(c) +
                                     " could not be triangulated (not a simple polygon?)");
        const int n = static_cast<int>(loop.size());
        bool clipped = false;
        for (int i = 0; i < n; ++i) {
            const int vp = loop[(i + n - 1) % n];
            const int vc = loop[i];
            const int vn = loop[(i + 1) % n];
            const double a2 = cross(pt(vc) - pt(vp), pt(vn) - pt(vc));
            if (a2 <= area_eps) continue;  // reflex or degenerate corner
            bool blocked = false;
            for (int jj = 0; jj < n && !blocked; ++jj) {
                const int v = loop[jj];
                if (v == vp || v == vc || v == vn) continue;
                blocked = tri_contains(pt(vp), pt(vc), pt(vn), pt(v));
            }
            if (blocked) continue;
            tris.push_back({vp, vc, vn});
            loop.erase(loop.begin() + i);
            clipped = true;
            break;
        }
        if (!clipped)
            throw std::runtime_error("triangulate_cell: cell " + std::to_string(c) +
                                     " has no clippable ear (not a simple CCW polygon?)");
    }
    // The final triple can be an exact sliver when three boundary vertices are
    // collinear (legal in polygonal meshes); it carries no area, so drop it.
    const double last2 = cross(pt(loop[1]) - pt(loop[0]), pt(loop[2]) - pt(loop[0]));
    if (last2 > area_eps)
        tris.push_back({loop[0], loop[1], loop[2]});
    else if (last2 < -area_eps)
        throw std::runtime_error("triangulate_cell: cell " + std::to_string(c) +
                                 " produced an inverted final triangle (not a simple polygon?)");
    return tris;
}

/// Plain-text mesh format:
///   line 1:           NV NC
///   next NV lines:    x y
///   next NC lines:    m v1 ... vm   (0-based CCW vertex loop)
inline void write_mesh(const PolygonalMesh& mesh, std::ostream& os) {
    os.precision(17);
    os << mesh.n_vertices() << " " << mesh.n_cells() << "\n";
    for (const Vec2& v : mesh.vertices) os << v.x << " " << v.y << "\n";
    for (const std::vector<int>& loop : mesh.cells) {
        os << loop.size();
        for (int v : loop) os << " " << v;
        os << "\n";
    }
}

inline PolygonalMesh read_mesh(std::istream& is) {
    auto fail = [](int line, const std::string& what) {
        throw std::runtime_error("read_mesh: line " + std::to_string(line) + ": " + what);
    };

    int line_no = 0;
    auto next_line = [&](std::string& line) {
        while (std::getline(is, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
        }
        return false;
    };

    std::string line;
    if (!next_line(line)) fail(line_no, "missing header");
    std::istringstream header(line);
    long long nv = -1, nc = -1;
    if (!(header >> nv >> nc) || nv < 3 || nc < 1) fail(line_no, "expected 'NV NC' header");

    PolygonalMesh mesh;
    mesh.vertices.reserve(static_cast<std::size_t>(nv));
    for (long long i = 0; i < nv; ++i) {
        if (!next_line(line)) fail(line_no, "unexpected end of file in vertex block");
        std::istringstream ls(line);
        double x, y;
        if (!(ls >> x >> y)) fail(line_no, "expected 'x y'");
        mesh.vertices.push_back({x, y});
    }
    mesh.cells.reserve(static_cast<std::size_t>(nc));
    for (long long cidx = 0; cidx < nc; ++cidx) {
        if (!next_line(line)) fail(line_no, "unexpected end of file in cell block");
        std::istringstream ls(line);
        int m;
        if (!(ls >> m) || m < 3) fail(line_no, "expected vertex count >= 3");
        std::vector<int> loop(m);
        for (int i = 0; i < m; ++i) {
            if (!(ls >> loop[i])) fail(line_no, "expected " + std::to_string(m) + " vertex ids");
            if (loop[i] < 0 || loop[i] >= nv) fail(line_no, "vertex id out of range");
        }
        mesh.cells.push_back(std::move(loop));
    }
    finalize_mesh(mesh);
    return mesh;
}

}  // namespace wgb
