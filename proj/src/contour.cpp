#include "pslab/contour.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace pslab {

namespace {

// Edge ids: horizontal edge from node (i,j) to (i+1,j) is 2*(j*nx+i); vertical edge from
// (i,j) to (i,j+1) is 2*(j*nx+i)+1.
struct EdgeGraph {
    std::map<std::size_t, Cx> point;
    std::map<std::size_t, std::vector<std::size_t>> adj;

    void link(std::size_t a, std::size_t b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
};

}  // namespace

LevelSet extract_level(const ScalarField& field, double eps) {
    require(std::isfinite(eps) && eps > 0.0, "epsilon must be positive");
    const GridSpec& g = field.grid;
    require(field.values.size() == g.size(), "field length does not match grid");
    const std::size_t nx = g.nx;

    auto inside = [&](std::size_t i, std::size_t j) { return field.at(i, j) < eps; };
    EdgeGraph graph;

    auto edge_point = [&](std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1) {
        const double va = field.at(i0, j0), vb = field.at(i1, j1);
        const double t = (eps - va) / (vb - va);
        const Cx pa = g.node(i0, j0), pb = g.node(i1, j1);
        return pa + t * (pb - pa);
    };
    auto h_edge = [&](std::size_t i, std::size_t j) {
        const std::size_t id = 2 * (j * nx + i);
        if (!graph.point.count(id)) graph.point[id] = edge_point(i, j, i + 1, j);
        return id;
    };
    auto v_edge = [&](std::size_t i, std::size_t j) {
        const std::size_t id = 2 * (j * nx + i) + 1;
        if (!graph.point.count(id)) graph.point[id] = edge_point(i, j, i, j + 1);
        return id;
    };

    for (std::size_t j = 0; j + 1 < g.ny; ++j) {
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            const bool c00 = inside(i, j), c10 = inside(i + 1, j);
            const bool c11 = inside(i + 1, j + 1), c01 = inside(i, j + 1);
            const int code = int(c00) | int(c10) << 1 | int(c11) << 2 | int(c01) << 3;
            if (code == 0 || code == 15) continue;

            const bool cb = c00 != c10, cr = c10 != c11, ct = c01 != c11, cl = c00 != c01;
            if (code == 5 || code == 10) {
                const std::size_t b = h_edge(i, j), r = v_edge(i + 1, j);
                const std::size_t t = h_edge(i, j + 1), l = v_edge(i, j);
                const double center =
                    0.25 * (field.at(i, j) + field.at(i + 1, j) + field.at(i + 1, j + 1) + field.at(i, j + 1));
                // Corners 00 and 11 share a state; if the center shares it too they are joined
                // through the cell and the cuts go around corners 10 and 01.
                if ((center < eps) == c00) {
                    graph.link(b, r);
                    graph.link(l, t);
                } else {
                    graph.link(b, l);
                    graph.link(r, t);
                }
                continue;
            }
            std::array<std::size_t, 2> ends{};
            int k = 0;
            if (cb) ends[k++] = h_edge(i, j);
            if (cr) ends[k++] = v_edge(i + 1, j);
            if (ct) ends[k++] = h_edge(i, j + 1);
            if (cl) ends[k++] = v_edge(i, j);
            graph.link(ends[0], ends[1]);
        }
    }

    LevelSet out;
    out.epsilon = eps;
    std::map<std::size_t, bool> used;

    auto walk = [&](std::size_t start) {
        std::vector<Cx> line{graph.point[start]};
        used[start] = true;
        std::size_t cur = start;
        for (;;) {
            const auto& nb = graph.adj[cur];
            auto it = std::find_if(nb.begin(), nb.end(), [&](std::size_t c) { return !used[c]; });
            if (it == nb.end()) {
                const bool closes = line.size() > 2 && std::find(nb.begin(), nb.end(), start) != nb.end();
                if (closes) line.push_back(graph.point[start]);
                return line;
            }
            cur = *it;
            used[cur] = true;
            line.push_back(graph.point[cur]);
        }
    };

    // Open curves start at degree-one ends (where the level leaves the grid); cycles afterwards.
    for (const auto& [id, nb] : graph.adj)
        if (nb.size() == 1 && !used[id]) out.polylines.push_back(walk(id));
    for (const auto& [id, nb] : graph.adj)
        if (!used[id]) out.polylines.push_back(walk(id));
    return out;
}

json levelset_to_json(const LevelSet& ls) {
    json lines = json::array();
    for (const auto& pl : ls.polylines) {
        json pts = json::array();
        for (const Cx& z : pl) pts.push_back(json::array({z.real(), z.imag()}));
        lines.push_back(std::move(pts));
    }
    return {{"epsilon", ls.epsilon}, {"polylines", std::move(lines)}};
}

json levelsets_to_json(const std::vector<LevelSet>& sets) {
    json arr = json::array();
    for (const auto& s : sets) arr.push_back(levelset_to_json(s));
    return {{"levels", std::move(arr)}};
}

}  // namespace pslab
