#include "maxlab/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <string>

#include "maxlab/error.hpp"

namespace maxlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinEdge = 1e-14;

double heron(double a, double b, double c) {
    // Kahan's ordering a >= b >= c
    if (a < b) std::swap(a, b);
    if (a < c) std::swap(a, c);
    if (b < c) std::swap(b, c);
    const double prod = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    return 0.25 * std::sqrt(std::max(0.0, prod));
}

// Distance at C from the virtual source seen by A and B, or +inf when the
// ray from that source does not cross the edge AB.
double triangle_update(double ta, double tb, double a, double b, double c) {
    const double sx = (ta * ta - tb * tb + c * c) / (2.0 * c);
    const double sy2 = ta * ta - sx * sx;
    if (sy2 < 0.0) return kInf;
    const double sy = -std::sqrt(sy2);
    const double cx = (b * b + c * c - a * a) / (2.0 * c);
    const double cy = std::sqrt(std::max(0.0, b * b - cx * cx));
    if (cy <= 0.0) return kInf;
    const double cross = sx + (cx - sx) * (-sy) / (cy - sy);
    if (cross < 0.0 || cross > c) return kInf;
    return std::hypot(cx - sx, cy - sy);
}

int local_index(const std::array<int, 3>& tri, int v) {
    for (int k = 0; k < 3; ++k) {
        if (tri[k] == v) return k;
    }
    return -1;
}

// Squared distance between two points of a triangle given by barycentric
// coordinates: -sum_{i<j} db_i db_j l_ij^2 (l_ij opposite the third vertex).
double bary_distance(const std::array<double, 3>& p, const std::array<double, 3>& q, const std::array<double, 3>& len) {
    const double d0 = p[0] - q[0];
    const double d1 = p[1] - q[1];
    const double d2 = p[2] - q[2];
    const double sq = -(d1 * d2 * len[0] * len[0] + d0 * d2 * len[1] * len[1] + d0 * d1 * len[2] * len[2]);
    return std::sqrt(std::max(0.0, sq));
}

}  // namespace

TriMesh triangulate(const GraphFunction& g, const MetricSpec& metric, Exec exec) {
    const Domain& domain = *g.domain;
    const Grid& grid = domain.grid();
    const int nx = grid.nx();
    const int cx = nx - 1;
    const int cy = grid.ny() - 1;

    std::vector<int> cells;
    for (int j = 0; j < cy; ++j) {
        for (int i = 0; i < cx; ++i) {
            if (domain.cell_active(i, j)) cells.push_back(grid.cell_index(i, j));
        }
    }

    TriMesh mesh;
    mesh.domain = g.domain;
    const int ncells = static_cast<int>(cells.size());
    mesh.triangles.resize(2 * cells.size());
    mesh.edge_length.resize(2 * cells.size());
    mesh.area.resize(2 * cells.size());

    auto length = [&](int v0, int v1) {
        const double x0 = grid.x(grid.col(v0)), y0 = grid.y(grid.row(v0));
        const double x1 = grid.x(grid.col(v1)), y1 = grid.y(grid.row(v1));
        const double scale = metric.conformal_scale(0.5 * (x0 + x1), 0.5 * (y0 + y1));
        const double du = g.u[v1] - g.u[v0];
        const double sq = scale * ((x1 - x0) * (x1 - x0) + (y1 - y0) * (y1 - y0)) - du * du;
        return sq > 0.0 ? std::sqrt(sq) : 0.0;
    };

    int bad = -1;
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (int k = 0; k < ncells; ++k) {
        const int c = cells[k];
        const int i = c % cx;
        const int j = c / cx;
        const int n00 = grid.index(i, j);
        const int n10 = n00 + 1;
        const int n01 = n00 + nx;
        const int n11 = n01 + 1;
        const std::array<std::array<int, 3>, 2> tris = {{{n00, n10, n11}, {n00, n11, n01}}};
        for (int s = 0; s < 2; ++s) {
            const auto& t = tris[s];
            const std::array<double, 3> len = {length(t[1], t[2]), length(t[2], t[0]), length(t[0], t[1])};
            const bool degenerate = len[0] < kMinEdge || len[1] < kMinEdge || len[2] < kMinEdge;
            const bool inequality = len[0] >= len[1] + len[2] || len[1] >= len[0] + len[2] || len[2] >= len[0] + len[1];
            if (degenerate || inequality) {
#pragma omp critical
                bad = std::max(bad, 2 * k + s);
            }
            mesh.triangles[2 * k + s] = t;
            mesh.edge_length[2 * k + s] = len;
            mesh.area[2 * k + s] = heron(len[0], len[1], len[2]);
        }
    }
    if (bad >= 0) throw MeshError("degenerate triangle " + std::to_string(bad) + " in surface mesh");

    const std::size_t nv = grid.node_count();
    mesh.vertex_offsets.assign(nv + 1, 0);
    for (const auto& t : mesh.triangles) {
        for (int v : t) ++mesh.vertex_offsets[v + 1];
    }
    std::partial_sum(mesh.vertex_offsets.begin(), mesh.vertex_offsets.end(), mesh.vertex_offsets.begin());
    mesh.vertex_triangles.resize(mesh.vertex_offsets.back());
    std::vector<int> fill(mesh.vertex_offsets.begin(), mesh.vertex_offsets.end() - 1);
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        for (int v : mesh.triangles[t]) mesh.vertex_triangles[fill[v]++] = t;
    }
    return mesh;
}

double edge_length_between(const TriMesh& mesh, int triangle, int v0, int v1) {
    const auto& tri = mesh.triangles[triangle];
    const int a = local_index(tri, v0);
    const int b = local_index(tri, v1);
    if (a < 0 || b < 0 || a == b) return -1.0;
    return mesh.edge_length[triangle][3 - a - b];
}

DistanceField geodesic_distance(const TriMesh& mesh, int source) {
    const int nv = static_cast<int>(mesh.vertex_count());
    if (source < 0 || source >= nv || !mesh.has_vertex(source)) {
        throw MeshError("source vertex " + std::to_string(source) + " is not part of the mesh");
    }
    DistanceField field;
    field.source = source;
    field.distance.assign(nv, kInf);
    std::vector<unsigned char> accepted(nv, 0);

    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
    field.distance[source] = 0.0;
    heap.emplace(0.0, source);

    auto& d = field.distance;
    while (!heap.empty()) {
        const auto [dist, v] = heap.top();
        heap.pop();
        if (accepted[v] || dist > d[v]) continue;
        accepted[v] = 1;
        for (int pos = mesh.vertex_offsets[v]; pos < mesh.vertex_offsets[v + 1]; ++pos) {
            const int t = mesh.vertex_triangles[pos];
            const auto& tri = mesh.triangles[t];
            const auto& len = mesh.edge_length[t];
            const int lv = local_index(tri, v);
            for (int s = 1; s <= 2; ++s) {
                const int lx = (lv + s) % 3;  // vertex to update
                const int ly = 3 - lv - lx;   // third vertex
                const int x = tri[lx];
                if (accepted[x]) continue;
                double candidate = d[v] + len[ly];  // edge v-x is opposite y
                const int y = tri[ly];
                if (accepted[y]) {
                    // A = v, B = y, C = x
                    const double via = triangle_update(d[v], d[y], len[lv], len[ly] /*|AC| = |v x|*/, len[lx]);
                    candidate = std::min(candidate, std::max(via, d[v]));
                }
                if (candidate < d[x]) {
                    d[x] = candidate;
                    heap.emplace(candidate, x);
                }
            }
        }
    }
    return field;
}

GeodesicDisc disc_extract(const TriMesh& mesh, const DistanceField& field, double r, int min_depth) {
    if (!(r > 0.0)) throw ContainmentError("disc radius must be positive");
    const Domain& domain = *mesh.domain;
    const Grid& grid = domain.grid();
    const auto& d = field.distance;

    GeodesicDisc disc;
    disc.center = field.source;
    disc.radius = r;

    struct Segment {
        BoundaryPoint a;
        BoundaryPoint b;
    };
    std::vector<Segment> segments;

    auto point_on = [&](int v0, int v1, double t) {
        BoundaryPoint p;
        p.v0 = v0;
        p.v1 = v1;
        p.t = t;
        p.x = (1.0 - t) * grid.x(grid.col(v0)) + t * grid.x(grid.col(v1));
        p.y = (1.0 - t) * grid.y(grid.row(v0)) + t * grid.y(grid.row(v1));
        return p;
    };

    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        const auto& tri = mesh.triangles[t];
        const std::array<double, 3> dv = {d[tri[0]], d[tri[1]], d[tri[2]]};
        const int inside = (dv[0] <= r) + (dv[1] <= r) + (dv[2] <= r);
        if (inside == 0) continue;
        for (int v : tri) {
            if (domain.depth(v) < min_depth || !std::isfinite(d[v])) {
                throw ContainmentError("geodesic disc of radius " + std::to_string(r) +
                                       " is not compactly contained in the surface");
            }
        }
        if (inside == 3) {
            disc.triangles.push_back({t, 1.0});
            continue;
        }
        // Local vertex `odd` is the single inside (inside == 1) or outside
        // (inside == 2) vertex.
        int odd = 0;
        for (int k = 0; k < 3; ++k) {
            if ((dv[k] <= r) == (inside == 1)) odd = k;
        }
        const int k1 = (odd + 1) % 3;
        const int k2 = (odd + 2) % 3;
        const double t1 = (r - dv[odd]) / (dv[k1] - dv[odd]);
        const double t2 = (r - dv[odd]) / (dv[k2] - dv[odd]);
        // t1, t2 are measured from the odd vertex, so its corner triangle has
        // area fraction t1 t2 whichever side it lies on.
        const double fraction = inside == 1 ? t1 * t2 : 1.0 - t1 * t2;
        disc.triangles.push_back({t, fraction});

        std::array<double, 3> pa{}, pb{};
        pa[odd] = 1.0 - t1;
        pa[k1] = t1;
        pb[odd] = 1.0 - t2;
        pb[k2] = t2;
        disc.length += bary_distance(pa, pb, mesh.edge_length[t]);
        segments.push_back({point_on(tri[odd], tri[k1], t1), point_on(tri[odd], tri[k2], t2)});
    }
    if (disc.triangles.empty()) throw ContainmentError("geodesic disc is empty");

    for (const auto& ct : disc.triangles) {
        disc.area += mesh.area[ct.triangle] * ct.fraction;
        for (int v : mesh.triangles[ct.triangle]) disc.vertices.push_back(v);
    }
    std::sort(disc.vertices.begin(), disc.vertices.end());
    disc.vertices.erase(std::unique(disc.vertices.begin(), disc.vertices.end()), disc.vertices.end());

    // Chain segments into loops through shared edge crossings.
    auto key = [](const BoundaryPoint& p) { return std::make_pair(std::min(p.v0, p.v1), std::max(p.v0, p.v1)); };
    std::map<std::pair<int, int>, std::vector<int>> incident;
    for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
        incident[key(segments[s].a)].push_back(s);
        incident[key(segments[s].b)].push_back(s);
    }
    for (const auto& [k, list] : incident) {
        if (list.size() != 2) throw MeshError("open geodesic circle polyline");
    }
    std::vector<unsigned char> used(segments.size(), 0);
    for (int start = 0; start < static_cast<int>(segments.size()); ++start) {
        if (used[start]) continue;
        std::vector<BoundaryPoint> loop;
        int s = start;
        BoundaryPoint cur = segments[s].a;
        loop.push_back(cur);
        while (!used[s]) {
            used[s] = 1;
            const BoundaryPoint next = key(segments[s].a) == key(cur) ? segments[s].b : segments[s].a;
            loop.push_back(next);
            const auto& list = incident[key(next)];
            const int other = list[0] == s ? list[1] : list[0];
            cur = next;
            s = other;
        }
        disc.boundary.push_back(std::move(loop));
    }
    disc.multi_component = disc.boundary.size() > 1;
    return disc;
}

double disc_integral(const TriMesh& mesh, const GeodesicDisc& disc, const std::vector<double>& values) {
    double sum = 0.0;
    for (const auto& ct : disc.triangles) {
        const auto& tri = mesh.triangles[ct.triangle];
        const double mean = (values[tri[0]] + values[tri[1]] + values[tri[2]]) / 3.0;
        sum += mean * mesh.area[ct.triangle] * ct.fraction;
    }
    return sum;
}

double containment_radius(const TriMesh& mesh, const DistanceField& field, int min_depth) {
    double radius = kInf;
    for (int v = 0; v < static_cast<int>(mesh.vertex_count()); ++v) {
        if (!mesh.has_vertex(v)) continue;
        if (mesh.domain->depth(v) < min_depth) radius = std::min(radius, field.distance[v]);
    }
    return radius;
}

}  // namespace maxlab
