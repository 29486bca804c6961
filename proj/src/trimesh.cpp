#include "minsurf/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

namespace minsurf::mesh {

double TriMesh::bbox_scale() const {
    if (vertices.empty()) return 0;
    Vec lo = vertices[0], hi = vertices[0];
    for (const Vec& v : vertices)
        for (int k = 0; k < 4; ++k) {
            lo[k] = std::min(lo[k], v[k]);
            hi[k] = std::max(hi[k], v[k]);
        }
    return norm(hi - lo);
}

void validate(const TriMesh& m) {
    const int n = (int)m.vertices.size();
    double scale = m.bbox_scale();
    std::map<std::pair<int, int>, int> seen;
    for (size_t f = 0; f < m.faces.size(); ++f) {
        auto [a, b, c] = m.faces[f];
        if (a < 0 || b < 0 || c < 0 || a >= n || b >= n || c >= n)
            throw MeshError("face " + std::to_string(f) + " references invalid vertex index");
        if (a == b || b == c || a == c)
            throw MeshError("face " + std::to_string(f) + " repeats a vertex");
        double ar = triangle_area(m.vertices[a], m.vertices[b], m.vertices[c]);
        if (!(ar > 1e-14 * scale * scale))
            throw MeshError("face " + std::to_string(f) + " is degenerate");
        int idx[3] = {a, b, c};
        for (int e = 0; e < 3; ++e) {
            auto key = std::make_pair(idx[e], idx[(e + 1) % 3]);
            if (++seen[key] > 1)
                throw MeshError("directed edge (" + std::to_string(key.first) + "," +
                                std::to_string(key.second) + ") appears twice: inconsistent orientation");
        }
    }
    for (const auto& [attr, name] :
         {std::make_pair(&m.lambda, "lambda"), std::make_pair(&m.gauss_k, "K")}) {
        if (!attr->empty() && attr->size() != m.vertices.size())
            throw MeshError(std::string("attribute ") + name + " has wrong size");
    }
    if (!m.normals.empty() && m.normals.size() != m.vertices.size())
        throw MeshError("attribute normal has wrong size");
}

size_t edge_count(const TriMesh& m) {
    std::map<std::pair<int, int>, int> edges;
    for (const auto& f : m.faces)
        for (int e = 0; e < 3; ++e) {
            int a = f[e], b = f[(e + 1) % 3];
            edges[std::minmax(a, b)]++;
        }
    return edges.size();
}

int euler_characteristic(const TriMesh& m) {
    return (int)m.vertices.size() - (int)edge_count(m) + (int)m.faces.size();
}

std::vector<std::array<int, 2>> boundary_edges(const TriMesh& m) {
    std::map<std::pair<int, int>, int> count;
    for (const auto& f : m.faces)
        for (int e = 0; e < 3; ++e) count[std::minmax(f[e], f[(e + 1) % 3])]++;
    std::vector<std::array<int, 2>> out;
    for (const auto& f : m.faces)
        for (int e = 0; e < 3; ++e) {
            int a = f[e], b = f[(e + 1) % 3];
            if (count[std::minmax(a, b)] == 1) out.push_back({a, b});
        }
    return out;
}

std::vector<std::vector<int>> boundary_loops(const TriMesh& m) {
    auto edges = boundary_edges(m);
    std::map<int, int> next;
    for (auto [a, b] : edges) next[a] = b;
    std::vector<std::vector<int>> loops;
    std::map<int, bool> used;
    for (auto [a, b] : edges) {
        if (used[a]) continue;
        std::vector<int> loop;
        int v = a;
        while (!used[v]) {
            used[v] = true;
            loop.push_back(v);
            auto it = next.find(v);
            if (it == next.end()) throw MeshError("open boundary chain: mesh is not manifold");
            v = it->second;
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

std::vector<bool> boundary_vertex_mask(const TriMesh& m) {
    std::vector<bool> mask(m.vertices.size(), false);
    for (auto [a, b] : boundary_edges(m)) {
        mask[a] = true;
        mask[b] = true;
    }
    return mask;
}

double area(const TriMesh& m) {
    double s = 0;
    for (const auto& f : m.faces)
        s += triangle_area(m.vertices[f[0]], m.vertices[f[1]], m.vertices[f[2]]);
    return s;
}

DefectData angle_defect_curvature(const TriMesh& m) {
    DefectData d;
    size_t n = m.vertices.size();
    std::vector<double> angle_sum(n, 0.0);
    d.vertex_area.assign(n, 0.0);
    d.on_boundary = boundary_vertex_mask(m);
    for (const auto& f : m.faces) {
        const Vec &a = m.vertices[f[0]], &b = m.vertices[f[1]], &c = m.vertices[f[2]];
        angle_sum[f[0]] += corner_angle(a, b, c);
        angle_sum[f[1]] += corner_angle(b, c, a);
        angle_sum[f[2]] += corner_angle(c, a, b);
        double third = triangle_area(a, b, c) / 3.0;
        for (int k = 0; k < 3; ++k) d.vertex_area[f[k]] += third;
    }
    d.defect.assign(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        if (d.vertex_area[i] == 0) continue;  // isolated vertex
        if (d.on_boundary[i]) {
            d.defect[i] = M_PI - angle_sum[i];
            d.boundary_turning_sum += d.defect[i];
        } else {
            d.defect[i] = 2.0 * M_PI - angle_sum[i];
            d.interior_defect_sum += d.defect[i];
        }
    }
    d.total_curvature = -d.interior_defect_sum;
    return d;
}

namespace {

struct Adjacency {
    std::vector<int> offsets, targets;
    std::vector<double> lengths;
};

Adjacency build_adjacency(const TriMesh& m) {
    std::map<std::pair<int, int>, double> edges;
    for (const auto& f : m.faces)
        for (int e = 0; e < 3; ++e) {
            int a = f[e], b = f[(e + 1) % 3];
            edges[std::minmax(a, b)] = dist(m.vertices[a], m.vertices[b]);
        }
    size_t n = m.vertices.size();
    std::vector<int> degree(n, 0);
    for (const auto& [k, len] : edges) {
        degree[k.first]++;
        degree[k.second]++;
    }
    Adjacency adj;
    adj.offsets.assign(n + 1, 0);
    for (size_t i = 0; i < n; ++i) adj.offsets[i + 1] = adj.offsets[i] + degree[i];
    adj.targets.resize(adj.offsets[n]);
    adj.lengths.resize(adj.offsets[n]);
    std::vector<int> fill(adj.offsets.begin(), adj.offsets.end() - 1);
    for (const auto& [k, len] : edges) {
        adj.targets[fill[k.first]] = k.second;
        adj.lengths[fill[k.first]++] = len;
        adj.targets[fill[k.second]] = k.first;
        adj.lengths[fill[k.second]++] = len;
    }
    return adj;
}

std::vector<double> dijkstra(const TriMesh& m, std::span<const int> sources) {
    auto adj = build_adjacency(m);
    size_t n = m.vertices.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (int s : sources) {
        dist[s] = 0;
        pq.push({0.0, s});
    }
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (int k = adj.offsets[u]; k < adj.offsets[u + 1]; ++k) {
            int v = adj.targets[k];
            double nd = d + adj.lengths[k];
            if (nd < dist[v]) {
                dist[v] = nd;
                pq.push({nd, v});
            }
        }
    }
    return dist;
}

// Distance candidate for C given distances at A and B: place a virtual
// source in the triangle's plane consistent with (dA, dB) on the far side of
// edge AB and take the straight line if it actually crosses the edge.
double unfold_update(const Vec& A, const Vec& B, const Vec& C, double dA, double dB) {
    double ab = dist(A, B);
    if (ab <= 0) return std::numeric_limits<double>::infinity();
    double ac = dist(A, C), bc = dist(B, C);
    double cx = (ab * ab + ac * ac - bc * bc) / (2 * ab);
    double cy2 = ac * ac - cx * cx;
    double cy = cy2 > 0 ? std::sqrt(cy2) : 0.0;
    double sx = (ab * ab + dA * dA - dB * dB) / (2 * ab);
    double sy2 = dA * dA - sx * sx;
    if (sy2 < 0) return std::numeric_limits<double>::infinity();
    double sy = -std::sqrt(sy2);
    // crossing point of S->C with the line y=0 must be on the open edge
    double denom = cy - sy;
    if (denom <= 0) return std::numeric_limits<double>::infinity();
    double xcross = sx + (cx - sx) * (-sy) / denom;
    if (xcross < 0 || xcross > ab) return std::numeric_limits<double>::infinity();
    double dx = cx - sx, dy = cy - sy;
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

std::vector<double> geodesic_distance(const TriMesh& m, int source) {
    int s[1] = {source};
    return dijkstra(m, s);
}

std::vector<double> geodesic_distance(const TriMesh& m, std::span<const int> sources) {
    return dijkstra(m, sources);
}

std::vector<double> geodesic_distance_unfolded(const TriMesh& m, std::span<const int> sources) {
    std::vector<double> d = dijkstra(m, sources);
    double scale = m.bbox_scale();
    // Gauss-Seidel sweeps with triangle updates; distances only decrease and
    // are bounded below by the PL geodesic distance, so this settles fast.
    for (int sweep = 0; sweep < 40; ++sweep) {
        double changed = 0;
        for (const auto& f : m.faces) {
            for (int r = 0; r < 3; ++r) {
                int ia = f[r], ib = f[(r + 1) % 3], ic = f[(r + 2) % 3];
                if (!std::isfinite(d[ia]) || !std::isfinite(d[ib])) continue;
                double cand = unfold_update(m.vertices[ia], m.vertices[ib], m.vertices[ic],
                                            d[ia], d[ib]);
                if (cand < d[ic]) {
                    changed = std::max(changed, d[ic] - cand);
                    d[ic] = cand;
                }
            }
        }
        if (changed < 1e-12 * scale) break;
    }
    return d;
}

// ---- extrinsic ball clipping -------------------------------------------------

namespace {

struct LeafSink {
    std::vector<std::array<double, 4>>* leaves;  // sorted vertex distances + area
    Vec p;
    double floor2;

    void subdivide(const Vec& a, const Vec& b, const Vec& c, int depth) {
        double ar = triangle_area(a, b, c);
        if (ar <= 0) return;
        double dmin2 = point_triangle_dist2(p, a, b, c);
        if (ar <= 1e-4 * std::max(dmin2, floor2) || depth >= 26) {
            std::array<double, 4> leaf = {dist(a, p), dist(b, p), dist(c, p), ar};
            std::sort(leaf.begin(), leaf.begin() + 3);
            leaves->push_back(leaf);
            return;
        }
        Vec ab = (a + b) * 0.5, bc = (b + c) * 0.5, ca = (c + a) * 0.5;
        subdivide(a, ab, ca, depth + 1);
        subdivide(ab, b, bc, depth + 1);
        subdivide(ca, bc, c, depth + 1);
        subdivide(ab, bc, ca, depth + 1);
    }
};

// Fraction of a triangle with sorted vertex values s0<=s1<=s2 where the
// linear interpolant is <= 0; nondecreasing as all values shift down.
double sublevel_fraction(double s0, double s1, double s2) {
    if (s2 <= 0) return 1.0;
    if (s0 >= 0) return 0.0;
    if (s1 >= 0) {
        double f = s0 * s0 / ((s1 - s0) * (s2 - s0));
        return std::min(f, 1.0);
    }
    double f = 1.0 - s2 * s2 / ((s2 - s0) * (s2 - s1));
    return std::max(f, 0.0);
}

}  // namespace

BallAreaProfile::BallAreaProfile(const TriMesh& m, const Vec& p) {
    double scale = m.bbox_scale();
    LeafSink sink{&leaves_, p, std::pow(1e-3 * std::max(scale, 1e-30), 2)};
    for (const auto& f : m.faces)
        sink.subdivide(m.vertices[f[0]], m.vertices[f[1]], m.vertices[f[2]], 0);
    // prefix sums over leaves ordered by their outermost vertex let the bulk
    // of a query resolve without touching the crossing band
    std::sort(leaves_.begin(), leaves_.end(),
              [](const auto& a, const auto& b) { return a[2] < b[2]; });
    cum_area_.resize(leaves_.size());
    double acc = 0;
    for (size_t i = 0; i < leaves_.size(); ++i) {
        acc += leaves_[i][3];
        cum_area_[i] = acc;
    }
}

double BallAreaProfile::ball_area(double r) const {
    // leaves fully inside: outermost vertex distance <= r
    size_t lo = 0, hi = leaves_.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (leaves_[mid][2] <= r) lo = mid + 1;
        else hi = mid;
    }
    double total = lo > 0 ? cum_area_[lo - 1] : 0.0;
    // crossing band: linear clip of the distance function
    for (size_t i = lo; i < leaves_.size(); ++i) {
        const auto& L = leaves_[i];
        if (L[0] >= r) continue;
        total += L[3] * sublevel_fraction(L[0] - r, L[1] - r, L[2] - r);
    }
    return total;
}

double ball_area(const TriMesh& m, const Vec& p, double r) {
    return BallAreaProfile(m, p).ball_area(r);
}

// ---- generators ---------------------------------------------------------------

DiskLayout make_disk_layout(int n_boundary, int n_rings) {
    if (n_boundary < 12 || n_rings < 2)
        throw MeshError("disk layout needs n_boundary >= 12 and n_rings >= 2");
    DiskLayout L;
    L.n_boundary = n_boundary;
    L.n_rings = n_rings;
    L.uv.push_back({0.0, 0.0});
    // geometric grading: ring spacing tracks the boundary arc length so the
    // quads stay near-square and cotangent weights nonnegative
    double q = 1.0 + 2.0 * M_PI / n_boundary;
    for (int j = 1; j <= n_rings; ++j) {
        double r = std::pow(q, (double)(j - n_rings));
        for (int i = 0; i < n_boundary; ++i) {
            double th = 2.0 * M_PI * i / n_boundary;
            L.uv.push_back({r * std::cos(th), r * std::sin(th)});
        }
    }
    auto ring = [&](int j, int i) { return 1 + (j - 1) * n_boundary + (i % n_boundary); };
    for (int i = 0; i < n_boundary; ++i) L.faces.push_back({0, ring(1, i), ring(1, i + 1)});
    for (int j = 1; j < n_rings; ++j)
        for (int i = 0; i < n_boundary; ++i) {
            int a = ring(j, i), b = ring(j, i + 1), c = ring(j + 1, i), d = ring(j + 1, i + 1);
            if ((i + j) % 2 == 0) {
                L.faces.push_back({a, c, d});
                L.faces.push_back({a, d, b});
            } else {
                L.faces.push_back({a, c, b});
                L.faces.push_back({b, c, d});
            }
        }
    for (int i = 0; i < n_boundary; ++i) L.boundary.push_back(ring(n_rings, i));
    return L;
}

TriMesh make_flat_disk(double radius, int n_boundary, int n_rings) {
    DiskLayout L = make_disk_layout(n_boundary, n_rings);
    TriMesh m;
    m.dim = 3;
    for (auto [u, v] : L.uv) m.vertices.push_back({radius * u, radius * v, 0.0});
    m.faces = L.faces;
    return m;
}

TriMesh make_hemisphere(double radius, int n_theta, int n_rings) {
    TriMesh m;
    m.dim = 3;
    // rings from the equator up to a polar cap
    for (int j = 0; j < n_rings; ++j) {
        double lat = 0.5 * M_PI * j / n_rings;
        double rho = radius * std::cos(lat), z = radius * std::sin(lat);
        for (int i = 0; i < n_theta; ++i) {
            double th = 2.0 * M_PI * i / n_theta;
            m.vertices.push_back({rho * std::cos(th), rho * std::sin(th), z});
        }
    }
    int pole = (int)m.vertices.size();
    m.vertices.push_back({0, 0, radius});
    auto at = [&](int j, int i) { return j * n_theta + (i % n_theta); };
    for (int j = 0; j + 1 < n_rings; ++j)
        for (int i = 0; i < n_theta; ++i) {
            int a = at(j, i), b = at(j, i + 1), c = at(j + 1, i), d = at(j + 1, i + 1);
            if ((i + j) % 2 == 0) {
                m.faces.push_back({a, b, d});
                m.faces.push_back({a, d, c});
            } else {
                m.faces.push_back({a, b, c});
                m.faces.push_back({b, d, c});
            }
        }
    for (int i = 0; i < n_theta; ++i) m.faces.push_back({at(n_rings - 1, i), at(n_rings - 1, i + 1), pole});
    return m;
}

}  // namespace minsurf::mesh
