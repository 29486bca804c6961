#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "minsurf/mesh.hpp"

namespace minsurf::mesh {

// ---- polylines -----------------------------------------------------------------

double polyline_total_curvature(const Polyline& curve) {
    const auto& p = curve.points;
    size_t n = p.size();
    if (n < 3) throw MeshError("total curvature needs a closed polyline with >= 3 points");
    std::vector<Vec> dirs;
    for (size_t i = 0; i < n; ++i) {
        Vec d = p[(i + 1) % n] - p[i];
        if (norm(d) > 0) dirs.push_back(normalized(d));
    }
    double total = 0;
    for (size_t i = 0; i < dirs.size(); ++i) {
        double c = dot(dirs[i], dirs[(i + 1) % dirs.size()]);
        c = std::fmin(1.0, std::fmax(-1.0, c));
        total += std::acos(c);
    }
    return total;
}

namespace {

double segment_segment_dist2(const Vec& p1, const Vec& q1, const Vec& p2, const Vec& q2) {
    Vec d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
    double a = norm2(d1), e = norm2(d2), f = dot(d2, r);
    double s, t;
    if (a <= 0 && e <= 0) return norm2(r);
    if (a <= 0) {
        s = 0;
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        double c = dot(d1, r);
        if (e <= 0) {
            t = 0;
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            double b = dot(d1, d2), denom = a * e - b * b;
            s = denom != 0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
            t = (b * s + f) / e;
            if (t < 0) {
                t = 0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1) {
                t = 1;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return norm2((p1 + d1 * s) - (p2 + d2 * t));
}

}  // namespace

bool polyline_is_simple(const Polyline& curve, double tol) {
    const auto& p = curve.points;
    size_t n = p.size();
    size_t nseg = curve.closed ? n : n - 1;
    for (size_t i = 0; i < nseg; ++i)
        for (size_t j = i + 2; j < nseg; ++j) {
            if (i == 0 && curve.closed && j == nseg - 1) continue;  // wrap-adjacent
            double d2 = segment_segment_dist2(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n]);
            if (d2 < tol * tol) return false;
        }
    return true;
}

// ---- convex hull of the boundary -------------------------------------------------

namespace {

struct HullFace {
    int a, b, c;
    Vec n;  // outward unit normal
    double off;
};

// 2-d convex hull (monotone chain), indices into pts
std::vector<int> hull2d(const std::vector<std::array<double, 2>>& pts) {
    std::vector<int> idx(pts.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = (int)i;
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return pts[i] < pts[j]; });
    auto cw = [&](int o, int a, int b) {
        return (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) -
               (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0]);
    };
    std::vector<int> h(2 * idx.size());
    size_t k = 0;
    for (size_t i = 0; i < idx.size(); ++i) {
        while (k >= 2 && cw(h[k - 2], h[k - 1], idx[i]) <= 0) --k;
        h[k++] = idx[i];
    }
    size_t lower = k + 1;
    for (size_t i = idx.size(); i-- > 1;) {
        while (k >= lower && cw(h[k - 2], h[k - 1], idx[i - 1]) <= 0) --k;
        h[k++] = idx[i - 1];
    }
    h.resize(k - 1);
    return h;
}

double planar_hull_violation(const std::vector<Vec>& bpts, const std::vector<Vec>& queries,
                             const Vec& origin, const Vec& e1, const Vec& e2, const Vec& nrm,
                             double tol) {
    std::vector<std::array<double, 2>> uv(bpts.size());
    for (size_t i = 0; i < bpts.size(); ++i)
        uv[i] = {dot(bpts[i] - origin, e1), dot(bpts[i] - origin, e2)};
    auto poly = hull2d(uv);
    double worst = -std::numeric_limits<double>::infinity();
    for (const Vec& q : queries) {
        double dp = std::fabs(dot(q - origin, nrm));
        double u = dot(q - origin, e1), v = dot(q - origin, e2);
        // signed in-plane distance to the hull polygon: negative inside
        double inplane = -std::numeric_limits<double>::infinity();
        bool inside = true;
        double min_edge = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < poly.size(); ++i) {
            auto& A = uv[poly[i]];
            auto& B = uv[poly[(i + 1) % poly.size()]];
            double ex = B[0] - A[0], ey = B[1] - A[1];
            double len = std::hypot(ex, ey);
            if (len == 0) continue;
            double sd = ((u - A[0]) * ey - (v - A[1]) * ex) / len;  // >0 outside (CCW hull)
            inplane = std::max(inplane, sd);
            if (sd > 0) inside = false;
            // distance to the segment
            double t = std::clamp(((u - A[0]) * ex + (v - A[1]) * ey) / (len * len), 0.0, 1.0);
            double dx = u - (A[0] + t * ex), dy = v - (A[1] + t * ey);
            min_edge = std::min(min_edge, std::hypot(dx, dy));
        }
        double viol;
        if (inside)
            viol = dp > tol ? dp : -min_edge;
        else
            viol = std::sqrt(dp * dp + min_edge * min_edge);
        worst = std::max(worst, viol);
    }
    return worst;
}

}  // namespace

double convex_hull_violation(const TriMesh& m) {
    if (m.dim != 3) throw MeshError("convex_hull_violation expects a mesh in R^3");
    auto mask = boundary_vertex_mask(m);
    std::vector<Vec> bpts, queries;
    for (size_t i = 0; i < m.vertices.size(); ++i)
        (mask[i] ? bpts : queries).push_back(m.vertices[i]);
    if (bpts.empty()) throw MeshError("mesh has no boundary");
    if (queries.empty()) return 0.0;
    double scale = m.bbox_scale();

    // spanning triple of the boundary point set
    Vec p0 = bpts[0];
    int i1 = 0;
    for (size_t i = 0; i < bpts.size(); ++i)
        if (dist(bpts[i], p0) > dist(bpts[i1], p0)) i1 = (int)i;
    Vec p1 = bpts[i1];
    int i2 = 0;
    double best = -1;
    for (size_t i = 0; i < bpts.size(); ++i) {
        double d2 = point_segment_dist2(bpts[i], p0, p1);
        if (d2 > best) {
            best = d2;
            i2 = (int)i;
        }
    }
    Vec p2 = bpts[i2];
    Vec nrm = cross(p1 - p0, p2 - p0);
    if (norm(nrm) <= 1e-12 * scale * scale) throw MeshError("degenerate (collinear) boundary");
    nrm = normalized(nrm);

    double thickness = 0;
    for (const Vec& q : bpts) thickness = std::max(thickness, std::fabs(dot(q - p0, nrm)));
    double tol = 1e-9 * std::max(scale, 1e-30);
    if (thickness <= tol) {
        Vec e1 = normalized(p1 - p0);
        Vec e2 = normalized(cross(nrm, e1));
        return planar_hull_violation(bpts, queries, p0, e1, e2, nrm, tol);
    }

    // incremental 3-d hull
    int i3 = 0;
    best = -1;
    for (size_t i = 0; i < bpts.size(); ++i) {
        double d = std::fabs(dot(bpts[i] - p0, nrm));
        if (d > best) {
            best = d;
            i3 = (int)i;
        }
    }
    Vec inner = (p0 + p1 + p2 + bpts[i3]) * 0.25;
    std::vector<HullFace> faces;
    auto add_face = [&](const Vec& a, const Vec& b, const Vec& c, int ia, int ib, int ic) {
        Vec n = cross(b - a, c - a);
        if (norm(n) == 0) return;
        n = normalized(n);
        if (dot(n, a - inner) < 0) {
            n = n * -1.0;
            faces.push_back({ia, ic, ib, n, dot(n, a)});
        } else {
            faces.push_back({ia, ib, ic, n, dot(n, a)});
        }
    };
    add_face(p0, p1, p2, 0, i1, i2);
    add_face(p0, p1, bpts[i3], 0, i1, i3);
    add_face(p0, p2, bpts[i3], 0, i2, i3);
    add_face(p1, p2, bpts[i3], i1, i2, i3);

    for (size_t ip = 0; ip < bpts.size(); ++ip) {
        const Vec& q = bpts[ip];
        std::vector<char> visible(faces.size(), 0);
        bool any = false;
        for (size_t f = 0; f < faces.size(); ++f)
            if (dot(faces[f].n, q) - faces[f].off > tol) {
                visible[f] = 1;
                any = true;
            }
        if (!any) continue;
        // horizon: directed edges of visible faces whose twin is not visible
        std::map<std::pair<int, int>, int> edge_owner;
        for (size_t f = 0; f < faces.size(); ++f) {
            if (!visible[f]) continue;
            int vv[3] = {faces[f].a, faces[f].b, faces[f].c};
            for (int e = 0; e < 3; ++e) edge_owner[{vv[e], vv[(e + 1) % 3]}] = (int)f;
        }
        std::vector<std::pair<int, int>> horizon;
        for (const auto& [edge, f] : edge_owner) {
            auto twin = edge_owner.find({edge.second, edge.first});
            if (twin == edge_owner.end()) horizon.push_back(edge);
        }
        std::vector<HullFace> kept;
        for (size_t f = 0; f < faces.size(); ++f)
            if (!visible[f]) kept.push_back(faces[f]);
        faces.swap(kept);
        for (auto [a, b] : horizon) add_face(bpts[a], bpts[b], q, a, b, (int)ip);
    }

    double worst = -std::numeric_limits<double>::infinity();
    for (const Vec& q : queries) {
        double sd = -std::numeric_limits<double>::infinity();
        for (const auto& f : faces) sd = std::max(sd, dot(f.n, q) - f.off);
        worst = std::max(worst, sd);
    }
    return worst;
}

// ---- triangle-triangle intersection -----------------------------------------------

namespace {

struct Interval {
    double lo, hi;
};

// 2-d segment overlap helpers for the coplanar case
bool seg_seg_2d(const double a[2], const double b[2], const double c[2], const double d[2]) {
    auto orient = [](const double p[2], const double q[2], const double r[2]) {
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
    };
    double o1 = orient(a, b, c), o2 = orient(a, b, d);
    double o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0)))
        return true;
    return false;
}

bool point_in_tri_2d(const double p[2], const double a[2], const double b[2], const double c[2]) {
    auto sgn = [](const double p1[2], const double p2[2], const double p3[2]) {
        return (p1[0] - p3[0]) * (p2[1] - p3[1]) - (p2[0] - p3[0]) * (p1[1] - p3[1]);
    };
    double d1 = sgn(p, a, b), d2 = sgn(p, b, c), d3 = sgn(p, c, a);
    bool neg = d1 < 0 || d2 < 0 || d3 < 0, pos = d1 > 0 || d2 > 0 || d3 > 0;
    return !(neg && pos);
}

bool coplanar_tri_tri(const Vec* T1, const Vec* T2, const Vec& n) {
    int axis = 0;
    double an[3] = {std::fabs(n.x), std::fabs(n.y), std::fabs(n.z)};
    if (an[1] > an[0]) axis = 1;
    if (an[2] > an[axis]) axis = 2;
    int u = (axis + 1) % 3, v = (axis + 2) % 3;
    double P1[3][2], P2[3][2];
    for (int i = 0; i < 3; ++i) {
        P1[i][0] = T1[i][u];
        P1[i][1] = T1[i][v];
        P2[i][0] = T2[i][u];
        P2[i][1] = T2[i][v];
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (seg_seg_2d(P1[i], P1[(i + 1) % 3], P2[j], P2[(j + 1) % 3])) return true;
    if (point_in_tri_2d(P1[0], P2[0], P2[1], P2[2])) return true;
    if (point_in_tri_2d(P2[0], P1[0], P1[1], P1[2])) return true;
    return false;
}

// Moller-style interval test with snapping of near-zero plane distances.
bool tri_tri_intersect(const Vec* T1, const Vec* T2, double eps) {
    Vec n2 = cross(T2[1] - T2[0], T2[2] - T2[0]);
    double d1[3];
    for (int i = 0; i < 3; ++i) {
        d1[i] = dot(n2, T1[i] - T2[0]);
        if (std::fabs(d1[i]) < eps * norm(n2)) d1[i] = 0;
    }
    if ((d1[0] > 0 && d1[1] > 0 && d1[2] > 0) || (d1[0] < 0 && d1[1] < 0 && d1[2] < 0))
        return false;

    Vec n1 = cross(T1[1] - T1[0], T1[2] - T1[0]);
    double d2[3];
    for (int i = 0; i < 3; ++i) {
        d2[i] = dot(n1, T2[i] - T1[0]);
        if (std::fabs(d2[i]) < eps * norm(n1)) d2[i] = 0;
    }
    if ((d2[0] > 0 && d2[1] > 0 && d2[2] > 0) || (d2[0] < 0 && d2[1] < 0 && d2[2] < 0))
        return false;

    if (d1[0] == 0 && d1[1] == 0 && d1[2] == 0) return coplanar_tri_tri(T1, T2, n1);

    Vec dir = cross(n1, n2);
    int axis = 0;
    double ad[3] = {std::fabs(dir.x), std::fabs(dir.y), std::fabs(dir.z)};
    if (ad[1] > ad[0]) axis = 1;
    if (ad[2] > ad[axis]) axis = 2;

    auto interval = [&](const Vec* T, const double* d) -> Interval {
        double proj[3] = {T[0][axis], T[1][axis], T[2][axis]};
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        bool found = false;
        for (int i = 0; i < 3; ++i) {
            int j = (i + 1) % 3;
            if (d[i] == 0) {
                lo = std::min(lo, proj[i]);
                hi = std::max(hi, proj[i]);
                found = true;
            }
            if ((d[i] > 0 && d[j] < 0) || (d[i] < 0 && d[j] > 0)) {
                double t = d[i] / (d[i] - d[j]);
                double x = proj[i] + t * (proj[j] - proj[i]);
                lo = std::min(lo, x);
                hi = std::max(hi, x);
                found = true;
            }
        }
        if (!found) return {1, -1};
        return {lo, hi};
    };
    Interval i1 = interval(T1, d1), i2 = interval(T2, d2);
    return i1.lo <= i1.hi && i2.lo <= i2.hi && i1.lo <= i2.hi && i2.lo <= i1.hi;
}

SelfIntersection intersect_scan(const TriMesh& m, const std::vector<int>& face_ids) {
    SelfIntersection result;
    if (face_ids.size() < 2) return result;
    double scale = m.bbox_scale();
    double eps = 1e-12 * std::max(scale, 1e-30);

    // uniform grid over face bounding boxes
    struct Box {
        Vec lo, hi;
    };
    std::vector<Box> boxes(face_ids.size());
    Vec glo = m.vertices[m.faces[face_ids[0]][0]], ghi = glo;
    double avg_ext = 0;
    for (size_t k = 0; k < face_ids.size(); ++k) {
        const auto& f = m.faces[face_ids[k]];
        Box b{m.vertices[f[0]], m.vertices[f[0]]};
        for (int e = 1; e < 3; ++e)
            for (int c = 0; c < 3; ++c) {
                b.lo[c] = std::min(b.lo[c], m.vertices[f[e]][c]);
                b.hi[c] = std::max(b.hi[c], m.vertices[f[e]][c]);
            }
        boxes[k] = b;
        for (int c = 0; c < 3; ++c) {
            glo[c] = std::min(glo[c], b.lo[c]);
            ghi[c] = std::max(ghi[c], b.hi[c]);
            avg_ext += b.hi[c] - b.lo[c];
        }
    }
    avg_ext = std::max(avg_ext / (3.0 * face_ids.size()), 1e-12 * scale);
    double cell = 2.0 * avg_ext;
    auto cell_of = [&](const Vec& p, int c) { return (long)std::floor((p[c] - glo[c]) / cell); };

    std::map<std::array<long, 3>, std::vector<int>> grid;
    for (size_t k = 0; k < face_ids.size(); ++k) {
        for (long ix = cell_of(boxes[k].lo, 0); ix <= cell_of(boxes[k].hi, 0); ++ix)
            for (long iy = cell_of(boxes[k].lo, 1); iy <= cell_of(boxes[k].hi, 1); ++iy)
                for (long iz = cell_of(boxes[k].lo, 2); iz <= cell_of(boxes[k].hi, 2); ++iz)
                    grid[{ix, iy, iz}].push_back((int)k);
    }

    auto adjacent = [&](int fa, int fb) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (m.faces[fa][i] == m.faces[fb][j]) return true;
        return false;
    };

    std::vector<std::vector<int>> cand(face_ids.size());
    for (const auto& [key, list] : grid)
        for (size_t i = 0; i < list.size(); ++i)
            for (size_t j = i + 1; j < list.size(); ++j)
                cand[std::min(list[i], list[j])].push_back(std::max(list[i], list[j]));

    for (size_t i = 0; i < cand.size(); ++i) {
        auto& js = cand[i];
        std::sort(js.begin(), js.end());
        js.erase(std::unique(js.begin(), js.end()), js.end());
        for (int j : js) {
            const Box &ba = boxes[i], &bb = boxes[j];
            bool overlap = true;
            for (int c = 0; c < 3; ++c)
                if (ba.hi[c] < bb.lo[c] - eps || bb.hi[c] < ba.lo[c] - eps) overlap = false;
            if (!overlap) continue;
            int fa = face_ids[i], fb = face_ids[j];
            if (adjacent(fa, fb)) continue;
            Vec T1[3] = {m.vertices[m.faces[fa][0]], m.vertices[m.faces[fa][1]],
                         m.vertices[m.faces[fa][2]]};
            Vec T2[3] = {m.vertices[m.faces[fb][0]], m.vertices[m.faces[fb][1]],
                         m.vertices[m.faces[fb][2]]};
            if (tri_tri_intersect(T1, T2, eps)) {
                result.found = true;
                result.face_a = fa;
                result.face_b = fb;
                return result;
            }
        }
    }
    return result;
}

}  // namespace

SelfIntersection intersects_self(const TriMesh& m) {
    if (m.dim != 3) throw MeshError("intersects_self expects a mesh in R^3");
    std::vector<int> all(m.faces.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = (int)i;
    return intersect_scan(m, all);
}

SelfIntersection intersects_self_interior(const TriMesh& m) {
    if (m.dim != 3) throw MeshError("intersects_self expects a mesh in R^3");
    auto mask = boundary_vertex_mask(m);
    std::vector<int> ids;
    for (size_t f = 0; f < m.faces.size(); ++f) {
        const auto& fc = m.faces[f];
        if (!mask[fc[0]] && !mask[fc[1]] && !mask[fc[2]]) ids.push_back((int)f);
    }
    return intersect_scan(m, ids);
}

}  // namespace minsurf::mesh
