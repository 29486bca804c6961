#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "minsurf/geometry.hpp"

namespace minsurf::mesh {

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Indexed triangle mesh in R^3 or R^4 with optional per-vertex attributes.
struct TriMesh {
    int dim = 3;
    std::vector<Vec> vertices;
    std::vector<std::array<int, 3>> faces;

    // optional attributes, either empty or vertex-sized
    std::vector<double> lambda;
    std::vector<double> gauss_k;
    std::vector<Vec> normals;

    size_t vertex_count() const { return vertices.size(); }
    size_t face_count() const { return faces.size(); }
    double bbox_scale() const;  // diagonal of the bounding box
};

// Structural checks: valid indices, consistent orientation, no degenerate
// faces.  Throws MeshError on violation.
void validate(const TriMesh& m);

size_t edge_count(const TriMesh& m);
int euler_characteristic(const TriMesh& m);

// Directed edges that belong to exactly one face, in face orientation.
std::vector<std::array<int, 2>> boundary_edges(const TriMesh& m);
// Boundary edges chained into ordered vertex loops.
std::vector<std::vector<int>> boundary_loops(const TriMesh& m);
std::vector<bool> boundary_vertex_mask(const TriMesh& m);

double area(const TriMesh& m);

struct DefectData {
    std::vector<double> defect;       // 2pi - angle sum (interior), pi - angle sum (boundary)
    std::vector<double> vertex_area;  // lumped: one third of incident face areas
    std::vector<bool> on_boundary;
    double interior_defect_sum = 0;
    double boundary_turning_sum = 0;
    double total_curvature = 0;  // -sum of interior defects
};
DefectData angle_defect_curvature(const TriMesh& m);

// Shortest path along mesh edges (Dijkstra).  Unreachable vertices get +inf.
std::vector<double> geodesic_distance(const TriMesh& m, int source);
std::vector<double> geodesic_distance(const TriMesh& m, std::span<const int> sources);

// Dijkstra refined by triangle virtual-source updates; tracks true geodesic
// distance much more closely on grid-like meshes (no lattice direction bias).
std::vector<double> geodesic_distance_unfolded(const TriMesh& m, std::span<const int> sources);

// Area of the mesh inside the closed extrinsic ball B(p,r).  Triangles are
// recursively quartered until each leaf is small against its own distance to
// p; crossing leaves contribute the linear-clip fraction of the distance
// function, which keeps the result exactly nondecreasing in r for a fixed
// (mesh, p) and removes the curvature bias of binary counting.
class BallAreaProfile {
public:
    BallAreaProfile(const TriMesh& m, const Vec& p);
    double ball_area(double r) const;
    size_t leaf_count() const { return leaves_.size(); }

private:
    std::vector<std::array<double, 4>> leaves_;  // sorted vertex distances + area
    std::vector<double> cum_area_;               // prefix areas by outermost distance
};

double ball_area(const TriMesh& m, const Vec& p, double r);

struct Polyline {
    std::vector<Vec> points;
    bool closed = true;
};

// Sum of exterior (turning) angles of a closed polyline.
double polyline_total_curvature(const Polyline& curve);
// True if no two non-adjacent segments come within tol of each other.
bool polyline_is_simple(const Polyline& curve, double tol);

// Max over interior vertices of the signed distance outside the convex hull
// of the boundary vertices (<= 0 means contained).  Coplanar boundaries fall
// back to a 2-d hull in the fitted plane.
double convex_hull_violation(const TriMesh& m);

struct SelfIntersection {
    bool found = false;
    int face_a = -1, face_b = -1;
};
// First (by index order) pair of intersecting non-adjacent triangles.
SelfIntersection intersects_self(const TriMesh& m);
// Same, restricted to faces with no boundary vertex.
SelfIntersection intersects_self_interior(const TriMesh& m);

// ---- interchange formats ---------------------------------------------------

void save_obj(const TriMesh& m, const std::string& path);
TriMesh load_obj(const std::string& path);
void save_ply(const TriMesh& m, const std::string& path);
TriMesh load_ply(const std::string& path);
// Dispatch on extension (.obj / .ply).
void export_mesh(const TriMesh& m, const std::string& path);
TriMesh import_mesh(const std::string& path);

void save_polyline(const Polyline& curve, const std::string& path);
Polyline load_polyline(const std::string& path);

// ---- generators -------------------------------------------------------------

// Concentric-ring disk layout shared by the flat-disk generator and the
// Plateau disk mesh: center vertex, then n_rings rings of n_boundary
// vertices at geometrically graded radii (keeps cells near-square so all
// cotangent weights stay nonnegative).
struct DiskLayout {
    int n_boundary = 0, n_rings = 0;
    std::vector<std::array<double, 2>> uv;  // unit-disk coordinates
    std::vector<std::array<int, 3>> faces;
    std::vector<int> boundary;  // outer ring indices in cyclic order
};
DiskLayout make_disk_layout(int n_boundary, int n_rings);

TriMesh make_flat_disk(double radius, int n_boundary, int n_rings);
TriMesh make_hemisphere(double radius, int n_theta, int n_rings);

}  // namespace minsurf::mesh
