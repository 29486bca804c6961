#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "minsurf/expr.hpp"
#include "minsurf/geometry.hpp"
#include "minsurf/mesh.hpp"

namespace minsurf::weierstrass {

struct WeierstrassError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter domain in the z-plane with its grid resolution.
struct DomainSpec {
    enum class Shape { Rectangle, Annulus };
    Shape shape = Shape::Rectangle;
    double x0 = -1, x1 = 1, y0 = -1, y1 = 1;  // rectangle bounds
    double r0 = 0.1, r1 = 1.0;                // annulus radii
    int nu = 64, nv = 64;                     // grid counts (angular x radial for annuli)
    std::vector<expr::SpecialPoint> punctures;

    static DomainSpec rectangle(double x0, double x1, double y0, double y1, int nu, int nv);
    static DomainSpec annulus(double r0, double r1, int nu, int nv);

    bool contains(cplx z) const;
    // Grid node, nudged at least 1e-6 away from every puncture.
    cplx grid_node(int i, int j) const;
    int vertex_index(int i, int j) const;  // into the tessellation vertex list
    int vertex_count() const;
};

// The generator of a minimal immersion: Gauss map g, height differential
// phi3 dz, parameter domain, base point, and the associate angle theta.
struct WeierstrassData {
    expr::ComplexExpr g, phi3;
    DomainSpec domain;
    cplx base_point = 0.0;
    double theta = 0.0;
    std::vector<expr::SpecialPoint> special_points;
};

// Rejects g == 0 (use the flat-disk generator for horizontal planes) and any
// declared non-puncture special point with ord(phi3) < 2|ord(g)|.
void check_admissible(const WeierstrassData& data);

// (phi1, phi2, phi3) * e^{i theta}; phi1 = (g^{-1}-g)phi3/2,
// phi2 = i(g^{-1}+g)phi3/2.  Removable 0/0 points (for instance a zero of g
// cancelled by phi3) are evaluated by a small circle mean.
std::array<cplx, 3> phi(const WeierstrassData& data, cplx z);

// Puncture-avoiding polyline from `from` to `to`: straight segment with
// circular detours around punctures.
std::vector<cplx> build_path(const WeierstrassData& data, cplx from, cplx to);

// F(z) = Re \int phi dz along a constructed path from the base point;
// F(base_point) = 0.
Vec immerse(const WeierstrassData& data, cplx z);
Vec immerse_along(const WeierstrassData& data, std::span<const cplx> path);

double conformal_factor(const WeierstrassData& data, cplx z);

// Gauss curvature, first displayed form: K = -[4|g'| / (|phi3 g| (|g|^{-1}+|g|)^2)]^2.
double gauss_curvature(const WeierstrassData& data, cplx z);
// Same quantity via |dg / (g eta)|; used as a numerical cross-check.
double gauss_curvature_gaussmap_form(const WeierstrassData& data, cplx z);

// Unit normal from the stereographic inverse of g.
Vec unit_normal(const WeierstrassData& data, cplx z);

// Re of the loop integral of (phi1, phi2, phi3) dz; ~0 on simply connected
// domains.  The loop is implicitly closed.
Vec periods(const WeierstrassData& data, std::span<const cplx> loop);

WeierstrassData associate(const WeierstrassData& data, double dtheta);

struct BranchClassification {
    enum class Kind { Immersed, Branch, Inadmissible };
    Kind kind = Kind::Immersed;
    int branch_order = 0;  // k - 2m when kind == Branch
    int m = 0, k = 0;      // |ord g|, ord phi3
    bool at_puncture = false;
};
// With m = |order of g| and k = order of phi3 at p: immersed iff k = 2m,
// branch of order k-2m if k > 2m, otherwise inadmissible (pole of F).
BranchClassification classify_branch(const WeierstrassData& data, const expr::SpecialPoint& p);

// Grid image under immerse with per-vertex lambda, K and normal attributes.
mesh::TriMesh tessellate(const WeierstrassData& data);

// ---- catalog ----------------------------------------------------------------

// g = z, phi3 = 1/z on the annulus e^{-c} < |z| < e^{c}, puncture at 0.
WeierstrassData catenoid_data(double c = 2.0, int nu = 96, int nv = 48);
// g = exp(iz), phi3 = 1 on [-pi,pi] x [-half_height, half_height].
WeierstrassData helicoid_data(double half_height = 1.0, int nu = 96, int nv = 32);
// g = z, phi3 = z on the square [-h,h]^2.
WeierstrassData enneper_data(double h = 1.0, int n = 64);
// Flat unit disk (the horizontal-plane case excluded from the representation).
mesh::TriMesh plane_disk(double radius = 1.0, int n_boundary = 64, int n_rings = 16);
// (Re z, Im z, Re z^n, Im z^n) over a disk grid of the given radius, in R^4.
mesh::TriMesh holomorphic_curve(int n, double radius = 4.0, int n_boundary = 128,
                                int n_rings = 64);

// ---- diagnostics ---------------------------------------------------------------

struct CatenoidFit {
    double axis_x = 0, axis_y = 0, waist_z = 0;
    double max_residual = 0;  // max |rho - cosh(z - c)| over vertices
};
// Least-squares fit of (x-a)^2 + (y-b)^2 = cosh^2(z-c) to mesh vertices.
CatenoidFit fit_catenoid_axis(const mesh::TriMesh& m);

struct IsometryCertificate {
    double max_edge_deviation = 0;   // relative, pullback-metric edge lengths
    double max_normal_angle = 0;     // radians between per-vertex normals
};
// Compares two tessellations of associate surfaces on the same grid.
IsometryCertificate compare_associate(const mesh::TriMesh& a, const mesh::TriMesh& b);

// ---- data files ------------------------------------------------------------------

WeierstrassData load_data_json(const std::string& path);
void save_data_json(const WeierstrassData& data, const std::string& path);

}  // namespace minsurf::weierstrass
