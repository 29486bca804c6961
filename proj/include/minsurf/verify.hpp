#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "minsurf/geometry.hpp"
#include "minsurf/mesh.hpp"

namespace minsurf::verify {

struct VerifyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Verdict { pass, fail, informative };

struct VerificationReport {
    std::string check;
    double lhs = 0, rhs = 0;
    double discrepancy = 0;
    double tolerance = 0;
    Verdict verdict = Verdict::informative;
    std::string details;
    std::map<std::string, double> values;  // extra named figures
};

struct DensityProfile {
    Vec center;
    std::vector<double> radii;
    std::vector<double> theta;
    double monotone_violation = 0;  // max backward step between consecutive radii
    double boundary_distance = 0;   // extrinsic dist(p, boundary)
    bool all_within_boundary = true;
};

// d/dt area under p -> p + tX(p) (central difference at step h_scale times
// the bounding-box size) against the integrated tangential divergence of X;
// the field is given by three expressions of (x,y,z).
VerificationReport first_variation_check(const mesh::TriMesh& m,
                                         const std::array<std::string, 3>& field,
                                         double h_scale = 1e-5);

// 2 area(M) against the boundary integral of x . conormal.
VerificationReport divergence_identity_check(const mesh::TriMesh& m);
// For non-minimal meshes: the mismatch of the identity against the x . H term.
VerificationReport divergence_correction_check(const mesh::TriMesh& m);

DensityProfile density_profile(const mesh::TriMesh& m, const Vec& p,
                               std::span<const double> radii);
VerificationReport density_report(const DensityProfile& profile);

// Ruled strip mesh from each boundary segment out to |x-p| = r_max.
mesh::TriMesh exterior_cone(const mesh::Polyline& gamma, const Vec& p, double r_max);
mesh::TriMesh exterior_cone_over_boundary(const mesh::TriMesh& m, const Vec& p, double r_max);

DensityProfile extended_density_profile(const mesh::TriMesh& m, const Vec& p,
                                        std::span<const double> radii);
VerificationReport extended_density_report(const DensityProfile& profile);

// 2 pi max_p dist(p, boundary) <= boundary length (the stay-close bound).
VerificationReport boundary_distance_check(const mesh::TriMesh& m);

// Boundary total curvature vs cone density about p, plus the embeddedness
// conclusion when the total curvature sits under 4 pi.
VerificationReport eww_diagnostic(const mesh::TriMesh& m, const Vec& p);

VerificationReport isoperimetric_check(const mesh::TriMesh& m);

// k smallest eigenvalues of the Jacobi form on interior vertices against the
// lumped mass, with |A|^2 = -2K (stored K when present, else angle defects).
// Single-vector Lanczos: an eigenvalue of multiplicity m appears once.
std::vector<double> jacobi_spectrum(const mesh::TriMesh& m, int k);
VerificationReport jacobi_report(const mesh::TriMesh& m, int k);

// Pogorelov's test function u = (R-r)/R on the intrinsic ball about a vertex.
VerificationReport pogorelov_check(const mesh::TriMesh& m, int p_vertex, double R);

VerificationReport intrinsic_density_check(const mesh::TriMesh& m, int p_vertex);

double curvature_estimate_stat(const mesh::TriMesh& m);
VerificationReport curvature_stat_report(const mesh::TriMesh& m);

// Per-vertex mean curvature vector from the cotangent Laplacian of the
// position (interior vertices; boundary entries are zero).
std::vector<Vec> mean_curvature(const mesh::TriMesh& m);

std::string reports_to_json(std::span<const VerificationReport> reports);
std::string reports_to_table(std::span<const VerificationReport> reports);

}  // namespace minsurf::verify
