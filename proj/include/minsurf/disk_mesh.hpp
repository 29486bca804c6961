#pragma once

#include <array>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "minsurf/geometry.hpp"
#include "minsurf/mesh.hpp"

namespace minsurf::plateau {

struct PlateauError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Triangulated closed unit disk with cotangent weights of the flat metric
// and a prefactored interior Laplace solver.
class DiskMesh {
public:
    DiskMesh(int n_boundary, int n_rings);

    int n_boundary() const { return layout_.n_boundary; }
    int n_rings() const { return layout_.n_rings; }
    size_t vertex_count() const { return layout_.uv.size(); }
    const std::vector<std::array<double, 2>>& uv() const { return layout_.uv; }
    const std::vector<std::array<int, 3>>& faces() const { return layout_.faces; }
    const std::vector<int>& boundary() const { return layout_.boundary; }
    const std::vector<int>& interior() const { return interior_; }
    bool is_boundary(int v) const { return interior_pos_[v] < 0; }

    struct Edge {
        int a, b;
        double w;
    };
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::vector<std::pair<int, double>>>& adjacency() const { return adj_; }
    double flat_face_area(size_t f) const { return flat_area_[f]; }
    double total_flat_area() const { return total_flat_area_; }
    const std::vector<double>& ring_radii() const { return radii_; }

    // Interior values solving the weighted Laplace system for the given
    // boundary values; returns full vertex positions.  Relative residual of
    // the solve is checked against 1e-10.
    std::vector<Vec> harmonic_extend(std::span<const Vec> boundary_values) const;

    // (L F)_i = sum_j w_ij (F_i - F_j) for every vertex.
    std::vector<Vec> laplacian(std::span<const Vec> F) const;

private:
    mesh::DiskLayout layout_;
    std::vector<int> interior_;
    std::vector<int> interior_pos_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<int, double>>> adj_;
    std::vector<double> flat_area_;
    double total_flat_area_ = 0;
    std::vector<double> radii_;

    // banded Cholesky factor of the interior-interior block
    int bw_ = 0;
    std::vector<double> band_;  // (bw+1) x n_interior, band_[d*n + i] = L[i][i-d]
    void factor();
    std::vector<double> solve_interior(std::vector<double> rhs) const;
};

DiskMesh build_disk(int n_boundary, int n_rings);

// Discrete Dirichlet energy E = 1/2 sum_edges w_ij |F_i - F_j|^2.
double energy(const DiskMesh& disk, std::span<const Vec> F);
// Mapping area A = sum_faces J(DF) * flat area, J = sqrt(|Fx|^2|Fy|^2 - (Fx.Fy)^2).
double map_area(const DiskMesh& disk, std::span<const Vec> F);
// Per-face (|Fx|^2 - |Fy|^2, 2 Fx.Fy) in the flat frame.
std::vector<std::array<double, 2>> conformality_residual(const DiskMesh& disk,
                                                         std::span<const Vec> F);

// Barycentric interpolation of F at a point of the parameter disk.
Vec interpolate(const DiskMesh& disk, std::span<const Vec> F, double u, double v);

}  // namespace minsurf::plateau
