#include "minsurf/disk_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace minsurf::plateau {

namespace {

double cot(const std::array<double, 2>& at, const std::array<double, 2>& p,
           const std::array<double, 2>& q) {
    double ux = p[0] - at[0], uy = p[1] - at[1];
    double vx = q[0] - at[0], vy = q[1] - at[1];
    double cross = ux * vy - uy * vx;
    double d = ux * vx + uy * vy;
    return d / std::fabs(cross);
}

}  // namespace

DiskMesh::DiskMesh(int n_boundary, int n_rings) {
    layout_ = mesh::make_disk_layout(n_boundary, n_rings);
    size_t n = layout_.uv.size();

    interior_pos_.assign(n, 0);
    for (int b : layout_.boundary) interior_pos_[b] = -1;
    for (size_t v = 0; v < n; ++v) {
        if (interior_pos_[v] >= 0) {
            interior_pos_[v] = (int)interior_.size();
            interior_.push_back((int)v);
        }
    }

    double q = 1.0 + 2.0 * M_PI / n_boundary;
    for (int j = 1; j <= n_rings; ++j) radii_.push_back(std::pow(q, (double)(j - n_rings)));

    // cotangent weights of the flat disk metric
    std::map<std::pair<int, int>, double> w;
    flat_area_.reserve(layout_.faces.size());
    for (const auto& f : layout_.faces) {
        const auto &A = layout_.uv[f[0]], &B = layout_.uv[f[1]], &C = layout_.uv[f[2]];
        double area2 = (B[0] - A[0]) * (C[1] - A[1]) - (B[1] - A[1]) * (C[0] - A[0]);
        flat_area_.push_back(0.5 * std::fabs(area2));
        total_flat_area_ += flat_area_.back();
        w[std::minmax(f[1], f[2])] += 0.5 * cot(A, B, C);
        w[std::minmax(f[0], f[2])] += 0.5 * cot(B, C, A);
        w[std::minmax(f[0], f[1])] += 0.5 * cot(C, A, B);
    }
    adj_.assign(n, {});
    for (auto [key, wij] : w) {
        // right angles give cotangents at roundoff scale; the graded rings
        // guarantee no genuinely negative weights
        if (wij < 0) {
            if (wij < -1e-10) throw PlateauError("negative cotangent weight in the disk mesh");
            wij = 0;
        }
        edges_.push_back({key.first, key.second, wij});
        adj_[key.first].push_back({key.second, wij});
        adj_[key.second].push_back({key.first, wij});
    }
    factor();
}

void DiskMesh::factor() {
    int n = (int)interior_.size();
    bw_ = 0;
    for (const Edge& e : edges_) {
        int pa = interior_pos_[e.a], pb = interior_pos_[e.b];
        if (pa >= 0 && pb >= 0) bw_ = std::max(bw_, std::abs(pa - pb));
    }
    band_.assign((size_t)(bw_ + 1) * n, 0.0);
    auto at = [&](int i, int j) -> double& { return band_[(size_t)(i - j) * n + i]; };

    // assemble the interior-interior Laplacian in band storage
    for (size_t v = 0; v < vertex_count(); ++v) {
        int pv = interior_pos_[v];
        if (pv < 0) continue;
        double diag = 0;
        for (auto [u, wij] : adj_[v]) {
            diag += wij;
            int pu = interior_pos_[u];
            if (pu >= 0 && pu < pv) at(pv, pu) = -wij;
        }
        at(pv, pv) = diag;
    }

    // in-place banded Cholesky
    for (int i = 0; i < n; ++i) {
        for (int j = std::max(0, i - bw_); j <= i; ++j) {
            double s = at(i, j);
            for (int k = std::max({0, i - bw_, j - bw_}); k < j; ++k) s -= at(i, k) * at(j, k);
            if (i == j) {
                if (s <= 0) throw PlateauError("interior Laplacian is not positive definite");
                at(i, i) = std::sqrt(s);
            } else {
                at(i, j) = s / at(j, j);
            }
        }
    }
}

std::vector<double> DiskMesh::solve_interior(std::vector<double> rhs) const {
    int n = (int)interior_.size();
    auto at = [&](int i, int j) -> double { return band_[(size_t)(i - j) * n + i]; };
    for (int i = 0; i < n; ++i) {
        double s = rhs[i];
        for (int j = std::max(0, i - bw_); j < i; ++j) s -= at(i, j) * rhs[j];
        rhs[i] = s / at(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = rhs[i];
        for (int j = i + 1; j <= std::min(n - 1, i + bw_); ++j) s -= at(j, i) * rhs[j];
        rhs[i] = s / at(i, i);
    }
    return rhs;
}

std::vector<Vec> DiskMesh::harmonic_extend(std::span<const Vec> boundary_values) const {
    if (boundary_values.size() != layout_.boundary.size())
        throw PlateauError("boundary value count does not match the boundary vertex count");
    size_t n = vertex_count();
    std::vector<Vec> F(n);
    for (size_t k = 0; k < layout_.boundary.size(); ++k) F[layout_.boundary[k]] = boundary_values[k];

    int ni = (int)interior_.size();
    for (int c = 0; c < 4; ++c) {
        std::vector<double> rhs(ni, 0.0);
        bool any = false;
        for (int p = 0; p < ni; ++p) {
            int v = interior_[p];
            double s = 0;
            for (auto [u, wij] : adj_[v])
                if (interior_pos_[u] < 0) s += wij * F[u][c];
            rhs[p] = s;
            if (s != 0) any = true;
        }
        if (!any && c == 3) continue;  // R^3 data: skip the w coordinate
        auto sol = solve_interior(rhs);
        for (int p = 0; p < ni; ++p) F[interior_[p]][c] = sol[p];
    }

    // residual check: interior rows of L F must vanish
    double rnorm = 0, bnorm = 0;
    auto LF = laplacian(F);
    for (int v : interior_) rnorm += norm2(LF[v]);
    for (const Vec& bv : boundary_values) bnorm += norm2(bv);
    if (bnorm > 0 && std::sqrt(rnorm) > 1e-10 * std::sqrt(bnorm))
        throw PlateauError("harmonic solve residual exceeded 1e-10 relative");
    return F;
}

std::vector<Vec> DiskMesh::laplacian(std::span<const Vec> F) const {
    std::vector<Vec> out(vertex_count());
    for (const Edge& e : edges_) {
        Vec d = (F[e.a] - F[e.b]) * e.w;
        out[e.a] += d;
        out[e.b] -= d;
    }
    return out;
}

DiskMesh build_disk(int n_boundary, int n_rings) { return DiskMesh(n_boundary, n_rings); }

double energy(const DiskMesh& disk, std::span<const Vec> F) {
    double e = 0;
    for (const auto& edge : disk.edges()) e += edge.w * norm2(F[edge.a] - F[edge.b]);
    return 0.5 * e;
}

namespace {

struct Frame {
    Vec fx, fy;
};

Frame face_gradient(const DiskMesh& disk, std::span<const Vec> F, size_t f) {
    const auto& face = disk.faces()[f];
    const auto &a = disk.uv()[face[0]], &b = disk.uv()[face[1]], &c = disk.uv()[face[2]];
    double m00 = b[0] - a[0], m01 = c[0] - a[0];
    double m10 = b[1] - a[1], m11 = c[1] - a[1];
    double det = m00 * m11 - m01 * m10;
    Vec e1 = F[face[1]] - F[face[0]], e2 = F[face[2]] - F[face[0]];
    // DF = [e1 e2] * M^{-1}
    Vec fx = (e1 * m11 - e2 * m10) / det;
    Vec fy = (e2 * m00 - e1 * m01) / det;
    return {fx, fy};
}

}  // namespace

double map_area(const DiskMesh& disk, std::span<const Vec> F) {
    double a = 0;
    for (size_t f = 0; f < disk.faces().size(); ++f) {
        auto [fx, fy] = face_gradient(disk, F, f);
        double j2 = norm2(fx) * norm2(fy) - dot(fx, fy) * dot(fx, fy);
        a += (j2 > 0 ? std::sqrt(j2) : 0.0) * disk.flat_face_area(f);
    }
    return a;
}

std::vector<std::array<double, 2>> conformality_residual(const DiskMesh& disk,
                                                         std::span<const Vec> F) {
    std::vector<std::array<double, 2>> out(disk.faces().size());
    for (size_t f = 0; f < disk.faces().size(); ++f) {
        auto [fx, fy] = face_gradient(disk, F, f);
        out[f] = {norm2(fx) - norm2(fy), 2.0 * dot(fx, fy)};
    }
    return out;
}

Vec interpolate(const DiskMesh& disk, std::span<const Vec> F, double u, double v) {
    double rho = std::hypot(u, v);
    double th = std::atan2(v, u);
    if (th < 0) th += 2.0 * M_PI;
    int nb = disk.n_boundary(), nr = disk.n_rings();
    const auto& radii = disk.ring_radii();

    auto bary = [&](int f, Vec* out) {
        const auto& face = disk.faces()[f];
        const auto &A = disk.uv()[face[0]], &B = disk.uv()[face[1]], &C = disk.uv()[face[2]];
        double det = (B[0] - A[0]) * (C[1] - A[1]) - (C[0] - A[0]) * (B[1] - A[1]);
        double l1 = ((u - A[0]) * (C[1] - A[1]) - (C[0] - A[0]) * (v - A[1])) / det;
        double l2 = ((B[0] - A[0]) * (v - A[1]) - (u - A[0]) * (B[1] - A[1])) / det;
        double l0 = 1.0 - l1 - l2;
        if (l0 < -1e-9 || l1 < -1e-9 || l2 < -1e-9) return false;
        *out = F[face[0]] * l0 + F[face[1]] * l1 + F[face[2]] * l2;
        return true;
    };

    int i = (int)std::floor(th / (2.0 * M_PI) * nb) % nb;
    int j = (int)(std::lower_bound(radii.begin(), radii.end(), rho) - radii.begin());
    Vec out;
    // candidate faces: the located cell plus angular neighbors
    for (int dj = 0; dj <= 1; ++dj) {
        int jj = std::clamp(j - dj, 0, nr - 1);
        for (int di = -1; di <= 1; ++di) {
            int ii = ((i + di) % nb + nb) % nb;
            if (jj == 0) {
                if (bary(ii, &out)) return out;
            } else {
                size_t base = (size_t)nb + (size_t)(jj - 1) * 2 * nb + 2 * ii;
                if (bary((int)base, &out)) return out;
                if (bary((int)base + 1, &out)) return out;
            }
        }
    }
    for (size_t f = 0; f < disk.faces().size(); ++f)
        if (bary((int)f, &out)) return out;
    throw PlateauError("interpolation point outside the parameter disk");
}

}  // namespace minsurf::plateau
