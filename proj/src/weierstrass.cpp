#include "minsurf/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "json.hpp"
#include "minsurf/parallel.hpp"
#include "minsurf/quadrature.hpp"

namespace minsurf::weierstrass {

using expr::ComplexExpr;
using expr::PointKind;
using expr::SpecialPoint;

// ---- DomainSpec ----------------------------------------------------------------

DomainSpec DomainSpec::rectangle(double x0, double x1, double y0, double y1, int nu, int nv) {
    if (x1 <= x0 || y1 <= y0 || nu < 2 || nv < 2)
        throw WeierstrassError("invalid rectangle domain");
    DomainSpec d;
    d.shape = Shape::Rectangle;
    d.x0 = x0;
    d.x1 = x1;
    d.y0 = y0;
    d.y1 = y1;
    d.nu = nu;
    d.nv = nv;
    return d;
}

DomainSpec DomainSpec::annulus(double r0, double r1, int nu, int nv) {
    if (r0 <= 0 || r1 <= r0 || nu < 3 || nv < 2) throw WeierstrassError("invalid annulus domain");
    DomainSpec d;
    d.shape = Shape::Annulus;
    d.r0 = r0;
    d.r1 = r1;
    d.nu = nu;
    d.nv = nv;
    return d;
}

bool DomainSpec::contains(cplx z) const {
    if (shape == Shape::Rectangle)
        return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
    double r = std::abs(z);
    return r >= r0 && r <= r1;
}

cplx DomainSpec::grid_node(int i, int j) const {
    cplx z;
    if (shape == Shape::Rectangle) {
        z = cplx(x0 + (x1 - x0) * i / nu, y0 + (y1 - y0) * j / nv);
    } else {
        double r = r0 * std::pow(r1 / r0, (double)j / nv);
        double th = 2.0 * M_PI * i / nu;
        z = std::polar(r, th);
    }
    for (const auto& p : punctures) {
        cplx d = z - p.location;
        double ad = std::abs(d);
        if (ad < 1e-6) z = p.location + (ad > 0 ? d * (1e-6 / ad) : cplx(1e-6, 0.0));
    }
    return z;
}

int DomainSpec::vertex_index(int i, int j) const {
    if (shape == Shape::Rectangle) return j * (nu + 1) + i;
    return j * nu + (i % nu);
}

int DomainSpec::vertex_count() const {
    return shape == Shape::Rectangle ? (nu + 1) * (nv + 1) : nu * (nv + 1);
}

// ---- pointwise quantities --------------------------------------------------------

namespace {

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

std::array<cplx, 3> phi_direct(const WeierstrassData& d, cplx z) {
    cplx gz = d.g.eval(z);
    cplx p3 = d.phi3.eval(z);
    cplx rot = std::polar(1.0, d.theta);
    cplx inv = cplx(1.0, 0.0) / gz;
    cplx f1 = 0.5 * (inv - gz) * p3;
    cplx f2 = cplx(0.0, 0.5) * (inv + gz) * p3;
    return {rot * f1, rot * f2, rot * p3};
}

bool finite3(const std::array<cplx, 3>& v) { return finite(v[0]) && finite(v[1]) && finite(v[2]); }

// Mean of phi over a small circle; equals the center value when the
// singularity is removable.
std::array<cplx, 3> phi_circle_mean(const WeierstrassData& d, cplx z, double eps) {
    constexpr int N = 32;
    std::array<cplx, 3> acc{};
    for (int k = 0; k < N; ++k) {
        auto v = phi_direct(d, z + std::polar(eps, 2.0 * M_PI * (k + 0.5) / N));
        if (!finite3(v)) return {cplx(NAN, NAN), cplx(NAN, NAN), cplx(NAN, NAN)};
        for (int c = 0; c < 3; ++c) acc[c] += v[c];
    }
    for (int c = 0; c < 3; ++c) acc[c] /= (double)N;
    return acc;
}

}  // namespace

std::array<cplx, 3> phi(const WeierstrassData& data, cplx z) {
    auto v = phi_direct(data, z);
    if (finite3(v)) return v;
    auto m1 = phi_circle_mean(data, z, 1e-5);
    auto m2 = phi_circle_mean(data, z, 0.5e-5);
    if (!finite3(m1) || !finite3(m2)) throw expr::PoleHit(z);
    double diff = 0, scale = 0;
    for (int c = 0; c < 3; ++c) {
        diff += std::abs(m1[c] - m2[c]);
        scale += std::abs(m1[c]);
    }
    if (diff > 1e-6 * std::max(scale, 1.0)) throw expr::PoleHit(z);
    return m2;
}

double conformal_factor(const WeierstrassData& data, cplx z) {
    cplx gz = data.g.eval(z);
    cplx p3 = std::polar(1.0, data.theta) * data.phi3.eval(z);
    double ag = std::abs(gz);
    double lam = 0.5 * (1.0 / ag + ag) * std::abs(p3);
    if (std::isfinite(lam)) return lam;
    auto v = phi(data, z);  // throws PoleHit at true poles
    double s = std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]);
    return std::sqrt(0.5 * s);
}

double gauss_curvature(const WeierstrassData& data, cplx z) {
    cplx gz = data.g.eval(z);
    cplx gp = data.g.eval_derivative(z);
    cplx p3 = data.phi3.eval(z);
    double ag = std::abs(gz);
    double denom = std::abs(p3 * gz) * std::pow(1.0 / ag + ag, 2);
    double b = 4.0 * std::abs(gp) / denom;
    if (!std::isfinite(b)) {
        // removable 0/0 when g and phi3 vanish together: eliminate |phi3|
        // through the conformal factor, K = -[2|g'| / (lambda (1+|g|^2))]^2
        double lam = conformal_factor(data, z);
        b = 2.0 * std::abs(gp) / (lam * (1.0 + ag * ag));
        if (!std::isfinite(b)) throw expr::PoleHit(z);
    }
    return -b * b;
}

double gauss_curvature_gaussmap_form(const WeierstrassData& data, cplx z) {
    cplx gz = data.g.eval(z);
    cplx gp = data.g.eval_derivative(z);
    cplx p3 = data.phi3.eval(z);
    double ag = std::abs(gz);
    double b = 4.0 / std::pow(1.0 / ag + ag, 2) * std::abs(gp / (gz * p3));
    if (!std::isfinite(b)) throw expr::PoleHit(z);
    return -b * b;
}

Vec unit_normal(const WeierstrassData& data, cplx z) {
    cplx gz = data.g.eval(z);
    if (!finite(gz)) return {0, 0, 1};
    double n2 = std::norm(gz);
    if (!std::isfinite(n2) || n2 > 1e280) return {0, 0, 1};
    double denom = 1.0 + n2;
    return {2.0 * gz.real() / denom, 2.0 * gz.imag() / denom, (n2 - 1.0) / denom};
}

// ---- paths and integration ---------------------------------------------------------

namespace {

void extend_avoiding(const WeierstrassData& d, std::vector<cplx>& path, cplx a, cplx b,
                     int skip, int depth) {
    const auto& punct = d.domain.punctures;
    int offender = -1;
    double best_t = 2.0;
    double rho = 0;
    for (size_t k = 0; k < punct.size(); ++k) {
        if ((int)k == skip) continue;
        cplx q = punct[k].location;
        if (std::abs(a - q) < 1e-9 || std::abs(b - q) < 1e-9)
            throw WeierstrassError("path endpoint sits on a puncture");
        double r = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < punct.size(); ++j)
            if (j != k) r = std::min(r, 0.5 * std::abs(q - punct[j].location));
        r = std::min({r, 0.45 * std::abs(q - a), 0.45 * std::abs(q - b)});
        // distance from q to segment [a,b]
        cplx ab = b - a;
        double t = std::clamp(((q - a) * std::conj(ab)).real() / std::norm(ab), 0.0, 1.0);
        double dist_seg = std::abs(a + t * ab - q);
        if (dist_seg < r && t < best_t) {
            best_t = t;
            offender = (int)k;
            rho = r;
        }
    }
    if (offender < 0 || depth > 8) {
        path.push_back(b);
        return;
    }
    cplx q = punct[offender].location;
    cplx ab = b - a;
    // |a + t ab - q|^2 = rho^2
    double A = std::norm(ab);
    double B = 2.0 * ((a - q) * std::conj(ab)).real();
    double C = std::norm(a - q) - rho * rho;
    double disc = B * B - 4 * A * C;
    if (disc <= 0) {
        path.push_back(b);
        return;
    }
    double t1 = (-B - std::sqrt(disc)) / (2 * A), t2 = (-B + std::sqrt(disc)) / (2 * A);
    t1 = std::clamp(t1, 0.0, 1.0);
    t2 = std::clamp(t2, 0.0, 1.0);
    cplx z1 = a + t1 * ab, z2 = a + t2 * ab;
    double a1 = std::arg(z1 - q), a2 = std::arg(z2 - q);
    double delta = std::remainder(a2 - a1, 2.0 * M_PI);
    if (std::fabs(std::fabs(delta) - M_PI) < 1e-12) delta = M_PI;  // chord through center: go ccw
    int steps = std::max(2, (int)std::ceil(std::fabs(delta) / (M_PI / 16)));

    extend_avoiding(d, path, a, z1, offender, depth + 1);
    for (int s = 1; s <= steps; ++s) path.push_back(q + std::polar(rho, a1 + delta * s / steps));
    extend_avoiding(d, path, z2, b, offender, depth + 1);
}

std::array<cplx, 3> integrate_phi(const WeierstrassData& d, std::span<const cplx> path,
                                  double rel_tol = 1e-10) {
    auto f = [&](cplx z) { return phi(d, z); };
    return quad::integrate_polyline<std::array<cplx, 3>>(f, path, rel_tol);
}

}  // namespace

std::vector<cplx> build_path(const WeierstrassData& data, cplx from, cplx to) {
    std::vector<cplx> path{from};
    extend_avoiding(data, path, from, to, -1, 0);
    return path;
}

Vec immerse_along(const WeierstrassData& data, std::span<const cplx> path) {
    auto I = integrate_phi(data, path);
    return {I[0].real(), I[1].real(), I[2].real()};
}

Vec immerse(const WeierstrassData& data, cplx z) {
    auto path = build_path(data, data.base_point, z);
    return immerse_along(data, path);
}

Vec periods(const WeierstrassData& data, std::span<const cplx> loop) {
    if (loop.size() < 3) throw WeierstrassError("period loop needs at least 3 points");
    std::vector<cplx> closed(loop.begin(), loop.end());
    if (std::abs(closed.front() - closed.back()) > 1e-12) closed.push_back(closed.front());
    for (const auto& p : data.domain.punctures)
        for (size_t i = 0; i + 1 < closed.size(); ++i) {
            cplx a = closed[i], b = closed[i + 1], ab = b - a;
            double t =
                std::clamp(((p.location - a) * std::conj(ab)).real() / std::norm(ab), 0.0, 1.0);
            if (std::abs(a + t * ab - p.location) < 1e-9)
                throw WeierstrassError("puncture lies on the period loop");
        }
    auto I = integrate_phi(data, closed);
    return {I[0].real(), I[1].real(), I[2].real()};
}

WeierstrassData associate(const WeierstrassData& data, double dtheta) {
    WeierstrassData out = data;
    out.theta += dtheta;
    return out;
}

// ---- classification ----------------------------------------------------------------

BranchClassification classify_branch(const WeierstrassData& data, const SpecialPoint& p) {
    BranchClassification out;
    for (const auto& q : data.domain.punctures)
        if (std::abs(q.location - p.location) < 1e-12) out.at_puncture = true;
    int mg = expr::local_order(data.g, p.location);
    int k = expr::local_order(data.phi3, p.location);
    out.m = std::abs(mg);
    out.k = k;
    if (k < 2 * out.m || k < 0) {
        out.kind = BranchClassification::Kind::Inadmissible;
    } else if (k == 2 * out.m) {
        out.kind = BranchClassification::Kind::Immersed;
    } else {
        out.kind = BranchClassification::Kind::Branch;
        out.branch_order = k - 2 * out.m;
    }
    return out;
}

void check_admissible(const WeierstrassData& data) {
    cplx cval;
    if (data.g.is_constant(&cval)) {
        if (!finite(cval))
            throw WeierstrassError("g is identically infinite; horizontal planes come from plane_disk");
        if (std::abs(cval) < 1e-14)
            throw WeierstrassError("g == 0 generates a horizontal plane; use plane_disk instead");
    }
    if (!data.domain.contains(data.base_point))
        throw WeierstrassError("base point lies outside the domain");
    for (const auto& q : data.domain.punctures)
        if (std::abs(q.location - data.base_point) < 1e-9)
            throw WeierstrassError("base point coincides with a puncture");
    for (const auto& p : data.special_points) {
        bool punctured = false;
        for (const auto& q : data.domain.punctures)
            if (std::abs(q.location - p.location) < 1e-12) punctured = true;
        if (punctured || !data.domain.contains(p.location)) continue;
        auto c = classify_branch(data, p);
        if (c.kind == BranchClassification::Kind::Inadmissible) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "inadmissible data: F has a pole at (%g, %g): ord(phi3)=%d < 2|ord(g)|=%d",
                          p.location.real(), p.location.imag(), c.k, 2 * c.m);
            throw WeierstrassError(buf);
        }
    }
}

// ---- tessellation -----------------------------------------------------------------

namespace {

bool chord_near_puncture(const WeierstrassData& d, cplx a, cplx b) {
    for (const auto& p : d.domain.punctures) {
        cplx ab = b - a;
        double t = std::clamp(((p.location - a) * std::conj(ab)).real() / std::norm(ab), 0.0, 1.0);
        if (std::abs(a + t * ab - p.location) < 1e-7) return true;
    }
    return false;
}

std::array<cplx, 3> hop(const WeierstrassData& d, cplx a, cplx b) {
    if (chord_near_puncture(d, a, b)) {
        auto path = build_path(d, a, b);
        return integrate_phi(d, path);
    }
    cplx segment[2] = {a, b};
    return integrate_phi(d, segment);
}

}  // namespace

mesh::TriMesh tessellate(const WeierstrassData& data) {
    check_admissible(data);
    const DomainSpec& dom = data.domain;
    const int nu = dom.nu, nv = dom.nv;
    const bool annulus = dom.shape == DomainSpec::Shape::Annulus;
    const int cols = annulus ? nu : nu + 1;

    mesh::TriMesh m;
    m.dim = 3;
    m.vertices.assign(dom.vertex_count(), Vec{});
    m.lambda.assign(dom.vertex_count(), 0.0);
    m.gauss_k.assign(dom.vertex_count(), 0.0);
    m.normals.assign(dom.vertex_count(), Vec{});

    // spine: base -> (0,0), then up the i=0 grid line
    std::vector<std::array<cplx, 3>> spine(nv + 1);
    {
        auto path = build_path(data, data.base_point, dom.grid_node(0, 0));
        spine[0] = integrate_phi(data, path);
        for (int j = 0; j < nv; ++j) {
            auto seg = hop(data, dom.grid_node(0, j), dom.grid_node(0, j + 1));
            for (int c = 0; c < 3; ++c) spine[j + 1][c] = spine[j][c] + seg[c];
        }
    }

    // rows march independently from the spine
    par::parallel_for(nv + 1, [&](int j) {
        std::array<cplx, 3> acc = spine[j];
        for (int i = 0; i < cols; ++i) {
            cplx z = dom.grid_node(i, j);
            if (i > 0) {
                auto seg = hop(data, dom.grid_node(i - 1, j), z);
                for (int c = 0; c < 3; ++c) acc[c] += seg[c];
            }
            int idx = dom.vertex_index(i, j);
            m.vertices[idx] = {acc[0].real(), acc[1].real(), acc[2].real()};
            m.lambda[idx] = conformal_factor(data, z);
            m.gauss_k[idx] = gauss_curvature(data, z);
            m.normals[idx] = unit_normal(data, z);
        }
    });

    for (int j = 0; j < nv; ++j)
        for (int i = 0; i < nu; ++i) {
            int a = dom.vertex_index(i, j), b = dom.vertex_index(i + 1, j);
            int c = dom.vertex_index(i, j + 1), d = dom.vertex_index(i + 1, j + 1);
            if ((i + j) % 2 == 0) {
                m.faces.push_back({a, b, d});
                m.faces.push_back({a, d, c});
            } else {
                m.faces.push_back({a, b, c});
                m.faces.push_back({b, d, c});
            }
        }
    return m;
}

// ---- catalog ----------------------------------------------------------------------

WeierstrassData catenoid_data(double c, int nu, int nv) {
    WeierstrassData d;
    d.g = ComplexExpr::parse("z");
    d.phi3 = ComplexExpr::parse("1/z");
    d.domain = DomainSpec::annulus(std::exp(-c), std::exp(c), nu, nv);
    d.domain.punctures.push_back({cplx(0.0, 0.0), PointKind::unknown});
    d.base_point = 1.0;
    d.special_points.push_back({cplx(0.0, 0.0), PointKind::unknown});
    return d;
}

WeierstrassData helicoid_data(double half_height, int nu, int nv) {
    WeierstrassData d;
    d.g = ComplexExpr::parse("exp(i*z)");
    d.phi3 = ComplexExpr::parse("1");
    d.domain = DomainSpec::rectangle(-M_PI, M_PI, -half_height, half_height, nu, nv);
    d.base_point = 0.0;
    return d;
}

WeierstrassData enneper_data(double h, int n) {
    WeierstrassData d;
    d.g = ComplexExpr::parse("z");
    d.phi3 = ComplexExpr::parse("z");
    d.domain = DomainSpec::rectangle(-h, h, -h, h, n, n);
    d.base_point = 0.0;
    return d;
}

mesh::TriMesh plane_disk(double radius, int n_boundary, int n_rings) {
    mesh::TriMesh m = mesh::make_flat_disk(radius, n_boundary, n_rings);
    m.lambda.assign(m.vertices.size(), 1.0);
    m.gauss_k.assign(m.vertices.size(), 0.0);
    m.normals.assign(m.vertices.size(), Vec{0, 0, 1});
    return m;
}

mesh::TriMesh holomorphic_curve(int n, double radius, int n_boundary, int n_rings) {
    if (n < 1) throw WeierstrassError("holomorphic_curve needs n >= 1");
    mesh::DiskLayout L = mesh::make_disk_layout(n_boundary, n_rings);
    mesh::TriMesh m;
    m.dim = 4;
    for (auto [u, v] : L.uv) {
        cplx z(radius * u, radius * v);
        cplx w = std::pow(z, n);
        m.vertices.push_back({z.real(), z.imag(), w.real(), w.imag()});
    }
    m.faces = L.faces;
    return m;
}

// ---- diagnostics --------------------------------------------------------------------

CatenoidFit fit_catenoid_axis(const mesh::TriMesh& m) {
    if (m.vertices.empty()) throw WeierstrassError("empty mesh");
    double a = 0, b = 0;
    for (const Vec& v : m.vertices) {
        a += v.x;
        b += v.y;
    }
    a /= (double)m.vertices.size();
    b /= (double)m.vertices.size();
    double c = 0, best_rho = std::numeric_limits<double>::infinity();
    for (const Vec& v : m.vertices) {
        double rho = std::hypot(v.x - a, v.y - b);
        if (rho < best_rho) {
            best_rho = rho;
            c = v.z;
        }
    }

    auto sse = [&](double pa, double pb, double pc) {
        double s = 0;
        for (const Vec& v : m.vertices) {
            double r = std::hypot(v.x - pa, v.y - pb) - std::cosh(v.z - pc);
            s += r * r;
        }
        return s;
    };

    double err = sse(a, b, c);
    for (int it = 0; it < 40; ++it) {
        double JTJ[3][3] = {};
        double JTr[3] = {};
        for (const Vec& v : m.vertices) {
            double dx = v.x - a, dy = v.y - b;
            double rho = std::hypot(dx, dy);
            if (rho < 1e-12) continue;
            double r = rho - std::cosh(v.z - c);
            double J[3] = {-dx / rho, -dy / rho, std::sinh(v.z - c)};
            for (int p = 0; p < 3; ++p) {
                JTr[p] += J[p] * r;
                for (int q = 0; q < 3; ++q) JTJ[p][q] += J[p] * J[q];
            }
        }
        // solve JTJ dx = -JTr (Cramer)
        double det = JTJ[0][0] * (JTJ[1][1] * JTJ[2][2] - JTJ[1][2] * JTJ[2][1]) -
                     JTJ[0][1] * (JTJ[1][0] * JTJ[2][2] - JTJ[1][2] * JTJ[2][0]) +
                     JTJ[0][2] * (JTJ[1][0] * JTJ[2][1] - JTJ[1][1] * JTJ[2][0]);
        if (std::fabs(det) < 1e-30) break;
        auto solve_col = [&](int col) {
            double M[3][3];
            for (int p = 0; p < 3; ++p)
                for (int q = 0; q < 3; ++q) M[p][q] = q == col ? -JTr[p] : JTJ[p][q];
            return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
                    M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                    M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])) /
                   det;
        };
        double da = solve_col(0), db = solve_col(1), dc = solve_col(2);
        double step = 1.0;
        bool accepted = false;
        for (int half = 0; half < 12; ++half) {
            double trial = sse(a + step * da, b + step * db, c + step * dc);
            if (trial < err) {
                a += step * da;
                b += step * db;
                c += step * dc;
                err = trial;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }

    CatenoidFit fit;
    fit.axis_x = a;
    fit.axis_y = b;
    fit.waist_z = c;
    for (const Vec& v : m.vertices) {
        double r = std::fabs(std::hypot(v.x - a, v.y - b) - std::cosh(v.z - c));
        fit.max_residual = std::max(fit.max_residual, r);
    }
    return fit;
}

IsometryCertificate compare_associate(const mesh::TriMesh& a, const mesh::TriMesh& b) {
    if (a.vertices.size() != b.vertices.size() || a.faces.size() != b.faces.size())
        throw WeierstrassError("associate meshes must share one grid");
    if (a.lambda.empty() || b.lambda.empty())
        throw WeierstrassError("associate comparison needs lambda attributes");
    IsometryCertificate cert;
    std::set<std::pair<int, int>> seen;
    for (const auto& f : a.faces)
        for (int e = 0; e < 3; ++e) {
            int i = f[e], j = f[(e + 1) % 3];
            if (!seen.insert(std::minmax(i, j)).second) continue;
            // pullback edge length = |dz| (lambda_i + lambda_j)/2 on a shared grid,
            // so the relative deviation reduces to the lambda sums
            double la = a.lambda[i] + a.lambda[j], lb = b.lambda[i] + b.lambda[j];
            if (la > 0) cert.max_edge_deviation = std::max(cert.max_edge_deviation,
                                                           std::fabs(la - lb) / la);
        }
    if (!a.normals.empty() && !b.normals.empty())
        for (size_t i = 0; i < a.vertices.size(); ++i) {
            double cth = std::clamp(dot(a.normals[i], b.normals[i]), -1.0, 1.0);
            cert.max_normal_angle = std::max(cert.max_normal_angle, std::acos(cth));
        }
    return cert;
}

// ---- JSON data files -----------------------------------------------------------------

namespace {

using nlohmann::json;

void ensure_keys(const json& j, std::initializer_list<const char*> allowed,
                 const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw WeierstrassError("unknown key '" + it.key() + "' in " + where);
    }
}

}  // namespace

WeierstrassData load_data_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw WeierstrassError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw WeierstrassError(path + ": " + e.what());
    }
    ensure_keys(j, {"g", "phi3", "domain", "punctures", "base", "theta", "special_points"},
                path);
    WeierstrassData d;
    try {
        d.g = ComplexExpr::parse(j.at("g").get<std::string>());
        d.phi3 = ComplexExpr::parse(j.at("phi3").get<std::string>());
        const json& dom = j.at("domain");
        std::string shape = dom.at("shape").get<std::string>();
        if (shape == "rectangle") {
            ensure_keys(dom, {"shape", "x0", "x1", "y0", "y1", "nu", "nv"}, "domain");
            d.domain = DomainSpec::rectangle(dom.at("x0"), dom.at("x1"), dom.at("y0"),
                                             dom.at("y1"), dom.at("nu"), dom.at("nv"));
        } else if (shape == "annulus") {
            ensure_keys(dom, {"shape", "r0", "r1", "nu", "nv"}, "domain");
            d.domain = DomainSpec::annulus(dom.at("r0"), dom.at("r1"), dom.at("nu"), dom.at("nv"));
        } else {
            throw WeierstrassError("domain shape must be rectangle or annulus");
        }
        if (j.contains("punctures"))
            for (const auto& p : j.at("punctures")) {
                d.domain.punctures.push_back({cplx(p.at(0), p.at(1)), PointKind::unknown});
                d.special_points.push_back({cplx(p.at(0), p.at(1)), PointKind::unknown});
            }
        if (j.contains("special_points"))
            for (const auto& p : j.at("special_points"))
                d.special_points.push_back({cplx(p.at(0), p.at(1)), PointKind::unknown});
        if (j.contains("base")) d.base_point = cplx(j.at("base").at(0), j.at("base").at(1));
        if (j.contains("theta")) d.theta = j.at("theta");
    } catch (const json::exception& e) {
        throw WeierstrassError(path + ": " + e.what());
    }
    return d;
}

void save_data_json(const WeierstrassData& d, const std::string& path) {
    json j;
    j["g"] = d.g.format();
    j["phi3"] = d.phi3.format();
    json dom;
    if (d.domain.shape == DomainSpec::Shape::Rectangle) {
        dom["shape"] = "rectangle";
        dom["x0"] = d.domain.x0;
        dom["x1"] = d.domain.x1;
        dom["y0"] = d.domain.y0;
        dom["y1"] = d.domain.y1;
    } else {
        dom["shape"] = "annulus";
        dom["r0"] = d.domain.r0;
        dom["r1"] = d.domain.r1;
    }
    dom["nu"] = d.domain.nu;
    dom["nv"] = d.domain.nv;
    j["domain"] = dom;
    j["punctures"] = json::array();
    for (const auto& p : d.domain.punctures)
        j["punctures"].push_back({p.location.real(), p.location.imag()});
    j["base"] = {d.base_point.real(), d.base_point.imag()};
    j["theta"] = d.theta;
    std::ofstream out(path);
    if (!out) throw WeierstrassError("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

}  // namespace minsurf::weierstrass
