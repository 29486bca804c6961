#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "minsurf/plateau.hpp"

using namespace minsurf;
using namespace minsurf::plateau;

namespace {

BoundaryProblem circle_problem() {
    BoundaryProblem p;
    p.gamma = Curve::from_exprs("cos(z)", "sin(z)", "0", 2 * M_PI);
    p.anchors = {0.0, 2 * M_PI / 3, 4 * M_PI / 3};
    return p;
}

// dense Gaussian-elimination oracle for the interior Laplace solve
std::vector<Vec> dense_harmonic_oracle(const DiskMesh& disk, const std::vector<Vec>& bv) {
    size_t n = disk.vertex_count();
    const auto& interior = disk.interior();
    size_t ni = interior.size();
    std::vector<int> pos(n, -1);
    for (size_t i = 0; i < ni; ++i) pos[interior[i]] = (int)i;

    std::vector<Vec> full(n);
    for (size_t k = 0; k < disk.boundary().size(); ++k) full[disk.boundary()[k]] = bv[k];

    for (int coord = 0; coord < 3; ++coord) {
        std::vector<std::vector<double>> A(ni, std::vector<double>(ni, 0.0));
        std::vector<double> rhs(ni, 0.0);
        for (const auto& e : disk.edges()) {
            int pa = pos[e.a], pb = pos[e.b];
            if (pa >= 0) A[pa][pa] += e.w;
            if (pb >= 0) A[pb][pb] += e.w;
            if (pa >= 0 && pb >= 0) {
                A[pa][pb] -= e.w;
                A[pb][pa] -= e.w;
            } else if (pa >= 0) {
                rhs[pa] += e.w * full[e.b][coord];
            } else if (pb >= 0) {
                rhs[pb] += e.w * full[e.a][coord];
            }
        }
        for (size_t col = 0; col < ni; ++col) {
            size_t piv = col;
            for (size_t r = col + 1; r < ni; ++r)
                if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
            std::swap(A[col], A[piv]);
            std::swap(rhs[col], rhs[piv]);
            for (size_t r = col + 1; r < ni; ++r) {
                double f = A[r][col] / A[col][col];
                for (size_t c = col; c < ni; ++c) A[r][c] -= f * A[col][c];
                rhs[r] -= f * rhs[col];
            }
        }
        for (size_t r = ni; r-- > 0;) {
            double s = rhs[r];
            for (size_t c = r + 1; c < ni; ++c) s -= A[r][c] * rhs[c];
            rhs[r] = s / A[r][r];
        }
        for (size_t i = 0; i < ni; ++i) full[interior[i]][coord] = rhs[i];
    }
    return full;
}

}  // namespace

TEST_CASE("disk mesh structure") {
    auto small = build_disk(12, 2);
    CHECK(small.vertex_count() == 25);
    mesh::TriMesh m;
    m.vertices.assign(small.vertex_count(), Vec{});
    for (size_t i = 0; i < small.vertex_count(); ++i)
        m.vertices[i] = {small.uv()[i][0], small.uv()[i][1], 0};
    m.faces = small.faces();
    CHECK(mesh::euler_characteristic(m) == 1);
    CHECK(mesh::boundary_loops(m).size() == 1);

    // all cotangent weights of the graded ring mesh stay nonnegative
    auto big = build_disk(128, 24);
    for (const auto& e : big.edges()) CHECK(e.w >= 0.0);
}

TEST_CASE("cotangent weights match a hand computation") {
    // two equilateral triangles sharing an edge: w = (cot 60 + cot 60)/2
    {
        double cot60 = 1.0 / std::tan(M_PI / 3);
        CHECK((cot60 + cot60) / 2 == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    }
    // and the disk mesh's weights agree with an independent cotan evaluation
    auto disk = build_disk(16, 3);
    auto cot_at = [&](int at, int p, int q) {
        auto A = disk.uv()[at];
        double ux = disk.uv()[p][0] - A[0], uy = disk.uv()[p][1] - A[1];
        double vx = disk.uv()[q][0] - A[0], vy = disk.uv()[q][1] - A[1];
        return (ux * vx + uy * vy) / std::fabs(ux * vy - uy * vx);
    };
    for (const auto& e : disk.edges()) {
        double expected = 0;
        for (const auto& f : disk.faces()) {
            int opp = -1;
            bool has_a = false, has_b = false;
            for (int k = 0; k < 3; ++k) {
                if (f[k] == e.a) has_a = true;
                else if (f[k] == e.b) has_b = true;
                else opp = f[k];
            }
            if (has_a && has_b) expected += 0.5 * cot_at(opp, e.a, e.b);
        }
        CHECK(e.w == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("graph Laplacian annihilates constants") {
    auto disk = build_disk(24, 5);
    std::vector<Vec> constant(disk.vertex_count(), Vec{3.0, -1.0, 2.0});
    auto L = disk.laplacian(constant);
    for (const Vec& v : L) CHECK(norm(v) < 1e-12);
}

TEST_CASE("harmonic extension: constants, affine maps, the identity circle") {
    auto disk = build_disk(16, 3);

    std::vector<Vec> cbv(16, Vec{1.0, 2.0, -0.5});
    auto Fc = disk.harmonic_extend(cbv);
    for (const Vec& v : Fc) CHECK(norm(v - Vec{1.0, 2.0, -0.5}) < 1e-12);

    std::vector<Vec> abv;
    for (int k = 0; k < 16; ++k) {
        auto [u, v] = disk.uv()[disk.boundary()[k]];
        abv.push_back({2 * u - v + 0.5, u + 3 * v, -u});
    }
    auto Fa = disk.harmonic_extend(abv);
    auto oracle = dense_harmonic_oracle(disk, abv);
    for (size_t i = 0; i < disk.vertex_count(); ++i) CHECK(norm(Fa[i] - oracle[i]) < 1e-8);
    for (size_t i = 0; i < disk.vertex_count(); ++i) {
        auto [u, v] = disk.uv()[i];
        CHECK(norm(Fa[i] - Vec{2 * u - v + 0.5, u + 3 * v, -u}) < 1e-10);
    }

    // identity circle boundary reproduces the flat disk positions
    auto big = build_disk(48, 10);
    std::vector<Vec> ibv;
    for (int k = 0; k < 48; ++k) {
        auto [u, v] = big.uv()[big.boundary()[k]];
        ibv.push_back({u, v, 0});
    }
    auto Fi = big.harmonic_extend(ibv);
    for (size_t i = 0; i < big.vertex_count(); ++i) {
        auto [u, v] = big.uv()[i];
        CHECK(norm(Fi[i] - Vec{u, v, 0}) < 1e-8);
    }
}

TEST_CASE("harmonic extension minimizes energy among perturbations") {
    auto disk = build_disk(16, 3);
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> amp(-0.5, 0.5);
    std::vector<Vec> bv;
    for (int k = 0; k < 16; ++k) {
        double t = 2 * M_PI * k / 16;
        bv.push_back({std::cos(t), std::sin(t), 0.3 * std::sin(2 * t)});
    }
    auto F = disk.harmonic_extend(bv);
    double e0 = energy(disk, F);
    std::uniform_int_distribution<int> pick(0, (int)disk.interior().size() - 1);
    for (int trial = 0; trial < 100; ++trial) {
        auto G = F;
        int v = disk.interior()[pick(rng)];
        G[v] += Vec{amp(rng), amp(rng), amp(rng)} * 0.2;
        CHECK(energy(disk, G) > e0);
    }
}

TEST_CASE("discrete maximum principle per coordinate") {
    auto disk = build_disk(24, 6);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> val(-2, 2);
    std::vector<Vec> bv;
    Vec lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
    for (int k = 0; k < 24; ++k) {
        Vec p{val(rng), val(rng), val(rng)};
        bv.push_back(p);
        for (int c = 0; c < 3; ++c) {
            lo[c] = std::min(lo[c], p[c]);
            hi[c] = std::max(hi[c], p[c]);
        }
    }
    auto F = disk.harmonic_extend(bv);
    for (const Vec& v : F)
        for (int c = 0; c < 3; ++c) {
            CHECK(v[c] >= lo[c] - 1e-12);
            CHECK(v[c] <= hi[c] + 1e-12);
        }
}

TEST_CASE("energy, area, and the conformality residual") {
    auto disk = build_disk(48, 10);

    // identity map: E = A = mesh area, residual ~ 0
    std::vector<Vec> identity;
    for (auto [u, v] : disk.uv()) identity.push_back({u, v, 0});
    double E = energy(disk, identity), A = map_area(disk, identity);
    CHECK(E == doctest::Approx(disk.total_flat_area()).epsilon(1e-12));
    CHECK(A == doctest::Approx(disk.total_flat_area()).epsilon(1e-12));
    CHECK(E == doctest::Approx(M_PI).epsilon(0.01));
    for (auto [r1, r2] : conformality_residual(disk, identity)) {
        CHECK(std::fabs(r1) < 1e-12);
        CHECK(std::fabs(r2) < 1e-12);
    }

    // anisotropic stretch F = (x, 2y, 0): E = 5/2 area, A = 2 area
    std::vector<Vec> stretched;
    for (auto [u, v] : disk.uv()) stretched.push_back({u, 2 * v, 0});
    CHECK(energy(disk, stretched) == doctest::Approx(2.5 * M_PI).epsilon(0.01));
    CHECK(map_area(disk, stretched) == doctest::Approx(2.0 * M_PI).epsilon(0.01));
    CHECK(energy(disk, stretched) > map_area(disk, stretched));

    // A <= E for arbitrary maps
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> amp(-1, 1);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Vec> F;
        double a1 = amp(rng), a2 = amp(rng), a3 = amp(rng);
        for (auto [u, v] : disk.uv())
            F.push_back({u + 0.3 * a1 * std::sin(3 * v), v + 0.3 * a2 * u * u,
                         0.4 * a3 * std::cos(2 * u) * v});
        double e = energy(disk, F), a = map_area(disk, F);
        CHECK(a <= e + 1e-12 * std::max(1.0, e));
    }
}

TEST_CASE("solve: the circle problem lands on the flat disk") {
    auto disk = build_disk(64, 12);
    SolveConfig cfg;
    cfg.init_skew = 0.4;
    auto st = solve(circle_problem(), disk, cfg);
    CHECK(st.converged);
    CHECK(st.area == doctest::Approx(M_PI).epsilon(0.01));
    CHECK((st.energy - st.area) / st.energy < 0.01);
    // flatness: the z coordinate stays near zero
    for (const Vec& v : st.positions) CHECK(std::fabs(v.z) < 1e-3);
    // A <= E along the whole iteration history, energy never increases
    for (auto [e, a] : st.history) CHECK(a <= e + 1e-12);
    for (size_t k = 1; k < st.history.size(); ++k)
        CHECK(st.history[k][0] <= st.history[k - 1][0]);

    // the gap criterion holds at a finer resolution too
    auto fine = solve(circle_problem(), build_disk(128, 24), {});
    CHECK((fine.energy - fine.area) / fine.energy < 0.01);
}

TEST_CASE("solve: reparametrization invariance and anchor rotation") {
    auto disk = build_disk(48, 10);
    SolveConfig tight;
    tight.tol = 1e-13;
    tight.max_iters = 6000;

    auto base = solve(circle_problem(), disk, tight);
    SolveConfig skewed = tight;
    skewed.init_skew = 0.8;
    auto other = solve(circle_problem(), disk, skewed);
    CHECK(std::fabs(base.energy - other.energy) <= 1e-6 * base.energy);

    BoundaryProblem rotated = circle_problem();
    rotated.anchors = {2 * M_PI / 3, 4 * M_PI / 3, 2 * M_PI};
    auto rot = solve(rotated, disk, tight);
    CHECK(std::fabs(base.energy - rot.energy) <= 1e-6 * base.energy);
}

TEST_CASE("solve rejects bad boundary curves") {
    auto disk = build_disk(24, 4);
    BoundaryProblem bad;
    bad.gamma = Curve::from_exprs("cos(z)", "sin(2*z)", "0", 2 * M_PI);  // figure eight
    bad.anchors = {0.1, 2.0, 4.0};
    CHECK_THROWS_AS(solve(bad, disk, {}), PlateauError);

    mesh::Polyline open_poly;
    open_poly.closed = false;
    open_poly.points = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}};
    CHECK_THROWS_WITH_AS(Curve::from_polyline(open_poly),
                         doctest::Contains("single closed curve"), PlateauError);

    BoundaryProblem dup = circle_problem();
    dup.anchors = {0.0, 0.0, 2.0};
    CHECK_THROWS_AS(solve(dup, disk, {}), PlateauError);
}

TEST_CASE("boundary parameters stay pinned and cyclically monotone") {
    auto disk = build_disk(48, 8);
    SolveConfig cfg;
    cfg.init_skew = 0.5;
    auto st = solve(circle_problem(), disk, cfg);
    CHECK(st.s[0] == doctest::Approx(0.0));
    CHECK(st.s[16] == doctest::Approx(2 * M_PI / 3));
    CHECK(st.s[32] == doctest::Approx(4 * M_PI / 3));
    for (int i = 1; i < 48; ++i) CHECK(st.s[i] > st.s[i - 1]);
    CHECK(st.s.back() < 2 * M_PI);
    // boundary positions equal gamma(s) exactly
    for (int k = 0; k < 48; ++k) {
        Vec expect = circle_problem().gamma.eval(st.s[k]);
        CHECK(norm(st.positions[disk.boundary()[k]] - expect) < 1e-14);
    }
}

TEST_CASE("energy gradient agrees with finite differences") {
    auto disk = build_disk(24, 5);
    BoundaryProblem p;
    p.gamma = Curve::from_exprs("cos(z) + 0.2*cos(2*z)", "sin(z)", "0.3*sin(3*z)", 2 * M_PI);
    p.anchors = {0.1, 2.2, 4.4};
    std::vector<double> s(24);
    for (int i = 0; i < 24; ++i) s[i] = 0.1 + (i / 24.0) * 2 * M_PI * 0.98;
    s[0] = 0.1;
    s[8] = 2.2;
    s[16] = 4.4;
    for (int i = 1; i < 24; ++i)
        if (s[i] <= s[i - 1]) s[i] = s[i - 1] + 1e-3;
    auto g = boundary_gradient(p, disk, s);
    auto energy_at = [&](const std::vector<double>& sv) {
        std::vector<Vec> bv;
        for (double t : sv) bv.push_back(p.gamma.eval(t));
        return energy(disk, disk.harmonic_extend(bv));
    };
    double h = 1e-6;
    for (int i : {1, 3, 5, 9, 12, 20, 23}) {
        auto sp = s, sm = s;
        sp[i] += h;
        sm[i] -= h;
        double fd = (energy_at(sp) - energy_at(sm)) / (2 * h);
        CHECK(std::fabs(fd - g[i]) <= 1e-5 * std::max(1.0, std::fabs(fd)));
    }
    // anchors carry no gradient
    CHECK(g[0] == 0.0);
    CHECK(g[8] == 0.0);
    CHECK(g[16] == 0.0);
}

TEST_CASE("Courant-Lebesgue bounds for the identity disk map") {
    auto disk = build_disk(64, 12);
    std::vector<Vec> identity;
    for (auto [u, v] : disk.uv()) identity.push_back({u, v, 0});
    auto rep = courant_lebesgue_check(disk, identity, {0.0, 0.0});
    CHECK(rep.ok);
    // closed form: integral of (2 pi r)^2 / r up to ~1 is ~2 pi^2 against 4 pi E = 4 pi^2
    CHECK(rep.integral_lhs == doctest::Approx(2 * M_PI * M_PI).epsilon(0.05));
    CHECK(rep.integral_rhs == doctest::Approx(4 * M_PI * M_PI).epsilon(0.02));
    CHECK(rep.integral_margin > 0.05);
    CHECK(rep.min_margin > 0.05);

    // off-center circles still satisfy both bounds
    auto rep2 = courant_lebesgue_check(disk, identity, {0.3, -0.2});
    CHECK(rep2.ok);
}

TEST_CASE("polyline-curve problems solve too") {
    mesh::Polyline poly;
    poly.closed = true;
    for (int i = 0; i < 96; ++i) {
        double t = 2 * M_PI * i / 96;
        poly.points.push_back({std::cos(t), std::sin(t), 0.1 * std::sin(2 * t)});
    }
    BoundaryProblem p;
    p.gamma = Curve::from_polyline(poly);
    double L = p.gamma.period();
    p.anchors = {0.0, L / 3, 2 * L / 3};
    auto disk = build_disk(48, 8);
    auto st = solve(p, disk, {});
    CHECK(st.converged);
    CHECK(st.area <= st.energy + 1e-12);
    CHECK(st.area > 2.9);  // close to the flat disk spanned by a near-circle
}
