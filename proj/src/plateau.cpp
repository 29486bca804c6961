#include "minsurf/plateau.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace minsurf::plateau {

// ---- Curve ---------------------------------------------------------------------

Curve Curve::from_polyline(mesh::Polyline poly) {
    if (!poly.closed) throw PlateauError("boundary must be a single closed curve");
    if (poly.points.size() < 3) throw PlateauError("boundary polyline needs at least 3 points");
    Curve c;
    c.poly_ = std::move(poly);
    c.cumlen_.push_back(0);
    size_t n = c.poly_.points.size();
    for (size_t i = 0; i < n; ++i) {
        double len = dist(c.poly_.points[i], c.poly_.points[(i + 1) % n]);
        if (len <= 0) throw PlateauError("boundary polyline repeats consecutive points");
        c.cumlen_.push_back(c.cumlen_.back() + len);
    }
    c.period_ = c.cumlen_.back();
    return c;
}

Curve Curve::from_exprs(const std::string& x, const std::string& y, const std::string& z,
                        double period) {
    if (period <= 0) throw PlateauError("curve period must be positive");
    Curve c;
    c.parametric_ = true;
    c.fx_ = expr::ComplexExpr::parse(x);
    c.fy_ = expr::ComplexExpr::parse(y);
    c.fz_ = expr::ComplexExpr::parse(z);
    c.period_ = period;
    return c;
}

Vec Curve::eval(double t) const {
    t -= period_ * std::floor(t / period_);
    if (parametric_) {
        cplx zt(t, 0.0);
        return {fx_.eval(zt).real(), fy_.eval(zt).real(), fz_.eval(zt).real()};
    }
    size_t n = poly_.points.size();
    auto it = std::upper_bound(cumlen_.begin(), cumlen_.end(), t);
    size_t seg = it == cumlen_.begin() ? 0 : (size_t)(it - cumlen_.begin()) - 1;
    if (seg >= n) seg = n - 1;
    double local = t - cumlen_[seg];
    const Vec &a = poly_.points[seg], &b = poly_.points[(seg + 1) % n];
    double len = cumlen_[seg + 1] - cumlen_[seg];
    return a + (b - a) * (local / len);
}

Vec Curve::derivative(double t) const {
    t -= period_ * std::floor(t / period_);
    if (parametric_) {
        cplx zt(t, 0.0);
        return {fx_.eval_derivative(zt).real(), fy_.eval_derivative(zt).real(),
                fz_.eval_derivative(zt).real()};
    }
    size_t n = poly_.points.size();
    auto it = std::upper_bound(cumlen_.begin(), cumlen_.end(), t);
    size_t seg = it == cumlen_.begin() ? 0 : (size_t)(it - cumlen_.begin()) - 1;
    if (seg >= n) seg = n - 1;
    const Vec &a = poly_.points[seg], &b = poly_.points[(seg + 1) % n];
    return normalized(b - a);
}

mesh::Polyline Curve::sample(int n) const {
    mesh::Polyline p;
    p.closed = true;
    for (int i = 0; i < n; ++i) p.points.push_back(eval(period_ * i / n));
    return p;
}

bool Curve::is_simple(double tol) const {
    return mesh::polyline_is_simple(parametric_ ? sample(256) : poly_, tol);
}

// ---- solver --------------------------------------------------------------------

namespace {

struct AnchorSetup {
    std::array<int, 3> index;
    std::array<double, 3> value;  // increasing, value[0] in [0, T)
    double period;
};

AnchorSetup make_anchors(const BoundaryProblem& problem, int n_boundary) {
    AnchorSetup a;
    a.period = problem.gamma.period();
    std::array<double, 3> t = problem.anchors;
    std::sort(t.begin(), t.end());
    double T = a.period;
    t[0] -= T * std::floor(t[0] / T);
    while (t[1] < t[0]) t[1] += T;
    while (t[2] < t[1]) t[2] += T;
    if (t[2] - t[0] >= T || t[1] == t[0] || t[2] == t[1])
        throw PlateauError("anchor parameters must be three distinct values within one period");
    a.value = t;
    a.index = {0, n_boundary / 3, 2 * n_boundary / 3};
    return a;
}

std::vector<double> initial_params(const AnchorSetup& a, int n, double skew,
                                   std::mt19937_64* rng) {
    std::vector<double> s(n);
    double ends[4] = {a.value[0], a.value[1], a.value[2], a.value[0] + a.period};
    int idx[4] = {a.index[0], a.index[1], a.index[2], n};
    for (int arc = 0; arc < 3; ++arc) {
        int i0 = idx[arc], i1 = idx[arc + 1];
        for (int i = i0; i < i1; ++i) {
            double u = (double)(i - i0) / (i1 - i0);
            if (skew != 0) u = std::pow(u, 1.0 + skew);
            s[i] = ends[arc] + u * (ends[arc + 1] - ends[arc]);
        }
    }
    if (rng) {
        std::uniform_real_distribution<double> jitter(-0.35, 0.35);
        for (int i = 0; i < n; ++i) {
            bool anchored = i == a.index[0] || i == a.index[1] || i == a.index[2];
            if (!anchored) {
                double lo = s[(i + n - 1) % n], hi = s[(i + 1) % n];
                if (hi < lo) hi += a.period;
                s[i] += jitter(*rng) * (hi - lo) * 0.5;
            }
        }
    }
    return s;
}

// clamp to cyclic monotonicity with a fixed minimum gap, anchors pinned
int project_params(std::vector<double>& s, const AnchorSetup& a, int n) {
    double gap = 1e-4 * a.period / n;
    int clamped = 0;
    double ends[4] = {a.value[0], a.value[1], a.value[2], a.value[0] + a.period};
    int idx[4] = {a.index[0], a.index[1], a.index[2], n};
    for (int arc = 0; arc < 3; ++arc) {
        int i0 = idx[arc], i1 = idx[arc + 1];
        s[i0] = ends[arc];
        double prev = ends[arc];
        for (int i = i0 + 1; i < i1; ++i) {
            if (s[i] < prev + gap) {
                s[i] = prev + gap;
                ++clamped;
            }
            prev = s[i];
        }
        double next = ends[arc + 1];
        for (int i = i1 - 1; i > i0; --i) {
            if (s[i] > next - gap) {
                s[i] = next - gap;
                ++clamped;
            }
            next = s[i];
        }
    }
    return clamped;
}

std::vector<Vec> boundary_positions(const Curve& gamma, std::span<const double> s) {
    std::vector<Vec> b(s.size());
    for (size_t i = 0; i < s.size(); ++i) b[i] = gamma.eval(s[i]);
    return b;
}

std::vector<double> gradient_at(const BoundaryProblem& problem, const DiskMesh& disk,
                                std::span<const double> s, const std::vector<Vec>& F,
                                const AnchorSetup& a) {
    auto LF = disk.laplacian(F);
    const auto& bnd = disk.boundary();
    std::vector<double> g(s.size(), 0.0);
    for (size_t i = 0; i < s.size(); ++i) g[i] = dot(LF[bnd[i]], problem.gamma.derivative(s[i]));
    for (int k = 0; k < 3; ++k) g[a.index[k]] = 0;
    return g;
}

}  // namespace

std::vector<double> boundary_gradient(const BoundaryProblem& problem, const DiskMesh& disk,
                                      std::span<const double> s) {
    AnchorSetup a = make_anchors(problem, disk.n_boundary());
    auto F = disk.harmonic_extend(boundary_positions(problem.gamma, s));
    return gradient_at(problem, disk, s, F, a);
}

PlateauState solve(const BoundaryProblem& problem, const DiskMesh& disk,
                   const SolveConfig& config) {
    if (!problem.gamma.is_simple(1e-9)) throw PlateauError("boundary curve is not simple");
    const int n = disk.n_boundary();
    AnchorSetup anchors = make_anchors(problem, n);

    std::mt19937_64 rng(config.seed);
    std::optional<PlateauState> best;
    std::vector<double> restart_energies;

    for (int restart = 0; restart < std::max(1, config.restarts); ++restart) {
        PlateauState st;
        st.s = initial_params(anchors, n, config.init_skew, restart > 0 ? &rng : nullptr);
        st.clamped_gaps += project_params(st.s, anchors, n);

        std::vector<Vec> F = disk.harmonic_extend(boundary_positions(problem.gamma, st.s));
        double E = energy(disk, F);
        double A = map_area(disk, F);
        st.history.push_back({E, A});

        double step = problem.gamma.period() / (2.0 * M_PI * n);
        for (int it = 0; it < config.max_iters; ++it) {
            auto g = gradient_at(problem, disk, st.s, F, anchors);
            double g2 = 0;
            for (double v : g) g2 += v * v;
            if (g2 == 0) {
                st.converged = true;
                break;
            }

            // backtracking on the Armijo condition; among admissible steps,
            // prefer one that also keeps the energy-area gap nonincreasing
            struct Candidate {
                std::vector<double> s;
                std::vector<Vec> F;
                double E, A, step;
                int clamped;
                bool valid = false;
            } armijo, both;
            double trial_step = step;
            for (int half = 0; half < 45 && !both.valid; ++half) {
                Candidate cand;
                cand.s = st.s;
                for (int i = 0; i < n; ++i) cand.s[i] -= trial_step * g[i];
                cand.clamped = project_params(cand.s, anchors, n);
                cand.F = disk.harmonic_extend(boundary_positions(problem.gamma, cand.s));
                cand.E = energy(disk, cand.F);
                cand.A = map_area(disk, cand.F);
                cand.step = trial_step;
                if (cand.E <= E - 1e-4 * trial_step * g2) {
                    cand.valid = true;
                    if (cand.E - cand.A <= E - A) both = cand;
                    else if (!armijo.valid) armijo = cand;
                }
                trial_step *= 0.5;
                if (armijo.valid && half > 24) break;
            }
            Candidate& chosen = both.valid ? both : armijo;
            if (!chosen.valid) {
                st.converged = true;
                break;
            }
            st.s = std::move(chosen.s);
            F = std::move(chosen.F);
            st.clamped_gaps += chosen.clamped;
            double decrease = E - chosen.E;
            E = chosen.E;
            A = chosen.A;
            step = chosen.step * 2.0;
            ++st.iterations;
            st.history.push_back({E, A});
            if (decrease < config.tol * std::max(E, 1e-300)) {
                st.converged = true;
                break;
            }
        }

        st.positions = std::move(F);
        st.energy = E;
        st.area = map_area(disk, st.positions);
        st.conformality = conformality_residual(disk, st.positions);
        restart_energies.push_back(st.energy);
        if (!best || st.energy < best->energy) best = std::move(st);
    }
    best->restart_energies = std::move(restart_energies);
    return *best;
}

CourantLebesgueReport courant_lebesgue_check(const DiskMesh& disk, std::span<const Vec> F,
                                             std::array<double, 2> p) {
    CourantLebesgueReport rep;
    rep.energy = energy(disk, F);

    double rmax = 0.98 * (1.0 - std::hypot(p[0], p[1]));
    if (rmax <= 0) throw PlateauError("Courant-Lebesgue center must lie inside the disk");
    constexpr int n_radii = 64, n_samples = 256;
    std::vector<double> radii(n_radii), L(n_radii);
    for (int k = 0; k < n_radii; ++k) {
        radii[k] = rmax * (k + 1) / n_radii;
        Vec prev = interpolate(disk, F, p[0] + radii[k], p[1]);
        double len = 0;
        Vec first = prev;
        for (int s = 1; s < n_samples; ++s) {
            double th = 2.0 * M_PI * s / n_samples;
            Vec cur = interpolate(disk, F, p[0] + radii[k] * std::cos(th),
                                  p[1] + radii[k] * std::sin(th));
            len += dist(prev, cur);
            prev = cur;
        }
        len += dist(prev, first);
        L[k] = len;
    }

    // trapezoid over the sampled radii (the r -> 0 part only adds to the bound's margin)
    double integral = 0;
    for (int k = 0; k + 1 < n_radii; ++k) {
        double f0 = L[k] * L[k] / radii[k], f1 = L[k + 1] * L[k + 1] / radii[k + 1];
        integral += 0.5 * (f0 + f1) * (radii[k + 1] - radii[k]);
    }
    rep.integral_lhs = integral;
    rep.integral_rhs = 4.0 * M_PI * rep.energy;

    double a = 0.25 * rmax, b = 0.75 * rmax;
    double min_l2 = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_radii; ++k)
        if (radii[k] >= a && radii[k] <= b) min_l2 = std::min(min_l2, L[k] * L[k]);
    rep.min_lhs = min_l2;
    rep.min_rhs = 4.0 * M_PI * rep.energy / std::log(b / a);

    rep.integral_margin = (rep.integral_rhs - rep.integral_lhs) / rep.integral_rhs;
    rep.min_margin = (rep.min_rhs - rep.min_lhs) / rep.min_rhs;
    rep.ok = rep.integral_lhs <= rep.integral_rhs && rep.min_lhs <= rep.min_rhs;
    return rep;
}

mesh::TriMesh to_mesh(const DiskMesh& disk, std::span<const Vec> F) {
    mesh::TriMesh m;
    m.dim = 3;
    m.vertices.assign(F.begin(), F.end());
    m.faces = disk.faces();
    return m;
}

}  // namespace minsurf::plateau
