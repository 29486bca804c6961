#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "minsurf/disk_mesh.hpp"
#include "minsurf/expr.hpp"
#include "minsurf/mesh.hpp"

namespace minsurf::plateau {

// Closed boundary curve, either a polyline (arclength parameter) or three
// coordinate expressions of one parameter (named z) with a period.
class Curve {
public:
    static Curve from_polyline(mesh::Polyline poly);
    static Curve from_exprs(const std::string& x, const std::string& y, const std::string& z,
                            double period);

    Vec eval(double t) const;
    Vec derivative(double t) const;
    double period() const { return period_; }
    bool is_simple(double tol) const;
    mesh::Polyline sample(int n) const;

private:
    bool parametric_ = false;
    expr::ComplexExpr fx_, fy_, fz_;
    mesh::Polyline poly_;
    std::vector<double> cumlen_;
    double period_ = 0;
};

struct BoundaryProblem {
    Curve gamma;
    std::array<double, 3> anchors{};  // parameter values pinned to thirds of the circle
};

struct SolveConfig {
    double tol = 1e-9;      // stop when the relative energy decrease falls below this
    int max_iters = 2000;
    double init_skew = 0;   // skews the initial boundary parameters (reparametrization test)
    std::uint64_t seed = 0; // drives restart perturbations
    int restarts = 1;
};

struct PlateauState {
    std::vector<double> s;       // boundary parameters, cyclically increasing
    std::vector<Vec> positions;  // all disk vertices
    double energy = 0;
    double area = 0;
    std::vector<std::array<double, 2>> conformality;  // per-face residual pair
    int iterations = 0;
    bool converged = false;
    int clamped_gaps = 0;  // times the monotonicity floor was applied
    std::vector<std::array<double, 2>> history;  // (energy, area) per accepted iterate
    std::vector<double> restart_energies;        // final energy of every restart
};

PlateauState solve(const BoundaryProblem& problem, const DiskMesh& disk,
                   const SolveConfig& config = {});

// Energy gradient with respect to the boundary parameters at state s
// (exact, by the envelope identity through the harmonic extension).
std::vector<double> boundary_gradient(const BoundaryProblem& problem, const DiskMesh& disk,
                                      std::span<const double> s);

struct CourantLebesgueReport {
    double energy = 0;
    double integral_lhs = 0;  // sampled integral of L(r)^2 / r
    double integral_rhs = 0;  // 4 pi E
    double min_lhs = 0;       // min L(r)^2 over the middle radius band
    double min_rhs = 0;       // 4 pi E / ln(b/a)
    double integral_margin = 0;
    double min_margin = 0;
    bool ok = false;
};
CourantLebesgueReport courant_lebesgue_check(const DiskMesh& disk, std::span<const Vec> F,
                                             std::array<double, 2> p);

mesh::TriMesh to_mesh(const DiskMesh& disk, std::span<const Vec> F);

}  // namespace minsurf::plateau
