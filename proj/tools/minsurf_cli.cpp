// minsurf: generate minimal surfaces from Weierstrass data, solve disk-type
// Plateau problems, and run the verification battery on meshes.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "minsurf/parallel.hpp"
#include "minsurf/quadrature.hpp"
#include "minsurf/plateau.hpp"
#include "minsurf/verify.hpp"
#include "minsurf/weierstrass.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace minsurf;

namespace {

constexpr int EXIT_OK = 0, EXIT_CHECK_FAIL = 1, EXIT_INPUT = 2, EXIT_NUMERIC = 3;

double round12(double v) {
    if (!std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

struct NamedSurface {
    bool is_mesh = false;  // plane_disk / holomorphic_curve return meshes directly
    weierstrass::WeierstrassData data;
    mesh::TriMesh mesh;
};

NamedSurface make_catalog(const std::string& name, int nu, int nv, double extent) {
    NamedSurface out;
    if (name == "catenoid") {
        out.data = weierstrass::catenoid_data(extent > 0 ? extent : 2.0, nu > 0 ? nu : 96,
                                              nv > 0 ? nv : 48);
    } else if (name == "helicoid") {
        out.data = weierstrass::helicoid_data(extent > 0 ? extent : 1.0, nu > 0 ? nu : 96,
                                              nv > 0 ? nv : 32);
    } else if (name == "enneper") {
        out.data = weierstrass::enneper_data(extent > 0 ? extent : 1.0, nu > 0 ? nu : 64);
    } else if (name == "plane_disk") {
        out.is_mesh = true;
        out.mesh = weierstrass::plane_disk(extent > 0 ? extent : 1.0, nu > 0 ? nu : 64,
                                           nv > 0 ? nv : 16);
    } else if (name.rfind("holomorphic_curve", 0) == 0) {
        int n = 2;
        auto lp = name.find('(');
        if (lp != std::string::npos) n = std::atoi(name.c_str() + lp + 1);
        if (n < 1) throw weierstrass::WeierstrassError("holomorphic_curve needs n >= 1");
        out.is_mesh = true;
        out.mesh = weierstrass::holomorphic_curve(n, extent > 0 ? extent : 4.0,
                                                  nu > 0 ? nu : 128, nv > 0 ? nv : 64);
    } else {
        throw weierstrass::WeierstrassError(
            "unknown catalog name '" + name +
            "' (catenoid | helicoid | enneper | plane_disk | holomorphic_curve(n))");
    }
    return out;
}

bool parse_res(const std::string& res, int* nu, int* nv) {
    if (res.empty()) return true;
    auto x = res.find('x');
    if (x == std::string::npos) return false;
    *nu = std::atoi(res.substr(0, x).c_str());
    *nv = std::atoi(res.substr(x + 1).c_str());
    return *nu > 0 && *nv > 0;
}

void print_mesh_stats(const mesh::TriMesh& m) {
    auto dd = mesh::angle_defect_curvature(m);
    double blen = 0;
    for (auto [a, b] : mesh::boundary_edges(m)) blen += dist(m.vertices[a], m.vertices[b]);
    std::printf("vertices: %zu  faces: %zu  dim: %d\n", m.vertex_count(), m.face_count(), m.dim);
    std::printf("area: %.12g\n", round12(mesh::area(m)));
    std::printf("total_curvature: %.12g  (4pi = %.12g)\n", round12(dd.total_curvature),
                round12(4.0 * M_PI));
    std::printf("boundary_length: %.12g\n", round12(blen));
}

// ---- generate ------------------------------------------------------------------

struct GenerateOpts {
    std::string name, data_file, out_dir = ".", res;
    double extent = -1;
};

int run_generate(const GenerateOpts& opt) {
    int nu = -1, nv = -1;
    if (!parse_res(opt.res, &nu, &nv)) {
        std::fprintf(stderr, "error: --res expects NUxNV\n");
        return EXIT_INPUT;
    }
    NamedSurface surf;
    std::string stem;
    if (!opt.data_file.empty()) {
        surf.data = weierstrass::load_data_json(opt.data_file);
        if (nu > 0) {
            surf.data.domain.nu = nu;
            surf.data.domain.nv = nv;
        }
        stem = fs::path(opt.data_file).stem().string();
    } else {
        surf = make_catalog(opt.name, nu, nv, opt.extent);
        stem = opt.name.substr(0, opt.name.find('('));
    }

    mesh::TriMesh m;
    if (surf.is_mesh) {
        m = surf.mesh;
    } else {
        weierstrass::check_admissible(surf.data);
        for (const auto& p : surf.data.special_points) {
            bool punct = false;
            for (const auto& q : surf.data.domain.punctures)
                if (std::abs(q.location - p.location) < 1e-12) punct = true;
            if (punct) {
                std::printf("special point (%g, %g): puncture, excluded from the domain\n",
                            p.location.real(), p.location.imag());
                continue;
            }
            auto c = weierstrass::classify_branch(surf.data, p);
            if (c.kind == weierstrass::BranchClassification::Kind::Immersed)
                std::printf("special point (%g, %g): immersed (m=%d, k=%d)\n", p.location.real(),
                            p.location.imag(), c.m, c.k);
            else
                std::printf("special point (%g, %g): branch point of order %d (m=%d, k=%d)\n",
                            p.location.real(), p.location.imag(), c.branch_order, c.m, c.k);
        }
        m = weierstrass::tessellate(surf.data);
    }

    fs::create_directories(opt.out_dir);
    std::string ply = (fs::path(opt.out_dir) / (stem + ".ply")).string();
    mesh::save_ply(m, ply);
    std::printf("wrote %s\n", ply.c_str());
    if (m.dim == 3) {
        std::string obj = (fs::path(opt.out_dir) / (stem + ".obj")).string();
        mesh::save_obj(m, obj);
        std::printf("wrote %s\n", obj.c_str());
    }
    print_mesh_stats(m);
    return EXIT_OK;
}

// ---- solve ----------------------------------------------------------------------

struct SolveOpts {
    std::string problem_file, out_dir = ".";
    int restarts = 1;
    std::uint64_t seed = 0;
};

void ensure_keys(const json& j, std::initializer_list<const char*> allowed,
                 const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw plateau::PlateauError("unknown key '" + it.key() + "' in " + where);
    }
}

int run_solve(const SolveOpts& opt) {
    std::ifstream in(opt.problem_file);
    if (!in) {
        std::fprintf(stderr, "error: cannot open %s\n", opt.problem_file.c_str());
        return EXIT_INPUT;
    }
    json j;
    in >> j;
    ensure_keys(j, {"curve", "anchors", "n_boundary", "n_rings", "tol", "max_iters"},
                opt.problem_file);

    plateau::BoundaryProblem problem;
    const json& c = j.at("curve");
    if (c.contains("points")) {
        ensure_keys(c, {"points"}, "curve");
        mesh::Polyline poly;
        poly.closed = true;
        for (const auto& p : c.at("points"))
            poly.points.push_back({p.at(0), p.at(1), p.size() > 2 ? (double)p.at(2) : 0.0});
        problem.gamma = plateau::Curve::from_polyline(std::move(poly));
    } else {
        ensure_keys(c, {"x", "y", "z", "period"}, "curve");
        problem.gamma = plateau::Curve::from_exprs(c.at("x"), c.at("y"), c.at("z"),
                                                   c.at("period"));
    }
    const json& anchors = j.at("anchors");
    problem.anchors = {anchors.at(0), anchors.at(1), anchors.at(2)};

    int nb = j.value("n_boundary", 96), nr = j.value("n_rings", 16);
    plateau::SolveConfig cfg;
    cfg.tol = j.value("tol", 1e-9);
    cfg.max_iters = j.value("max_iters", 2000);
    cfg.restarts = opt.restarts;
    cfg.seed = opt.seed;

    plateau::DiskMesh disk = plateau::build_disk(nb, nr);
    auto st = plateau::solve(problem, disk, cfg);
    if (!st.converged) {
        std::fprintf(stderr, "solver did not converge within max_iters; partial state written\n");
    }

    auto cl = plateau::courant_lebesgue_check(disk, st.positions, {0.0, 0.0});
    fs::create_directories(opt.out_dir);
    std::string ply = (fs::path(opt.out_dir) / "solution.ply").string();
    mesh::save_ply(plateau::to_mesh(disk, st.positions), ply);

    json rep;
    rep["energy"] = round12(st.energy);
    rep["area"] = round12(st.area);
    rep["gap"] = round12(st.energy - st.area);
    rep["iterations"] = st.iterations;
    rep["converged"] = st.converged;
    rep["clamped_gaps"] = st.clamped_gaps;
    rep["cl_check"] = {{"integral_lhs", round12(cl.integral_lhs)},
                       {"integral_rhs", round12(cl.integral_rhs)},
                       {"min_lhs", round12(cl.min_lhs)},
                       {"min_rhs", round12(cl.min_rhs)},
                       {"ok", cl.ok}};
    std::string report_path = (fs::path(opt.out_dir) / "report.json").string();
    std::ofstream out(report_path);
    out << rep.dump(2) << "\n";
    std::printf("wrote %s and %s\n", ply.c_str(), report_path.c_str());
    std::printf("energy: %.12g  area: %.12g  gap: %.12g  iterations: %d\n", round12(st.energy),
                round12(st.area), round12(st.energy - st.area), st.iterations);
    if (opt.restarts > 1) {
        for (size_t k = 0; k < st.restart_energies.size(); ++k)
            std::printf("restart %zu: energy %.12g\n", k, round12(st.restart_energies[k]));
        std::printf("best of %d restarts reported\n", opt.restarts);
    }
    return st.converged ? EXIT_OK : EXIT_NUMERIC;
}

// ---- verify ----------------------------------------------------------------------

struct VerifyOpts {
    std::string mesh_file;
    std::string checks = "all";
    std::string center;  // "x,y,z" or "auto"
    std::string radii;   // "lo:hi:count"
    std::string field = "x,y,z";
    std::string format = "table";
    std::string out_file;
    int eigs = 4;
    double pogorelov_radius = 0;
};

bool parse_vec(const std::string& s, Vec* out) {
    double x, y, z;
    if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &x, &y, &z) != 3) return false;
    *out = {x, y, z};
    return true;
}

std::vector<double> parse_radii(const std::string& s) {
    double lo, hi;
    int count;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 2 || lo <= 0 ||
        hi <= lo)
        throw verify::VerifyError("--radii expects lo:hi:count");
    std::vector<double> r(count);
    for (int i = 0; i < count; ++i) r[i] = lo + (hi - lo) * i / (count - 1);
    return r;
}

int run_verify(const VerifyOpts& opt) {
    mesh::TriMesh m = mesh::import_mesh(opt.mesh_file);
    mesh::validate(m);

    Vec center;
    bool have_center = false;
    if (!opt.center.empty() && parse_vec(opt.center, &center)) have_center = true;

    // default center: interior vertex nearest the vertex centroid
    auto dd = mesh::angle_defect_curvature(m);
    Vec centroid;
    for (const Vec& v : m.vertices) centroid += v;
    centroid = centroid / (double)m.vertices.size();
    int center_vertex = -1;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < m.vertices.size(); ++i) {
        if (dd.on_boundary[i]) continue;
        double d = dist(m.vertices[i], have_center ? center : centroid);
        if (d < best) {
            best = d;
            center_vertex = (int)i;
        }
    }
    if (!have_center && center_vertex >= 0) center = m.vertices[center_vertex];

    std::vector<double> radii;
    if (!opt.radii.empty()) radii = parse_radii(opt.radii);
    else {
        double scale = std::max(m.bbox_scale(), 1e-9);
        for (int i = 0; i < 24; ++i) radii.push_back(scale * (0.02 + 0.5 * i / 23.0));
    }

    std::vector<std::string> names;
    {
        std::string all = "first_variation,divergence,density,extended_density,"
                          "boundary_distance,eww,isoperimetric,jacobi,pogorelov,"
                          "intrinsic_density,curvature_estimate";
        std::stringstream ss(opt.checks == "all" ? all : opt.checks);
        std::string item;
        while (std::getline(ss, item, ',')) names.push_back(item);
    }

    Vec field_x;
    std::array<std::string, 3> field = {"x", "y", "z"};
    {
        std::stringstream ss(opt.field);
        std::string item;
        int c = 0;
        while (std::getline(ss, item, ',') && c < 3) field[c++] = item;
    }

    double pog_R = opt.pogorelov_radius;
    if (pog_R <= 0 && center_vertex >= 0) {
        int src[1] = {center_vertex};
        auto r = mesh::geodesic_distance_unfolded(m, src);
        double r_bnd = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < m.vertices.size(); ++i)
            if (dd.on_boundary[i]) r_bnd = std::min(r_bnd, r[i]);
        pog_R = 0.6 * r_bnd;
    }

    auto dispatch = [&](const std::string& name) -> verify::VerificationReport {
        if (name == "first_variation") return verify::first_variation_check(m, field);
        if (name == "divergence") return verify::divergence_identity_check(m);
        if (name == "divergence_correction") return verify::divergence_correction_check(m);
        if (name == "density") return verify::density_report(verify::density_profile(m, center, radii));
        if (name == "extended_density")
            return verify::extended_density_report(
                verify::extended_density_profile(m, center, radii));
        if (name == "boundary_distance") return verify::boundary_distance_check(m);
        if (name == "eww") return verify::eww_diagnostic(m, center);
        if (name == "isoperimetric") return verify::isoperimetric_check(m);
        if (name == "jacobi") return verify::jacobi_report(m, opt.eigs);
        if (name == "pogorelov") return verify::pogorelov_check(m, center_vertex, pog_R);
        if (name == "intrinsic_density") return verify::intrinsic_density_check(m, center_vertex);
        if (name == "curvature_estimate") return verify::curvature_stat_report(m);
        throw std::invalid_argument(
            "unknown check '" + name +
            "'; available: first_variation divergence divergence_correction density "
            "extended_density boundary_distance eww isoperimetric jacobi pogorelov "
            "intrinsic_density curvature_estimate");
    };

    // a check whose precondition the mesh does not meet is reported, not fatal
    auto run_one = [&](const std::string& name) -> verify::VerificationReport {
        try {
            return dispatch(name);
        } catch (const verify::VerifyError& e) {
            verify::VerificationReport rep;
            rep.check = name;
            rep.verdict = verify::Verdict::informative;
            rep.details = std::string("not applicable: ") + e.what();
            return rep;
        }
    };

    // fan out concurrently, merge in fixed order
    std::vector<std::future<verify::VerificationReport>> futures;
    std::vector<verify::VerificationReport> reports(names.size());
    bool parallel = par::max_threads() > 1 && names.size() > 1;
    for (size_t i = 0; i < names.size(); ++i) {
        if (parallel)
            futures.push_back(std::async(std::launch::async, run_one, names[i]));
        else
            reports[i] = run_one(names[i]);
    }
    for (size_t i = 0; i < futures.size(); ++i) reports[i] = futures[i].get();

    std::string output = opt.format == "json" ? verify::reports_to_json(reports)
                                              : verify::reports_to_table(reports);
    if (!opt.out_file.empty()) {
        // the file always carries the structured JSON array
        std::ofstream out(opt.out_file);
        out << verify::reports_to_json(reports) << "\n";
    }
    std::fputs(output.c_str(), stdout);
    if (opt.format == "json") std::fputc('\n', stdout);

    for (const auto& r : reports)
        if (r.verdict == verify::Verdict::fail) return EXIT_CHECK_FAIL;
    return EXIT_OK;
}

// ---- deform ----------------------------------------------------------------------

struct DeformOpts {
    std::string name, data_file, out_dir = ".", thetas = "0,0.7853981633974483,1.5707963267948966";
    std::string res;
    double extent = -1;
    bool fit_catenoid = false;
};

int run_deform(const DeformOpts& opt) {
    int nu = -1, nv = -1;
    if (!parse_res(opt.res, &nu, &nv)) {
        std::fprintf(stderr, "error: --res expects NUxNV\n");
        return EXIT_INPUT;
    }
    weierstrass::WeierstrassData base;
    std::string stem;
    if (!opt.data_file.empty()) {
        base = weierstrass::load_data_json(opt.data_file);
        stem = fs::path(opt.data_file).stem().string();
    } else {
        NamedSurface s = make_catalog(opt.name, nu, nv, opt.extent);
        if (s.is_mesh) {
            std::fprintf(stderr, "error: %s has no Weierstrass data to deform\n",
                         opt.name.c_str());
            return EXIT_INPUT;
        }
        base = s.data;
        stem = opt.name;
    }

    std::vector<double> thetas;
    {
        std::stringstream ss(opt.thetas);
        std::string item;
        while (std::getline(ss, item, ',')) thetas.push_back(std::atof(item.c_str()));
    }
    if (thetas.empty()) {
        std::fprintf(stderr, "error: --thetas is empty\n");
        return EXIT_INPUT;
    }

    fs::create_directories(opt.out_dir);
    mesh::TriMesh reference = weierstrass::tessellate(base);
    for (double th : thetas) {
        auto data = weierstrass::associate(base, th);
        mesh::TriMesh m = th == 0 ? reference : weierstrass::tessellate(data);
        char suffix[32];
        std::snprintf(suffix, sizeof suffix, "_theta_%.6f", th);
        std::string ply = (fs::path(opt.out_dir) / (stem + suffix + ".ply")).string();
        mesh::save_ply(m, ply);
        auto cert = weierstrass::compare_associate(reference, m);
        std::printf("theta %.6f: edge-length deviation %.3g, Gauss-map deviation %.3g rad -> %s\n",
                    th, cert.max_edge_deviation, cert.max_normal_angle, ply.c_str());
        if (opt.fit_catenoid) {
            auto fit = weierstrass::fit_catenoid_axis(m);
            std::printf("theta %.6f: catenoid fit residual %.3g (axis %.6g, %.6g; waist %.6g)\n",
                        th, fit.max_residual, fit.axis_x, fit.axis_y, fit.waist_z);
        }
    }
    return EXIT_OK;
}

// ---- export ----------------------------------------------------------------------

int run_export(const std::string& in, const std::string& out) {
    mesh::TriMesh m = mesh::import_mesh(in);
    mesh::export_mesh(m, out);
    std::printf("wrote %s\n", out.c_str());
    return EXIT_OK;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimal-surface laboratory: Weierstrass generation, Plateau solving, "
                 "and identity verification"};
    app.require_subcommand(1);

    GenerateOpts gen;
    auto* cgen = app.add_subcommand("generate", "tessellate a catalog surface or data file");
    cgen->add_option("name", gen.name, "catalog name");
    cgen->add_option("--data", gen.data_file, "Weierstrass data JSON file");
    cgen->add_option("--res", gen.res, "grid resolution NUxNV");
    cgen->add_option("--extent", gen.extent, "domain extent (catalog-specific)");
    cgen->add_option("--out", gen.out_dir, "output directory");

    SolveOpts sol;
    auto* csol = app.add_subcommand("solve", "solve a disk-type Plateau problem");
    csol->add_option("--problem", sol.problem_file, "problem JSON file")->required();
    csol->add_option("--out", sol.out_dir, "output directory");
    csol->add_option("--restarts", sol.restarts, "independent solver restarts");
    csol->add_option("--seed", sol.seed, "seed for restart perturbations");

    VerifyOpts ver;
    auto* cver = app.add_subcommand("verify", "run verification checks on a mesh");
    cver->add_option("mesh", ver.mesh_file, "mesh file (obj/ply)")->required();
    cver->add_option("checks", ver.checks, "comma list of checks, or 'all'");
    cver->add_option("--center", ver.center, "x,y,z density/ball center ('auto' by default)");
    cver->add_option("--radii", ver.radii, "density radii lo:hi:count");
    cver->add_option("--field", ver.field, "first-variation field fx,fy,fz of (x,y,z)");
    cver->add_option("--eigs", ver.eigs, "Jacobi eigenvalue count");
    cver->add_option("--pogorelov-radius", ver.pogorelov_radius, "intrinsic ball radius");
    cver->add_option("--report-format", ver.format, "json | table");
    cver->add_option("--out", ver.out_file, "write the report here as well");

    DeformOpts def;
    auto* cdef = app.add_subcommand("deform", "sweep the associate family");
    cdef->add_option("name", def.name, "catalog name");
    cdef->add_option("--data", def.data_file, "Weierstrass data JSON file");
    cdef->add_option("--thetas", def.thetas, "comma list of associate angles");
    cdef->add_option("--res", def.res, "grid resolution NUxNV");
    cdef->add_option("--extent", def.extent, "domain extent (catalog-specific)");
    cdef->add_option("--out", def.out_dir, "output directory");
    cdef->add_flag("--fit-catenoid", def.fit_catenoid, "report the catenoid-equation fit");

    std::string exp_in, exp_out;
    auto* cexp = app.add_subcommand("export", "convert between mesh formats");
    cexp->add_option("--in", exp_in, "input mesh")->required();
    cexp->add_option("--out", exp_out, "output mesh")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? EXIT_INPUT : EXIT_OK;
    }

    try {
        if (cgen->parsed()) return run_generate(gen);
        if (csol->parsed()) return run_solve(sol);
        if (cver->parsed()) return run_verify(ver);
        if (cdef->parsed()) return run_deform(def);
        if (cexp->parsed()) return run_export(exp_in, exp_out);
    } catch (const quad::NonConvergence& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return EXIT_NUMERIC;
    } catch (const expr::PoleHit& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return EXIT_NUMERIC;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return EXIT_INPUT;
    }
    return EXIT_INPUT;
}
