#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "minsurf/expr.hpp"

using minsurf::cplx;
using minsurf::expr::ComplexExpr;
using minsurf::expr::local_order;

namespace {

bool close(cplx a, cplx b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

// independent slope-fit oracle: least squares of log|f| against log r
double slope_oracle(const ComplexExpr& f, cplx p) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int k = 0; k < 13; ++k) {
        double r = std::pow(10.0, -2.0 - 3.0 * k / 12.0);
        double acc = 0;
        for (int j = 0; j < 4; ++j)
            acc += std::log(std::abs(f.eval(p + std::polar(r, 0.2 + j * M_PI / 2))));
        double x = std::log(r), y = acc / 4;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// random expression trees of bounded depth
std::string random_expr_text(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 8);
    std::uniform_real_distribution<double> num(0.2, 3.0);
    switch (pick(rng)) {
        case 0: return "z";
        case 1: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", num(rng));
            return buf;
        }
        case 2: return "i";
        case 3: return "(" + random_expr_text(rng, depth - 1) + " + " + random_expr_text(rng, depth - 1) + ")";
        case 4: return "(" + random_expr_text(rng, depth - 1) + " - " + random_expr_text(rng, depth - 1) + ")";
        case 5: return "(" + random_expr_text(rng, depth - 1) + ")*(" + random_expr_text(rng, depth - 1) + ")";
        case 6: return "(" + random_expr_text(rng, depth - 1) + ")/(" + random_expr_text(rng, depth - 1) + ")";
        case 7: return "exp(" + random_expr_text(rng, depth - 1) + ")";
        default: {
            std::uniform_int_distribution<int> e(1, 3);
            return "(" + random_expr_text(rng, depth - 1) + ")^" + std::to_string(e(rng));
        }
    }
}

}  // namespace

TEST_CASE("parse and eval basic expressions") {
    CHECK(close(ComplexExpr::parse("z").eval(cplx(2, 1)), cplx(2, 1)));
    CHECK(close(ComplexExpr::parse("1/z").eval(cplx(2, 0)), cplx(0.5, 0)));
    CHECK(close(ComplexExpr::parse("exp(i*z)").eval(cplx(0, 0)), cplx(1, 0)));
    CHECK(close(ComplexExpr::parse("z^2").eval(cplx(1, 1)), cplx(0, 2)));
    CHECK(close(ComplexExpr::parse("(1/z - z)/2").eval(cplx(1, 0)), cplx(0, 0)));
    CHECK(close(ComplexExpr::parse("exp(i*z)").eval(cplx(M_PI, 0)), cplx(-1, 0), 1e-12));
}

TEST_CASE("derivative values") {
    CHECK(close(ComplexExpr::parse("z^3").eval_derivative(cplx(2, 0)), cplx(12, 0)));
    CHECK(close(ComplexExpr::parse("exp(i*z)").eval_derivative(cplx(0, 0)), cplx(0, 1)));
    CHECK(close(ComplexExpr::parse("1/z").eval_derivative(cplx(1, 0)), cplx(-1, 0)));
}

TEST_CASE("derivative tree agrees with forward mode") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        auto e = ComplexExpr::parse(random_expr_text(rng, 4));
        auto d = e.derivative();
        std::uniform_real_distribution<double> pos(-1.5, 1.5);
        cplx z(pos(rng), pos(rng));
        cplx a = e.eval_derivative(z), b = d.eval(z);
        if (std::isfinite(std::abs(a)) && std::isfinite(std::abs(b)) && std::abs(a) < 1e8)
            CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("1000 random derivative checks against central differences") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> pos(-2.0, 2.0);
    const double h = 1e-5;
    int checked = 0;
    while (checked < 1000) {
        auto e = ComplexExpr::parse(random_expr_text(rng, 5));
        for (int k = 0; k < 5 && checked < 1000; ++k) {
            cplx z(pos(rng), pos(rng));
            cplx f0 = e.eval(z), fp = e.eval(z + h), fm = e.eval(z - h);
            cplx d = e.eval_derivative(z);
            double mag = std::max({std::abs(f0), std::abs(fp), std::abs(fm), std::abs(d)});
            if (!std::isfinite(mag) || mag > 1e6 || mag == 0) continue;  // too near a pole
            cplx fd = (fp - fm) / (2.0 * h);
            CHECK(std::abs(fd - d) <= 1e-6 * std::max(1.0, std::abs(d)));
            ++checked;
        }
    }
}

TEST_CASE("parse-format-parse is a fixed point") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> pos(-2.0, 2.0);
    for (int trial = 0; trial < 40; ++trial) {
        auto e = ComplexExpr::parse(random_expr_text(rng, 4));
        auto e2 = ComplexExpr::parse(e.format());
        auto d2 = ComplexExpr::parse(e.derivative().format());
        for (int k = 0; k < 100 / 40 + 3; ++k) {
            cplx z(pos(rng), pos(rng));
            cplx a = e.eval(z), b = e2.eval(z);
            if (std::isfinite(std::abs(a)))
                CHECK(a == b);  // identical trees evaluate bit-identically
            cplx da = e.derivative().eval(z), db = d2.eval(z);
            if (std::isfinite(std::abs(da))) CHECK(da == db);
        }
    }
}

TEST_CASE("local order of monomials") {
    for (int k = -5; k <= 5; ++k) {
        if (k == 0) continue;
        std::string text = k > 0 ? "z^" + std::to_string(k) : "z^-" + std::to_string(-k);
        CHECK(local_order(ComplexExpr::parse(text), cplx(0, 0)) == k);
    }
}

TEST_CASE("local order with analytic factor, against the slope oracle") {
    auto f = ComplexExpr::parse("z^2*exp(z)");
    double slope = slope_oracle(f, cplx(0, 0));
    CHECK(std::fabs(slope - 2.0) < 0.1);
    CHECK(local_order(f, cplx(0, 0)) == 2);

    auto g = ComplexExpr::parse("(1/z)*exp(z)");
    CHECK(local_order(g, cplx(0, 0)) == -1);
}

TEST_CASE("local order rejects non-meromorphic behavior") {
    // exp(1/z) has an essential singularity: log|f| is not linear in log r
    auto f = ComplexExpr::parse("exp(1/z)");
    CHECK_THROWS_AS((void)local_order(f, cplx(0, 0)), minsurf::expr::OrderProbeError);
}

TEST_CASE("parse errors carry byte offsets") {
    try {
        ComplexExpr::parse("z + foo(z)");
        CHECK(false);
    } catch (const minsurf::expr::ParseError& e) {
        CHECK(e.offset == 4);
    }
    try {
        ComplexExpr::parse("z^x");
        CHECK(false);
    } catch (const minsurf::expr::ParseError& e) {
        CHECK(e.offset == 2);
    }
    CHECK_THROWS_AS(ComplexExpr::parse("2 +"), minsurf::expr::ParseError);
    CHECK_THROWS_AS(ComplexExpr::parse("(z"), minsurf::expr::ParseError);
}

TEST_CASE("pole hit reporting") {
    auto f = ComplexExpr::parse("1/z");
    CHECK_THROWS_AS((void)f.eval_checked(cplx(0, 0)), minsurf::expr::PoleHit);
    CHECK(close(f.eval_checked(cplx(2, 0)), cplx(0.5, 0)));
}

TEST_CASE("multivariable expressions for fields") {
    std::vector<std::string> vars = {"x", "y", "z"};
    auto f = ComplexExpr::parse("x*y - 2*z", vars);
    cplx at[3] = {cplx(2, 0), cplx(3, 0), cplx(0.5, 0)};
    CHECK(close(f.eval(std::span<const cplx>(at, 3)), cplx(5, 0)));
    CHECK(close(f.eval_with_derivative(std::span<const cplx>(at, 3), 1).second, cplx(2, 0)));
}

TEST_CASE("constants fold and detect") {
    cplx v;
    CHECK(ComplexExpr::parse("2*(3+i)").is_constant(&v));
    CHECK(close(v, cplx(6, 2)));
    // detection is syntactic: "z-z" still counts as variable-dependent
    CHECK(ComplexExpr::parse("z-z").is_constant(nullptr) == false);
}
