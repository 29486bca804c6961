#include "minsurf/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace minsurf::expr {

namespace detail {

enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Sin, Cos, Log };

struct Node {
    Kind kind;
    cplx value;      // Const
    int var = 0;     // Var
    int ipow = 0;    // Pow exponent
    NodePtr a, b;
};

static NodePtr mk(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

static NodePtr mk_const(cplx v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->value = v;
    return n;
}

static NodePtr mk_var(int idx) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->var = idx;
    return n;
}

static NodePtr mk_pow(NodePtr a, int e) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Pow;
    n->a = std::move(a);
    n->ipow = e;
    return n;
}

// ---- evaluation -----------------------------------------------------------

static cplx ipow_eval(cplx base, int e) {
    if (e == 0) return cplx(1.0, 0.0);
    bool neg = e < 0;
    unsigned k = neg ? (unsigned)(-(long long)e) : (unsigned)e;
    cplx acc(1.0, 0.0), b = base;
    while (k) {
        if (k & 1u) acc *= b;
        b *= b;
        k >>= 1;
    }
    return neg ? cplx(1.0, 0.0) / acc : acc;
}

static cplx eval_node(const Node* n, std::span<const cplx> vars) {
    switch (n->kind) {
        case Kind::Const: return n->value;
        case Kind::Var: return vars[(size_t)n->var];
        case Kind::Add: return eval_node(n->a.get(), vars) + eval_node(n->b.get(), vars);
        case Kind::Sub: return eval_node(n->a.get(), vars) - eval_node(n->b.get(), vars);
        case Kind::Mul: return eval_node(n->a.get(), vars) * eval_node(n->b.get(), vars);
        case Kind::Div: return eval_node(n->a.get(), vars) / eval_node(n->b.get(), vars);
        case Kind::Pow: return ipow_eval(eval_node(n->a.get(), vars), n->ipow);
        case Kind::Neg: return -eval_node(n->a.get(), vars);
        case Kind::Exp: return std::exp(eval_node(n->a.get(), vars));
        case Kind::Sin: return std::sin(eval_node(n->a.get(), vars));
        case Kind::Cos: return std::cos(eval_node(n->a.get(), vars));
        case Kind::Log: return std::log(eval_node(n->a.get(), vars));
    }
    return {};
}

struct ValDer {
    cplx v, d;
};

static ValDer eval_fwd(const Node* n, std::span<const cplx> vars, int wrt) {
    switch (n->kind) {
        case Kind::Const: return {n->value, 0.0};
        case Kind::Var: return {vars[(size_t)n->var], n->var == wrt ? 1.0 : 0.0};
        case Kind::Add: {
            auto A = eval_fwd(n->a.get(), vars, wrt), B = eval_fwd(n->b.get(), vars, wrt);
            return {A.v + B.v, A.d + B.d};
        }
        case Kind::Sub: {
            auto A = eval_fwd(n->a.get(), vars, wrt), B = eval_fwd(n->b.get(), vars, wrt);
            return {A.v - B.v, A.d - B.d};
        }
        case Kind::Mul: {
            auto A = eval_fwd(n->a.get(), vars, wrt), B = eval_fwd(n->b.get(), vars, wrt);
            return {A.v * B.v, A.d * B.v + A.v * B.d};
        }
        case Kind::Div: {
            auto A = eval_fwd(n->a.get(), vars, wrt), B = eval_fwd(n->b.get(), vars, wrt);
            return {A.v / B.v, (A.d * B.v - A.v * B.d) / (B.v * B.v)};
        }
        case Kind::Pow: {
            auto A = eval_fwd(n->a.get(), vars, wrt);
            if (n->ipow == 0) return {cplx(1.0, 0.0), 0.0};
            cplx pm1 = ipow_eval(A.v, n->ipow - 1);
            return {pm1 * A.v, (double)n->ipow * pm1 * A.d};
        }
        case Kind::Neg: {
            auto A = eval_fwd(n->a.get(), vars, wrt);
            return {-A.v, -A.d};
        }
        case Kind::Exp: {
            auto A = eval_fwd(n->a.get(), vars, wrt);
            cplx e = std::exp(A.v);
            return {e, A.d * e};
        }
        case Kind::Sin: {
            auto A = eval_fwd(n->a.get(), vars, wrt);
            return {std::sin(A.v), A.d * std::cos(A.v)};
        }
        case Kind::Cos: {
            auto A = eval_fwd(n->a.get(), vars, wrt);
            return {std::cos(A.v), -A.d * std::sin(A.v)};
        }
        case Kind::Log: {
            auto A = eval_fwd(n->a.get(), vars, wrt);
            return {std::log(A.v), A.d / A.v};
        }
    }
    return {};
}

// ---- derivative tree ------------------------------------------------------

static NodePtr diff_node(const NodePtr& n, int wrt) {
    switch (n->kind) {
        case Kind::Const: return mk_const(0.0);
        case Kind::Var: return mk_const(n->var == wrt ? 1.0 : 0.0);
        case Kind::Add: return mk(Kind::Add, diff_node(n->a, wrt), diff_node(n->b, wrt));
        case Kind::Sub: return mk(Kind::Sub, diff_node(n->a, wrt), diff_node(n->b, wrt));
        case Kind::Mul:
            return mk(Kind::Add, mk(Kind::Mul, diff_node(n->a, wrt), n->b),
                      mk(Kind::Mul, n->a, diff_node(n->b, wrt)));
        case Kind::Div:
            return mk(Kind::Div,
                      mk(Kind::Sub, mk(Kind::Mul, diff_node(n->a, wrt), n->b),
                         mk(Kind::Mul, n->a, diff_node(n->b, wrt))),
                      mk_pow(n->b, 2));
        case Kind::Pow: {
            if (n->ipow == 0) return mk_const(0.0);
            return mk(Kind::Mul, mk_const((double)n->ipow),
                      mk(Kind::Mul, mk_pow(n->a, n->ipow - 1), diff_node(n->a, wrt)));
        }
        case Kind::Neg: return mk(Kind::Neg, diff_node(n->a, wrt));
        case Kind::Exp: return mk(Kind::Mul, diff_node(n->a, wrt), mk(Kind::Exp, n->a));
        case Kind::Sin: return mk(Kind::Mul, diff_node(n->a, wrt), mk(Kind::Cos, n->a));
        case Kind::Cos:
            return mk(Kind::Neg, mk(Kind::Mul, diff_node(n->a, wrt), mk(Kind::Sin, n->a)));
        case Kind::Log: return mk(Kind::Div, diff_node(n->a, wrt), n->a);
    }
    return nullptr;
}

// ---- parser ---------------------------------------------------------------

struct Parser {
    std::string_view src;
    size_t pos = 0;
    const std::vector<std::string>& vars;

    void skip_ws() {
        while (pos < src.size() && std::isspace((unsigned char)src[pos])) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }

    NodePtr parse_expr() {
        NodePtr lhs;
        if (eat('-')) lhs = mk(Kind::Neg, parse_term());
        else {
            eat('+');
            lhs = parse_term();
        }
        for (;;) {
            if (eat('+')) lhs = mk(Kind::Add, lhs, parse_term());
            else if (eat('-')) lhs = mk(Kind::Sub, lhs, parse_term());
            else return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_factor();
        for (;;) {
            if (eat('*')) lhs = mk(Kind::Mul, lhs, parse_factor());
            else if (eat('/')) lhs = mk(Kind::Div, lhs, parse_factor());
            else return lhs;
        }
    }

    NodePtr parse_factor() {
        if (eat('-')) return mk(Kind::Neg, parse_factor());
        NodePtr a = parse_atom();
        if (eat('^')) {
            skip_ws();
            bool neg = false;
            if (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) {
                neg = src[pos] == '-';
                ++pos;
            }
            if (pos >= src.size() || !std::isdigit((unsigned char)src[pos]))
                fail("expected integer exponent after '^'");
            long e = 0;
            while (pos < src.size() && std::isdigit((unsigned char)src[pos])) {
                e = e * 10 + (src[pos] - '0');
                if (e > 1000000) fail("exponent too large");
                ++pos;
            }
            return mk_pow(a, (int)(neg ? -e : e));
        }
        return a;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of expression");
        char c = src[pos];
        if (std::isdigit((unsigned char)c) || c == '.') return parse_number();
        if (c == '(') {
            ++pos;
            NodePtr inner = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (std::isalpha((unsigned char)c)) {
            size_t start = pos;
            while (pos < src.size() && std::isalnum((unsigned char)src[pos])) ++pos;
            std::string name(src.substr(start, pos - start));
            if (name == "i") return mk_const(cplx(0.0, 1.0));
            for (size_t k = 0; k < vars.size(); ++k)
                if (name == vars[k]) return mk_var((int)k);
            if (name == "exp" || name == "sin" || name == "cos" || name == "log") {
                if (!eat('(')) {
                    pos = start;
                    fail("expected '(' after function name '" + name + "'");
                }
                NodePtr arg = parse_expr();
                if (!eat(')')) fail("expected ')'");
                Kind k = name == "exp"   ? Kind::Exp
                         : name == "sin" ? Kind::Sin
                         : name == "cos" ? Kind::Cos
                                         : Kind::Log;
                return mk(k, arg);
            }
            pos = start;
            fail("unknown identifier '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        size_t start = pos;
        while (pos < src.size() && std::isdigit((unsigned char)src[pos])) ++pos;
        if (pos < src.size() && src[pos] == '.') {
            ++pos;
            while (pos < src.size() && std::isdigit((unsigned char)src[pos])) ++pos;
        }
        if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
            size_t mark = pos;
            ++pos;
            if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
            if (pos < src.size() && std::isdigit((unsigned char)src[pos])) {
                while (pos < src.size() && std::isdigit((unsigned char)src[pos])) ++pos;
            } else {
                pos = mark;  // "2e" is "2" followed by identifier
            }
        }
        if (pos == start) fail("expected number");
        std::string text(src.substr(start, pos - start));
        return mk_const(cplx(std::strtod(text.c_str(), nullptr), 0.0));
    }
};

// ---- formatting -----------------------------------------------------------

static std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

static std::string fmt_const(cplx v) {
    if (v.imag() == 0) {
        if (v.real() < 0) return "-" + fmt_double(-v.real());
        return fmt_double(v.real());
    }
    if (v.real() == 0) {
        if (v.imag() == 1) return "i";
        if (v.imag() == -1) return "-i";
        if (v.imag() < 0) return "-" + fmt_double(-v.imag()) + "*i";
        return fmt_double(v.imag()) + "*i";
    }
    std::string s = "(" + fmt_double(v.real());
    s += v.imag() < 0 ? "-" : "+";
    double a = std::fabs(v.imag());
    s += (a == 1 ? std::string("i") : fmt_double(a) + "*i") + ")";
    return s;
}

static int prec(const Node* n) {
    switch (n->kind) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 2;
        case Kind::Pow: return 3;
        default: return 4;
    }
}

static void fmt_node(const Node* n, const std::vector<std::string>& vars, std::string& out);

static void fmt_child(const Node* n, const std::vector<std::string>& vars, int parent_prec,
                      std::string& out) {
    bool paren = prec(n) < parent_prec;
    // a negative literal inside a binary expression also needs parentheses
    if (!paren && n->kind == Kind::Const && parent_prec >= 2) {
        std::string s = fmt_const(n->value);
        if (!s.empty() && s[0] == '-') paren = true;
    }
    if (paren) out += '(';
    fmt_node(n, vars, out);
    if (paren) out += ')';
}

static void fmt_node(const Node* n, const std::vector<std::string>& vars, std::string& out) {
    switch (n->kind) {
        case Kind::Const: out += fmt_const(n->value); return;
        case Kind::Var: out += vars[(size_t)n->var]; return;
        case Kind::Add:
            fmt_child(n->a.get(), vars, 1, out);
            out += " + ";
            fmt_child(n->b.get(), vars, 2, out);
            return;
        case Kind::Sub:
            fmt_child(n->a.get(), vars, 1, out);
            out += " - ";
            fmt_child(n->b.get(), vars, 2, out);
            return;
        case Kind::Mul:
            fmt_child(n->a.get(), vars, 2, out);
            out += "*";
            fmt_child(n->b.get(), vars, 3, out);
            return;
        case Kind::Div:
            fmt_child(n->a.get(), vars, 2, out);
            out += "/";
            fmt_child(n->b.get(), vars, 3, out);
            return;
        case Kind::Neg:
            out += "-";
            fmt_child(n->a.get(), vars, 3, out);
            return;
        case Kind::Pow:
            fmt_child(n->a.get(), vars, 4, out);
            out += "^";
            if (n->ipow < 0) {
                out += "-";
                out += std::to_string(-(long long)n->ipow);
            } else {
                out += std::to_string(n->ipow);
            }
            return;
        case Kind::Exp: out += "exp("; break;
        case Kind::Sin: out += "sin("; break;
        case Kind::Cos: out += "cos("; break;
        case Kind::Log: out += "log("; break;
    }
    fmt_node(n->a.get(), vars, out);
    out += ')';
}

static bool const_node(const Node* n) {
    switch (n->kind) {
        case Kind::Const: return true;
        case Kind::Var: return false;
        case Kind::Pow:
        case Kind::Neg:
        case Kind::Exp:
        case Kind::Sin:
        case Kind::Cos:
        case Kind::Log: return const_node(n->a.get());
        default: return const_node(n->a.get()) && const_node(n->b.get());
    }
}

}  // namespace detail

using namespace detail;

ComplexExpr ComplexExpr::parse(std::string_view text) {
    return parse(text, {"z"});
}

ComplexExpr ComplexExpr::parse(std::string_view text, const std::vector<std::string>& vars) {
    Parser p{text, 0, vars};
    NodePtr root = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return ComplexExpr(std::move(root), vars);
}

cplx ComplexExpr::eval(cplx z) const {
    cplx v[1] = {z};
    return eval_node(root_.get(), std::span<const cplx>(v, 1));
}

cplx ComplexExpr::eval(std::span<const cplx> vars) const {
    return eval_node(root_.get(), vars);
}

cplx ComplexExpr::eval_checked(cplx z) const {
    cplx v = eval(z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw PoleHit(z);
    return v;
}

cplx ComplexExpr::eval_derivative(cplx z, int wrt) const {
    cplx v[1] = {z};
    return eval_fwd(root_.get(), std::span<const cplx>(v, 1), wrt).d;
}

std::pair<cplx, cplx> ComplexExpr::eval_with_derivative(std::span<const cplx> vars, int wrt) const {
    auto r = eval_fwd(root_.get(), vars, wrt);
    return {r.v, r.d};
}

ComplexExpr ComplexExpr::derivative(int wrt) const {
    return ComplexExpr(diff_node(root_, wrt), vars_);
}

std::string ComplexExpr::format() const {
    std::string out;
    fmt_node(root_.get(), vars_, out);
    return out;
}

bool ComplexExpr::is_constant(cplx* out) const {
    if (!root_ || !const_node(root_.get())) return false;
    if (out) *out = eval(cplx(0.0, 0.0));
    return true;
}

int local_order(const ComplexExpr& f, cplx p) {
    // 13 radii spanning 1e-2 .. 1e-5, four probe angles each
    constexpr int n_radii = 13;
    constexpr int n_angles = 4;
    double sum_x = 0, sum_y = 0, sum_xx = 0, sum_xy = 0;
    int n = 0;
    for (int k = 0; k < n_radii; ++k) {
        double lr = -2.0 - 3.0 * k / (n_radii - 1);
        double r = std::pow(10.0, lr);
        double acc = 0;
        int good = 0;
        for (int j = 0; j < n_angles; ++j) {
            double th = 2.0 * M_PI * j / n_angles + 0.37;
            cplx v = f.eval(p + std::polar(r, th));
            double a = std::abs(v);
            if (std::isfinite(a) && a > 0) {
                acc += std::log(a);
                ++good;
            }
        }
        if (good == 0) throw OrderProbeError("expression not evaluable near probe point");
        double x = std::log(r), y = acc / good;
        sum_x += x;
        sum_y += y;
        sum_xx += x * x;
        sum_xy += x * y;
        ++n;
    }
    double denom = n * sum_xx - sum_x * sum_x;
    double slope = (n * sum_xy - sum_x * sum_y) / denom;
    double nearest = std::round(slope);
    if (std::fabs(slope - nearest) > 0.1)
        throw OrderProbeError("not meromorphic-like at p (slope " + std::to_string(slope) + ")");
    return (int)nearest;
}

}  // namespace minsurf::expr
