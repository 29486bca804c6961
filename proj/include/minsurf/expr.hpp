#pragma once

#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "minsurf/geometry.hpp"

namespace minsurf::expr {

struct ParseError : std::runtime_error {
    size_t offset;  // byte offset into the source text
    ParseError(const std::string& msg, size_t off)
        : std::runtime_error(msg + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

struct PoleHit : std::runtime_error {
    cplx at;
    explicit PoleHit(cplx z)
        : std::runtime_error("expression hit a pole during evaluation"), at(z) {}
};

struct OrderProbeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
struct Node;
using NodePtr = std::shared_ptr<const Node>;
}

// Immutable expression tree over one or more complex variables.
// Default grammar variable is "z"; callers may supply other variable sets
// (used for vectorfields of (x,y,z) and curve parameters).
class ComplexExpr {
public:
    ComplexExpr() = default;

    static ComplexExpr parse(std::string_view text);
    static ComplexExpr parse(std::string_view text, const std::vector<std::string>& vars);

    bool empty() const { return root_ == nullptr; }

    // Plain evaluation; division by zero etc. yields non-finite components.
    cplx eval(cplx z) const;
    cplx eval(std::span<const cplx> vars) const;

    // As eval, but reports a pole-hit for non-finite results.
    cplx eval_checked(cplx z) const;

    // Value of the derivative tree, computed in one forward-mode pass.
    cplx eval_derivative(cplx z, int wrt = 0) const;
    std::pair<cplx, cplx> eval_with_derivative(std::span<const cplx> vars, int wrt = 0) const;

    // Explicit derivative tree; every node class is closed under this.
    ComplexExpr derivative(int wrt = 0) const;

    // Unparse; reparsing the result yields an identically evaluating tree.
    std::string format() const;

    // True if the tree contains no variable; value written to *out if given.
    bool is_constant(cplx* out = nullptr) const;

    int num_vars() const { return (int)vars_.size(); }
    const std::vector<std::string>& variables() const { return vars_; }

private:
    ComplexExpr(detail::NodePtr root, std::vector<std::string> vars)
        : root_(std::move(root)), vars_(std::move(vars)) {}

    detail::NodePtr root_;
    std::vector<std::string> vars_;
};

enum class PointKind { zero, pole, unknown };

struct SpecialPoint {
    cplx location;
    PointKind kind = PointKind::unknown;
};

// Signed zero/pole order of f at p (positive = zero of that order, negative
// = pole), from the least-squares slope of log|f| against log|z-p| over a
// geometrically shrinking radius ladder 1e-2 .. 1e-5.  Throws OrderProbeError
// when the slope is farther than 0.1 from an integer.
int local_order(const ComplexExpr& f, cplx p);

}  // namespace minsurf::expr
