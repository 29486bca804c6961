#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>

#include "minsurf/geometry.hpp"

namespace minsurf::quad {

// 16-point Gauss-Legendre rule on [-1,1] (positive half; symmetric).
inline constexpr std::array<double, 8> gl16_x = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
inline constexpr std::array<double, 8> gl16_w = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// GL16 applied to f over the straight segment [a,b] in C; f returns T
// (cplx or an array of them), integrated against dz.
template <class T, class F>
T gl16_segment(F&& f, cplx a, cplx b) {
    cplx mid = 0.5 * (a + b), half = 0.5 * (b - a);
    T acc{};
    for (int i = 0; i < 8; ++i) {
        T lo = f(mid - half * gl16_x[i]);
        T hi = f(mid + half * gl16_x[i]);
        if constexpr (std::is_same_v<T, cplx>) {
            acc += gl16_w[i] * (lo + hi);
        } else {
            for (size_t k = 0; k < acc.size(); ++k) acc[k] += gl16_w[i] * (lo[k] + hi[k]);
        }
    }
    if constexpr (std::is_same_v<T, cplx>) return half * acc;
    else {
        for (auto& v : acc) v *= half;
        return acc;
    }
}

namespace detail {

template <class T>
double mag(const T& v) {
    if constexpr (std::is_same_v<T, cplx>) return std::abs(v);
    else {
        double s = 0;
        for (auto& c : v) s += std::norm(c);
        return std::sqrt(s);
    }
}

template <class T, class F>
T adaptive(F&& f, cplx a, cplx b, const T& whole, double rel_tol, double scale, int depth) {
    cplx m = 0.5 * (a + b);
    T left = gl16_segment<T>(f, a, m);
    T right = gl16_segment<T>(f, m, b);
    T sum = left;
    if constexpr (std::is_same_v<T, cplx>) sum += right;
    else
        for (size_t k = 0; k < sum.size(); ++k) sum[k] += right[k];

    T diff = sum;
    if constexpr (std::is_same_v<T, cplx>) diff -= whole;
    else
        for (size_t k = 0; k < diff.size(); ++k) diff[k] -= whole[k];

    double err = mag(diff);
    if (!std::isfinite(err)) throw NonConvergence("non-finite quadrature integrand");
    if (err <= rel_tol * std::max(scale, mag(sum)) || depth >= 30) {
        if (depth >= 30 && err > 1e3 * rel_tol * std::max(scale, mag(sum)))
            throw NonConvergence("quadrature failed to converge");
        return sum;
    }
    T l2 = adaptive(f, a, m, left, rel_tol, scale, depth + 1);
    T r2 = adaptive(f, m, b, right, rel_tol, scale, depth + 1);
    if constexpr (std::is_same_v<T, cplx>) return l2 + r2;
    else {
        for (size_t k = 0; k < l2.size(); ++k) l2[k] += r2[k];
        return l2;
    }
}

}  // namespace detail

// Composite adaptive GL16 over a straight segment, bisecting until the
// relative change drops below rel_tol.
template <class T, class F>
T integrate_segment(F&& f, cplx a, cplx b, double rel_tol = 1e-10, double scale = 0.0) {
    if (a == b) return T{};
    T whole = gl16_segment<T>(f, a, b);
    return detail::adaptive<T>(f, a, b, whole, rel_tol, scale, 0);
}

// Integral along a polyline path in C.
template <class T, class F>
T integrate_polyline(F&& f, std::span<const cplx> path, double rel_tol = 1e-10) {
    T acc{};
    double scale = 0.0;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        T seg = integrate_segment<T>(f, path[i], path[i + 1], rel_tol, scale);
        if constexpr (std::is_same_v<T, cplx>) acc += seg;
        else
            for (size_t k = 0; k < acc.size(); ++k) acc[k] += seg[k];
        scale = std::max(scale, detail::mag(acc));
    }
    return acc;
}

// Real-valued adaptive GL16 on [a,b]; for diagnostics and oracles.
template <class F>
double integrate_real(F&& f, double a, double b, double rel_tol = 1e-12) {
    auto wrap = [&](cplx z) { return cplx(f(z.real()), 0.0); };
    return integrate_segment<cplx>(wrap, cplx(a, 0), cplx(b, 0), rel_tol).real();
}

}  // namespace minsurf::quad
