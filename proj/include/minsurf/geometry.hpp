#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace minsurf {

using cplx = std::complex<double>;

// Point/vector in R^3 or R^4.  For 3-d data w stays 0, so norms and dot
// products are dimension-agnostic.
struct Vec {
    double x = 0, y = 0, z = 0, w = 0;

    Vec() = default;
    Vec(double x_, double y_, double z_, double w_ = 0) : x(x_), y(y_), z(z_), w(w_) {}

    Vec operator+(const Vec& o) const { return {x + o.x, y + o.y, z + o.z, w + o.w}; }
    Vec operator-(const Vec& o) const { return {x - o.x, y - o.y, z - o.z, w - o.w}; }
    Vec operator*(double s) const { return {x * s, y * s, z * s, w * s}; }
    Vec operator/(double s) const { return {x / s, y / s, z / s, w / s}; }
    Vec& operator+=(const Vec& o) { x += o.x; y += o.y; z += o.z; w += o.w; return *this; }
    Vec& operator-=(const Vec& o) { x -= o.x; y -= o.y; z -= o.z; w -= o.w; return *this; }

    double& operator[](int i) { return (&x)[i]; }
    double operator[](int i) const { return (&x)[i]; }
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

inline double dot(const Vec& a, const Vec& b) { return a.x * b.x + a.y * b.y + a.z * b.z + a.w * b.w; }
inline double norm2(const Vec& v) { return dot(v, v); }
inline double norm(const Vec& v) { return std::sqrt(norm2(v)); }
inline double dist(const Vec& a, const Vec& b) { return norm(a - b); }

// xyz components only; valid in R^3 contexts.
inline Vec cross(const Vec& a, const Vec& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline Vec normalized(const Vec& v) {
    double n = norm(v);
    return n > 0 ? v / n : v;
}

// Area of a triangle in R^n via the Gram determinant.
inline double triangle_area(const Vec& a, const Vec& b, const Vec& c) {
    Vec u = b - a, v = c - a;
    double g = norm2(u) * norm2(v) - dot(u, v) * dot(u, v);
    return g > 0 ? 0.5 * std::sqrt(g) : 0.0;
}

// Interior angle at vertex a of triangle (a,b,c).
inline double corner_angle(const Vec& a, const Vec& b, const Vec& c) {
    Vec u = b - a, v = c - a;
    double nu = norm(u), nv = norm(v);
    if (nu == 0 || nv == 0) return 0;
    double ca = dot(u, v) / (nu * nv);
    ca = std::fmin(1.0, std::fmax(-1.0, ca));
    return std::acos(ca);
}

// Squared distance from p to the closed triangle (a,b,c); standard region
// classification against the edge/vertex Voronoi cells.
double point_triangle_dist2(const Vec& p, const Vec& a, const Vec& b, const Vec& c);

// Squared distance from p to segment [a,b].
inline double point_segment_dist2(const Vec& p, const Vec& a, const Vec& b) {
    Vec ab = b - a;
    double t = norm2(ab) > 0 ? dot(p - a, ab) / norm2(ab) : 0.0;
    t = std::fmin(1.0, std::fmax(0.0, t));
    return norm2(p - (a + ab * t));
}

}  // namespace minsurf
