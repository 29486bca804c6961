#include "minsurf/geometry.hpp"

namespace minsurf {

double point_triangle_dist2(const Vec& p, const Vec& a, const Vec& b, const Vec& c) {
    Vec ab = b - a, ac = c - a, ap = p - a;
    double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0 && d2 <= 0) return norm2(ap);

    Vec bp = p - b;
    double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0 && d4 <= d3) return norm2(bp);

    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) {
        double t = d1 / (d1 - d3);
        return norm2(ap - ab * t);
    }

    Vec cp = p - c;
    double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0 && d5 <= d6) return norm2(cp);

    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) {
        double t = d2 / (d2 - d6);
        return norm2(ap - ac * t);
    }

    double va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
        double t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return norm2(p - (b + (c - b) * t));
    }

    // interior: distance to the supporting plane
    double denom = 1.0 / (va + vb + vc);
    double v = vb * denom, w = vc * denom;
    return norm2(p - (a + ab * v + ac * w));
}

}  // namespace minsurf
