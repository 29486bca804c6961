#include "minsurf/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace minsurf::spectrum {

void SymmetricOp::apply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(n, 0.0);
    for (int i = 0; i < n; ++i) y[i] = diag[i] * x[i];
    for (size_t e = 0; e < pairs.size(); ++e) {
        auto [a, b] = pairs[e];
        y[a] += offdiag[e] * x[b];
        y[b] += offdiag[e] * x[a];
    }
}

std::vector<double> tridiag_eigenvalues(std::vector<double> d, std::vector<double> e) {
    int n = (int)d.size();
    e.resize(n, 0.0);  // e[i] couples i and i+1; e[n-1] unused
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        for (;;) {
            int m = l;
            for (; m < n - 1; ++m) {
                double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= 1e-300 + 1e-15 * dd) break;
            }
            if (m == l) break;
            if (++iter > 80) throw std::runtime_error("tridiagonal QL failed to converge");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::fabs(r) : -std::fabs(r)));
            double s = 1.0, c = 1.0, p = 0.0;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i], b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if (r == 0.0 && m - 1 >= l) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

std::vector<double> smallest_eigenvalues(const SymmetricOp& A, int k, int max_steps) {
    int n = A.n;
    if (k < 1 || k > n) throw std::runtime_error("eigenvalue count out of range");
    int m = std::min(n, std::max(max_steps, 2 * k + 20));

    // deterministic pseudo-random start vector
    std::vector<double> v(n), w(n), prev(n, 0.0);
    unsigned long long state = 0x9e3779b97f4a7c15ull;
    double nrm = 0;
    for (int i = 0; i < n; ++i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        v[i] = ((double)(state >> 11) / (double)(1ull << 53)) - 0.5;
        nrm += v[i] * v[i];
    }
    nrm = std::sqrt(nrm);
    for (double& x : v) x /= nrm;

    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta;
    basis.push_back(v);
    for (int j = 0; j < m; ++j) {
        A.apply(basis[j], w);
        double a = 0;
        for (int i = 0; i < n; ++i) a += w[i] * basis[j][i];
        alpha.push_back(a);
        for (int i = 0; i < n; ++i) w[i] -= a * basis[j][i] + (j > 0 ? beta[j - 1] * basis[j - 1][i] : 0.0);
        // full reorthogonalization
        for (const auto& q : basis) {
            double proj = 0;
            for (int i = 0; i < n; ++i) proj += w[i] * q[i];
            for (int i = 0; i < n; ++i) w[i] -= proj * q[i];
        }
        double b = 0;
        for (int i = 0; i < n; ++i) b += w[i] * w[i];
        b = std::sqrt(b);
        if (b < 1e-14 || j == m - 1) break;
        beta.push_back(b);
        for (int i = 0; i < n; ++i) w[i] /= b;
        basis.push_back(w);
    }

    auto ritz = tridiag_eigenvalues(alpha, beta);
    if ((int)ritz.size() > k) ritz.resize(k);
    return ritz;
}

}  // namespace minsurf::spectrum
