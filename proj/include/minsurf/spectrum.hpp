#pragma once

#include <array>
#include <vector>

namespace minsurf::spectrum {

// Sparse symmetric operator: diagonal plus symmetric off-diagonal pairs.
struct SymmetricOp {
    int n = 0;
    std::vector<double> diag;
    std::vector<std::array<int, 2>> pairs;
    std::vector<double> offdiag;

    void apply(const std::vector<double>& x, std::vector<double>& y) const;
};

// Eigenvalues of a symmetric tridiagonal matrix (implicit QL with shifts).
std::vector<double> tridiag_eigenvalues(std::vector<double> diag, std::vector<double> sub);

// k algebraically smallest eigenvalues by Lanczos with full
// reorthogonalization; extreme Ritz values converge first, which is all the
// stability diagnostics need.
std::vector<double> smallest_eigenvalues(const SymmetricOp& A, int k, int max_steps = 300);

}  // namespace minsurf::spectrum
