#pragma once

#include "isar/complex_matrix.hpp"

namespace isar {

/// Thin SVD A = U diag(S) V^H with S non-increasing and U, V having
/// orthonormal columns. Real inputs yield real factors up to phase.
struct SvdFactors {
    ComplexMatrix u;         // m x k
    std::vector<double> s;   // k, non-increasing, >= 0
    ComplexMatrix v;         // n x k
};

/// One-sided Jacobi SVD. Throws on non-convergence after the internal
/// sweep cap.
SvdFactors svd(const ComplexMatrix& a);

/// Nuclear-norm proximal step: U diag(max(S - tau, 0)) V^H.
ComplexMatrix shrink_singular(const ComplexMatrix& a, double tau);
RealMatrix shrink_singular(const RealMatrix& a, double tau);

double nuclear_norm(const ComplexMatrix& a);
double spectral_norm(const ComplexMatrix& a);

ComplexMatrix to_complex(const RealMatrix& m);
RealMatrix real_part(const ComplexMatrix& m);

}  // namespace isar
