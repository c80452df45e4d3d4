#pragma once

#include "isar/sampling.hpp"
#include "isar/svd.hpp"

namespace isar {

struct SolverConfig {
    double delta = -1.0;      // observed-entry fidelity; <0 means 1e-6 * ||P_Omega(M)||_F
    std::size_t max_iters = 10000;
    double tol = 1e-5;        // relative-change stagnation tolerance
    double tau = -1.0;        // NNM shrinkage threshold; <0 means ||P_Omega(M)||_F / 4
    double step = 1.0;        // NNM gradient step
    double mu0 = -1.0;        // IALM penalty init; <0 means 1 / ||P_Omega(M)||_2
    double rho = 1.1;         // IALM penalty growth

    void validate() const;
};

struct RealCompletion {
    RealMatrix z;
    bool converged = false;
    std::size_t iterations = 0;
    double observed_residual = 0.0;  // ||P_Omega(Z - M)||_F
};

struct ComplexCompletion {
    ComplexMatrix z;
    bool converged = false;
    std::size_t iterations = 0;
    double observed_residual = 0.0;
};

/// Nuclear-norm completion of a real part by singular-value-thresholded
/// proximal gradient: Z <- shrink(Z + step * P_Omega(M - Z), tau), with a
/// geometric continuation on tau down to the delta-scale so the observed
/// residual reaches the Eq.-style fidelity bound.
RealCompletion complete_nnm(const RealMatrix& m_obs, const Mask& mask, const SolverConfig& cfg);

/// Inexact augmented Lagrangian completion operating directly on complex
/// entries: Z = shrink(M - E + Y/mu, 1/mu), E fills the unobserved
/// complement, Y <- Y + mu (M - Z - E), mu <- rho mu.
ComplexCompletion complete_ialm(const ComplexMatrix& m_obs, const Mask& mask, const SolverConfig& cfg);

}  // namespace isar
