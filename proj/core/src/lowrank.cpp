#include "isar/lowrank.hpp"

#include <algorithm>
#include <cmath>

namespace isar {

void SolverConfig::validate() const {
    if (max_iters < 1) throw std::invalid_argument("solver: max_iters must be >= 1");
    if (tol <= 0.0 || tol >= 1.0) throw std::invalid_argument("solver: tol must be in (0,1)");
    if (step <= 0.0) throw std::invalid_argument("solver: step must be > 0");
    if (rho <= 1.0) throw std::invalid_argument("solver: rho must be > 1");
}

namespace {

double observed_norm(const RealMatrix& m, const Mask& mask) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.data.size(); ++i)
        if (mask.observed[i]) s += m.data[i] * m.data[i];
    return std::sqrt(s);
}

double observed_norm(const ComplexMatrix& m, const Mask& mask) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.data.size(); ++i)
        if (mask.observed[i]) s += std::norm(m.data[i]);
    return std::sqrt(s);
}

}  // namespace

RealCompletion complete_nnm(const RealMatrix& m_obs, const Mask& mask, const SolverConfig& cfg) {
    cfg.validate();
    if (m_obs.rows != mask.rows || m_obs.cols != mask.cols)
        throw std::invalid_argument("complete_nnm: dimension mismatch");
    if (mask.observed_count() == 0) throw std::invalid_argument("complete_nnm: empty mask");

    const double norm_obs = observed_norm(m_obs, mask);
    const double delta = cfg.delta >= 0.0 ? cfg.delta : 1e-6 * norm_obs;
    double tau = cfg.tau >= 0.0 ? cfg.tau : norm_obs / 4.0;

    RealCompletion out;
    out.z = RealMatrix(m_obs.rows, m_obs.cols);
    RealMatrix grad(m_obs.rows, m_obs.cols);

    while (out.iterations < cfg.max_iters) {
        // residual on observed entries
        double resid = 0.0;
        for (std::size_t i = 0; i < grad.data.size(); ++i) {
            grad.data[i] = mask.observed[i] ? (m_obs.data[i] - out.z.data[i]) : 0.0;
            resid += grad.data[i] * grad.data[i];
        }
        out.observed_residual = std::sqrt(resid);
        if (out.observed_residual <= delta) {
            out.converged = true;
            return out;
        }

        RealMatrix next = out.z;
        for (std::size_t i = 0; i < next.data.size(); ++i) next.data[i] += cfg.step * grad.data[i];
        next = shrink_singular(next, tau);
        ++out.iterations;

        double diff = 0.0;
        for (std::size_t i = 0; i < next.data.size(); ++i) {
            const double d = next.data[i] - out.z.data[i];
            diff += d * d;
        }
        out.z = std::move(next);

        // continuation: once the iterate settles at the current threshold
        // (fixed-point step small relative to tau), shrink tau so the observed
        // residual can keep moving toward the fidelity bound while the
        // low-rank structure found at larger thresholds is preserved
        const double tau_floor = delta * 1e-3;
        if (std::sqrt(diff) <= 0.003 * tau) tau = std::max(tau * 0.7, tau_floor);

        // stagnation: threshold exhausted and the iterate no longer moves
        if (tau <= tau_floor && std::sqrt(diff) <= cfg.tol * std::max(frobenius_norm(out.z), 1e-300))
            break;
    }

    double resid = 0.0;
    for (std::size_t i = 0; i < out.z.data.size(); ++i)
        if (mask.observed[i]) {
            const double d = out.z.data[i] - m_obs.data[i];
            resid += d * d;
        }
    out.observed_residual = std::sqrt(resid);
    out.converged = out.observed_residual <= delta;
    return out;
}

ComplexCompletion complete_ialm(const ComplexMatrix& m_obs, const Mask& mask, const SolverConfig& cfg) {
    cfg.validate();
    if (m_obs.rows != mask.rows || m_obs.cols != mask.cols)
        throw std::invalid_argument("complete_ialm: dimension mismatch");
    if (mask.observed_count() == 0) throw std::invalid_argument("complete_ialm: empty mask");

    const double norm_obs = observed_norm(m_obs, mask);
    const double delta = cfg.delta >= 0.0 ? cfg.delta : 1e-6 * norm_obs;
    const double norm2 = spectral_norm(apply_mask(m_obs, mask));
    double mu = cfg.mu0 > 0.0 ? cfg.mu0 : (norm2 > 0.0 ? 1.0 / norm2 : 1.0);

    const std::size_t n = m_obs.data.size();
    ComplexMatrix e(m_obs.rows, m_obs.cols);
    ComplexMatrix y(m_obs.rows, m_obs.cols);
    ComplexCompletion out;
    out.z = ComplexMatrix(m_obs.rows, m_obs.cols);

    ComplexMatrix work(m_obs.rows, m_obs.cols);
    while (out.iterations < cfg.max_iters) {
        for (std::size_t i = 0; i < n; ++i)
            work.data[i] = m_obs.data[i] - e.data[i] + y.data[i] / mu;
        out.z = shrink_singular(work, 1.0 / mu);

        for (std::size_t i = 0; i < n; ++i)
            e.data[i] = mask.observed[i] ? cplx{0.0, 0.0}
                                         : m_obs.data[i] - out.z.data[i] + y.data[i] / mu;

        double resid = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx r = m_obs.data[i] - out.z.data[i] - e.data[i];
            y.data[i] += mu * r;
            resid += std::norm(r);
        }
        out.observed_residual = std::sqrt(resid);
        ++out.iterations;
        mu *= cfg.rho;

        if (out.observed_residual <= delta) {
            out.converged = true;
            break;
        }
    }

    // completion theory needs every row and column sampled; flag otherwise
    if (!mask.every_row_and_col_observed()) out.converged = false;
    return out;
}

}  // namespace isar
