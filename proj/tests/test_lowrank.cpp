#include <doctest.h>

#include <random>

#include "isar/lowrank.hpp"

using namespace isar;

namespace {

RealMatrix rank1_real(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> u(n), v(n);
    double nu = 0.0, nv = 0.0;
    for (auto& x : u) { x = g(rng); nu += x * x; }
    for (auto& x : v) { x = g(rng); nv += x * x; }
    nu = std::sqrt(nu); nv = std::sqrt(nv);
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = (u[i] / nu) * (v[j] / nv);
    return m;
}

ComplexMatrix rank1_complex(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> u(n), v(n);
    double nu = 0.0, nv = 0.0;
    for (auto& x : u) { x = {g(rng), g(rng)}; nu += std::norm(x); }
    for (auto& x : v) { x = {g(rng), g(rng)}; nv += std::norm(x); }
    nu = std::sqrt(nu); nv = std::sqrt(nv);
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = (u[i] / nu) * std::conj(v[j] / nv);
    return m;
}

double rel_err(const RealMatrix& a, const RealMatrix& b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) e += (a.data[i] - b.data[i]) * (a.data[i] - b.data[i]);
    return std::sqrt(e) / frobenius_norm(a);
}

double rel_err(const ComplexMatrix& a, const ComplexMatrix& b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) e += std::norm(a.data[i] - b.data[i]);
    return std::sqrt(e) / frobenius_norm(a);
}

}  // namespace

TEST_CASE("solver config validation") {
    SolverConfig cfg;
    cfg.validate();  // defaults are fine
    cfg.rho = 0.9;
    CHECK_THROWS(cfg.validate());
    cfg = SolverConfig{};
    cfg.step = 0.0;
    CHECK_THROWS(cfg.validate());
}

TEST_CASE("nnm with all-true mask recovers the input") {
    const auto m = rank1_real(12, 4);
    const auto mask = gen_mask(MaskKind::pixel, 0.0, 12, 12, 0);
    const auto r = complete_nnm(m, mask, SolverConfig{});
    CHECK(r.converged);
    CHECK(rel_err(m, r.z) <= 1e-3);
}

TEST_CASE("nnm recovers a rank-1 matrix from half the pixels") {
    const auto m = rank1_real(16, 10);
    const auto mask = gen_mask(MaskKind::pixel, 0.5, 16, 16, 3);
    const auto obs = apply_mask(m, mask);
    const auto r = complete_nnm(obs, mask, SolverConfig{});
    CHECK(r.converged);
    CHECK(rel_err(m, r.z) < 1e-3);
    // the residual it reports matches a recomputation
    double res = 0.0;
    for (std::size_t i = 0; i < m.data.size(); ++i)
        if (mask.observed[i]) res += (r.z.data[i] - obs.data[i]) * (r.z.data[i] - obs.data[i]);
    CHECK(std::sqrt(res) == doctest::Approx(r.observed_residual).epsilon(1e-9));
}

TEST_CASE("nnm fails gracefully on an underdetermined problem") {
    // rank-8 16x16 with 70% missing: fundamentally unrecoverable
    std::mt19937_64 rng(19);
    std::normal_distribution<double> g(0.0, 1.0);
    RealMatrix a(16, 8), b(8, 16);
    for (auto& v : a.data) v = g(rng);
    for (auto& v : b.data) v = g(rng);
    RealMatrix m(16, 16);
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < 8; ++k) acc += a.at(i, k) * b.at(k, j);
            m.at(i, j) = acc;
        }
    const auto mask = gen_mask(MaskKind::pixel, 0.7, 16, 16, 2);
    SolverConfig cfg;
    cfg.max_iters = 2000;
    const auto r = complete_nnm(apply_mask(m, mask), mask, cfg);
    CHECK((!r.converged || rel_err(m, r.z) > 0.1));
}

TEST_CASE("ialm with all-true mask recovers the input") {
    const auto m = rank1_complex(12, 4);
    const auto mask = gen_mask(MaskKind::pixel, 0.0, 12, 12, 0);
    const auto r = complete_ialm(m, mask, SolverConfig{});
    CHECK(r.converged);
    CHECK(rel_err(m, r.z) <= 1e-3);
}

TEST_CASE("ialm recovers a complex rank-1 matrix from half the pixels") {
    const auto m = rank1_complex(16, 10);
    const auto mask = gen_mask(MaskKind::pixel, 0.5, 16, 16, 3);
    const auto r = complete_ialm(apply_mask(m, mask), mask, SolverConfig{});
    CHECK(r.converged);
    CHECK(rel_err(m, r.z) < 1e-3);
}

TEST_CASE("ialm flags column-wise masks") {
    const auto m = rank1_complex(16, 10);
    const auto mask = gen_mask(MaskKind::column, 0.5, 16, 16, 1);
    const auto r = complete_ialm(apply_mask(m, mask), mask, SolverConfig{});
    CHECK_FALSE(r.converged);
    // with whole columns missing it cannot beat zero fill
    CHECK(rel_err(m, r.z) >= 0.5 * std::sqrt(0.5));
}

TEST_CASE("nnm objective decreases monotonically") {
    // tau ||Z||_* + 0.5 ||P(Z) - P(M)||_F^2 under a fixed tau run
    const auto m = rank1_real(12, 14);
    const auto mask = gen_mask(MaskKind::pixel, 0.4, 12, 12, 6);
    const auto obs = apply_mask(m, mask);

    SolverConfig cfg;
    cfg.tau = 0.05;
    RealMatrix z(12, 12);
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 60; ++it) {
        RealMatrix step = z;
        for (std::size_t i = 0; i < z.data.size(); ++i)
            if (mask.observed[i]) step.data[i] += obs.data[i] - z.data[i];
        z = shrink_singular(step, cfg.tau);
        double fid = 0.0;
        for (std::size_t i = 0; i < z.data.size(); ++i)
            if (mask.observed[i]) fid += (z.data[i] - obs.data[i]) * (z.data[i] - obs.data[i]);
        const double obj = cfg.tau * nuclear_norm(to_complex(z)) + 0.5 * fid;
        CHECK(obj <= prev + 1e-9);
        prev = obj;
    }
}
