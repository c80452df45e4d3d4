#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "isar/complex_matrix.hpp"

namespace isar {

/// Sentinel returned by snr_db when the residual is exactly zero.
inline constexpr double kSnrCapDb = 300.0;

/// ||I - Ihat||_F / ||I||_F on magnitude images.
double rmse(const ComplexMatrix& reference, const ComplexMatrix& estimate);
double rmse(const RealMatrix& reference, const RealMatrix& estimate);

/// Pearson correlation over vectorized magnitudes (sample std, N-1).
double correlation(const ComplexMatrix& reference, const ComplexMatrix& estimate);
double correlation(const RealMatrix& reference, const RealMatrix& estimate);

/// Normalized mean absolute deviation of the squared magnitude image.
double image_contrast(const ComplexMatrix& image);
double image_contrast(const RealMatrix& image);

/// 10 log10(||ref||^2 / ||ref - est||^2), capped at kSnrCapDb.
double snr_db(const ComplexMatrix& reference, const ComplexMatrix& estimate);
double snr_db(const std::vector<double>& reference, const std::vector<double>& estimate);

/// Circular complex Gaussian noise rescaled so the empirical SNR hits the
/// target exactly; deterministic per seed.
ComplexMatrix add_noise(const ComplexMatrix& m, double target_snr_db, std::uint64_t seed);

struct MetricsReport {
    std::string method;
    std::string scenario;
    double ratio = 0.0;
    std::uint64_t seed = 0;
    double rmse = 0.0;
    double correlation = 0.0;
    double contrast = 0.0;
    std::optional<double> snr_db;  // injected noise level, when any
    double runtime_s = 0.0;
    std::size_t iterations = 0;
    bool converged = true;

    std::string csv_row() const;
    static std::string csv_header();
};

}  // namespace isar
