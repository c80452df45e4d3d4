#include "isar/metrics.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace isar {

namespace {

void check_dims(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("metrics: dimension mismatch");
}

}  // namespace

double rmse(const RealMatrix& reference, const RealMatrix& estimate) {
    check_dims(reference.size(), estimate.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < reference.data.size(); ++i) {
        const double d = reference.data[i] - estimate.data[i];
        num += d * d;
        den += reference.data[i] * reference.data[i];
    }
    if (den == 0.0) throw std::invalid_argument("rmse: zero reference");
    return std::sqrt(num / den);
}

double rmse(const ComplexMatrix& reference, const ComplexMatrix& estimate) {
    return rmse(magnitude(reference), magnitude(estimate));
}

double correlation(const RealMatrix& reference, const RealMatrix& estimate) {
    check_dims(reference.size(), estimate.size());
    const std::size_t n = reference.size();
    if (n < 2) throw std::invalid_argument("correlation: need at least 2 pixels");
    double mu_a = 0.0, mu_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mu_a += reference.data[i];
        mu_b += estimate.data[i];
    }
    mu_a /= static_cast<double>(n);
    mu_b /= static_cast<double>(n);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = reference.data[i] - mu_a;
        const double db = estimate.data[i] - mu_b;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa == 0.0 || sbb == 0.0) throw std::invalid_argument("correlation: zero variance");
    return sab / std::sqrt(saa * sbb);
}

double correlation(const ComplexMatrix& reference, const ComplexMatrix& estimate) {
    return correlation(magnitude(reference), magnitude(estimate));
}

double image_contrast(const RealMatrix& image) {
    const std::size_t n = image.size();
    double mu_sq = 0.0;
    for (double v : image.data) mu_sq += v * v;
    mu_sq /= static_cast<double>(n);
    if (mu_sq <= 0.0) throw std::invalid_argument("image_contrast: all-zero image");
    double mad = 0.0;
    for (double v : image.data) mad += std::abs(v * v - mu_sq);
    return mad / (static_cast<double>(n) * mu_sq);
}

double image_contrast(const ComplexMatrix& image) {
    return image_contrast(magnitude(image));
}

double snr_db(const ComplexMatrix& reference, const ComplexMatrix& estimate) {
    check_dims(reference.size(), estimate.size());
    double sig = 0.0, res = 0.0;
    for (std::size_t i = 0; i < reference.data.size(); ++i) {
        sig += std::norm(reference.data[i]);
        res += std::norm(reference.data[i] - estimate.data[i]);
    }
    if (res == 0.0) return kSnrCapDb;
    return std::min(kSnrCapDb, 10.0 * std::log10(sig / res));
}

double snr_db(const std::vector<double>& reference, const std::vector<double>& estimate) {
    if (reference.size() != estimate.size()) throw std::invalid_argument("snr_db: size mismatch");
    double sig = 0.0, res = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        sig += reference[i] * reference[i];
        const double d = reference[i] - estimate[i];
        res += d * d;
    }
    if (res == 0.0) return kSnrCapDb;
    return std::min(kSnrCapDb, 10.0 * std::log10(sig / res));
}

ComplexMatrix add_noise(const ComplexMatrix& m, double target_snr_db, std::uint64_t seed) {
    if (target_snr_db >= kSnrCapDb) return m;
    double sig = 0.0;
    for (const auto& v : m.data) sig += std::norm(v);
    if (sig == 0.0) throw std::invalid_argument("add_noise: zero-power input");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> noise(m.data.size());
    double np = 0.0;
    for (auto& v : noise) {
        v = cplx{gauss(rng), gauss(rng)};
        np += std::norm(v);
    }
    const double target_np = sig / std::pow(10.0, target_snr_db / 10.0);
    const double scale = np > 0.0 ? std::sqrt(target_np / np) : 0.0;

    ComplexMatrix out = m;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += scale * noise[i];
    return out;
}

std::string MetricsReport::csv_header() {
    return "method,scenario,ratio,seed,rmse,correlation,contrast,snr_db,runtime_s,iterations,converged";
}

std::string MetricsReport::csv_row() const {
    std::ostringstream os;
    os.precision(12);
    os << method << ',' << scenario << ',' << ratio << ',' << seed << ','
       << rmse << ',' << correlation << ',' << contrast << ',';
    if (snr_db) os << *snr_db;
    os << ',' << runtime_s << ',' << iterations << ',' << (converged ? 1 : 0);
    return os.str();
}

}  // namespace isar
