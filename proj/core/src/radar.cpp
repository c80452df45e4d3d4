#include "isar/radar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace isar {

void RadarParams::validate() const {
    if (n_freq < 1 || n_angle < 1) throw std::invalid_argument("radar: N and M must be >= 1");
    if (delta_f <= 0.0) throw std::invalid_argument("radar: delta_f must be > 0");
    if (delta_theta <= 0.0) throw std::invalid_argument("radar: delta_theta must be > 0");
    if (f0 <= 0.0) throw std::invalid_argument("radar: f0 must be > 0");
    if (!(range_resolution() > 0.0) || !(cross_range_resolution() > 0.0))
        throw std::invalid_argument("radar: derived resolutions must be positive");
}

double RadarParams::range_resolution() const {
    return c / (2.0 * static_cast<double>(n_freq) * delta_f);
}

double RadarParams::cross_range_resolution() const {
    return c / (2.0 * static_cast<double>(n_angle) * delta_theta);
}

void Scene::validate() const {
    params.validate();
    for (const auto& s : scatterers) {
        if (s.p >= params.n_angle || s.q >= params.n_freq)
            throw std::invalid_argument("scene: scatterer index out of grid range");
    }
}

ComplexMatrix simulate_echo(const Scene& scene) {
    scene.validate();
    const std::size_t M = scene.params.n_angle;
    const std::size_t N = scene.params.n_freq;
    ComplexMatrix y(M, N);

    std::vector<cplx> row_phase(M), col_phase(N);
    for (const auto& s : scene.scatterers) {
        const double wp = -2.0 * std::numbers::pi * static_cast<double>(s.p) / static_cast<double>(M);
        const double wq = -2.0 * std::numbers::pi * static_cast<double>(s.q) / static_cast<double>(N);
        for (std::size_t m = 0; m < M; ++m) row_phase[m] = std::polar(1.0, wp * static_cast<double>(m));
        for (std::size_t n = 0; n < N; ++n) col_phase[n] = std::polar(1.0, wq * static_cast<double>(n));
        for (std::size_t m = 0; m < M; ++m) {
            const cplx a = s.alpha * row_phase[m];
            cplx* out = &y.at(m, 0);
            for (std::size_t n = 0; n < N; ++n) out[n] += a * col_phase[n];
        }
    }
    return y;
}

namespace detail {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_radix2(std::vector<cplx>& v, int sign) {
    const std::size_t n = v.size();
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(v[i], v[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const cplx wlen = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            cplx w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = v[i + k];
                const cplx t = v[i + k + len / 2] * w;
                v[i + k] = u + t;
                v[i + k + len / 2] = u - t;
                w *= wlen;
            }
        }
    }
}

void dft_naive(std::vector<cplx>& v, int sign) {
    const std::size_t n = v.size();
    std::vector<cplx> tw(n);
    for (std::size_t k = 0; k < n; ++k)
        tw[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{0.0, 0.0};
        std::size_t idx = 0;
        for (std::size_t m = 0; m < n; ++m) {
            acc += v[m] * tw[idx];
            idx += k;
            if (idx >= n) idx -= n;
        }
        out[k] = acc;
    }
    v = std::move(out);
}

}  // namespace

void dft_1d(std::vector<cplx>& v, int sign) {
    if (v.size() <= 1) return;
    if (is_pow2(v.size()))
        fft_radix2(v, sign);
    else
        dft_naive(v, sign);
}

}  // namespace detail

ComplexMatrix rd_image(const ComplexMatrix& echo) {
    if (!all_finite(echo)) throw std::invalid_argument("rd_image: non-finite input");
    ComplexMatrix out = echo;
    std::vector<cplx> buf;
    // rows
    buf.resize(out.cols);
    for (std::size_t r = 0; r < out.rows; ++r) {
        std::copy_n(&out.at(r, 0), out.cols, buf.begin());
        detail::dft_1d(buf, +1);
        std::copy_n(buf.begin(), out.cols, &out.at(r, 0));
    }
    // columns
    buf.resize(out.rows);
    for (std::size_t c = 0; c < out.cols; ++c) {
        for (std::size_t r = 0; r < out.rows; ++r) buf[r] = out.at(r, c);
        detail::dft_1d(buf, +1);
        for (std::size_t r = 0; r < out.rows; ++r) out.at(r, c) = buf[r];
    }
    return out;
}

RealMatrix to_db_image(const ComplexMatrix& image, double top_db) {
    if (top_db <= 0.0) throw std::invalid_argument("to_db_image: top_db must be > 0");
    double peak = 0.0;
    for (const auto& v : image.data) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) throw std::invalid_argument("to_db_image: empty image");
    RealMatrix out(image.rows, image.cols);
    for (std::size_t i = 0; i < image.data.size(); ++i) {
        const double mag = std::abs(image.data[i]);
        double db = mag > 0.0 ? 20.0 * std::log10(mag / peak) : -top_db;
        out.data[i] = std::clamp(db, -top_db, 0.0);
    }
    return out;
}

ComplexMatrix fft_shift(const ComplexMatrix& m) {
    ComplexMatrix out(m.rows, m.cols);
    const std::size_t hr = m.rows / 2, hc = m.cols / 2;
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c)
            out.at((r + hr) % m.rows, (c + hc) % m.cols) = m.at(r, c);
    return out;
}

}  // namespace isar
