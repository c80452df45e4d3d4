#pragma once

#include "isar/complex_matrix.hpp"

namespace isar {

/// Stepped-frequency radar geometry. The echo model itself works on the
/// discrete (p,q) grid, so these parameters mainly carry the physical
/// resolutions Δx, Δy.
struct RadarParams {
    double f0 = 1.0e10;          // carrier / initial frequency (Hz)
    double delta_f = 1.0e6;      // frequency step (Hz)
    std::size_t n_freq = 64;     // N, total frequency steps
    std::size_t n_angle = 64;    // M, total aperture steps
    double delta_theta = 1.0e-3; // rotation angle step (rad)
    double c = 2.99792458e8;     // propagation speed (m/s)

    void validate() const;
    double range_resolution() const;       // Δy = c / (2 N Δf)
    double cross_range_resolution() const; // Δx = c / (2 M Δθ)
};

/// Point scatterer on the image grid. 0-based indices:
/// p along cross-range (angle axis, rows), q along range (frequency axis, cols).
struct Scatterer {
    std::size_t p = 0;
    std::size_t q = 0;
    cplx alpha{1.0, 0.0};
};

struct Scene {
    RadarParams params;
    std::vector<Scatterer> scatterers;

    void validate() const;
};

/// Echo matrix Y(m,n) = Σ_k α_k exp(-j2π p_k m / M) exp(-j2π q_k n / N),
/// rows = angle steps M, cols = frequency steps N. Duplicate (p,q) add.
ComplexMatrix simulate_echo(const Scene& scene);

/// Range-Doppler image: unnormalized 2-D DFT of the echo over both axes
/// with the conjugate (positive-exponent) kernel, so a lone scatterer at
/// grid (p,q) with reflectivity α maps to pixel value M·N·α at (p,q).
ComplexMatrix rd_image(const ComplexMatrix& echo);

/// 20·log10(|image| / max|image|) clamped to [-top_db, 0].
RealMatrix to_db_image(const ComplexMatrix& image, double top_db);

/// Circularly shift so pixel (0,0) moves to the center (display helper).
ComplexMatrix fft_shift(const ComplexMatrix& m);

namespace detail {
/// In-place 1-D unnormalized transform of each length-n stride-s slice.
/// sign = +1 matches the rd_image kernel.
void dft_1d(std::vector<cplx>& v, int sign);
}  // namespace detail

}  // namespace isar
