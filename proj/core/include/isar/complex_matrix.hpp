#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace isar {

using cplx = std::complex<double>;

/// Dense row-major matrix of complex samples. Used for the echo matrix,
/// its completed variants and range-Doppler images.
struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cplx> data;

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    cplx& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const cplx& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::size_t size() const { return rows * cols; }
    bool same_shape(const ComplexMatrix& o) const { return rows == o.rows && cols == o.cols; }
};

/// Dense row-major real matrix (split parts, dB images, masks' numeric views).
struct RealMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    RealMatrix() = default;
    RealMatrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const double& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::size_t size() const { return rows * cols; }
    bool same_shape(const RealMatrix& o) const { return rows == o.rows && cols == o.cols; }
};

double frobenius_norm(const ComplexMatrix& m);
double frobenius_norm(const RealMatrix& m);
bool all_finite(const ComplexMatrix& m);
bool all_finite(const RealMatrix& m);

/// Elementwise magnitude image.
RealMatrix magnitude(const ComplexMatrix& m);

}  // namespace isar
