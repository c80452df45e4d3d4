#include "isar/complex_matrix.hpp"

#include <cmath>

namespace isar {

double frobenius_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (const auto& v : m.data) s += std::norm(v);
    return std::sqrt(s);
}

double frobenius_norm(const RealMatrix& m) {
    double s = 0.0;
    for (double v : m.data) s += v * v;
    return std::sqrt(s);
}

bool all_finite(const ComplexMatrix& m) {
    for (const auto& v : m.data)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

bool all_finite(const RealMatrix& m) {
    for (double v : m.data)
        if (!std::isfinite(v)) return false;
    return true;
}

RealMatrix magnitude(const ComplexMatrix& m) {
    RealMatrix out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.data.size(); ++i) out.data[i] = std::abs(m.data[i]);
    return out;
}

}  // namespace isar
