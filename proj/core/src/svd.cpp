#include "isar/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace isar {

namespace {

ComplexMatrix conj_transpose(const ComplexMatrix& a) {
    ComplexMatrix t(a.cols, a.rows);
    for (std::size_t r = 0; r < a.rows; ++r)
        for (std::size_t c = 0; c < a.cols; ++c) t.at(c, r) = std::conj(a.at(r, c));
    return t;
}

// One-sided Jacobi on columns: returns (rotated A, V) with A = A0 * V.
void jacobi_sweeps(ComplexMatrix& a, ComplexMatrix& v) {
    const std::size_t n = a.cols;
    const std::size_t m = a.rows;
    const double tol = 1e-14;
    const int max_sweeps = 64;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0;
                cplx apq{0.0, 0.0};
                for (std::size_t i = 0; i < m; ++i) {
                    const cplx& x = a.at(i, p);
                    const cplx& y = a.at(i, q);
                    app += std::norm(x);
                    aqq += std::norm(y);
                    apq += std::conj(x) * y;
                }
                const double off = std::abs(apq);
                if (off <= tol * std::sqrt(app * aqq) || off == 0.0) continue;
                rotated = true;

                const double phi = std::arg(apq);
                const double zeta = (aqq - app) / (2.0 * off);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const cplx s = std::polar(c * t, phi);

                for (std::size_t i = 0; i < m; ++i) {
                    const cplx x = a.at(i, p);
                    const cplx y = a.at(i, q);
                    a.at(i, p) = c * x - std::conj(s) * y;
                    a.at(i, q) = s * x + c * y;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx x = v.at(i, p);
                    const cplx y = v.at(i, q);
                    v.at(i, p) = c * x - std::conj(s) * y;
                    v.at(i, q) = s * x + c * y;
                }
            }
        }
        if (!rotated) return;
    }
    throw std::runtime_error("svd: Jacobi sweeps did not converge");
}

// Fill U columns whose singular value vanished with vectors orthonormal
// to the existing ones (Gram-Schmidt against canonical candidates).
void complete_null_columns(ComplexMatrix& u, const std::vector<double>& s, double scale) {
    const std::size_t m = u.rows;
    const std::size_t k = u.cols;
    for (std::size_t j = 0; j < k; ++j) {
        if (s[j] > scale * 1e-13 * static_cast<double>(m)) continue;
        for (std::size_t cand = 0; cand < m; ++cand) {
            std::vector<cplx> vec(m, cplx{0.0, 0.0});
            vec[cand] = 1.0;
            for (std::size_t jj = 0; jj < k; ++jj) {
                if (jj == j) continue;
                cplx dot{0.0, 0.0};
                for (std::size_t i = 0; i < m; ++i) dot += std::conj(u.at(i, jj)) * vec[i];
                for (std::size_t i = 0; i < m; ++i) vec[i] -= dot * u.at(i, jj);
            }
            double nrm = 0.0;
            for (const auto& x : vec) nrm += std::norm(x);
            nrm = std::sqrt(nrm);
            if (nrm > 1e-6) {
                for (std::size_t i = 0; i < m; ++i) u.at(i, j) = vec[i] / nrm;
                break;
            }
        }
    }
}

}  // namespace

SvdFactors svd(const ComplexMatrix& a) {
    if (!all_finite(a)) throw std::invalid_argument("svd: non-finite input");
    const bool transpose = a.rows < a.cols;
    ComplexMatrix work = transpose ? conj_transpose(a) : a;
    const std::size_t m = work.rows;
    const std::size_t n = work.cols;

    ComplexMatrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) v.at(i, i) = 1.0;
    jacobi_sweeps(work, v);

    std::vector<double> s(n);
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double nrm = 0.0;
        for (std::size_t i = 0; i < m; ++i) nrm += std::norm(work.at(i, j));
        s[j] = std::sqrt(nrm);
        scale = std::max(scale, s[j]);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return s[i] > s[j]; });

    SvdFactors f;
    f.u = ComplexMatrix(m, n);
    f.v = ComplexMatrix(n, n);
    f.s.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        f.s[j] = s[src];
        const double inv = s[src] > 0.0 ? 1.0 / s[src] : 0.0;
        for (std::size_t i = 0; i < m; ++i) f.u.at(i, j) = work.at(i, src) * inv;
        for (std::size_t i = 0; i < n; ++i) f.v.at(i, j) = v.at(i, src);
    }
    complete_null_columns(f.u, f.s, scale);

    if (transpose) std::swap(f.u, f.v);
    return f;
}

ComplexMatrix shrink_singular(const ComplexMatrix& a, double tau) {
    if (tau < 0.0) throw std::invalid_argument("shrink_singular: tau must be >= 0");
    SvdFactors f = svd(a);
    ComplexMatrix out(a.rows, a.cols);
    const std::size_t k = f.s.size();
    for (std::size_t j = 0; j < k; ++j) {
        const double sv = std::max(f.s[j] - tau, 0.0);
        if (sv == 0.0) continue;
        for (std::size_t r = 0; r < a.rows; ++r) {
            const cplx uj = f.u.at(r, j) * sv;
            for (std::size_t c = 0; c < a.cols; ++c) out.at(r, c) += uj * std::conj(f.v.at(c, j));
        }
    }
    return out;
}

RealMatrix shrink_singular(const RealMatrix& a, double tau) {
    return real_part(shrink_singular(to_complex(a), tau));
}

double nuclear_norm(const ComplexMatrix& a) {
    SvdFactors f = svd(a);
    double s = 0.0;
    for (double x : f.s) s += x;
    return s;
}

double spectral_norm(const ComplexMatrix& a) {
    SvdFactors f = svd(a);
    return f.s.empty() ? 0.0 : f.s.front();
}

ComplexMatrix to_complex(const RealMatrix& m) {
    ComplexMatrix out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.data.size(); ++i) out.data[i] = cplx{m.data[i], 0.0};
    return out;
}

RealMatrix real_part(const ComplexMatrix& m) {
    RealMatrix out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.data.size(); ++i) out.data[i] = m.data[i].real();
    return out;
}

}  // namespace isar
