#include "isar/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace isar {

std::size_t Mask::observed_count() const {
    return static_cast<std::size_t>(std::count(observed.begin(), observed.end(), std::uint8_t{1}));
}

double Mask::missing_fraction() const {
    if (observed.empty()) return 0.0;
    return 1.0 - static_cast<double>(observed_count()) / static_cast<double>(observed.size());
}

bool Mask::every_row_and_col_observed() const {
    std::vector<bool> row_ok(rows, false), col_ok(cols, false);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (at(r, c)) { row_ok[r] = true; col_ok[c] = true; }
    return std::all_of(row_ok.begin(), row_ok.end(), [](bool b) { return b; }) &&
           std::all_of(col_ok.begin(), col_ok.end(), [](bool b) { return b; });
}

namespace {

// First k indices of a seeded Fisher-Yates shuffle of 0..n-1.
std::vector<std::size_t> draw_without_replacement(std::size_t n, std::size_t k, std::mt19937_64& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
        std::uniform_int_distribution<std::size_t> dist(i, n - 1);
        std::swap(idx[i], idx[dist(rng)]);
    }
    idx.resize(std::min(k, n));
    return idx;
}

}  // namespace

Mask gen_mask(MaskKind kind, double ratio, std::size_t rows, std::size_t cols, std::uint64_t seed) {
    if (ratio < 0.0 || ratio >= 1.0) throw std::invalid_argument("gen_mask: ratio must be in [0,1)");
    if (rows < 1 || cols < 1) throw std::invalid_argument("gen_mask: rows and cols must be >= 1");

    Mask mask;
    mask.rows = rows;
    mask.cols = cols;
    mask.kind = kind;
    mask.requested_ratio = ratio;
    mask.seed = seed;
    mask.observed.assign(rows * cols, 1);

    std::mt19937_64 rng(seed);
    switch (kind) {
        case MaskKind::pixel: {
            const auto k = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(rows * cols)));
            for (std::size_t i : draw_without_replacement(rows * cols, k, rng)) mask.observed[i] = 0;
            break;
        }
        case MaskKind::column: {
            const auto k = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(cols)));
            if (k == cols) throw std::invalid_argument("gen_mask: no observed column");
            for (std::size_t c : draw_without_replacement(cols, k, rng))
                for (std::size_t r = 0; r < rows; ++r) mask.observed[r * cols + c] = 0;
            break;
        }
        case MaskKind::compressed: {
            const auto kr = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(rows)));
            const auto kc = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(cols)));
            if (kr == rows || kc == cols) throw std::invalid_argument("gen_mask: no observed row or column");
            for (std::size_t r : draw_without_replacement(rows, kr, rng))
                for (std::size_t c = 0; c < cols; ++c) mask.observed[r * cols + c] = 0;
            for (std::size_t c : draw_without_replacement(cols, kc, rng))
                for (std::size_t r = 0; r < rows; ++r) mask.observed[r * cols + c] = 0;
            break;
        }
    }
    return mask;
}

ComplexMatrix apply_mask(const ComplexMatrix& m, const Mask& mask) {
    if (m.rows != mask.rows || m.cols != mask.cols)
        throw std::invalid_argument("apply_mask: dimension mismatch");
    ComplexMatrix out = m;
    for (std::size_t i = 0; i < out.data.size(); ++i)
        if (!mask.observed[i]) out.data[i] = cplx{0.0, 0.0};
    return out;
}

RealMatrix apply_mask(const RealMatrix& m, const Mask& mask) {
    if (m.rows != mask.rows || m.cols != mask.cols)
        throw std::invalid_argument("apply_mask: dimension mismatch");
    RealMatrix out = m;
    for (std::size_t i = 0; i < out.data.size(); ++i)
        if (!mask.observed[i]) out.data[i] = 0.0;
    return out;
}

PretransformResult pretransform(const ComplexMatrix& m, const Mask& mask, std::uint64_t seed) {
    if (m.rows != mask.rows || m.cols != mask.cols)
        throw std::invalid_argument("pretransform: dimension mismatch");
    const std::size_t n = m.data.size();
    for (int attempt = 0; attempt < 16; ++attempt) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
        Permutation perm;
        perm.forward.resize(n);
        std::iota(perm.forward.begin(), perm.forward.end(), std::size_t{0});
        for (std::size_t i = n; i > 1; --i) {
            std::uniform_int_distribution<std::size_t> dist(0, i - 1);
            std::swap(perm.forward[i - 1], perm.forward[dist(rng)]);
        }
        perm.inverse.resize(n);
        for (std::size_t i = 0; i < n; ++i) perm.inverse[perm.forward[i]] = i;

        PretransformResult out;
        out.matrix = ComplexMatrix(m.rows, m.cols);
        out.mask = mask;
        for (std::size_t i = 0; i < n; ++i) {
            out.matrix.data[perm.forward[i]] = m.data[i];
            out.mask.observed[perm.forward[i]] = mask.observed[i];
        }
        if (out.mask.every_row_and_col_observed()) {
            out.perm = std::move(perm);
            return out;
        }
    }
    throw std::runtime_error("pretransform: pattern too sparse for pre-transformation");
}

ComplexMatrix invert_pretransform(const ComplexMatrix& m, const Permutation& perm) {
    if (m.data.size() != perm.forward.size())
        throw std::invalid_argument("invert_pretransform: size mismatch");
    ComplexMatrix out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.data.size(); ++i) out.data[i] = m.data[perm.forward[i]];
    return out;
}

void split_complex(const ComplexMatrix& m, RealMatrix& re, RealMatrix& im) {
    re = RealMatrix(m.rows, m.cols);
    im = RealMatrix(m.rows, m.cols);
    for (std::size_t i = 0; i < m.data.size(); ++i) {
        re.data[i] = m.data[i].real();
        im.data[i] = m.data[i].imag();
    }
}

ComplexMatrix merge_complex(const RealMatrix& re, const RealMatrix& im) {
    if (!re.same_shape(im)) throw std::invalid_argument("merge_complex: dimension mismatch");
    ComplexMatrix out(re.rows, re.cols);
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = cplx{re.data[i], im.data[i]};
    return out;
}

const char* mask_kind_name(MaskKind k) {
    switch (k) {
        case MaskKind::pixel: return "pixel";
        case MaskKind::column: return "column";
        case MaskKind::compressed: return "compressed";
    }
    return "?";
}

MaskKind mask_kind_from_name(const std::string& s) {
    if (s == "pixel") return MaskKind::pixel;
    if (s == "column") return MaskKind::column;
    if (s == "compressed") return MaskKind::compressed;
    throw std::invalid_argument("unknown mask kind: " + s);
}

}  // namespace isar
