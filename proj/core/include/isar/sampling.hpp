#pragma once

#include <cstdint>

#include "isar/complex_matrix.hpp"

namespace isar {

enum class MaskKind : std::uint8_t { pixel = 0, column = 1, compressed = 2 };

/// Observation pattern Ω. observed[i] == true means entry i is kept.
struct Mask {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> observed;
    MaskKind kind = MaskKind::pixel;
    double requested_ratio = 0.0;
    std::uint64_t seed = 0;

    bool at(std::size_t r, std::size_t c) const { return observed[r * cols + c] != 0; }
    std::size_t observed_count() const;
    double missing_fraction() const;
    bool every_row_and_col_observed() const;
};

/// Seeded permutation over flattened matrix entries.
struct Permutation {
    std::vector<std::size_t> forward;  // dst index = forward[src index]
    std::vector<std::size_t> inverse;
};

/// Deterministic mask generation. Pixel masks drop exactly
/// round(ratio·rows·cols) entries; column masks drop round(ratio·cols)
/// whole columns; compressed masks drop round(ratio·rows) rows and
/// round(ratio·cols) columns, drawn independently. RNG is mt19937_64.
Mask gen_mask(MaskKind kind, double ratio, std::size_t rows, std::size_t cols, std::uint64_t seed);

/// P_Ω: entries in Ω copied, entries outside set to exactly 0.
ComplexMatrix apply_mask(const ComplexMatrix& m, const Mask& mask);
RealMatrix apply_mask(const RealMatrix& m, const Mask& mask);

struct PretransformResult {
    ComplexMatrix matrix;
    Mask mask;
    Permutation perm;
};

/// Seeded global entry scatter so every row/column of the permuted mask
/// holds at least one observation (re-draws with seed+1, up to 16 tries).
PretransformResult pretransform(const ComplexMatrix& m, const Mask& mask, std::uint64_t seed);

ComplexMatrix invert_pretransform(const ComplexMatrix& m, const Permutation& perm);

void split_complex(const ComplexMatrix& m, RealMatrix& re, RealMatrix& im);
ComplexMatrix merge_complex(const RealMatrix& re, const RealMatrix& im);

const char* mask_kind_name(MaskKind k);
MaskKind mask_kind_from_name(const std::string& s);

}  // namespace isar
