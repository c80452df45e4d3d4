#pragma once

#include <string>

#include "isar/complex_matrix.hpp"
#include "isar/radar.hpp"
#include "isar/sampling.hpp"

namespace isar {

/// Thrown for malformed or truncated data files.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// CISR matrix file: magic "CISR", u32 version=1, u32 rows, u32 cols,
/// then rows*cols little-endian f64 pairs (real, imag), row-major.
void save_matrix(const ComplexMatrix& m, const std::string& path);
ComplexMatrix load_matrix(const std::string& path);

/// Mask file: magic "IMSK", u32 rows, u32 cols, u8 kind, f64 ratio,
/// u64 seed, then rows*cols bytes (0/1), little-endian.
void save_mask(const Mask& mask, const std::string& path);
Mask load_mask(const std::string& path);

/// 8-bit binary PGM; dB values in [-top_db, 0] map linearly to [0, 255]
/// with round-half-away-from-zero.
void save_pgm(const RealMatrix& db_image, double top_db, const std::string& path);
std::string render_pgm(const RealMatrix& db_image, double top_db);

/// Text scene description: key=value lines (rows, cols, f0, delta_f,
/// delta_theta, c) plus repeatable "scatterer=p,q,re,im" lines.
Scene load_scene(const std::string& path);
Scene parse_scene(const std::string& text);

}  // namespace isar
