// io.hpp — plot-ready file emission: CSV matrices, portable pixmaps, atomic
// writes.
//
// Every writer assembles the complete byte string first and then installs it
// with a rename, so readers never observe partial files and identical data
// always produces identical bytes.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "blochsim/matrix.hpp"

namespace blochsim {

// %.16e — scientific notation with 17 significant digits, locale-independent.
std::string format_sci(double v);

// Write content to path via a temporary sibling + rename.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

// One '#' header line naming the row/column semantics, then row-major
// comma-separated cells in full-precision scientific notation.
std::string matrix_csv(const RealMat& m, const std::string& header);

// Same layout with exact integer cells.
std::string counts_csv(const Mat<std::int64_t>& m, const std::string& header);

// Violation rendering: cells with value ≤ 0 become empty fields.
std::string violations_csv(const RealMat& v, const std::string& header);

// Significance rendering: undefined (NaN) cells become empty fields.
std::string significance_csv(const RealMat& s, const std::string& header);

// Parse a matrix CSV back: '#' lines are skipped, empty cells read as 0,
// all rows must have equal length (ragged input reports the offending
// 1-based data row).
RealMat read_matrix_csv(const std::filesystem::path& path);

// Binary pixmap heatmap: one block_size×block_size tile per matrix cell,
// intensities scaled to the matrix maximum (carried in a comment line).
// Grayscale P5 by default; P6 with a fixed warm palette when use_palette.
std::string pixmap_heatmap(const RealMat& m, int block_size, bool use_palette);

}  // namespace blochsim
