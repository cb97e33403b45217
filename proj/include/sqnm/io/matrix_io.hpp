#pragma once

#include "sqnm/linalg/dense_matrix.hpp"

#include <filesystem>
#include <iosfwd>
#include <string_view>

namespace sqnm::io {

enum class MatrixFormat { MatrixMarket, Csv };

/// "mtx" / "matrix-market" or "csv". Throws Parse on anything else.
MatrixFormat parse_format(std::string_view name);
/// Format implied by the file extension (.csv is CSV, everything else Matrix Market).
MatrixFormat format_from_extension(const std::filesystem::path& path);

/// Matrix Market reader for real general matrices in array or coordinate layout.
/// Coordinate entries not listed are zero and repeated (i, j) entries are summed.
/// Complex, pattern and symmetric variants are rejected. Errors carry the line
/// number of the offending input.
DenseMatrix read_matrix_market(std::istream& in);
/// Headerless comma-separated grid; every row must have the same length.
DenseMatrix read_csv(std::istream& in);

/// Array layout, 17 significant digits, so values round-trip exactly.
void write_matrix_market(std::ostream& out, const DenseMatrix& x);
void write_csv(std::ostream& out, const DenseMatrix& x);

DenseMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format);
void save_matrix(const std::filesystem::path& path, const DenseMatrix& x, MatrixFormat format);

} // namespace sqnm::io
