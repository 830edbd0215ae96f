#pragma once

#include <filesystem>
#include <iosfwd>

#include "pcgbench/sparse_matrix.hpp"

namespace pcgbench {

/// Reads a square real (or integer) coordinate Matrix Market file.
/// "symmetric" headers are expanded to both triangles; duplicates are summed.
/// Throws ParseError on malformed content.
SparseMatrix read_matrix_market(const std::filesystem::path& path);
SparseMatrix read_matrix_market(std::istream& in);

/// Writes with a "symmetric" header (lower triangle) when a.symmetric(),
/// otherwise "general". Values are printed with 17 significant digits.
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a);
void write_matrix_market(std::ostream& out, const SparseMatrix& a);

/// One real value per line (used for external diag(U) files).
Vector read_vector_file(const std::filesystem::path& path);

}  // namespace pcgbench
