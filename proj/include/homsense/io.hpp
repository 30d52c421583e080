#pragma once

#include "homsense/numerics.hpp"

#include <iosfwd>
#include <string>

namespace homsense::io {

/// Comma-separated, no header, one row per line. Blank lines are skipped.
/// Throws ParseError naming the offending line.
Matrix parse_matrix_csv(std::istream& in, const std::string& source = "<input>");
Matrix read_matrix_csv(const std::string& path);

/// Single-column CSV.
Vector read_vector_csv(const std::string& path);
Vector parse_vector_csv(std::istream& in, const std::string& source = "<input>");

/// Full round-trip precision.
void write_matrix_csv(std::ostream& os, const Matrix& M);
void write_matrix_csv(const std::string& path, const Matrix& M);
void write_vector_csv(const std::string& path, const Vector& v);

std::string read_text_file(const std::string& path);

} // namespace homsense::io
