#pragma once

// Plain-text matrix files: a "rows cols" header followed by `rows` lines of
// whitespace-separated decimals. Values are written with 17 significant
// digits so a write/read round trip is exact.

#include "genlasso/linalg.hpp"

#include <iosfwd>
#include <string>

namespace genlasso {

Matrix parse_matrix(std::istream& in, const std::string& origin = "<stream>");
Matrix read_matrix(const std::string& path);

/// Accepts an n x 1 or 1 x n matrix file.
Vector read_vector(const std::string& path);

void write_matrix(std::ostream& out, const Matrix& a);
void write_matrix(const std::string& path, const Matrix& a);
/// Written as an n x 1 matrix.
void write_vector(const std::string& path, const Vector& v);

/// Shortest form that reads back to the same double (%.17g).
std::string format_double(double x);

}  // namespace genlasso
