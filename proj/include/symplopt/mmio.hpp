#pragma once

#include <string>

#include "symplopt/dense.hpp"

namespace symplopt {

/// Reads a real Matrix Market file (array or coordinate format; general,
/// symmetric or skew-symmetric) into a dense matrix.
Matrix read_matrix_market(const std::string& path);

/// Writes a dense matrix in Matrix Market array format.
void write_matrix_market(const std::string& path, const Matrix& m);

}  // namespace symplopt
