#include "symplopt/mmio.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace symplopt {

namespace {

std::string lowered(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

Matrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::string banner;
  if (!std::getline(in, banner)) throw IoError(path + ": empty file");
  std::istringstream bs(lowered(banner));
  std::string tag, object, format, field, symmetry;
  bs >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%matrixmarket" || object != "matrix")
    throw IoError(path + ": not a Matrix Market matrix file");
  if (field != "real" && field != "integer")
    throw IoError(path + ": only real-valued matrices are supported");
  const bool coordinate = format == "coordinate";
  if (!coordinate && format != "array")
    throw IoError(path + ": unknown format '" + format + "'");
  const bool symmetric = symmetry == "symmetric";
  const bool skew = symmetry == "skew-symmetric";
  if (!symmetric && !skew && symmetry != "general")
    throw IoError(path + ": unsupported symmetry '" + symmetry + "'");

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream header(line);
  Index rows = 0, cols = 0;
  long nnz = 0;
  header >> rows >> cols;
  if (coordinate) header >> nnz;
  if (rows <= 0 || cols <= 0) throw IoError(path + ": bad size header");

  Matrix out = Matrix::Zero(rows, cols);
  if (coordinate) {
    for (long e = 0; e < nnz; ++e) {
      Index i = 0, j = 0;
      double value = 0.0;
      if (!(in >> i >> j >> value)) throw IoError(path + ": truncated entry list");
      if (i < 1 || i > rows || j < 1 || j > cols)
        throw IoError(path + ": entry index out of range");
      out(i - 1, j - 1) = value;
      if (symmetric && i != j) out(j - 1, i - 1) = value;
      if (skew && i != j) out(j - 1, i - 1) = -value;
    }
  } else {
    // Array format stores the (lower triangle of a) matrix column by column.
    for (Index j = 0; j < cols; ++j) {
      const Index i0 = (symmetric || skew) ? j : 0;
      for (Index i = i0; i < rows; ++i) {
        double value = 0.0;
        if (!(in >> value)) throw IoError(path + ": truncated array data");
        out(i, j) = value;
        if (symmetric && i != j) out(j, i) = value;
        if (skew && i != j) out(j, i) = -value;
      }
    }
  }
  return out;
}

void write_matrix_market(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << " " << m.cols() << "\n";
  out << std::setprecision(17) << std::scientific;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) out << m(i, j) << "\n";
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace symplopt
