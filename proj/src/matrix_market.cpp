#include "ratkrylov/matrix_market.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rk {

namespace {

std::string lower(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

}  // namespace

Matrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "matrix market: cannot open file");

  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "matrix market: empty file");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  require(banner == "%%MatrixMarket", "matrix market: missing banner");
  require(lower(object) == "matrix", "matrix market: only matrix objects supported");
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  require(format == "array" || format == "coordinate", "matrix market: unknown format");
  require(field == "real" || field == "complex" || field == "integer",
          "matrix market: unsupported field (pattern not handled)");

  auto next_data_line = [&](std::string& out_line) {
    while (std::getline(in, out_line)) {
      size_t pos = out_line.find_first_not_of(" \t\r\n");
      if (pos == std::string::npos) continue;
      if (out_line[pos] == '%') continue;
      return true;
    }
    return false;
  };

  require(next_data_line(line), "matrix market: missing size line");
  std::istringstream size_line(line);
  Index rows = 0, cols = 0;
  long long nnz = 0;
  size_line >> rows >> cols;
  if (format == "coordinate") size_line >> nnz;
  require(rows >= 1 && cols >= 1, "matrix market: bad dimensions");

  Matrix m = Matrix::Zero(rows, cols);
  auto apply_symmetry = [&](Index i, Index j, Complex v) {
    m(i, j) = v;
    if (i == j || symmetry == "general") return;
    if (symmetry == "symmetric")
      m(j, i) = v;
    else if (symmetry == "hermitian")
      m(j, i) = std::conj(v);
    else if (symmetry == "skew-symmetric")
      m(j, i) = -v;
  };

  if (format == "array") {
    // Column-major scan; symmetric variants store the lower triangle.
    for (Index j = 0; j < cols; ++j) {
      const Index i0 = symmetry == "general" ? 0 : j;
      for (Index i = i0; i < rows; ++i) {
        require(next_data_line(line), "matrix market: truncated array data");
        std::istringstream ls(line);
        double re = 0, im = 0;
        ls >> re;
        if (field == "complex") ls >> im;
        apply_symmetry(i, j, Complex(re, im));
      }
    }
  } else {
    for (long long t = 0; t < nnz; ++t) {
      require(next_data_line(line), "matrix market: truncated coordinate data");
      std::istringstream ls(line);
      Index i = 0, j = 0;
      double re = 0, im = 0;
      ls >> i >> j >> re;
      if (field == "complex") ls >> im;
      require(i >= 1 && i <= rows && j >= 1 && j <= cols, "matrix market: index out of range");
      apply_symmetry(i - 1, j - 1, Complex(re, im));
    }
  }
  return m;
}

void write_matrix_market(const std::string& path, const Matrix& m, const std::string& comment) {
  std::ofstream out(path);
  require(out.good(), "matrix market: cannot open file for writing");
  out << "%%MatrixMarket matrix array complex general\n";
  if (!comment.empty()) out << "% " << comment << "\n";
  out << m.rows() << " " << m.cols() << "\n";
  char buf[128];
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", m(i, j).real(), m(i, j).imag());
      out << buf;
    }
}

}  // namespace rk
