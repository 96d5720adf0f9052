#pragma once

#include <string>

#include "ratkrylov/types.hpp"

namespace rk {

/// Read a Matrix Market file (array or coordinate; real, integer or complex;
/// general, symmetric, hermitian or skew-symmetric) into a dense complex
/// matrix.
Matrix read_matrix_market(const std::string& path);

/// Write a dense complex matrix as a Matrix Market array file.
void write_matrix_market(const std::string& path, const Matrix& m,
                         const std::string& comment = "");

}  // namespace rk
