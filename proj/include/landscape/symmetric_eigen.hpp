#pragma once

#include <vector>

#include "landscape/matrix.hpp"

namespace landscape {

struct EigenDecomposition {
  std::vector<double> values;                // ascending
  std::vector<std::vector<double>> vectors;  // vectors[k] pairs with values[k]
};

// Full spectral decomposition of a dense symmetric matrix: Householder
// reduction to tridiagonal form followed by implicit-shift QL iteration with
// accumulated rotations. Only the lower triangle is read.
EigenDecomposition symmetric_eigen(const Matrix<double>& a);

std::vector<double> symmetric_eigenvalues(const Matrix<double>& a);

// Determinant by LU factorization with partial pivoting.
double determinant(const Matrix<double>& a);

}  // namespace landscape
