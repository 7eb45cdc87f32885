#include "landscape/symmetric_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace landscape {
namespace {

// Householder reduction of the symmetric matrix stored in q to tridiagonal
// form with diagonal d and subdiagonal e (e[0] unused); q is overwritten with
// the accumulated orthogonal transform.
void tridiagonalize(std::vector<std::vector<double>>& q, std::vector<double>& d,
                    std::vector<double>& e) {
  const int n = static_cast<int>(q.size());
  for (int i = n - 1; i > 0; --i) {
    const int l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (int k = 0; k <= l; ++k) scale += std::fabs(q[i][k]);
      if (scale == 0.0) {
        e[i] = q[i][l];
      } else {
        for (int k = 0; k <= l; ++k) {
          q[i][k] /= scale;
          h += q[i][k] * q[i][k];
        }
        double f = q[i][l];
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        q[i][l] = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          q[j][i] = q[i][j] / h;
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += q[j][k] * q[i][k];
          for (int k = j + 1; k <= l; ++k) g += q[k][j] * q[i][k];
          e[j] = g / h;
          f += e[j] * q[i][j];
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = q[i][j];
          g = e[j] - hh * f;
          e[j] = g;
          for (int k = 0; k <= j; ++k) q[j][k] -= f * e[k] + g * q[i][k];
        }
      }
    } else {
      e[i] = q[i][l];
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    const int l = i - 1;
    if (d[i] != 0.0) {
      for (int j = 0; j <= l; ++j) {
        double g = 0.0;
        for (int k = 0; k <= l; ++k) g += q[i][k] * q[k][j];
        for (int k = 0; k <= l; ++k) q[k][j] -= g * q[k][i];
      }
    }
    d[i] = q[i][i];
    q[i][i] = 1.0;
    for (int j = 0; j <= l; ++j) q[j][i] = q[i][j] = 0.0;
  }
}

// Implicit-shift QL iteration on the tridiagonal form (d, e); plane rotations
// are accumulated into q so its columns become the eigenvectors.
void ql_implicit(std::vector<double>& d, std::vector<double>& e,
                 std::vector<std::vector<double>>& q) {
  const int n = static_cast<int>(d.size());
  if (n < 2) return;
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++iter == 50) {
          throw std::runtime_error("eigenvalue iteration failed to converge");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            // A rotation annihilated early; restart the sweep on this block.
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < n; ++k) {
            f = q[k][i + 1];
            q[k][i + 1] = s * q[k][i] + c * f;
            q[k][i] = c * q[k][i] - s * f;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

EigenDecomposition symmetric_eigen(const Matrix<double>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix must be square");
  const int n = a.rows();
  EigenDecomposition out;
  if (n == 0) return out;

  std::vector<std::vector<double>> q(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) q[i][j] = q[j][i] = a(i, j);
  }
  std::vector<double> d(static_cast<std::size_t>(n), 0.0);
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  tridiagonalize(q, d, e);
  ql_implicit(d, e, q);

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return d[x] < d[y]; });
  out.values.reserve(static_cast<std::size_t>(n));
  out.vectors.reserve(static_cast<std::size_t>(n));
  for (int k : order) {
    out.values.push_back(d[static_cast<std::size_t>(k)]);
    std::vector<double> col(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = q[i][k];
    out.vectors.push_back(std::move(col));
  }
  return out;
}

std::vector<double> symmetric_eigenvalues(const Matrix<double>& a) {
  return symmetric_eigen(a).values;
}

double determinant(const Matrix<double>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix must be square");
  const int n = a.rows();
  if (n == 0) return 1.0;
  std::vector<std::vector<double>> lu(static_cast<std::size_t>(n),
                                      std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) lu[i][j] = a(i, j);
  }
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::fabs(lu[r][col]) > std::fabs(lu[pivot][col])) pivot = r;
    }
    if (lu[pivot][col] == 0.0) return 0.0;
    if (pivot != col) {
      std::swap(lu[pivot], lu[col]);
      det = -det;
    }
    det *= lu[col][col];
    for (int r = col + 1; r < n; ++r) {
      const double factor = lu[r][col] / lu[col][col];
      for (int j = col; j < n; ++j) lu[r][j] -= factor * lu[col][j];
    }
  }
  return det;
}

}  // namespace landscape
