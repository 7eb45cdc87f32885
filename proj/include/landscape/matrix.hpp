#pragma once

#include <stdexcept>
#include <vector>

namespace landscape {

// Minimal dense matrix for the small symmetric blocks this project handles.
template <class S>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols) : rows_(checked(rows)), cols_(checked(cols)), data_(static_cast<size_t>(rows) * cols, S{}) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  S& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const S& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

 private:
  static int checked(int dim) {
    if (dim < 0) throw std::invalid_argument("negative matrix dimension");
    return dim;
  }

  int rows_, cols_;
  std::vector<S> data_;
};

}  // namespace landscape
