#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <tuple>
#include <vector>

#include "dipolesim/dense.hpp"
#include "dipolesim/errors.hpp"
#include "dipolesim/simd.hpp"
#include "dipolesim/vec3.hpp"

namespace dipolesim {

// Compressed-sparse-row complex matrix. Operators on the truncated product
// space are very sparse (a handful of entries per row), and the dense states
// they act on are column-major, so two access patterns are provided:
//  - left products iterate rows and gather from the dense operand,
//  - right products iterate rows and scatter column AXPYs (contiguous).
class Csr {
public:
  Csr() = default;
  Csr(int rows, int cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return vals_.size(); }

  static Csr from_triplets(int rows, int cols,
                           std::vector<std::tuple<int, int, cplx>> trips) {
    std::sort(trips.begin(), trips.end(), [](const auto& a, const auto& b) {
      if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
      return std::get<1>(a) < std::get<1>(b);
    });
    Csr m(rows, cols);
    m.col_idx_.reserve(trips.size());
    m.vals_.reserve(trips.size());
    for (const auto& [r, c, v] : trips) {
      if (r < 0 || r >= rows || c < 0 || c >= cols)
        throw invalid_argument_error("sparse triplet index out of range");
      if (!m.vals_.empty() && m.row_of_last_ == r && m.col_idx_.back() == c) {
        m.vals_.back() += v;  // merge duplicates
        continue;
      }
      for (int rr = m.row_of_last_ + 1; rr <= r; ++rr)
        m.row_ptr_[rr] = static_cast<int>(m.vals_.size());
      m.row_of_last_ = r;
      m.col_idx_.push_back(c);
      m.vals_.push_back(v);
    }
    for (int rr = m.row_of_last_ + 1; rr <= rows; ++rr)
      m.row_ptr_[rr] = static_cast<int>(m.vals_.size());
    m.drop_zeros();
    return m;
  }

  // y = A x
  void apply_vec(const cplx* x, cplx* y) const {
    for (int r = 0; r < rows_; ++r) {
      cplx acc = 0.0;
      for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) acc += vals_[p] * x[col_idx_[p]];
      y[r] = acc;
    }
  }

  // Y += alpha * A * X   (X: cols_ x m, Y: rows_ x m, column-major)
  void axpy_left(cplx alpha, const Dense& X, Dense& Y) const {
    const int m = static_cast<int>(X.cols());
    for (int c = 0; c < m; ++c) {
      const cplx* xc = X.data() + static_cast<std::ptrdiff_t>(c) * X.rows();
      cplx* yc = Y.data() + static_cast<std::ptrdiff_t>(c) * Y.rows();
      for (int r = 0; r < rows_; ++r) {
        cplx acc = 0.0;
        for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) acc += vals_[p] * xc[col_idx_[p]];
        yc[r] += alpha * acc;
      }
    }
  }

  // Y += alpha * X * A   (X: m x rows_, Y: m x cols_) — row k of A scatters
  // X(:,k) into the columns it hits; every AXPY is contiguous.
  void axpy_right(cplx alpha, const Dense& X, Dense& Y) const {
    const std::size_t m = static_cast<std::size_t>(X.rows());
    const auto& ops = simd();
    for (int k = 0; k < rows_; ++k) {
      const cplx* xk = X.data() + static_cast<std::ptrdiff_t>(k) * X.rows();
      for (int p = row_ptr_[k]; p < row_ptr_[k + 1]; ++p) {
        cplx* yc = Y.data() + static_cast<std::ptrdiff_t>(col_idx_[p]) * Y.rows();
        ops.zaxpy(m, alpha * vals_[p], xk, yc);
      }
    }
  }

  // Y += alpha * X * A†  (X: m x rows_, Y: m x cols_ — note A† is cols_ x rows_,
  // so here cols(Y) = rows_); iterates rows c of A: Y(:,c) += conj(A(c,k)) X(:,k).
  void axpy_right_adjoint(cplx alpha, const Dense& X, Dense& Y) const {
    const std::size_t m = static_cast<std::size_t>(X.rows());
    const auto& ops = simd();
    for (int c = 0; c < rows_; ++c) {
      cplx* yc = Y.data() + static_cast<std::ptrdiff_t>(c) * Y.rows();
      for (int p = row_ptr_[c]; p < row_ptr_[c + 1]; ++p) {
        const cplx* xk = X.data() + static_cast<std::ptrdiff_t>(col_idx_[p]) * X.rows();
        ops.zaxpy(m, alpha * std::conj(vals_[p]), xk, yc);
      }
    }
  }

  Dense to_dense() const {
    Dense M = Dense::Zero(rows_, cols_);
    for (int r = 0; r < rows_; ++r)
      for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) M(r, col_idx_[p]) += vals_[p];
    return M;
  }

  static Csr add(const Csr& a, const Csr& b, cplx wa = 1.0, cplx wb = 1.0) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
      throw invalid_argument_error("sparse add: shape mismatch");
    std::vector<std::tuple<int, int, cplx>> trips;
    trips.reserve(a.nnz() + b.nnz());
    for (int r = 0; r < a.rows_; ++r)
      for (int p = a.row_ptr_[r]; p < a.row_ptr_[r + 1]; ++p)
        trips.emplace_back(r, a.col_idx_[p], wa * a.vals_[p]);
    for (int r = 0; r < b.rows_; ++r)
      for (int p = b.row_ptr_[r]; p < b.row_ptr_[r + 1]; ++p)
        trips.emplace_back(r, b.col_idx_[p], wb * b.vals_[p]);
    return from_triplets(a.rows_, a.cols_, std::move(trips));
  }

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<cplx>& values() const { return vals_; }

private:
  void drop_zeros() {
    std::vector<int> new_ptr(rows_ + 1, 0);
    std::vector<int> new_idx;
    std::vector<cplx> new_vals;
    new_idx.reserve(vals_.size());
    new_vals.reserve(vals_.size());
    for (int r = 0; r < rows_; ++r) {
      new_ptr[r] = static_cast<int>(new_vals.size());
      for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
        if (vals_[p] != cplx(0.0, 0.0)) {
          new_idx.push_back(col_idx_[p]);
          new_vals.push_back(vals_[p]);
        }
      }
    }
    new_ptr[rows_] = static_cast<int>(new_vals.size());
    row_ptr_ = std::move(new_ptr);
    col_idx_ = std::move(new_idx);
    vals_ = std::move(new_vals);
  }

  int rows_ = 0, cols_ = 0;
  int row_of_last_ = -1;
  std::vector<int> row_ptr_;
  std::vector<int> col_idx_;
  std::vector<cplx> vals_;
};

}  // namespace dipolesim
