#include "bidomain/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace bidomain {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols,
                           std::vector<std::size_t> row_ptr,
                           std::vector<std::size_t> col_idx,
                           std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)), values_(std::move(values)) {
  if (row_ptr_.size() != rows_ + 1 || row_ptr_.front() != 0 ||
      row_ptr_.back() != col_idx_.size() || col_idx_.size() != values_.size()) {
    throw std::invalid_argument("SparseMatrix: inconsistent CSR arrays");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    if (row_ptr_[i] > row_ptr_[i + 1]) {
      throw std::invalid_argument("SparseMatrix: row offsets must be non-decreasing");
    }
    for (auto p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      if (col_idx_[p] >= cols_) {
        throw std::invalid_argument("SparseMatrix: column index out of range");
      }
      if (p > row_ptr_[i] && col_idx_[p] <= col_idx_[p - 1]) {
        throw std::invalid_argument("SparseMatrix: columns must be strictly increasing");
      }
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> t) {
  for (auto const& e : t) {
    if (e.row >= rows || e.col >= cols) {
      throw std::invalid_argument("from_triplets: index out of range");
    }
  }
  std::stable_sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  std::vector<std::size_t> row_ptr(rows + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  col_idx.reserve(t.size());
  values.reserve(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0 && t[k].row == t[k - 1].row && t[k].col == t[k - 1].col) {
      values.back() += t[k].value;
    } else {
      col_idx.push_back(t[k].col);
      values.push_back(t[k].value);
      ++row_ptr[t[k].row + 1];
    }
  }
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  return {rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values)};
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> d) {
  std::vector<std::size_t> row_ptr(d.size() + 1);
  std::vector<std::size_t> col_idx(d.size());
  std::iota(row_ptr.begin(), row_ptr.end(), std::size_t{0});
  std::iota(col_idx.begin(), col_idx.end(), std::size_t{0});
  return {d.size(), d.size(), std::move(row_ptr), std::move(col_idx),
          std::vector<double>(d.begin(), d.end())};
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_) {
    throw std::invalid_argument("SparseMatrix::multiply: dimension mismatch");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (auto p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += values_[p] * x[col_idx_[p]];
    y[i] = s;
  }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw std::invalid_argument("SparseMatrix::at: out of range");
  auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

std::vector<double> SparseMatrix::diagonal_values() const {
  std::vector<double> d(std::min(rows_, cols_));
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
  return d;
}

bool SparseMatrix::same_pattern(const SparseMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && row_ptr_ == o.row_ptr_ &&
         col_idx_ == o.col_idx_;
}

bool SparseMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (auto p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      auto const j = col_idx_[p];
      auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[j]);
      auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[j + 1]);
      auto it = std::lower_bound(first, last, i);
      if (it == last || *it != i) return false;
      if (values_[static_cast<std::size_t>(it - col_idx_.begin())] != values_[p]) return false;
    }
  }
  return true;
}

double SparseMatrix::norm_inf() const {
  double m = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (auto p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += std::abs(values_[p]);
    m = std::max(m, s);
  }
  return m;
}

std::uint64_t SparseMatrix::fingerprint() const {
  // FNV-1a over the raw bytes.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t n) {
    auto const* b = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < n; ++k) {
      h ^= b[k];
      h *= 1099511628211ull;
    }
  };
  mix(&rows_, sizeof rows_);
  mix(&cols_, sizeof cols_);
  mix(row_ptr_.data(), row_ptr_.size() * sizeof(std::size_t));
  mix(col_idx_.data(), col_idx_.size() * sizeof(std::size_t));
  mix(values_.data(), values_.size() * sizeof(double));
  return h;
}

SparseMatrix SparseMatrix::scaled(double s) const {
  auto v = values_;
  for (auto& x : v) x *= s;
  return {rows_, cols_, row_ptr_, col_idx_, std::move(v)};
}

SparseMatrix add(double a, const SparseMatrix& A, double b, const SparseMatrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    throw std::invalid_argument("add: dimension mismatch");
  }
  auto arp = A.row_ptr(), brp = B.row_ptr();
  auto aci = A.col_idx(), bci = B.col_idx();
  auto av = A.values(), bv = B.values();

  std::vector<std::size_t> row_ptr(A.rows() + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  col_idx.reserve(A.nnz() + B.nnz());
  values.reserve(A.nnz() + B.nnz());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    auto p = arp[i], q = brp[i];
    while (p < arp[i + 1] || q < brp[i + 1]) {
      if (q == brp[i + 1] || (p < arp[i + 1] && aci[p] < bci[q])) {
        col_idx.push_back(aci[p]);
        values.push_back(a * av[p]);
        ++p;
      } else if (p == arp[i + 1] || bci[q] < aci[p]) {
        col_idx.push_back(bci[q]);
        values.push_back(b * bv[q]);
        ++q;
      } else {
        col_idx.push_back(aci[p]);
        values.push_back(a * av[p] + b * bv[q]);
        ++p;
        ++q;
      }
    }
    row_ptr[i + 1] = col_idx.size();
  }
  return {A.rows(), A.cols(), std::move(row_ptr), std::move(col_idx), std::move(values)};
}

void write_matrix_market(std::ostream& os, const SparseMatrix& A) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << A.rows() << ' ' << A.cols() << ' ' << A.nnz() << '\n';
  os << std::setprecision(17);
  auto rp = A.row_ptr();
  auto ci = A.col_idx();
  auto v = A.values();
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (auto p = rp[i]; p < rp[i + 1]; ++p) {
      os << i + 1 << ' ' << ci[p] + 1 << ' ' << v[p] << '\n';
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

} // namespace bidomain
