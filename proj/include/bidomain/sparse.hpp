#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace bidomain {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// Compressed-sparse-row matrix with strictly increasing column indices in
// every row. Immutable after construction.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  // Validates the CSR invariants; throws std::invalid_argument.
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
               std::vector<std::size_t> col_idx, std::vector<double> values);

  // Sums duplicates in insertion order, so the result does not depend on how
  // the sort permutes equal keys.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets);

  static SparseMatrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const std::size_t> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  // y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;

  // Stored value or zero.
  double at(std::size_t i, std::size_t j) const;

  std::vector<double> diagonal_values() const;

  bool same_pattern(const SparseMatrix& other) const;

  // Exact comparison of mirrored stored pairs.
  bool is_symmetric() const;

  double norm_inf() const;

  // Hash of the dimensions and CSR arrays (bitwise), for round-trip checks.
  std::uint64_t fingerprint() const;

  SparseMatrix scaled(double s) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

// a A + b B on the union of both patterns.
SparseMatrix add(double a, const SparseMatrix& A, double b, const SparseMatrix& B);

// MatrixMarket coordinate real general.
void write_matrix_market(std::ostream& os, const SparseMatrix& A);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

} // namespace bidomain
