#pragma once

#include "bidomain/sparse.hpp"

#include <memory>
#include <span>
#include <string_view>

namespace bidomain {

// Approximate inverse of a sparse SPD matrix. Construction is the setup
// phase; apply_inverse is read-only and may be called concurrently on
// distinct vectors. Implementations are linear, symmetric and positive.
class InnerPreconditioner {
 public:
  virtual ~InnerPreconditioner() = default;

  virtual std::size_t size() const = 0;
  virtual std::string_view name() const = 0;

  // x = P^-1 y
  virtual void apply_inverse(std::span<const double> y, std::span<double> x) const = 0;

  std::vector<double> apply_inverse(std::span<const double> y) const {
    std::vector<double> x(y.size());
    apply_inverse(y, x);
    return x;
  }
};

enum class InnerKind { exact, ic0, jacobi };

// "exact" | "ic0" | "jacobi"; throws std::invalid_argument otherwise.
InnerKind parse_inner_kind(std::string_view name);
std::string_view inner_kind_name(InnerKind kind);

// Sparse Cholesky with fill-reducing ordering; solves to machine precision.
// Throws PreconditionerError if the matrix is not positive definite.
class CholeskyPreconditioner final : public InnerPreconditioner {
 public:
  explicit CholeskyPreconditioner(const SparseMatrix& a);
  ~CholeskyPreconditioner() override;

  std::size_t size() const override { return n_; }
  std::string_view name() const override { return "exact"; }
  using InnerPreconditioner::apply_inverse;
  void apply_inverse(std::span<const double> y, std::span<double> x) const override;

  // Non-zeros of the Cholesky factor.
  std::size_t factor_nnz() const;

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

// Zero-fill incomplete Cholesky on the lower-triangle pattern of the
// matrix. A non-positive pivot restarts the factorization with the diagonal
// scaled by a further (1 + shift_factor), at most max_restarts times.
class Ic0Preconditioner final : public InnerPreconditioner {
 public:
  static constexpr double shift_factor = 1e-3;
  static constexpr int max_restarts = 20;

  explicit Ic0Preconditioner(const SparseMatrix& a);

  std::size_t size() const override { return n_; }
  std::string_view name() const override { return "ic0"; }
  using InnerPreconditioner::apply_inverse;
  void apply_inverse(std::span<const double> y, std::span<double> x) const override;

  int restarts() const { return restarts_; }

  // Factor L (lower triangular, diagonal last in each row).
  const SparseMatrix& factor() const { return l_; }

 private:
  bool try_factor(const SparseMatrix& a, double diag_scale);

  std::size_t n_;
  int restarts_ = 0;
  SparseMatrix l_;
};

class JacobiPreconditioner final : public InnerPreconditioner {
 public:
  explicit JacobiPreconditioner(const SparseMatrix& a);

  std::size_t size() const override { return inv_diag_.size(); }
  std::string_view name() const override { return "jacobi"; }
  using InnerPreconditioner::apply_inverse;
  void apply_inverse(std::span<const double> y, std::span<double> x) const override;

 private:
  std::vector<double> inv_diag_;
};

std::unique_ptr<InnerPreconditioner> make_inner(InnerKind kind, const SparseMatrix& a);

} // namespace bidomain
