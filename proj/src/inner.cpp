#include "bidomain/inner.hpp"

#include "bidomain/errors.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cmath>
#include <stdexcept>
#include <string>

namespace bidomain {

InnerKind parse_inner_kind(std::string_view name) {
  if (name == "exact") return InnerKind::exact;
  if (name == "ic0") return InnerKind::ic0;
  if (name == "jacobi") return InnerKind::jacobi;
  throw std::invalid_argument("unknown inner preconditioner '" + std::string(name) +
                              "' (expected exact, ic0 or jacobi)");
}

std::string_view inner_kind_name(InnerKind kind) {
  switch (kind) {
    case InnerKind::exact: return "exact";
    case InnerKind::ic0: return "ic0";
    case InnerKind::jacobi: return "jacobi";
  }
  return "unknown";
}

namespace {

void require_square(const SparseMatrix& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw std::invalid_argument(std::string(who) + ": matrix must be square and non-empty");
  }
}

void require_size(std::size_t n, std::span<const double> y, std::span<double> x) {
  if (y.size() != n || x.size() != n) {
    throw std::invalid_argument("apply_inverse: vector length does not match the operator");
  }
}

} // namespace

// --- exact sparse Cholesky -------------------------------------------------

struct CholeskyPreconditioner::Impl {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower,
                       Eigen::AMDOrdering<int>> llt;
};

CholeskyPreconditioner::CholeskyPreconditioner(const SparseMatrix& a)
    : n_(a.rows()), impl_(std::make_unique<Impl>()) {
  require_square(a, "CholeskyPreconditioner");
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(a.nnz());
  auto rp = a.row_ptr();
  auto ci = a.col_idx();
  auto v = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (auto p = rp[i]; p < rp[i + 1]; ++p) {
      if (ci[p] <= i) trips.emplace_back(static_cast<int>(i), static_cast<int>(ci[p]), v[p]);
    }
  }
  auto const n = static_cast<int>(n_);
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  impl_->llt.compute(m);
  if (impl_->llt.info() != Eigen::Success) {
    throw PreconditionerError("sparse Cholesky failed: matrix is not positive definite");
  }
}

CholeskyPreconditioner::~CholeskyPreconditioner() = default;

void CholeskyPreconditioner::apply_inverse(std::span<const double> y, std::span<double> x) const {
  require_size(n_, y, x);
  auto const n = static_cast<Eigen::Index>(n_);
  Eigen::Map<const Eigen::VectorXd> ym(y.data(), n);
  Eigen::Map<Eigen::VectorXd> xm(x.data(), n);
  xm = impl_->llt.solve(ym);
}

std::size_t CholeskyPreconditioner::factor_nnz() const {
  return static_cast<std::size_t>(impl_->llt.matrixL().nestedExpression().nonZeros());
}

// --- IC(0) -----------------------------------------------------------------

Ic0Preconditioner::Ic0Preconditioner(const SparseMatrix& a) : n_(a.rows()) {
  require_square(a, "Ic0Preconditioner");
  double scale = 1.0;
  for (restarts_ = 0; restarts_ <= max_restarts; ++restarts_) {
    if (try_factor(a, scale)) return;
    scale *= 1.0 + shift_factor;
  }
  throw PreconditionerError("ic0: non-positive pivot persists after " +
                            std::to_string(max_restarts) + " diagonal shifts");
}

bool Ic0Preconditioner::try_factor(const SparseMatrix& a, double diag_scale) {
  auto rp = a.row_ptr();
  auto ci = a.col_idx();
  auto av = a.values();

  // Lower triangle including the diagonal, diagonal stored last in each row.
  std::vector<std::size_t> row_ptr(n_ + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> val;
  col_idx.reserve(a.nnz() / 2 + n_);
  val.reserve(a.nnz() / 2 + n_);
  for (std::size_t i = 0; i < n_; ++i) {
    double diag = 0.0;
    for (auto p = rp[i]; p < rp[i + 1]; ++p) {
      if (ci[p] < i) {
        col_idx.push_back(ci[p]);
        val.push_back(av[p]);
      } else if (ci[p] == i) {
        diag = av[p];
      }
    }
    col_idx.push_back(i);
    val.push_back(diag * diag_scale);
    row_ptr[i + 1] = col_idx.size();
  }

  // Row-oriented factorization restricted to the pattern:
  //   L(i,k) = (A(i,k) - sum_{j<k} L(i,j) L(k,j)) / L(k,k)
  //   L(i,i) = sqrt(A(i,i) - sum_{k<i} L(i,k)^2)
  for (std::size_t i = 0; i < n_; ++i) {
    auto const begin = row_ptr[i];
    auto const diag_pos = row_ptr[i + 1] - 1;
    for (auto p = begin; p < diag_pos; ++p) {
      auto const k = col_idx[p];
      double s = val[p];
      // Sorted merge of row i (columns < k) with row k (columns < k).
      auto q = row_ptr[k];
      auto const k_diag = row_ptr[k + 1] - 1;
      for (auto r = begin; r < p && q < k_diag;) {
        if (col_idx[r] < col_idx[q]) {
          ++r;
        } else if (col_idx[q] < col_idx[r]) {
          ++q;
        } else {
          s -= val[r] * val[q];
          ++r;
          ++q;
        }
      }
      val[p] = s / val[k_diag];
    }
    double d = val[diag_pos];
    for (auto p = begin; p < diag_pos; ++p) d -= val[p] * val[p];
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    val[diag_pos] = std::sqrt(d);
  }
  l_ = SparseMatrix(n_, n_, std::move(row_ptr), std::move(col_idx), std::move(val));
  return true;
}

void Ic0Preconditioner::apply_inverse(std::span<const double> y, std::span<double> x) const {
  require_size(n_, y, x);
  auto rp = l_.row_ptr();
  auto ci = l_.col_idx();
  auto v = l_.values();
  // L z = y
  for (std::size_t i = 0; i < n_; ++i) {
    double s = y[i];
    auto const d = rp[i + 1] - 1;
    for (auto p = rp[i]; p < d; ++p) s -= v[p] * x[ci[p]];
    x[i] = s / v[d];
  }
  // L^T x = z, column-oriented sweep over the rows of L.
  for (std::size_t i = n_; i-- > 0;) {
    auto const d = rp[i + 1] - 1;
    x[i] /= v[d];
    double const xi = x[i];
    for (auto p = rp[i]; p < d; ++p) x[ci[p]] -= v[p] * xi;
  }
}

// --- Jacobi ----------------------------------------------------------------

JacobiPreconditioner::JacobiPreconditioner(const SparseMatrix& a) {
  require_square(a, "JacobiPreconditioner");
  inv_diag_ = a.diagonal_values();
  for (auto& d : inv_diag_) {
    if (!(d > 0.0)) throw PreconditionerError("jacobi: non-positive diagonal entry");
    d = 1.0 / d;
  }
}

void JacobiPreconditioner::apply_inverse(std::span<const double> y, std::span<double> x) const {
  require_size(inv_diag_.size(), y, x);
  for (std::size_t i = 0; i < inv_diag_.size(); ++i) x[i] = inv_diag_[i] * y[i];
}

std::unique_ptr<InnerPreconditioner> make_inner(InnerKind kind, const SparseMatrix& a) {
  switch (kind) {
    case InnerKind::exact: return std::make_unique<CholeskyPreconditioner>(a);
    case InnerKind::ic0: return std::make_unique<Ic0Preconditioner>(a);
    case InnerKind::jacobi: return std::make_unique<JacobiPreconditioner>(a);
  }
  throw std::invalid_argument("unknown inner preconditioner kind");
}

} // namespace bidomain
