#pragma once

#include "bidomain/sparse.hpp"
#include "bidomain/system.hpp"

#include <Eigen/Dense>

#include <cstdint>

// Dense O(n^3) reference computations for small instances. These are the
// ground truth for the structural tests; nothing here is meant for
// production-size problems.
namespace bidomain::oracle {

using DenseMatrix = Eigen::MatrixXd;
using DenseVector = Eigen::VectorXd;

// Largest N + N_H accepted by the dense paths.
inline constexpr std::size_t max_dense_size = 5000;

DenseMatrix to_dense(const SparseMatrix& a);

// Pseudo-inverse of a symmetric PSD matrix whose kernel is spanned by the
// constant vector. Eigenvalues below 1e-10 * max eigenvalue are treated as
// zero; throws OracleError unless exactly one is, with a constant
// eigenvector.
DenseMatrix pseudo_inverse(const DenseMatrix& s);

// Orthogonal projector onto the complement of the constant vector.
DenseMatrix constant_complement_projector(Eigen::Index n);

// Number of eigenvalues of a symmetric matrix below rel_cutoff * max |eig|.
int null_space_dimension(const DenseMatrix& a, double rel_cutoff = 1e-10);

// Dense copies of the system blocks plus the derived operators.
class DenseSystem {
 public:
  explicit DenseSystem(const BidomainSystem& sys);

  Eigen::Index n() const { return s1.rows(); }
  Eigen::Index n_heart() const { return si.rows(); }

  DenseMatrix s1, si, se, mh, pi;  // pi is N_H x N (truncation)
  double gamma;

  DenseMatrix lambda() const;
  const DenseMatrix& s1_pinv() const { return s1_pinv_; }

  // gamma M_H + S_i - S_i Pi S_1^+ Pi^T S_i
  DenseMatrix exact_k() const;

  // S_i^+ + Pi S_e^+ Pi^T, whose inverse on 1_H-perp is K - gamma M_H.
  DenseMatrix stiffness_harmonic_sum() const;

  DenseMatrix lower() const;        // L
  DenseMatrix upper() const;        // U
  DenseMatrix lower_pinv() const;   // L^+
  DenseMatrix upper_inv() const;    // U^-1

  // X = U^-1 L^+ Y as a stacked vector.
  DenseVector lu_solve(const DenseVector& y) const;

 private:
  DenseMatrix s1_pinv_;
};

DenseMatrix exact_K(const BidomainSystem& sys);

// ||L U - Lambda||_F / ||Lambda||_F
double verify_block_lu(const BidomainSystem& sys);

// Max over: relative errors of L L^+ and L^+ L against diag(p, id), of
// U U^-1 against id, and relative residuals ||Lambda X - Y|| / ||Y|| of
// X = U^-1 L^+ Y for n_rhs random Y in the range of Lambda.
double verify_lu_inverses(const BidomainSystem& sys, std::uint64_t seed = 7, int n_rhs = 20);

struct SpsdReport {
  // min over samples of X^T Lambda X / (||Lambda||_2 ||X||^2)
  double min_quadratic = 0.0;
  // ||Lambda (1, 0)||_inf, from the sparse product
  double kernel_residual = 0.0;
  int null_dim = 0;
};

SpsdReport check_spsd(const BidomainSystem& sys, std::uint64_t seed = 7, int samples = 100);

// max ||K_0 H x - x|| / ||x|| over random x orthogonal to 1_H, with
// K_0 = K - gamma M_H and H = S_i^+ + Pi S_e^+ Pi^T.
double verify_harmonic_mean(const BidomainSystem& sys, std::uint64_t seed = 7, int samples = 50);

DenseVector stack(const BlockVector& x);
BlockVector unstack(const DenseVector& x, std::size_t n);

} // namespace bidomain::oracle
