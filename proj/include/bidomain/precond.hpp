#pragma once

#include "bidomain/conductivity.hpp"
#include "bidomain/inner.hpp"
#include "bidomain/mesh.hpp"
#include "bidomain/system.hpp"

#include <atomic>
#include <memory>

namespace bidomain {

// gamma M_H + S_m with S_m the stiffness of the harmonic-mean tensor on the
// heart. Same sparsity pattern as S_i.
SparseMatrix build_Km(const Mesh& mesh, const ConductivityParams& params, double gamma);

// S~_1 = S_1 + beta 1 1^T / N with beta the mean of diag(S_1). SPD when the
// kernel of S_1 is spanned by the constant vector, and S~_1^-1 y = S_1^+ y
// for y orthogonal to the constants.
class RegularizedS1 {
 public:
  explicit RegularizedS1(SparseMatrix s1);

  std::size_t size() const { return s1_.rows(); }
  double beta() const { return beta_; }
  const SparseMatrix& s1() const { return s1_; }

  // S~_1 x
  std::vector<double> apply(std::span<const double> x) const;

  // S_1 + beta e_0 e_0^T: the sparse SPD matrix the inner preconditioners are
  // set up on. Its inverse agrees with S_1^+ up to a constant shift on the
  // complement of the constants.
  SparseMatrix grounded() const;

 private:
  SparseMatrix s1_;
  double beta_;
};

RegularizedS1 regularize_S1(const SparseMatrix& s1);

// Wraps an inner preconditioner Q built on RegularizedS1::grounded() into an
// approximate inverse of S~_1:
//
//   P^-1 y = p Q^-1 p y + (mean(y) / beta) 1,    p = I - 1 1^T / N.
//
// With an exact Q this is exactly S~_1^-1.
class RegularizedInverse final : public InnerPreconditioner {
 public:
  RegularizedInverse(const RegularizedS1& reg, InnerKind kind);

  std::size_t size() const override { return inner_->size(); }
  std::string_view name() const override { return inner_->name(); }
  using InnerPreconditioner::apply_inverse;
  void apply_inverse(std::span<const double> y, std::span<double> x) const override;

 private:
  std::unique_ptr<InnerPreconditioner> inner_;
  double beta_;
};

struct OpCounters {
  std::size_t p1 = 0;   // inner P_1 inversions
  std::size_t pk = 0;   // inner P_K inversions
  std::size_t si = 0;   // products with S_i
  std::size_t applications = 0;
};

// Block-LU preconditioner P = L_P U_P with
//
//   L_P = [ P_1     0   ]     U_P = [ id   P_1^-1 Pi^T S_i ]
//         [ S_i Pi  P_K ]           [ 0    id              ]
//
// P_1 approximates S_1 (through its regularization) and P_K approximates
// K_m. The system must outlive the preconditioner.
class BlockLUPreconditioner {
 public:
  BlockLUPreconditioner(const BidomainSystem& sys, std::unique_ptr<InnerPreconditioner> p1,
                        std::unique_ptr<InnerPreconditioner> pk);

  // P_1 from the regularized S_1 and P_K from km, both of the given kind.
  static std::unique_ptr<BlockLUPreconditioner> build(const BidomainSystem& sys,
                                                      const SparseMatrix& km, InnerKind kind);

  // X = U_P^-1 L_P^-1 Y: two P_1 inversions, one P_K inversion and two
  // products with S_i.
  BlockVector apply_inverse(const BlockVector& y) const;

  OpCounters counters() const;
  void reset_counters() const;

  const InnerPreconditioner& p1() const { return *p1_; }
  const InnerPreconditioner& pk() const { return *pk_; }

 private:
  const BidomainSystem* sys_;
  std::unique_ptr<InnerPreconditioner> p1_;
  std::unique_ptr<InnerPreconditioner> pk_;
  mutable std::atomic<std::size_t> n_p1_{0}, n_pk_{0}, n_si_{0}, n_apply_{0};
};

} // namespace bidomain
