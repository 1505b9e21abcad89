#pragma once

#include "bidomain/errors.hpp"
#include "bidomain/precond.hpp"
#include "bidomain/system.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace bidomain {

struct SolveStats {
  int iterations = 0;
  // ||Y - Lambda X_k|| / ||Y|| for k = 0..iterations (recursive residual).
  std::vector<double> residual_history;
  // (r_k, P^-1 r_k) for every preconditioned residual that was formed.
  std::vector<double> preconditioned_residual;
  double wall_time_ms = 0.0;
  std::size_t mv_count = 0;
  std::size_t p1_count = 0;
  std::size_t pk_count = 0;

  double final_residual() const {
    return residual_history.empty() ? 0.0 : residual_history.back();
  }
};

struct PcgOptions {
  double tol = 1e-6;
  int max_iter = 500;
  // Called with every iterate x_k (before normalization), k >= 1.
  std::function<void(int, const BlockVector&)> on_iterate;
};

struct PcgResult {
  BlockVector x;
  SolveStats stats;
};

// Raised when max_iter is reached; carries the statistics so far.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, SolveStats stats)
      : NumericalError(what), stats_(std::move(stats)) {}
  const SolveStats& stats() const { return stats_; }

 private:
  SolveStats stats_;
};

// Preconditioned conjugate gradient for Lambda X = Y with Y_u orthogonal to
// the constants. Preconditioned residuals are projected onto the complement
// of the kernel (constant u, zero v) after every application, and the
// returned X is normalized so that the mass-weighted mean of u vanishes.
//
// Costs one Lambda product for the initial residual, then one Lambda
// product and at most one preconditioner application per iteration.
PcgResult pcg_solve(const BidomainSystem& sys, const BlockLUPreconditioner& precond,
                    const BlockVector& y, const PcgOptions& options = {},
                    const BlockVector* x0 = nullptr);

// CSV with header "iter,rel_residual".
void write_residual_csv(std::ostream& os, const SolveStats& stats);

} // namespace bidomain
