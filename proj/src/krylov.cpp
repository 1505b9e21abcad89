#include "bidomain/krylov.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <iomanip>
#include <stdexcept>
#include <string>

namespace bidomain {

namespace {

// Removes the kernel component (constant u, zero v) in the Euclidean sense.
void deflate(BlockVector& z) {
  double const m = std::accumulate(z.u.begin(), z.u.end(), 0.0) / static_cast<double>(z.u.size());
  for (auto& zi : z.u) zi -= m;
}

void axpy(double a, const BlockVector& x, BlockVector& y) {
  for (std::size_t i = 0; i < x.u.size(); ++i) y.u[i] += a * x.u[i];
  for (std::size_t i = 0; i < x.v.size(); ++i) y.v[i] += a * x.v[i];
}

// y = x + b y
void xpby(const BlockVector& x, double b, BlockVector& y) {
  for (std::size_t i = 0; i < x.u.size(); ++i) y.u[i] = x.u[i] + b * y.u[i];
  for (std::size_t i = 0; i < x.v.size(); ++i) y.v[i] = x.v[i] + b * y.v[i];
}

} // namespace

PcgResult pcg_solve(const BidomainSystem& sys, const BlockLUPreconditioner& precond,
                    const BlockVector& y, const PcgOptions& opt, const BlockVector* x0) {
  using clock = std::chrono::steady_clock;
  auto const start = clock::now();
  sys.check_sizes(y);
  if (!(opt.tol > 0.0)) throw std::invalid_argument("pcg_solve: tolerance must be positive");
  if (opt.max_iter < 1) throw std::invalid_argument("pcg_solve: max_iter must be positive");

  PcgResult out{BlockVector::zeros(sys.n(), sys.n_heart()), {}};
  auto& st = out.stats;
  auto finish = [&] {
    st.wall_time_ms =
        std::chrono::duration<double, std::milli>(clock::now() - start).count();
  };

  double const ny = norm2(y);
  if (ny == 0.0) {
    st.residual_history.push_back(0.0);
    finish();
    return out;
  }
  double const y_mean = std::accumulate(y.u.begin(), y.u.end(), 0.0);
  if (std::abs(y_mean) > 1e-8 * ny * std::sqrt(static_cast<double>(sys.n()))) {
    throw std::invalid_argument(
        "pcg_solve: u-block of the right hand side is not orthogonal to the constants");
  }

  auto& x = out.x;
  if (x0) {
    sys.check_sizes(*x0);
    x = *x0;
  }
  BlockVector r = apply_lambda(sys, x);
  ++st.mv_count;
  for (std::size_t i = 0; i < r.u.size(); ++i) r.u[i] = y.u[i] - r.u[i];
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] = y.v[i] - r.v[i];

  auto precondition = [&](const BlockVector& res) {
    BlockVector z = precond.apply_inverse(res);
    st.p1_count += 2;
    st.pk_count += 1;
    deflate(z);
    return z;
  };

  double res = norm2(r) / ny;
  st.residual_history.push_back(res);
  bool converged = res <= opt.tol;

  if (!converged) {
    BlockVector z = precondition(r);
    double rz = dot(r, z);
    st.preconditioned_residual.push_back(rz);
    BlockVector p = std::move(z);

    for (int k = 1; k <= opt.max_iter; ++k) {
      BlockVector const q = apply_lambda(sys, p);
      ++st.mv_count;
      double const pq = dot(p, q);
      if (!(pq > 0.0) || !std::isfinite(pq) || !std::isfinite(rz)) {
        finish();
        throw NumericalError("pcg_solve: breakdown at iteration " + std::to_string(k) +
                             " (non-positive or non-finite curvature)");
      }
      double const alpha = rz / pq;
      axpy(alpha, p, x);
      axpy(-alpha, q, r);
      res = norm2(r) / ny;
      st.residual_history.push_back(res);
      st.iterations = k;
      if (opt.on_iterate) opt.on_iterate(k, x);
      if (!std::isfinite(res)) {
        finish();
        throw NumericalError("pcg_solve: non-finite residual at iteration " +
                             std::to_string(k));
      }
      if (res <= opt.tol) {
        converged = true;
        break;
      }
      z = precondition(r);
      double const rz_next = dot(r, z);
      st.preconditioned_residual.push_back(rz_next);
      xpby(z, rz_next / rz, p);
      rz = rz_next;
    }
  }

  finish();
  if (!converged) {
    throw ConvergenceError("pcg_solve: no convergence within " + std::to_string(opt.max_iter) +
                               " iterations (residual " + std::to_string(res) + ")",
                           st);
  }
  x = normalize_u(sys, std::move(x));
  return out;
}

void write_residual_csv(std::ostream& os, const SolveStats& stats) {
  os << "iter,rel_residual\n" << std::setprecision(17);
  for (std::size_t k = 0; k < stats.residual_history.size(); ++k) {
    os << k << ',' << stats.residual_history[k] << '\n';
  }
}

} // namespace bidomain
