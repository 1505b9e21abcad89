#include "bidomain/precond.hpp"

#include "bidomain/assembly.hpp"

#include <numeric>
#include <stdexcept>

namespace bidomain {

SparseMatrix build_Km(const Mesh& mesh, const ConductivityParams& params, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("build_Km: gamma must be positive");
  auto const sm = assemble_stiffness(
      mesh, make_tensor_field(params, mesh.dim(), TensorKind::monodomain), Space::heart_only);
  auto const mh = assemble_lumped_mass(mesh, Space::heart_only);
  return add(gamma, mh, 1.0, sm);
}

RegularizedS1::RegularizedS1(SparseMatrix s1) : s1_(std::move(s1)) {
  if (s1_.rows() != s1_.cols() || s1_.rows() == 0) {
    throw std::invalid_argument("regularize_S1: matrix must be square and non-empty");
  }
  auto const d = s1_.diagonal_values();
  beta_ = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
  if (!(beta_ > 0.0)) throw std::invalid_argument("regularize_S1: diagonal must be positive");
}

std::vector<double> RegularizedS1::apply(std::span<const double> x) const {
  auto y = s1_.multiply(x);
  double const m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  for (auto& yi : y) yi += beta_ * m;
  return y;
}

SparseMatrix RegularizedS1::grounded() const {
  std::vector<double> e0(size(), 0.0);
  e0[0] = beta_;
  return add(1.0, s1_, 1.0, SparseMatrix::diagonal(e0));
}

RegularizedS1 regularize_S1(const SparseMatrix& s1) { return RegularizedS1(s1); }

RegularizedInverse::RegularizedInverse(const RegularizedS1& reg, InnerKind kind)
    : inner_(make_inner(kind, reg.grounded())), beta_(reg.beta()) {}

namespace {

double mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

void remove_mean(std::span<double> x) {
  double const m = mean(x);
  for (auto& xi : x) xi -= m;
}

} // namespace

void RegularizedInverse::apply_inverse(std::span<const double> y, std::span<double> x) const {
  if (y.size() != size() || x.size() != size()) {
    throw std::invalid_argument("apply_inverse: vector length does not match the operator");
  }
  double const m = mean(y);
  std::vector<double> py(y.begin(), y.end());
  for (auto& v : py) v -= m;
  inner_->apply_inverse(py, x);
  remove_mean(x);
  for (auto& xi : x) xi += m / beta_;
}

BlockLUPreconditioner::BlockLUPreconditioner(const BidomainSystem& sys,
                                             std::unique_ptr<InnerPreconditioner> p1,
                                             std::unique_ptr<InnerPreconditioner> pk)
    : sys_(&sys), p1_(std::move(p1)), pk_(std::move(pk)) {
  if (!p1_ || !pk_) throw std::invalid_argument("BlockLUPreconditioner: missing inner preconditioner");
  if (p1_->size() != sys.n() || pk_->size() != sys.n_heart()) {
    throw std::invalid_argument("BlockLUPreconditioner: inner preconditioner sizes do not match");
  }
}

std::unique_ptr<BlockLUPreconditioner> BlockLUPreconditioner::build(
    const BidomainSystem& sys, const SparseMatrix& km, InnerKind kind) {
  if (km.rows() != sys.n_heart() || km.cols() != sys.n_heart()) {
    throw std::invalid_argument("BlockLUPreconditioner: K_m must be N_H x N_H");
  }
  return std::make_unique<BlockLUPreconditioner>(
      sys, std::make_unique<RegularizedInverse>(regularize_S1(sys.s1()), kind),
      make_inner(kind, km));
}

BlockVector BlockLUPreconditioner::apply_inverse(const BlockVector& y) const {
  sys_->check_sizes(y);
  auto const nh = sys_->n_heart();
  auto const& si = sys_->si();

  // Forward: t = P_1^-1 y_u, s = P_K^-1 (y_v - S_i Pi t).
  BlockVector x{p1_->apply_inverse(y.u), {}};
  auto const si_t = si.multiply(std::span<const double>(x.u).first(nh));
  std::vector<double> rhs(nh);
  for (std::size_t i = 0; i < nh; ++i) rhs[i] = y.v[i] - si_t[i];
  x.v = pk_->apply_inverse(rhs);

  // Backward: u = t - P_1^-1 Pi^T S_i s.
  std::vector<double> lift(sys_->n(), 0.0);
  si.multiply(x.v, std::span<double>(lift).first(nh));
  auto const corr = p1_->apply_inverse(lift);
  for (std::size_t i = 0; i < x.u.size(); ++i) x.u[i] -= corr[i];

  n_p1_ += 2;
  n_pk_ += 1;
  n_si_ += 2;
  n_apply_ += 1;
  return x;
}

OpCounters BlockLUPreconditioner::counters() const {
  return {n_p1_.load(), n_pk_.load(), n_si_.load(), n_apply_.load()};
}

void BlockLUPreconditioner::reset_counters() const {
  n_p1_ = 0;
  n_pk_ = 0;
  n_si_ = 0;
  n_apply_ = 0;
}

} // namespace bidomain
