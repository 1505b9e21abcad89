#include "bidomain/system.hpp"

#include "bidomain/assembly.hpp"

#include <cmath>
#include <stdexcept>

namespace bidomain {

double dot(const BlockVector& a, const BlockVector& b) {
  return dot(a.u, b.u) + dot(a.v, b.v);
}

double norm2(const BlockVector& a) { return std::sqrt(dot(a, a)); }

double gamma(double chi, double c_m, double dt) {
  if (!(chi > 0.0) || !(c_m > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("gamma: chi, c_m and dt must be positive");
  }
  return chi * c_m / dt;
}

BidomainSystem::BidomainSystem(SparseMatrix s1, SparseMatrix si, SparseMatrix se,
                               SparseMatrix m, SparseMatrix mh, double gamma)
    : s1_(std::move(s1)), si_(std::move(si)), se_(std::move(se)), m_(std::move(m)),
      mh_(std::move(mh)), gamma_(gamma), pi_(s1_.rows(), si_.rows()) {
  auto square = [](const SparseMatrix& a, std::size_t n) {
    return a.rows() == n && a.cols() == n;
  };
  if (!square(s1_, n()) || !square(se_, n()) || !square(m_, n()) ||
      !square(si_, n_heart()) || !square(mh_, n_heart())) {
    throw std::invalid_argument("BidomainSystem: block dimensions do not match");
  }
  if (!(gamma_ > 0.0)) throw std::invalid_argument("BidomainSystem: gamma must be positive");
}

BidomainSystem BidomainSystem::assemble(const Mesh& mesh, const ConductivityParams& params,
                                        double gamma) {
  params.validate();
  int const d = mesh.dim();
  return {assemble_stiffness(mesh, make_tensor_field(params, d, TensorKind::bar_1), Space::full),
          assemble_stiffness(mesh, make_tensor_field(params, d, TensorKind::intra),
                             Space::heart_only),
          assemble_stiffness(mesh, make_tensor_field(params, d, TensorKind::bar_e), Space::full),
          assemble_lumped_mass(mesh, Space::full),
          assemble_lumped_mass(mesh, Space::heart_only),
          gamma};
}

void BidomainSystem::check_sizes(const BlockVector& x) const {
  if (x.u.size() != n() || x.v.size() != n_heart()) {
    throw std::invalid_argument("block vector does not match the system dimensions");
  }
}

BlockVector apply_lambda(const BidomainSystem& sys, const BlockVector& x) {
  sys.check_sizes(x);
  auto const nh = sys.n_heart();
  BlockVector y{sys.s1().multiply(x.u), std::vector<double>(nh)};

  // One product with S_i serves both Pi^T S_i v and S_i v.
  auto const si_v = sys.si().multiply(x.v);
  auto const si_u = sys.si().multiply(std::span<const double>(x.u).first(nh));
  auto const mh_v = sys.heart_mass().multiply(x.v);
  for (std::size_t i = 0; i < nh; ++i) {
    y.u[i] += si_v[i];
    y.v[i] = si_u[i] + sys.gamma() * mh_v[i] + si_v[i];
  }
  return y;
}

BlockVector build_rhs(const BidomainSystem& sys, std::span<const double> v_n,
                      std::span<const double> ion, std::span<const double> stim, double chi) {
  auto const nh = sys.n_heart();
  if (v_n.size() != nh || ion.size() != nh || stim.size() != nh) {
    throw std::invalid_argument("build_rhs: vectors must have length N_H");
  }
  std::vector<double> w(nh);
  for (std::size_t i = 0; i < nh; ++i) {
    w[i] = sys.gamma() * v_n[i] - chi * (ion[i] - stim[i]);
  }
  return {std::vector<double>(sys.n(), 0.0), sys.heart_mass().multiply(w)};
}

double weighted_mean(const SparseMatrix& mass, std::span<const double> u) {
  // (M u, 1) / (M 1, 1) as column sums of M; M is diagonal here but the
  // formula does not rely on it.
  std::vector<double> const ones(u.size(), 1.0);
  auto const mu = mass.multiply(u);
  auto const m1 = mass.multiply(ones);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    num += mu[i];
    den += m1[i];
  }
  return num / den;
}

BlockVector normalize_u(const BidomainSystem& sys, BlockVector x) {
  sys.check_sizes(x);
  double const alpha = weighted_mean(sys.mass(), x.u);
  for (auto& ui : x.u) ui -= alpha;
  return x;
}

} // namespace bidomain
