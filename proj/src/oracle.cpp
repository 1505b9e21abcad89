#include "bidomain/oracle.hpp"

#include "bidomain/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace bidomain::oracle {

namespace {

void guard(std::size_t n) {
  if (n > max_dense_size) {
    throw OracleError("dense reference refused: size " + std::to_string(n) +
                      " exceeds " + std::to_string(max_dense_size));
  }
}

double rel_fro(const DenseMatrix& a, const DenseMatrix& ref) {
  return (a - ref).norm() / ref.norm();
}

} // namespace

DenseMatrix to_dense(const SparseMatrix& a) {
  guard(std::max(a.rows(), a.cols()));
  DenseMatrix d = DenseMatrix::Zero(static_cast<Eigen::Index>(a.rows()),
                                     static_cast<Eigen::Index>(a.cols()));
  auto rp = a.row_ptr();
  auto ci = a.col_idx();
  auto v = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (auto p = rp[i]; p < rp[i + 1]; ++p) {
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(ci[p])) = v[p];
    }
  }
  return d;
}

DenseMatrix constant_complement_projector(Eigen::Index n) {
  return DenseMatrix::Identity(n, n) -
         DenseMatrix::Constant(n, n, 1.0 / static_cast<double>(n));
}

DenseMatrix pseudo_inverse(const DenseMatrix& s) {
  guard(static_cast<std::size_t>(s.rows()));
  if (s.rows() != s.cols() || (s - s.transpose()).norm() > 1e-12 * s.norm()) {
    throw OracleError("pseudo_inverse: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(s);
  auto const& lam = eig.eigenvalues();
  double const cutoff = 1e-10 * lam.cwiseAbs().maxCoeff();
  int zeros = 0;
  Eigen::Index kernel_col = 0;
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    if (std::abs(lam(k)) <= cutoff) {
      ++zeros;
      kernel_col = k;
    }
  }
  if (zeros != 1) {
    throw OracleError("pseudo_inverse: expected a one-dimensional kernel, found " +
                      std::to_string(zeros));
  }
  DenseVector const ker = eig.eigenvectors().col(kernel_col);
  double const n = static_cast<double>(s.rows());
  if (std::abs(std::abs(ker.sum()) / std::sqrt(n) - 1.0) > 1e-8) {
    throw OracleError("pseudo_inverse: kernel is not spanned by the constant vector");
  }
  DenseVector inv = DenseVector::Zero(lam.size());
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    if (k != kernel_col) inv(k) = 1.0 / lam(k);
  }
  DenseMatrix const& q = eig.eigenvectors();
  DenseMatrix out = q * inv.asDiagonal() * q.transpose();
  return 0.5 * (out + out.transpose());
}

int null_space_dimension(const DenseMatrix& a, double rel_cutoff) {
  guard(static_cast<std::size_t>(a.rows()));
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(a, Eigen::EigenvaluesOnly);
  auto const& lam = eig.eigenvalues();
  double const cutoff = rel_cutoff * lam.cwiseAbs().maxCoeff();
  int count = 0;
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    if (std::abs(lam(k)) <= cutoff) ++count;
  }
  return count;
}

DenseSystem::DenseSystem(const BidomainSystem& sys) {
  guard(sys.n() + sys.n_heart());
  s1 = to_dense(sys.s1());
  si = to_dense(sys.si());
  se = to_dense(sys.se());
  mh = to_dense(sys.heart_mass());
  gamma = sys.gamma();
  pi = DenseMatrix::Zero(si.rows(), s1.rows());
  for (Eigen::Index i = 0; i < si.rows(); ++i) pi(i, i) = 1.0;
  s1_pinv_ = pseudo_inverse(s1);
}

DenseMatrix DenseSystem::lambda() const {
  auto const nn = n(), nh = n_heart();
  DenseMatrix a(nn + nh, nn + nh);
  a.topLeftCorner(nn, nn) = s1;
  a.topRightCorner(nn, nh) = pi.transpose() * si;
  a.bottomLeftCorner(nh, nn) = si * pi;
  a.bottomRightCorner(nh, nh) = gamma * mh + si;
  return a;
}

DenseMatrix DenseSystem::exact_k() const {
  DenseMatrix k = gamma * mh + si - si * pi * s1_pinv_ * pi.transpose() * si;
  return 0.5 * (k + k.transpose());
}

DenseMatrix DenseSystem::stiffness_harmonic_sum() const {
  return pseudo_inverse(si) + pi * pseudo_inverse(se) * pi.transpose();
}

DenseMatrix DenseSystem::lower() const {
  auto const nn = n(), nh = n_heart();
  DenseMatrix l = DenseMatrix::Zero(nn + nh, nn + nh);
  l.topLeftCorner(nn, nn) = s1;
  l.bottomLeftCorner(nh, nn) = si * pi;
  l.bottomRightCorner(nh, nh) = exact_k();
  return l;
}

DenseMatrix DenseSystem::upper() const {
  auto const nn = n(), nh = n_heart();
  DenseMatrix u = DenseMatrix::Identity(nn + nh, nn + nh);
  u.topRightCorner(nn, nh) = s1_pinv_ * pi.transpose() * si;
  return u;
}

DenseMatrix DenseSystem::lower_pinv() const {
  auto const nn = n(), nh = n_heart();
  DenseMatrix const k_inv = exact_k().llt().solve(DenseMatrix::Identity(nh, nh));
  DenseMatrix l = DenseMatrix::Zero(nn + nh, nn + nh);
  l.topLeftCorner(nn, nn) = s1_pinv_;
  l.bottomLeftCorner(nh, nn) = -k_inv * si * pi * s1_pinv_;
  l.bottomRightCorner(nh, nh) = k_inv;
  return l;
}

DenseMatrix DenseSystem::upper_inv() const {
  auto const nn = n(), nh = n_heart();
  DenseMatrix u = DenseMatrix::Identity(nn + nh, nn + nh);
  u.topRightCorner(nn, nh) = -s1_pinv_ * pi.transpose() * si;
  return u;
}

DenseVector DenseSystem::lu_solve(const DenseVector& y) const {
  return upper_inv() * (lower_pinv() * y);
}

DenseMatrix exact_K(const BidomainSystem& sys) { return DenseSystem(sys).exact_k(); }

double verify_block_lu(const BidomainSystem& sys) {
  DenseSystem const d(sys);
  return rel_fro(d.lower() * d.upper(), d.lambda());
}

double verify_lu_inverses(const BidomainSystem& sys, std::uint64_t seed, int n_rhs) {
  DenseSystem const d(sys);
  auto const nn = d.n(), nh = d.n_heart();
  DenseMatrix diag = DenseMatrix::Identity(nn + nh, nn + nh);
  diag.topLeftCorner(nn, nn) = constant_complement_projector(nn);

  DenseMatrix const l = d.lower(), lp = d.lower_pinv();
  DenseMatrix const u = d.upper(), ui = d.upper_inv();
  DenseMatrix const lam = d.lambda();

  double err = rel_fro(l * lp, diag);
  err = std::max(err, rel_fro(lp * l, diag));
  err = std::max(err, rel_fro(u * ui, DenseMatrix::Identity(nn + nh, nn + nh)));
  err = std::max(err, rel_fro(ui * u, DenseMatrix::Identity(nn + nh, nn + nh)));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int t = 0; t < n_rhs; ++t) {
    DenseVector y(nn + nh);
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = unif(rng);
    y.head(nn).array() -= y.head(nn).mean();
    DenseVector const x = ui * (lp * y);
    err = std::max(err, (lam * x - y).norm() / y.norm());
  }
  return err;
}

SpsdReport check_spsd(const BidomainSystem& sys, std::uint64_t seed, int samples) {
  DenseSystem const d(sys);
  DenseMatrix const lam = d.lambda();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(lam, Eigen::EigenvaluesOnly);
  double const norm = eig.eigenvalues().cwiseAbs().maxCoeff();

  SpsdReport r;
  r.null_dim = null_space_dimension(lam);
  r.min_quadratic = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int t = 0; t < samples; ++t) {
    DenseVector x(lam.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = unif(rng);
    r.min_quadratic = std::min(r.min_quadratic, x.dot(lam * x) / (norm * x.squaredNorm()));
  }

  BlockVector one = BlockVector::zeros(sys.n(), sys.n_heart());
  std::fill(one.u.begin(), one.u.end(), 1.0);
  auto const y = apply_lambda(sys, one);
  for (double a : y.u) r.kernel_residual = std::max(r.kernel_residual, std::abs(a));
  for (double a : y.v) r.kernel_residual = std::max(r.kernel_residual, std::abs(a));
  return r;
}

double verify_harmonic_mean(const BidomainSystem& sys, std::uint64_t seed, int samples) {
  DenseSystem const d(sys);
  DenseMatrix const k0 = d.exact_k() - d.gamma * d.mh;
  DenseMatrix const h = d.stiffness_harmonic_sum();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double err = 0.0;
  for (int t = 0; t < samples; ++t) {
    DenseVector x(d.n_heart());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = unif(rng);
    x.array() -= x.mean();
    err = std::max(err, (k0 * (h * x) - x).norm() / x.norm());
  }
  return err;
}

DenseVector stack(const BlockVector& x) {
  DenseVector s(static_cast<Eigen::Index>(x.u.size() + x.v.size()));
  for (std::size_t i = 0; i < x.u.size(); ++i) s(static_cast<Eigen::Index>(i)) = x.u[i];
  for (std::size_t i = 0; i < x.v.size(); ++i) {
    s(static_cast<Eigen::Index>(x.u.size() + i)) = x.v[i];
  }
  return s;
}

BlockVector unstack(const DenseVector& x, std::size_t n) {
  BlockVector b;
  b.u.assign(x.data(), x.data() + n);
  b.v.assign(x.data() + n, x.data() + x.size());
  return b;
}

} // namespace bidomain::oracle
