#include "bidomain/conductivity.hpp"

#include "bidomain/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bidomain {

ConductivityParams ConductivityParams::defaults(int dim) {
  ConductivityParams p;
  p.chi = dim == 2 ? 1500.0 : 500.0;
  return p;
}

void ConductivityParams::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("conductivity parameter ") + name +
                                  " must be strictly positive");
    }
  };
  check(g_i_l, "g_i_l");
  check(g_i_t, "g_i_t");
  check(g_e_l, "g_e_l");
  check(g_e_t, "g_e_t");
  check(k_lung, "k_lung");
  check(k_cavity, "k_cavity");
  check(k_other, "k_other");
  check(chi, "chi");
  check(c_m, "c_m");
}

Direction fiber_direction_3d(const Point& x) {
  double const z = std::clamp(x[2], 0.0, 1.0);
  double const theta = std::numbers::pi / 4.0 - (std::numbers::pi / 2.0) * z;
  Direction f(3);
  f << std::cos(theta), std::sin(theta), 0.0;
  return f;
}

Direction fiber_direction_2d(const Point& x) {
  double const dx = x[0] - 0.5;
  double const dy = x[1] - 0.5;
  double const r = std::hypot(dx, dy);
  Direction f(2);
  if (r < 1e-14) {
    f << 1.0, 0.0;
  } else {
    f << -dy / r, dx / r;
  }
  return f;
}

Direction fiber_direction(int dim, const Point& x) {
  return dim == 2 ? fiber_direction_2d(x) : fiber_direction_3d(x);
}

Tensor tensor_from_fiber(const Direction& f, double g_l, double g_t) {
  if (std::abs(f.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("tensor_from_fiber: fiber direction is not a unit vector");
  }
  auto const d = f.size();
  Tensor t(d, d);
  // Fill the upper triangle and mirror it so the result is exactly symmetric.
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      double const ff = f(i) * f(j);
      double v = (g_l - g_t) * ff;
      if (i == j) v += g_t;
      t(i, j) = v;
      t(j, i) = v;
    }
  }
  return t;
}

Tensor harmonic_mean_tensor(const Tensor& si, const Tensor& se) {
  Eigen::LLT<Tensor> li(si), le(se);
  if (li.info() != Eigen::Success || le.info() != Eigen::Success) {
    throw NumericalError("harmonic_mean_tensor: input tensor is not positive definite");
  }
  Tensor const id = Tensor::Identity(si.rows(), si.cols());
  Tensor sum = li.solve(id) + le.solve(id);
  sum = 0.5 * (sum + sum.transpose()).eval();
  Eigen::LLT<Tensor> ls(sum);
  if (ls.info() != Eigen::Success) {
    throw NumericalError("harmonic_mean_tensor: degenerate sum of inverses");
  }
  Tensor out = ls.solve(id);
  return 0.5 * (out + out.transpose());
}

Tensor sigma_i(const ConductivityParams& p, int dim, const Point& c) {
  return tensor_from_fiber(fiber_direction(dim, c), p.g_i_l, p.g_i_t);
}

Tensor sigma_e(const ConductivityParams& p, int dim, const Point& c) {
  return tensor_from_fiber(fiber_direction(dim, c), p.g_e_l, p.g_e_t);
}

namespace {

double torso_conductivity(const ConductivityParams& p, Region tag) {
  switch (tag) {
    case Region::torso_lung: return p.k_lung;
    case Region::torso_cavity: return p.k_cavity;
    case Region::torso_other: return p.k_other;
    case Region::heart: break;
  }
  throw std::invalid_argument("unknown region tag");
}

} // namespace

Tensor sigma_bar_1(const ConductivityParams& p, int dim, const Point& c, Region tag) {
  if (tag == Region::heart) return sigma_i(p, dim, c) + sigma_e(p, dim, c);
  return torso_conductivity(p, tag) * Tensor::Identity(dim, dim);
}

Tensor sigma_bar_e(const ConductivityParams& p, int dim, const Point& c, Region tag) {
  if (tag == Region::heart) return sigma_e(p, dim, c);
  return torso_conductivity(p, tag) * Tensor::Identity(dim, dim);
}

Tensor sigma_m(const ConductivityParams& p, int dim, const Point& c) {
  return harmonic_mean_tensor(sigma_i(p, dim, c), sigma_e(p, dim, c));
}

TensorField make_tensor_field(const ConductivityParams& p, int dim, TensorKind kind) {
  auto heart_only = [](Region tag) {
    if (tag != Region::heart) {
      throw std::invalid_argument("cardiac tensor requested outside the heart");
    }
  };
  switch (kind) {
    case TensorKind::intra:
      return [=](const Point& c, Region tag) { heart_only(tag); return sigma_i(p, dim, c); };
    case TensorKind::extra:
      return [=](const Point& c, Region tag) { heart_only(tag); return sigma_e(p, dim, c); };
    case TensorKind::bar_1:
      return [=](const Point& c, Region tag) { return sigma_bar_1(p, dim, c, tag); };
    case TensorKind::bar_e:
      return [=](const Point& c, Region tag) { return sigma_bar_e(p, dim, c, tag); };
    case TensorKind::monodomain:
      return [=](const Point& c, Region tag) { heart_only(tag); return sigma_m(p, dim, c); };
  }
  throw std::invalid_argument("unknown tensor kind");
}

} // namespace bidomain
