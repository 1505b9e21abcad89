#pragma once

#include "bidomain/mesh.hpp"

#include <Eigen/Dense>

#include <functional>

namespace bidomain {

// Conductivities in mS/cm, chi in 1/cm, c_m in uF/cm^2.
struct ConductivityParams {
  double g_i_l = 1.741;
  double g_i_t = 0.1934;
  double g_e_l = 3.906;
  double g_e_t = 1.970;
  double k_lung = 0.5;
  double k_cavity = 6.7;
  double k_other = 2.2;
  double chi = 500.0;
  double c_m = 1.0;

  // Table defaults; chi is 1500 1/cm for the 2D slice and 500 1/cm in 3D.
  static ConductivityParams defaults(int dim);

  // Throws std::invalid_argument naming the first non-positive field.
  void validate() const;
};

// Symmetric d x d tensor, d in {2, 3}.
using Tensor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
using Direction = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;

// Horizontal fibers rotating linearly from +pi/4 at z=0 to -pi/4 at z=1.
Direction fiber_direction_3d(const Point& x);

// Circular fibers around the centre of the synthetic heart block; falls back
// to (1,0) at the centre.
Direction fiber_direction_2d(const Point& x);

Direction fiber_direction(int dim, const Point& x);

// g_l f f^T + g_t (I - f f^T). f must be a unit vector.
Tensor tensor_from_fiber(const Direction& f, double g_l, double g_t);

// (si^-1 + se^-1)^-1. Throws NumericalError on singular input.
Tensor harmonic_mean_tensor(const Tensor& si, const Tensor& se);

// Intra-/extra-cellular tensors, defined on the heart only.
Tensor sigma_i(const ConductivityParams& p, int dim, const Point& centroid);
Tensor sigma_e(const ConductivityParams& p, int dim, const Point& centroid);

// Whole-domain tensors: sigma_i + sigma_e (resp. sigma_e) on the heart and
// k I on the torso with the tag's conductivity.
Tensor sigma_bar_1(const ConductivityParams& p, int dim, const Point& centroid, Region tag);
Tensor sigma_bar_e(const ConductivityParams& p, int dim, const Point& centroid, Region tag);

// Harmonic mean of sigma_i and sigma_e; heart only.
Tensor sigma_m(const ConductivityParams& p, int dim, const Point& centroid);

// Evaluation rule (centroid, tag) -> tensor used by assembly.
using TensorField = std::function<Tensor(const Point&, Region)>;

enum class TensorKind { intra, extra, bar_1, bar_e, monodomain };

TensorField make_tensor_field(const ConductivityParams& p, int dim, TensorKind kind);

} // namespace bidomain
