#pragma once

#include "bidomain/conductivity.hpp"
#include "bidomain/mesh.hpp"
#include "bidomain/sparse.hpp"

#include <span>
#include <vector>

namespace bidomain {

// X = (u, v): u on the whole domain (N), v on the heart (N_H), both in mV.
struct BlockVector {
  std::vector<double> u;
  std::vector<double> v;

  static BlockVector zeros(std::size_t n, std::size_t n_heart) {
    return {std::vector<double>(n, 0.0), std::vector<double>(n_heart, 0.0)};
  }
};

double dot(const BlockVector& a, const BlockVector& b);
double norm2(const BlockVector& a);

// chi c_m / dt in uF/(cm^3 ms). Throws std::invalid_argument unless all
// inputs are positive.
double gamma(double chi, double c_m, double dt);

// The 2x2 block system matrix
//
//   [ S_1         Pi^T S_i          ]
//   [ S_i Pi      gamma M_H + S_i   ]
//
// stored as its sparse blocks. S_e and M are kept for the normalization and
// for the reference checks.
class BidomainSystem {
 public:
  BidomainSystem(SparseMatrix s1, SparseMatrix si, SparseMatrix se, SparseMatrix m,
                 SparseMatrix mh, double gamma);

  // Assembles every block on the mesh with the given physics.
  static BidomainSystem assemble(const Mesh& mesh, const ConductivityParams& params,
                                 double gamma);

  std::size_t n() const { return s1_.rows(); }
  std::size_t n_heart() const { return si_.rows(); }
  double gamma() const { return gamma_; }
  const RestrictionMap& restriction() const { return pi_; }

  const SparseMatrix& s1() const { return s1_; }
  const SparseMatrix& si() const { return si_; }
  const SparseMatrix& se() const { return se_; }
  const SparseMatrix& mass() const { return m_; }
  const SparseMatrix& heart_mass() const { return mh_; }

  void check_sizes(const BlockVector& x) const;

 private:
  SparseMatrix s1_, si_, se_, m_, mh_;
  double gamma_;
  RestrictionMap pi_;
};

// (S_1 u + Pi^T S_i v, S_i Pi u + gamma M_H v + S_i v)
BlockVector apply_lambda(const BidomainSystem& sys, const BlockVector& x);

// (0, M_H (gamma V_n - chi (I_ion - I_st))). The u-block is exactly zero so
// the right hand side lies in the range of the system matrix.
BlockVector build_rhs(const BidomainSystem& sys, std::span<const double> v_n,
                      std::span<const double> ion_current,
                      std::span<const double> stim_current, double chi);

// Shifts u by its mass-weighted mean so that the integral of u vanishes.
BlockVector normalize_u(const BidomainSystem& sys, BlockVector x);

// Mass-weighted mean (M u, 1) / (M 1, 1).
double weighted_mean(const SparseMatrix& mass, std::span<const double> u);

} // namespace bidomain
