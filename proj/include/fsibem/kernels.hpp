#pragma once

#include <array>

#include "fsibem/material.hpp"
#include "fsibem/types.hpp"

namespace fsibem {

// f(r) and its first three radial derivatives.
struct Radial {
  cplx f, d1, d2, d3;
};

// gamma_kappa(r) = (i/4) H_0^(1)(kappa r)
Radial helmholtz_radial(real kappa, real r, int order = 2);

// R(r) = gamma_ks - gamma_kp; ascending series near r = 0 where the log terms cancel.
Radial difference_radial(real ks, real kp, real r, int order = 2);
cplx difference_limit(real ks, real kp);

// Values needed by the Galerkin integrands at one point pair.
struct KernelSample {
  real r = 0;
  point zhat{0, 0};  // (x - y)/|x - y|
  cplx g_k, g1_k;    // gamma_k and d/dr
  cplx g_s, g1_s, g_p;
  cplx R, R1;
  mat2<cplx> E;
  vec2<cplx> grad_x_gk() const { return g1_k * zhat.cast<cplx>(); }
  vec2<cplx> grad_x_gs() const { return g1_s * zhat.cast<cplx>(); }
  vec2<cplx> grad_x_R() const { return R1 * zhat.cast<cplx>(); }
};

struct TractionTerms {
  mat2<cplx> term_nR;       // -n_x grad_x R^T
  mat2<cplx> term_gamma_n;  // d gamma_ks / dn_x I
  mat2<cplx> term_M;        // A d/dt_x [2 mu E - gamma_ks I]
  mat2<cplx> sum() const { return term_nR + term_gamma_n + term_M; }
};

class KernelBundle {
 public:
  explicit KernelBundle(const MaterialSystem& m) : mat_(m) {}
  const MaterialSystem& material() const { return mat_; }

  cplx gamma(real k, const point& x, const point& y) const;
  vec2<cplx> grad_x_gamma(real k, const point& x, const point& y) const;
  mat2<cplx> E(const point& x, const point& y) const;
  cplx R(const point& x, const point& y) const;  // continuous extension at x = y
  vec2<cplx> grad_x_R(const point& x, const point& y) const;
  mat2<cplx> hess_R(const point& x, const point& y) const;
  cplx R_limit() const { return difference_limit(mat_.k_s, mat_.k_p); }

  // dE[l](i,j) = d/dx_l E_ij(x, y)
  std::array<mat2<cplx>, 2> grad_x_E(const point& x, const point& y) const;

  // Traction in x applied to the columns of E, from the definition of T.
  mat2<cplx> traction_TxE(const point& x, const point& y, const point& n_x) const;
  TractionTerms traction_decomposition_TxE(const point& x, const point& y, const point& n_x) const;
  // (T_y E(x, y))^T: kernel of the elastic double layer
  mat2<cplx> traction_TyE_transposed(const point& x, const point& y, const point& n_y) const;

  KernelSample sample(const point& x, const point& y, bool fluid, bool solid) const {
    return sample(point(x - y), fluid, solid);
  }
  KernelSample sample(const point& z, bool fluid, bool solid) const;  // z = x - y

 private:
  MaterialSystem mat_;
};

cplx eval_gamma(real k, const point& x, const point& y);
mat2<cplx> eval_E(const MaterialSystem& m, const point& x, const point& y);
cplx eval_R_limit(const MaterialSystem& m);

}  // namespace fsibem
