#include "fsibem/kernels.hpp"

#include <cmath>

#include "fsibem/specfun.hpp"

namespace fsibem {

namespace {

constexpr real euler_gamma = 0.57721566490153286061;
constexpr real series_switch = 0.25;  // k_s r below this: series form of R
const cplx I(0, 1);

void require_distinct(real r, const char* what) {
  if (!(r > 0)) throw SingularityError(std::string(what) + ": x and y coincide");
}

// radial Hessian: g zz^T + (f'/r) I, g = f'' - f'/r
mat2<cplx> radial_hessian(const Radial& f, real r, const point& z) {
  const cplx g = f.d2 - f.d1 / r;
  mat2<cplx> h = g * (z * z.transpose()).cast<cplx>();
  h(0, 0) += f.d1 / r;
  h(1, 1) += f.d1 / r;
  return h;
}

// T[l](i,j) = d_i d_j d_l f
std::array<mat2<cplx>, 2> radial_third(const Radial& f, real r, const point& z) {
  const cplx g = f.d2 - f.d1 / r;
  std::array<mat2<cplx>, 2> t;
  for (int l = 0; l < 2; ++l)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const real zzz = z(i) * z(j) * z(l);
        const real sym = (i == j) * z(l) + (i == l) * z(j) + (j == l) * z(i) - 3 * zzz;
        t[l](i, j) = f.d3 * zzz + (g / r) * sym;
      }
  return t;
}

}  // namespace

Radial helmholtz_radial(real kappa, real r, int order) {
  const real x = kappa * r;
  const Bessel01 b = bessel01(x);
  const cplx h0(b.j0, b.y0), h1(b.j1, b.y1);
  Radial f;
  f.f = 0.25 * I * h0;
  f.d1 = -0.25 * I * kappa * h1;
  if (order >= 2) f.d2 = -0.25 * I * kappa * kappa * (h0 - h1 / x);
  if (order >= 3) {
    const cplx dh1 = h0 - h1 / x;
    const cplx ddh1 = -dh1 / x - (1.0 - 1.0 / (x * x)) * h1;
    f.d3 = -0.25 * I * kappa * kappa * kappa * ddh1;
  }
  return f;
}

cplx difference_limit(real ks, real kp) { return -std::log(ks / kp) / (2 * pi); }

Radial difference_radial(real ks, real kp, real r, int order) {
  if (ks * r >= series_switch) {
    const Radial a = helmholtz_radial(ks, r, order), b = helmholtz_radial(kp, r, order);
    return {a.f - b.f, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
  }
  // gamma_kappa(r) = sum_m T_m r^2m [ -ln r / 2pi + alpha_m ],
  // T_m = (-1)^m (kappa/2)^2m / (m!)^2, alpha_m = -(ln(kappa/2) + gamma_E - H_m)/2pi + i/4
  Radial f{difference_limit(ks, kp), 0, 0, 0};
  const real L = std::log(r);
  real ts = 1, tp = 1, harm = 0, rq = 1;  // rq = r^(2m-2)
  const real qs = -0.25 * ks * ks, qp = -0.25 * kp * kp;
  const real ls = std::log(0.5 * ks) + euler_gamma, lp = std::log(0.5 * kp) + euler_gamma;
  for (int m = 1; m < 30; ++m) {
    ts *= qs / (real(m) * m);
    tp *= qp / (real(m) * m);
    harm += 1.0 / m;
    if (m > 1) rq *= r * r;
    const real c = -(ts - tp) / (2 * pi);
    const cplx as = -(ls - harm) / (2 * pi) + 0.25 * I;
    const cplx ap = -(lp - harm) / (2 * pi) + 0.25 * I;
    const cplx d = ts * as - tp * ap;
    const real p = 2.0 * m;
    const cplx v = c * L + d;
    f.f += rq * r * r * v;
    f.d1 += rq * r * (p * v + c);
    if (order >= 2) f.d2 += rq * (p * (p - 1) * v + (2 * p - 1) * c);
    if (order >= 3) f.d3 += rq / r * (p * (p - 1) * (p - 2) * v + (3 * p * p - 6 * p + 2) * c);
    if (std::abs(ts) * rq < 1e-18 * std::max(1.0, std::abs(L))) break;
  }
  return f;
}

cplx KernelBundle::gamma(real k, const point& x, const point& y) const { return eval_gamma(k, x, y); }

vec2<cplx> KernelBundle::grad_x_gamma(real k, const point& x, const point& y) const {
  const point z = x - y;
  const real r = z.norm();
  require_distinct(r, "grad_x_gamma");
  return helmholtz_radial(k, r, 1).d1 * (z / r).cast<cplx>();
}

mat2<cplx> KernelBundle::E(const point& x, const point& y) const { return eval_E(mat_, x, y); }

cplx KernelBundle::R(const point& x, const point& y) const {
  const real r = (x - y).norm();
  if (r == 0) return R_limit();
  return difference_radial(mat_.k_s, mat_.k_p, r, 1).f;
}

vec2<cplx> KernelBundle::grad_x_R(const point& x, const point& y) const {
  const point z = x - y;
  const real r = z.norm();
  if (r == 0) return vec2<cplx>::Zero();
  return difference_radial(mat_.k_s, mat_.k_p, r, 1).d1 * (z / r).cast<cplx>();
}

mat2<cplx> KernelBundle::hess_R(const point& x, const point& y) const {
  const point z = x - y;
  const real r = z.norm();
  require_distinct(r, "hess_R");
  return radial_hessian(difference_radial(mat_.k_s, mat_.k_p, r, 2), r, z / r);
}

std::array<mat2<cplx>, 2> KernelBundle::grad_x_E(const point& x, const point& y) const {
  const point z = x - y;
  const real r = z.norm();
  require_distinct(r, "grad_x_E");
  const point zh = z / r;
  const auto t = radial_third(difference_radial(mat_.k_s, mat_.k_p, r, 3), r, zh);
  const cplx gs1 = helmholtz_radial(mat_.k_s, r, 1).d1;
  const real a = 1 / (mat_.rho * mat_.omega * mat_.omega);
  std::array<mat2<cplx>, 2> d;
  for (int l = 0; l < 2; ++l) {
    d[l] = a * t[l];
    d[l](0, 0) += gs1 * zh(l) / mat_.mu;
    d[l](1, 1) += gs1 * zh(l) / mat_.mu;
  }
  return d;
}

mat2<cplx> KernelBundle::traction_TxE(const point& x, const point& y, const point& n) const {
  const auto d = grad_x_E(x, y);
  mat2<cplx> t;
  for (int j = 0; j < 2; ++j) {
    // column j: u_i = E_ij, grad u (i,l) = d[l](i,j)
    mat2<cplx> gu;
    for (int i = 0; i < 2; ++i)
      for (int l = 0; l < 2; ++l) gu(i, l) = d[l](i, j);
    const cplx div = gu(0, 0) + gu(1, 1);
    const vec2<cplx> nc = n.cast<cplx>();
    t.col(j) = mat_.lambda * div * nc + mat_.mu * (gu + gu.transpose()) * nc;
  }
  return t;
}

TractionTerms KernelBundle::traction_decomposition_TxE(const point& x, const point& y,
                                                       const point& n) const {
  const point z = x - y;
  const real r = z.norm();
  require_distinct(r, "traction_decomposition_TxE");
  const point zh = z / r;
  const Radial gs = helmholtz_radial(mat_.k_s, r, 1);
  TractionTerms t;
  t.term_nR = -n.cast<cplx>() * grad_x_R(x, y).transpose();
  t.term_gamma_n = gs.d1 * zh.dot(n) * mat2<cplx>::Identity();
  const auto d = grad_x_E(x, y);
  const point tx = rot90(n);
  mat2<cplx> dG = 2 * mat_.mu * (tx(0) * d[0] + tx(1) * d[1]);
  const cplx dgs = gs.d1 * zh.dot(tx);
  dG(0, 0) -= dgs;
  dG(1, 1) -= dgs;
  t.term_M = rotation_A().cast<cplx>() * dG;
  return t;
}

mat2<cplx> KernelBundle::traction_TyE_transposed(const point& x, const point& y, const point& n) const {
  // E depends on x - y, so d/dy = -d/dx
  auto d = grad_x_E(x, y);
  d[0] = -d[0];
  d[1] = -d[1];
  mat2<cplx> t;
  const vec2<cplx> nc = n.cast<cplx>();
  for (int j = 0; j < 2; ++j) {
    mat2<cplx> gu;
    for (int i = 0; i < 2; ++i)
      for (int l = 0; l < 2; ++l) gu(i, l) = d[l](i, j);
    const cplx div = gu(0, 0) + gu(1, 1);
    t.col(j) = mat_.lambda * div * nc + mat_.mu * (gu + gu.transpose()) * nc;
  }
  return t.transpose();
}

KernelSample KernelBundle::sample(const point& z, bool fluid, bool solid) const {
  KernelSample s;
  s.r = z.norm();
  s.zhat = z / s.r;
  if (fluid) {
    const Radial g = helmholtz_radial(mat_.k, s.r, 1);
    s.g_k = g.f;
    s.g1_k = g.d1;
  }
  if (solid) {
    const Radial gs = helmholtz_radial(mat_.k_s, s.r, 1);
    const Radial gp = helmholtz_radial(mat_.k_p, s.r, 0);
    s.g_s = gs.f;
    s.g1_s = gs.d1;
    s.g_p = gp.f;
    const Radial R = difference_radial(mat_.k_s, mat_.k_p, s.r, 2);
    s.R = R.f;
    s.R1 = R.d1;
    s.E = radial_hessian(R, s.r, s.zhat) / (mat_.rho * mat_.omega * mat_.omega);
    s.E(0, 0) += s.g_s / mat_.mu;
    s.E(1, 1) += s.g_s / mat_.mu;
  }
  return s;
}

cplx eval_gamma(real k, const point& x, const point& y) {
  const real r = (x - y).norm();
  require_distinct(r, "eval_gamma");
  return helmholtz_radial(k, r, 0).f;
}

mat2<cplx> eval_E(const MaterialSystem& m, const point& x, const point& y) {
  const point z = x - y;
  const real r = z.norm();
  require_distinct(r, "eval_E");
  const Radial R = difference_radial(m.k_s, m.k_p, r, 2);
  mat2<cplx> e = radial_hessian(R, r, z / r) / (m.rho * m.omega * m.omega);
  const cplx gs = helmholtz_radial(m.k_s, r, 0).f;
  e(0, 0) += gs / m.mu;
  e(1, 1) += gs / m.mu;
  return e;
}

cplx eval_R_limit(const MaterialSystem& m) { return difference_limit(m.k_s, m.k_p); }

}  // namespace fsibem
