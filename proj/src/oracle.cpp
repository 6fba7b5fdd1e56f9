#include "fsibem/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fsibem/specfun.hpp"

namespace fsibem {

namespace {

using mat3 = matrix<cplx, 3, 3>;
using vec3 = vector<cplx, 3>;

struct Seq {
  std::vector<real> j, y;
  // order n-1 with J_{-1} = -J_1, Y_{-1} = -Y_1
  real jm(int n) const { return n == 0 ? -j[1] : j[n - 1]; }
  real ym(int n) const { return n == 0 ? -y[1] : y[n - 1]; }
};

Seq sequence(int nmax, real x) {
  Seq s;
  bessel_jy_sequence(std::max(nmax, 1) + 1, x, s.j, s.y);
  return s;
}

void fill_mode(ModeSystem& m, const MaterialSystem& mat, real R0, const Seq& sk, const Seq& sp,
               const Seq& ss) {
  const int n = m.n;
  const real kr = mat.k * R0, pr = mat.k_p * R0;
  const real mu = mat.mu, eta = mat.eta, r2 = R0 * R0;
  const real nn = real(n) * n + n;
  const cplx h(sk.j[n], sk.y[n]), hm(sk.jm(n), sk.ym(n));
  const real jp = sp.j[n], jpm = sp.jm(n), js = ss.j[n], jsm = ss.jm(n);
  const real shear = mu * mat.k_s * mat.k_s * r2;
  auto& E = m.En;
  E(0, 0) = -hm + (n / kr) * h;
  E(0, 1) = eta * mat.k_p / mat.k * (jpm - (n / pr) * jp);
  E(0, 2) = eta * n / kr * js;
  E(1, 0) = 0;
  E(1, 1) = 2 * mu * n * mat.k_p / R0 * jpm - 2 * mu * nn / r2 * jp;
  E(1, 2) = (2 * mu * nn - shear) / r2 * js - 2 * mu * mat.k_s / R0 * jsm;
  E(2, 0) = h;
  E(2, 1) = (2 * mu * nn - shear) / r2 * jp - 2 * mu * mat.k_p / R0 * jpm;
  E(2, 2) = 2 * mu * n * mat.k_s / R0 * jsm - 2 * mu * nn / r2 * js;
  // Jacobi-Anger coefficient eps_n i^n of the unit plane wave along x
  const cplx c = real(n == 0 ? 1 : 2) * std::pow(cplx(0, 1), n);
  m.en(0) = c * (sk.jm(n) - (n / kr) * sk.j[n]);
  m.en(1) = 0;
  m.en(2) = -c * sk.j[n];
}

bool finite(const ModeSystem& m) { return m.En.allFinite() && m.en.allFinite(); }

void solve_mode(ModeSystem& m) {
  // columns first: Hankel and Bessel columns differ by hundreds of decades at high order
  Eigen::Vector3d dr = Eigen::Vector3d::Ones(), dc = Eigen::Vector3d::Ones();
  mat3 s = m.En;
  for (int pass = 0; pass < 3; ++pass) {
    for (int j = 0; j < 3; ++j) {
      const real c = s.col(j).cwiseAbs().maxCoeff();
      if (c > 0) s.col(j) /= c, dc(j) /= c;
    }
    for (int i = 0; i < 3; ++i) {
      const real r = s.row(i).cwiseAbs().maxCoeff();
      if (r > 0) s.row(i) /= r, dr(i) /= r;
    }
  }
  const auto sv = Eigen::JacobiSVD<mat3>(s).singularValues();
  m.rcond = sv(0) > 0 ? sv(2) / sv(0) : 0;
  const vec3 y = s.fullPivLu().solve(dr.asDiagonal() * m.en);
  m.Xn = dc.asDiagonal() * y;
  const real en = m.en.norm();
  m.residual = en > 0 ? (m.En * m.Xn - m.en).norm() / en : m.Xn.norm();
}

real direction_angle(const PlaneWave& w) { return std::atan2(w.direction(1), w.direction(0)); }

mat2<real> rotation(real a) {
  mat2<real> r;
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return r;
}

// F(r) T(theta) with F = J_n(kappa r) (or H_n); returns gradient and Hessian in Cartesian form.
template <class S>
void polar_derivatives(S F, S Fr, S Frr, real T, real Tt, real Ttt, real r, real th, vec2<S>& grad,
                       mat2<S>* hess) {
  const point er(std::cos(th), std::sin(th)), et(-std::sin(th), std::cos(th));
  const S fr = Fr * T, ft = F * Tt;
  grad = fr * er.cast<S>() + (ft / r) * et.cast<S>();
  if (!hess) return;
  const S frr = Frr * T, frt = Fr * Tt, ftt = F * Ttt;
  const mat2<S> rr = (er * er.transpose()).cast<S>(), tt = (et * et.transpose()).cast<S>(),
                rt = (er * et.transpose() + et * er.transpose()).cast<S>();
  *hess = frr * rr + (fr / r + ftt / (r * r)) * tt + (frt / r - ft / (r * r)) * rt;
}

struct Local {
  point x;
  real r, th;
};

Local to_local(const OracleSolution& s, const point& x) {
  const point xl = rotation(-direction_angle(s.wave)) * x;
  return {xl, xl.norm(), std::atan2(xl(1), xl(0))};
}

void check_outside(const OracleSolution& s, real r) {
  if (r < s.R0 * (1 - 1e-12))
    throw DomainError("exact pressure requested inside the solid (r = " + std::to_string(r) + ")");
}

void check_inside(const OracleSolution& s, real r) {
  if (r > s.R0 * (1 + 1e-12))
    throw DomainError("exact displacement requested outside the solid (r = " + std::to_string(r) + ")");
}

// Local-frame pressure and gradient.
void pressure_local(const OracleSolution& s, const Local& l, cplx& p, vec2<cplx>& g) {
  const int nmax = s.n_max();
  const real k = s.material.k, x = k * l.r;
  const Seq q = sequence(nmax, x);
  p = 0;
  g.setZero();
  for (int n = 0; n <= nmax; ++n) {
    const cplx A = s.modes[n].Xn(0);
    if (A == cplx(0)) continue;
    const cplx H(q.j[n], q.y[n]), Hn1(q.j[n + 1], q.y[n + 1]);
    const cplx dH = -Hn1 + (n / x) * H;
    const real T = std::cos(n * l.th), Tt = -n * std::sin(n * l.th);
    vec2<cplx> gn;
    polar_derivatives<cplx>(H, k * dH, 0, T, Tt, 0, l.r, l.th, gn, nullptr);
    p += A * H * T;
    g += A * gn;
  }
}

void displacement_local(const OracleSolution& s, const Local& l, vec2<cplx>& u, mat2<cplx>* jac) {
  const int nmax = s.n_max();
  const real kp = s.material.k_p, ks = s.material.k_s;
  u.setZero();
  if (jac) jac->setZero();
  if (l.r < 1e-12 * s.R0) {
    if (jac) throw DomainError("displacement Jacobian is not evaluated at the centre");
    if (nmax >= 1) u(0) = (s.modes[1].Xn(1) * kp + s.modes[1].Xn(2) * ks) / 2.0;
    return;
  }
  const Seq qp = sequence(nmax, kp * l.r), qs = sequence(nmax, ks * l.r);
  const mat2<cplx> A = rotation_A().cast<cplx>();
  for (int n = 0; n <= nmax; ++n) {
    const cplx B = s.modes[n].Xn(1), C = s.modes[n].Xn(2);
    const real c = std::cos(n * l.th), sn = std::sin(n * l.th);
    auto radial = [&](const Seq& q, real kap, real& F, real& Fr, real& Frr) {
      const real x = kap * l.r;
      F = q.j[n];
      const real d = -q.j[n + 1] + (n / x) * F;
      Fr = kap * d;
      Frr = kap * kap * (-d / x - (1 - real(n) * n / (x * x)) * F);
    };
    real F, Fr, Frr;
    vec2<real> gphi, gpsi;
    mat2<real> hphi, hpsi;
    radial(qp, kp, F, Fr, Frr);
    polar_derivatives<real>(F, Fr, Frr, c, -n * sn, -real(n) * n * c, l.r, l.th, gphi, &hphi);
    radial(qs, ks, F, Fr, Frr);
    polar_derivatives<real>(F, Fr, Frr, sn, n * c, -real(n) * n * sn, l.r, l.th, gpsi, &hpsi);
    u += B * gphi.cast<cplx>() - C * (A * gpsi.cast<cplx>());
    if (jac) *jac += B * hphi.cast<cplx>() - C * (A * hpsi.cast<cplx>());
  }
}

}  // namespace

ModeSystem mode_matrix(int n, const MaterialSystem& mat, real R0) {
  if (n < 0) throw DomainError("mode_matrix: negative mode index");
  ModeSystem m;
  m.n = n;
  fill_mode(m, mat, R0, sequence(n, mat.k * R0), sequence(n, mat.k_p * R0), sequence(n, mat.k_s * R0));
  return m;
}

std::vector<ModeSystem> mode_matrices(int n_max, const MaterialSystem& mat, real R0) {
  const Seq sk = sequence(n_max, mat.k * R0), sp = sequence(n_max, mat.k_p * R0),
            ss = sequence(n_max, mat.k_s * R0);
  std::vector<ModeSystem> out(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    out[n].n = n;
    fill_mode(out[n], mat, R0, sk, sp, ss);
  }
  return out;
}

namespace {

// |det E_n| collapses relative to nearby frequencies only at a genuine zero; high
// orders are ill-conditioned without being resonant.
real dip_ratio(int n, const MaterialSystem& mat, real R0) {
  const real w = mat.omega, dw = oracle_detail::resonance_window * w;
  const real d0 = std::abs(mode_matrix(n, mat, R0).En.determinant());
  const real dl = std::abs(mode_matrix(n, with_omega(mat, w - dw), R0).En.determinant());
  const real dh = std::abs(mode_matrix(n, with_omega(mat, w + dw), R0).En.determinant());
  // geometric mean is insensitive to the smooth power-law growth of high orders
  return d0 / std::sqrt(dl * dh);
}

}  // namespace

OracleSolution solve_oracle(const MaterialSystem& mat, real R0, const PlaneWave& wave, int n_max) {
  if (!(mat.omega > 0)) throw ParameterError("omega must be > 0");
  if (!(R0 > 0)) throw ParameterError("geometry.radius must be > 0");
  if (n_max < 1) throw ParameterError("oracle.n_max must be >= 1");
  OracleSolution s;
  s.material = mat;
  s.R0 = R0;
  s.wave = wave;
  s.n_max_requested = n_max;
  int nm = n_max;
  for (;;) {
    auto modes = mode_matrices(nm, mat, R0);
    s.modes.clear();
    real amax = 0;
    for (auto& m : modes) {
      if (!finite(m)) break;  // Hankel overflow: the tail is negligible by then
      solve_mode(m);
      const real ratio = dip_ratio(m.n, mat, R0);
      if (ratio < oracle_detail::resonance_depth) {
        std::ostringstream w;
        w << "oracle: mode n = " << m.n << " is resonant at omega = " << mat.omega
          << " (Jones frequency; |det E_n| is " << ratio << " of its value at omega +- "
          << oracle_detail::resonance_window * 100 << "%)";
        throw ResonanceError(w.str());
      }
      amax = std::max(amax, std::abs(m.Xn(0)));
      s.modes.push_back(m);
    }
    s.tail = amax > 0 ? std::abs(s.modes.back().Xn(0)) / amax : 0;
    const bool truncated = int(s.modes.size()) < nm + 1;
    if (s.tail < oracle_detail::tail_tolerance || truncated || nm >= oracle_detail::n_max_limit) break;
    nm = std::min(2 * nm, oracle_detail::n_max_limit);
  }
  return s;
}

cplx exact_pressure(const OracleSolution& s, const point& x) {
  const Local l = to_local(s, x);
  check_outside(s, l.r);
  cplx p;
  vec2<cplx> g;
  pressure_local(s, l, p, g);
  return p;
}

vec2<cplx> exact_pressure_gradient(const OracleSolution& s, const point& x) {
  const Local l = to_local(s, x);
  check_outside(s, l.r);
  cplx p;
  vec2<cplx> g;
  pressure_local(s, l, p, g);
  return rotation(direction_angle(s.wave)).cast<cplx>() * g;
}

vec2<cplx> exact_displacement(const OracleSolution& s, const point& x) {
  const Local l = to_local(s, x);
  check_inside(s, l.r);
  vec2<cplx> u;
  displacement_local(s, l, u, nullptr);
  return rotation(direction_angle(s.wave)).cast<cplx>() * u;
}

mat2<cplx> exact_displacement_jacobian(const OracleSolution& s, const point& x) {
  const Local l = to_local(s, x);
  check_inside(s, l.r);
  vec2<cplx> u;
  mat2<cplx> j;
  displacement_local(s, l, u, &j);
  const mat2<cplx> r = rotation(direction_angle(s.wave)).cast<cplx>();
  return r * j * r.transpose();
}

std::variant<cplx, vec2<cplx>> eval_exact(const OracleSolution& s, real r, real theta, ExactField which) {
  const point x(r * std::cos(theta), r * std::sin(theta));
  if (which == ExactField::p_scattered) return exact_pressure(s, x);
  return exact_displacement(s, x);
}

TransmissionResidual transmission_residuals(const OracleSolution& s, int points) {
  const auto& m = s.material;
  real kin = 0, dyn = 0, dn_scale = 0, p_scale = 0;
  for (int j = 0; j < points; ++j) {
    const real th = 2 * pi * j / points;
    const point n(std::cos(th), std::sin(th));
    const point x = s.R0 * n;
    const auto inc = incident_trace(s.wave, x, n);
    const cplx p = exact_pressure(s, x) + inc.p;
    const vec2<cplx> gp = exact_pressure_gradient(s, x) + inc.grad;
    const cplx dpdn = gp(0) * n(0) + gp(1) * n(1);
    const vec2<cplx> u = exact_displacement(s, x);
    const mat2<cplx> J = exact_displacement_jacobian(s, x);
    const vec2<cplx> nc = n.cast<cplx>();
    const vec2<cplx> t = m.lambda * J.trace() * nc + m.mu * (J + J.transpose()) * nc;
    kin = std::max(kin, std::abs(m.eta * (u(0) * n(0) + u(1) * n(1)) - dpdn));
    dyn = std::max(dyn, (t + p * nc).norm());
    dn_scale = std::max(dn_scale, std::abs(dpdn));
    p_scale = std::max(p_scale, std::abs(p));
  }
  return {kin / dn_scale, dyn / p_scale};
}

namespace {

real abs_det(int n, const MaterialSystem& tmpl, real R0, real omega) {
  return std::abs(mode_matrix(n, with_omega(tmpl, omega), R0).En.determinant());
}

}  // namespace

real jones_dip_ratio(const MaterialSystem& tmpl, real R0, real omega, int n_max) {
  real best = std::numeric_limits<real>::infinity();
  for (int n = 0; n <= n_max; ++n) {
    const real side = std::min(abs_det(n, tmpl, R0, omega - 0.1), abs_det(n, tmpl, R0, omega + 0.1));
    best = std::min(best, abs_det(n, tmpl, R0, omega) / side);
  }
  return best;
}

std::vector<real> find_jones_frequencies(const MaterialSystem& tmpl, real R0, real lo, real hi, int n_max) {
  std::vector<real> out;
  if (!(lo < hi)) return out;
  const real h = 0.005;
  const int m = int(std::ceil((hi - lo) / h)) + 1;
  std::vector<std::vector<real>> d(m, std::vector<real>(n_max + 1));
  for (int i = 0; i < m; ++i) {
    const real w = std::min(lo + i * h, hi);
    const auto modes = mode_matrices(n_max, with_omega(tmpl, w), R0);
    for (int n = 0; n <= n_max; ++n) d[i][n] = std::abs(modes[n].En.determinant());
  }
  const real g = (std::sqrt(5.0) - 1) / 2;
  for (int n = 0; n <= n_max; ++n) {
    for (int i = 1; i + 1 < m; ++i) {
      if (!(d[i][n] <= d[i - 1][n] && d[i][n] <= d[i + 1][n])) continue;
      real a = lo + (i - 1) * h, b = std::min(lo + (i + 1) * h, hi);
      real c = b - g * (b - a), e = a + g * (b - a);
      real fc = abs_det(n, tmpl, R0, c), fe = abs_det(n, tmpl, R0, e);
      while (b - a > 1e-11) {
        if (fc < fe) {
          b = e, e = c, fe = fc;
          c = b - g * (b - a);
          fc = abs_det(n, tmpl, R0, c);
        } else {
          a = c, c = e, fc = fe;
          e = a + g * (b - a);
          fe = abs_det(n, tmpl, R0, e);
        }
      }
      const real w = (a + b) / 2;
      if (w < lo || w > hi) continue;
      const real side = std::min(abs_det(n, tmpl, R0, w - 0.1), abs_det(n, tmpl, R0, w + 0.1));
      if (abs_det(n, tmpl, R0, w) < 1e-6 * side) out.push_back(w);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](real a, real b) { return b - a < 1e-4; }), out.end());
  return out;
}

std::vector<real> find_neumann_eigenfrequencies(real k_per_omega, real R0, real lo, real hi, int n_max) {
  std::vector<real> out;
  if (!(lo < hi) || !(k_per_omega > 0) || !(R0 > 0)) return out;
  const real scale = k_per_omega * R0;
  for (int n = 0; n <= n_max; ++n)
    for (real x : find_bessel_derivative_zeros(n, lo * scale, hi * scale)) out.push_back(x / scale);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](real a, real b) { return b - a < 1e-6; }), out.end());
  return out;
}

}  // namespace fsibem
