#include "fsibem/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace fsibem {

namespace {

constexpr real euler_gamma = 0.57721566490153286061;
using specfun_detail::asymptotic_limit;
using specfun_detail::series_limit;

Bessel01 series01(real x) {
  const real h = 0.5 * x, q = -h * h;
  real t0 = 1.0, j0 = 1.0, ysum0 = 0.0, harm = 0.0;
  // J1 terms s_k = (-1)^k h^(2k+1)/(k!(k+1)!), Y1 weights psi(k+1)+psi(k+2)
  real s1 = h, j1 = h, ysum1 = h * (-2.0 * euler_gamma + 1.0);
  for (int m = 1; m < 40; ++m) {
    t0 *= q / (real(m) * m);
    harm += 1.0 / m;
    j0 += t0;
    ysum0 -= harm * t0;
    s1 *= q / (real(m) * (m + 1));
    j1 += s1;
    ysum1 += s1 * (-2.0 * euler_gamma + 2.0 * harm + 1.0 / (m + 1));
    if (std::abs(t0) < 1e-18 && std::abs(s1) < 1e-18) break;
  }
  const real lg = std::log(h) + euler_gamma;
  Bessel01 b;
  b.j0 = j0;
  b.j1 = j1;
  b.y0 = (2.0 / pi) * (lg * j0 + ysum0);
  b.y1 = -2.0 / (pi * x) + (2.0 / pi) * std::log(h) * j1 - ysum1 / pi;
  return b;
}

void hankel_asymptotic(int nu, real x, real& j, real& y) {
  const real mu = 4.0 * nu * nu;
  real p = 1.0, q = 0.0, term = 1.0, prev = 1e300;
  for (int k = 1; k < 60; ++k) {
    const real odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(term) > prev) break;  // asymptotic series started to diverge
    prev = std::abs(term);
    const int s = ((k / 2) % 2 == 0) ? 1 : -1;
    if (k % 2 == 1)
      q += s * term;
    else
      p += s * term;
    if (std::abs(term) < 1e-17) break;
  }
  const real chi = x - (0.5 * nu + 0.25) * pi;
  const real amp = std::sqrt(2.0 / (pi * x));
  const real c = std::cos(chi), s = std::sin(chi);
  j = amp * (p * c - q * s);
  y = amp * (p * s + q * c);
}

// Miller backward recurrence normalised by J0 + 2 sum J_2k = 1; also yields Y0, Y1
// through the Neumann series. buf receives J_0..J_top.
template <class Buf>
void miller(real x, Buf& buf, int top, real* y0, real* y1) {
  real jp1 = 0.0, jk = 1e-300;
  real norm = 0.0;
  for (int k = top; k >= 0; --k) {
    buf[k] = jk;
    if (k % 2 == 0) norm += (k == 0 ? 1.0 : 2.0) * jk;
    if (k == 0) break;
    const real jm1 = (2.0 * k / x) * jk - jp1;
    jp1 = jk;
    jk = jm1;
    if (std::abs(jk) > 1e250) {
      for (int i = k; i <= top; ++i) buf[i] *= 1e-250;
      jp1 *= 1e-250;
      jk *= 1e-250;
      norm *= 1e-250;
    }
  }
  const real inv = 1.0 / norm;
  for (int k = 0; k <= top; ++k) buf[k] *= inv;
  if (y0 && y1) {
    const real lg = std::log(0.5 * x) + euler_gamma;
    real s0 = 0.0, s1 = 0.0;
    for (int k = 1; 2 * k + 1 <= top; ++k) {
      const real sg = (k % 2 == 0) ? 1.0 : -1.0;
      s0 += sg * buf[2 * k] / k;
      s1 += sg * (buf[2 * k - 1] - buf[2 * k + 1]) / k;
    }
    *y0 = (2.0 / pi) * (lg * buf[0] - 2.0 * s0);
    *y1 = (2.0 / pi) * (-buf[0] / x + lg * buf[1] + s1);
  }
}

int miller_start(real x, int nmax) {
  const real m = std::max(x, real(nmax));
  int top = int(m + 25.0 + 2.0 * std::sqrt(m)) + 2;
  if (top % 2) ++top;
  return top;
}

real bessel_j_series(int n, real x) {
  const real h = 0.5 * x, q = -h * h;
  // (x/2)^n / n!
  real lead = 1.0;
  for (int i = 1; i <= n; ++i) lead *= h / i;
  real term = lead, sum = lead;
  for (int m = 1; m < 60; ++m) {
    term *= q / (real(m) * (m + n));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

Bessel01 bessel01(real x) {
  if (x < series_limit) return series01(x);
  if (x >= asymptotic_limit) {
    Bessel01 b;
    hankel_asymptotic(0, x, b.j0, b.y0);
    hankel_asymptotic(1, x, b.j1, b.y1);
    return b;
  }
  std::array<real, 96> buf{};
  Bessel01 b;
  miller(x, buf, miller_start(x, 1), &b.y0, &b.y1);
  b.j0 = buf[0];
  b.j1 = buf[1];
  return b;
}

void bessel_jy_sequence(int nmax, real x, std::vector<real>& j, std::vector<real>& y) {
  j.assign(nmax + 2, 0.0);
  y.assign(nmax + 2, 0.0);
  if (x < series_limit) {
    const Bessel01 b = series01(x);
    y[0] = b.y0;
    y[1] = b.y1;
    for (int n = 0; n <= nmax + 1; ++n) j[n] = bessel_j_series(n, x);
  } else if (x >= asymptotic_limit) {
    real j0, j1;
    hankel_asymptotic(0, x, j0, y[0]);
    hankel_asymptotic(1, x, j1, y[1]);
    if (nmax + 1 < x) {
      j[0] = j0;
      j[1] = j1;
      for (int n = 1; n <= nmax; ++n) j[n + 1] = (2.0 * n / x) * j[n] - j[n - 1];
    } else {
      const int top = miller_start(x, nmax + 1);
      std::vector<real> buf(top + 1);
      miller(x, buf, top, nullptr, nullptr);
      for (int n = 0; n <= nmax + 1; ++n) j[n] = buf[n];
    }
  } else {
    const int top = miller_start(x, nmax + 1);
    std::vector<real> buf(top + 1);
    miller(x, buf, top, &y[0], &y[1]);
    for (int n = 0; n <= nmax + 1; ++n) j[n] = buf[n];
  }
  for (int n = 1; n <= nmax; ++n) y[n + 1] = (2.0 * n / x) * y[n] - y[n - 1];
  j.resize(nmax + 1);
  y.resize(nmax + 1);
}

CylFunEval bessel_jy(int n, real x) {
  if (n < 0) throw DomainError("bessel_jy: negative order " + std::to_string(n));
  if (!(x >= specfun_detail::y_guard))
    throw DomainError("bessel_jy: argument must exceed 1e-8 (got " + std::to_string(x) + ")");
  std::vector<real> j, y;
  bessel_jy_sequence(n + 1, x, j, y);
  CylFunEval e;
  e.order = n;
  e.argument = x;
  e.j = j[n];
  e.y = y[n];
  e.h1 = {e.j, e.y};
  // J_n' = -J_{n+1} + (n/x) J_n, valid for n = 0 as well
  e.dj = -j[n + 1] + (n / x) * j[n];
  e.dy = -y[n + 1] + (n / x) * y[n];
  e.dh1 = {e.dj, e.dy};
  return e;
}

std::vector<real> find_bessel_derivative_zeros(int n, real lo, real hi) {
  std::vector<real> roots;
  if (!(lo < hi) || n < 0) return roots;
  lo = std::max(lo, 1e-6);
  auto f = [n](real x) { return bessel_jy(n, x).dj; };
  const real step = 0.02;
  real a = lo, fa = f(a);
  while (a < hi) {
    const real b = std::min(a + step, hi);
    const real fb = f(b);
    if (fa == 0.0) {
      roots.push_back(a);
    } else if (fa * fb < 0.0) {
      real l = a, r = b, fl = fa;
      for (int it = 0; it < 200 && r - l > 1e-13; ++it) {
        const real m = 0.5 * (l + r), fm = f(m);
        if (fm == 0.0) {
          l = r = m;
          break;
        }
        if (fl * fm < 0.0) {
          r = m;
        } else {
          l = m;
          fl = fm;
        }
      }
      roots.push_back(0.5 * (l + r));
    }
    a = b;
    fa = fb;
    if (b >= hi && fb == 0.0) roots.push_back(b);
  }
  return roots;
}

}  // namespace fsibem
