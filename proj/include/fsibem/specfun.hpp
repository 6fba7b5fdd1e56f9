#pragma once

#include <vector>

#include "fsibem/types.hpp"

namespace fsibem {

struct CylFunEval {
  int order;
  real argument;
  real j, y;
  cplx h1;  // j + i y
  real dj, dy;
  cplx dh1;
};

// J_n, Y_n, H_n^(1) and derivatives for integer n >= 0 and real x > 0.
// Throws DomainError for n < 0 or x below the Y_n guard.
CylFunEval bessel_jy(int n, real x);

// All roots of J_n' in [lo, hi], ascending.
std::vector<real> find_bessel_derivative_zeros(int n, real lo, real hi);

// Unchecked order 0/1 evaluation used on the kernel hot path (x > 0).
struct Bessel01 {
  real j0, j1, y0, y1;
};
Bessel01 bessel01(real x);

// J_0..J_nmax and Y_0..Y_nmax in one pass (x > 0).
void bessel_jy_sequence(int nmax, real x, std::vector<real>& j, std::vector<real>& y);

namespace specfun_detail {
inline constexpr real series_limit = 2.0;       // ascending series below
inline constexpr real asymptotic_limit = 20.0;  // Hankel expansion at and above
inline constexpr real y_guard = 1e-8;
}  // namespace specfun_detail

}  // namespace fsibem
