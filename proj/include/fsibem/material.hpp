#pragma once

#include "fsibem/types.hpp"

namespace fsibem {

struct MaterialSystem {
  real lambda = 0, mu = 0, rho = 0, rho_f = 0, c = 0, omega = 0;
  real k = 0, k_s = 0, k_p = 0, eta = 0;
};

// Throws ParameterError naming the offending constant.
MaterialSystem derive_wavenumbers(real lambda, real mu, real rho, real rho_f, real c, real omega);

// Wave-speed parameterisation: mu = rho c_s^2, lambda = rho c_p^2 - 2 mu.
MaterialSystem from_wave_speeds(real c_s, real c_p, real rho, real rho_f, real c, real omega);

MaterialSystem with_omega(const MaterialSystem& m, real omega);

struct PlaneWave {
  point direction{1.0, 0.0};
  real k = 1.0;
};

PlaneWave make_plane_wave(point direction, real k);

struct IncidentTrace {
  cplx p;
  cplx dpdn;
  vec2<cplx> grad;
};

IncidentTrace incident_trace(const PlaneWave& wave, const point& x, const point& n);
cplx incident_pressure(const PlaneWave& wave, const point& x);

}  // namespace fsibem
