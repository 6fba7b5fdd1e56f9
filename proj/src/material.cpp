#include "fsibem/material.hpp"

#include <cmath>

namespace fsibem {

namespace {
void require(bool ok, const char* name, const char* rule) {
  if (!ok) throw ParameterError(std::string(name) + " " + rule);
}
}  // namespace

MaterialSystem derive_wavenumbers(real lambda, real mu, real rho, real rho_f, real c, real omega) {
  require(std::isfinite(lambda), "lambda", "must be finite");
  require(mu > 0, "mu", "must be > 0");
  require(lambda + mu > 0, "lambda", "must satisfy lambda + mu > 0");
  require(rho > 0, "rho", "must be > 0");
  require(rho_f > 0, "rho_f", "must be > 0");
  require(c > 0, "c", "must be > 0");
  require(omega > 0, "omega", "must be > 0");
  MaterialSystem m{lambda, mu, rho, rho_f, c, omega};
  m.k = omega / c;
  m.k_s = omega * std::sqrt(rho / mu);
  m.k_p = omega * std::sqrt(rho / (lambda + 2 * mu));
  m.eta = rho_f * omega * omega;
  return m;
}

MaterialSystem from_wave_speeds(real c_s, real c_p, real rho, real rho_f, real c, real omega) {
  require(c_s > 0, "c_s", "must be > 0");
  require(c_p > 0, "c_p", "must be > 0");
  require(rho > 0, "rho", "must be > 0");
  const real mu = rho * c_s * c_s;
  const real lambda = rho * c_p * c_p - 2 * mu;
  return derive_wavenumbers(lambda, mu, rho, rho_f, c, omega);
}

MaterialSystem with_omega(const MaterialSystem& m, real omega) {
  return derive_wavenumbers(m.lambda, m.mu, m.rho, m.rho_f, m.c, omega);
}

PlaneWave make_plane_wave(point direction, real k) {
  const real len = direction.norm();
  if (!(len > 0)) throw ParameterError("incident.direction must be non-zero");
  return {direction / len, k};
}

cplx incident_pressure(const PlaneWave& wave, const point& x) {
  return std::exp(cplx(0, wave.k * x.dot(wave.direction)));
}

IncidentTrace incident_trace(const PlaneWave& wave, const point& x, const point& n) {
  IncidentTrace t;
  t.p = incident_pressure(wave, x);
  t.grad = (cplx(0, wave.k) * t.p) * wave.direction.cast<cplx>();
  t.dpdn = t.grad(0) * n(0) + t.grad(1) * n(1);
  return t;
}

}  // namespace fsibem
