#pragma once

#include <variant>
#include <vector>

#include "fsibem/material.hpp"

namespace fsibem {

// Per-mode system E_n X_n = e_n with X_n = (A_n, B_n, C_n): scattered pressure
// A_n H_n(kr) cos(n theta), potentials phi = B_n J_n(k_p r) cos(n theta),
// psi = C_n J_n(k_s r) sin(n theta), displacement u = grad phi - A grad psi.
struct ModeSystem {
  int n = 0;
  matrix<cplx, 3, 3> En = matrix<cplx, 3, 3>::Zero();
  vector<cplx, 3> en = vector<cplx, 3>::Zero();
  vector<cplx, 3> Xn = vector<cplx, 3>::Zero();
  real residual = 0;  // |E X - e| / |e|
  real rcond = 0;     // singular-value ratio of the equilibrated E_n
};

ModeSystem mode_matrix(int n, const MaterialSystem& mat, real R0);
std::vector<ModeSystem> mode_matrices(int n_max, const MaterialSystem& mat, real R0);

struct OracleSolution {
  std::vector<ModeSystem> modes;
  MaterialSystem material;
  real R0 = 1;
  PlaneWave wave;
  int n_max_requested = 40;
  real tail = 0;  // |A_nmax| / max |A_n|
  int n_max() const { return int(modes.size()) - 1; }
};

namespace oracle_detail {
inline constexpr real tail_tolerance = 1e-14;
inline constexpr int n_max_limit = 200;
inline constexpr real resonance_window = 0.01;  // relative frequency offset for the dip test
inline constexpr real resonance_depth = 1e-3;   // |det| ratio flagging a resonant mode
}  // namespace oracle_detail

// Auto-extends n_max until the tail criterion holds; throws ResonanceError on a singular mode.
OracleSolution solve_oracle(const MaterialSystem& mat, real R0, const PlaneWave& wave, int n_max = 40);

// Scattered pressure, r >= R0.
cplx exact_pressure(const OracleSolution& s, const point& x);
vec2<cplx> exact_pressure_gradient(const OracleSolution& s, const point& x);
// Displacement, r <= R0.
vec2<cplx> exact_displacement(const OracleSolution& s, const point& x);
// Displacement Jacobian (row i = gradient of u_i), 0 < r <= R0.
mat2<cplx> exact_displacement_jacobian(const OracleSolution& s, const point& x);

enum class ExactField { p_scattered, u };
std::variant<cplx, vec2<cplx>> eval_exact(const OracleSolution& s, real r, real theta, ExactField which);

struct TransmissionResidual {
  real kinematic = 0;  // max |eta u.n - d(p+p_inc)/dn| / max |d(p+p_inc)/dn|
  real dynamic = 0;    // max |T u + n (p+p_inc)| / max |p+p_inc|
};
TransmissionResidual transmission_residuals(const OracleSolution& s, int points = 100);

// Per-mode local minima of |det E_n| that are genuine zeros (relative depth check).
std::vector<real> find_jones_frequencies(const MaterialSystem& tmpl, real R0, real lo, real hi,
                                         int n_max = 40);
// Depth of the |det E_n| dip at omega relative to omega +- 0.1, minimised over n.
real jones_dip_ratio(const MaterialSystem& tmpl, real R0, real omega, int n_max = 40);

// omega with J_n'(k(omega) R0) = 0, where k = k_per_omega * omega.
std::vector<real> find_neumann_eigenfrequencies(real k_per_omega, real R0, real lo, real hi, int n_max = 40);

}  // namespace fsibem
