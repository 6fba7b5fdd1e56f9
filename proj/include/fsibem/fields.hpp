#pragma once

#include <optional>
#include <vector>

#include "fsibem/oracle.hpp"
#include "fsibem/systems.hpp"

namespace fsibem {

enum class Region { solid, fluid };

struct FieldSample {
  vec2<cplx> u = vec2<cplx>::Zero();  // solid region
  cplx p = 0;                         // scattered pressure, fluid region
  real distance = 0;                  // to the boundary
  bool near_boundary = false;         // closer than the guard: degraded accuracy
};

namespace fields_detail {
inline constexpr real guard_panels = 2.0;  // distance guard in panel lengths
inline constexpr int gauss_order = 16;
inline constexpr int linf_samples = 512;
}  // namespace fields_detail

bool inside(const BoundaryMesh& mesh, const point& x);
real boundary_distance(const BoundaryMesh& mesh, const point& x);

// Green representation from the traces, with t = -n (p + p_inc) and dp/dn = eta u.n - dp_inc/dn.
FieldSample represent_field_direct(const TraceSolution& tr, const MaterialSystem& mat, const PlaneWave& wave,
                                   const point& x, Region region);
// u = S_s(-n psi) - D_s(v), p = D_f(psi) - eta S_f(v.n)
FieldSample represent_field_indirect(const DensitySolution& d, const MaterialSystem& mat, const point& x,
                                     Region region);

enum class NormKind { L2_Gamma, Linf_circle };

struct ErrorReport {
  int N = 0;
  real err_u_abs = 0, err_u_rel = 0, err_p_abs = 0, err_p_rel = 0;
  std::optional<real> order_u, order_p;
  NormKind norm_kind = NormKind::L2_Gamma;
  real radius_u = 0, radius_p = 0;  // Linf_circle evaluation radii
};

// Exact nodal traces (oracle evaluated on the circle at each node's polar angle).
TraceSolution oracle_traces(const OracleSolution& s, const BoundaryMesh& mesh);

// L2 over the polygon of the piecewise-linear interpolant against the oracle on the circle
// at the same polar angle.
ErrorReport error_norms_L2(const TraceSolution& numeric, const OracleSolution& exact);
// Max over fields_detail::linf_samples equispaced points on circles of radius radius_u (u) and radius_p (p).
ErrorReport error_norms_Linf(const std::vector<vec2<cplx>>& u_numeric, const std::vector<cplx>& p_numeric,
                             const OracleSolution& exact, real radius_u, real radius_p);

std::vector<point> circle_samples(real radius, int count = fields_detail::linf_samples);

struct StudySetup {
  MaterialSystem material;
  real R0 = 1;
  PlaneWave wave;
  std::optional<cplx> beta;
  AssemblyOptions assembly;
  int oracle_n_max = 40;
};

// Direct and Burton-Miller: L2 on the boundary; indirect: Linf on radii R0/2 (u) and 2 R0 (p).
std::vector<ErrorReport> convergence_study(Formulation f, const StudySetup& setup, const std::vector<int>& N_list);

// Fills order_* from consecutive rows.
void fill_orders(std::vector<ErrorReport>& rows);

}  // namespace fsibem
