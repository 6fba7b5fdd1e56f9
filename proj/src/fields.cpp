#include "fsibem/fields.hpp"

#include <cmath>
#include <sstream>

#include "fsibem/kernels.hpp"
#include "fsibem/quadrature.hpp"

namespace fsibem {

namespace {

real segment_distance(const point& a, const point& b, const point& x) {
  const point d = b - a;
  const real t = std::clamp((x - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
  return (a + t * d - x).norm();
}

real max_panel(const BoundaryMesh& m) {
  real h = 0;
  for (int i = 0; i < m.size(); ++i) h = std::max(h, m.length(i));
  return h;
}

FieldSample locate(const BoundaryMesh& mesh, const point& x, Region region) {
  const bool in = inside(mesh, x);
  if (in != (region == Region::solid)) {
    std::ostringstream w;
    w << "field point (" << x(0) << ", " << x(1) << ") is not in the " << (region == Region::solid ? "solid" : "fluid")
      << " region";
    throw DomainError(w.str());
  }
  FieldSample s;
  s.distance = boundary_distance(mesh, x);
  s.near_boundary = s.distance < fields_detail::guard_panels * max_panel(mesh);
  return s;
}

// Gauss rule sized to the distance: far points need few nodes per panel.
const Rule1D& rule_for(real distance, real h) {
  static const Rule1D coarse = gauss_legendre(8), fine = gauss_legendre(fields_detail::gauss_order);
  return distance > 5 * h ? coarse : fine;
}

template <class F>
void for_each_node(const BoundaryMesh& mesh, real distance, F&& f) {
  const Rule1D& g = rule_for(distance, max_panel(mesh));
  for (int p = 0; p < mesh.size(); ++p)
    for (int q = 0; q < g.size(); ++q) f(p, g.x[q], g.w[q] * mesh.length(p), mesh.at(p, g.x[q]));
}

template <class V>
V lerp(const V& a, const V& b, real s) {
  return (1 - s) * a + s * b;
}

}  // namespace

bool inside(const BoundaryMesh& mesh, const point& x) {
  // winding number, valid for either orientation
  real wind = 0;
  for (int i = 0; i < mesh.size(); ++i) {
    const point a = mesh.node(i) - x, b = mesh.node(i + 1) - x;
    wind += std::atan2(a(0) * b(1) - a(1) * b(0), a.dot(b));
  }
  return std::abs(wind) > pi;
}

real boundary_distance(const BoundaryMesh& mesh, const point& x) {
  real d = std::numeric_limits<real>::infinity();
  for (int i = 0; i < mesh.size(); ++i) d = std::min(d, segment_distance(mesh.node(i), mesh.node(i + 1), x));
  return d;
}

FieldSample represent_field_direct(const TraceSolution& tr, const MaterialSystem& mat, const PlaneWave& wave,
                                   const point& x, Region region) {
  const BoundaryMesh& mesh = tr.mesh;
  FieldSample out = locate(mesh, x, region);
  const KernelBundle kb(mat);
  for_each_node(mesh, out.distance, [&](int p, real s, real w, const point& y) {
    const point& n = mesh.normal(p);
    const auto inc = incident_trace(wave, y, n);
    const cplx ph = lerp(tr.p(p), tr.p(mesh.wrap(p + 1)), s);
    const vec2<cplx> uh = lerp(tr.u[p], tr.u[mesh.wrap(p + 1)], s);
    if (region == Region::solid) {
      const vec2<cplx> t = -(ph + inc.p) * n.cast<cplx>();
      out.u += w * (kb.E(x, y) * t - kb.traction_TyE_transposed(x, y, n) * uh);
    } else {
      const vec2<cplx> g = kb.grad_x_gamma(mat.k, x, y);
      const cplx dgdny = -(g(0) * n(0) + g(1) * n(1));
      const cplx dpdn = mat.eta * (uh(0) * n(0) + uh(1) * n(1)) - inc.dpdn;
      out.p += w * (dgdny * ph - kb.gamma(mat.k, x, y) * dpdn);
    }
  });
  return out;
}

FieldSample represent_field_indirect(const DensitySolution& d, const MaterialSystem& mat, const point& x,
                                     Region region) {
  const BoundaryMesh& mesh = d.mesh;
  FieldSample out = locate(mesh, x, region);
  const KernelBundle kb(mat);
  for_each_node(mesh, out.distance, [&](int p, real s, real w, const point& y) {
    const point& n = mesh.normal(p);
    const cplx psi = lerp(d.psi(p), d.psi(mesh.wrap(p + 1)), s);
    const vec2<cplx> v = lerp(d.v[p], d.v[mesh.wrap(p + 1)], s);
    if (region == Region::solid) {
      out.u += w * (kb.E(x, y) * (-psi * n.cast<cplx>()) - kb.traction_TyE_transposed(x, y, n) * v);
    } else {
      const vec2<cplx> g = kb.grad_x_gamma(mat.k, x, y);
      const cplx dgdny = -(g(0) * n(0) + g(1) * n(1));
      out.p += w * (dgdny * psi - mat.eta * kb.gamma(mat.k, x, y) * (v(0) * n(0) + v(1) * n(1)));
    }
  });
  return out;
}

TraceSolution oracle_traces(const OracleSolution& s, const BoundaryMesh& mesh) {
  TraceSolution t;
  t.mesh = mesh;
  t.u.resize(mesh.size());
  t.p.resize(mesh.size());
  for (int i = 0; i < mesh.size(); ++i) {
    const point y = s.R0 * mesh.node(i).normalized();
    t.u[i] = exact_displacement(s, y);
    t.p(i) = exact_pressure(s, y);
  }
  return t;
}

ErrorReport error_norms_L2(const TraceSolution& num, const OracleSolution& exact) {
  const BoundaryMesh& mesh = num.mesh;
  const Rule1D g = gauss_legendre(8);
  real eu = 0, nu = 0, ep = 0, np = 0;
  for (int p = 0; p < mesh.size(); ++p) {
    const int q1 = mesh.wrap(p + 1);
    for (int q = 0; q < g.size(); ++q) {
      const real w = g.w[q] * mesh.length(p), s = g.x[q];
      const point y = exact.R0 * mesh.at(p, s).normalized();
      const vec2<cplx> ue = exact_displacement(exact, y);
      const cplx pe = exact_pressure(exact, y);
      eu += w * (lerp(num.u[p], num.u[q1], s) - ue).squaredNorm();
      nu += w * ue.squaredNorm();
      ep += w * std::norm(lerp(num.p(p), num.p(q1), s) - pe);
      np += w * std::norm(pe);
    }
  }
  ErrorReport r;
  r.N = mesh.size();
  r.norm_kind = NormKind::L2_Gamma;
  r.err_u_abs = std::sqrt(eu);
  r.err_u_rel = nu > 0 ? std::sqrt(eu / nu) : 0;
  r.err_p_abs = std::sqrt(ep);
  r.err_p_rel = np > 0 ? std::sqrt(ep / np) : 0;
  return r;
}

std::vector<point> circle_samples(real radius, int count) {
  std::vector<point> pts(count);
  for (int j = 0; j < count; ++j) {
    const real th = 2 * pi * j / count;
    pts[j] = radius * point(std::cos(th), std::sin(th));
  }
  return pts;
}

ErrorReport error_norms_Linf(const std::vector<vec2<cplx>>& un, const std::vector<cplx>& pn,
                             const OracleSolution& exact, real radius_u, real radius_p) {
  const auto xu = circle_samples(radius_u, int(un.size())), xp = circle_samples(radius_p, int(pn.size()));
  real eu = 0, nu = 0, ep = 0, np = 0;
  for (size_t j = 0; j < un.size(); ++j) {
    const vec2<cplx> ue = exact_displacement(exact, xu[j]);
    eu = std::max(eu, (un[j] - ue).norm());
    nu = std::max(nu, ue.norm());
  }
  for (size_t j = 0; j < pn.size(); ++j) {
    const cplx pe = exact_pressure(exact, xp[j]);
    ep = std::max(ep, std::abs(pn[j] - pe));
    np = std::max(np, std::abs(pe));
  }
  ErrorReport r;
  r.norm_kind = NormKind::Linf_circle;
  r.radius_u = radius_u;
  r.radius_p = radius_p;
  r.err_u_abs = eu;
  r.err_u_rel = nu > 0 ? eu / nu : 0;
  r.err_p_abs = ep;
  r.err_p_rel = np > 0 ? ep / np : 0;
  return r;
}

void fill_orders(std::vector<ErrorReport>& rows) {
  for (size_t i = 0; i < rows.size(); ++i) {
    rows[i].order_u.reset();
    rows[i].order_p.reset();
    if (i == 0) continue;
    const real ln = std::log(real(rows[i].N) / rows[i - 1].N);
    if (rows[i].err_u_abs > 0 && rows[i - 1].err_u_abs > 0)
      rows[i].order_u = std::log(rows[i - 1].err_u_abs / rows[i].err_u_abs) / ln;
    if (rows[i].err_p_abs > 0 && rows[i - 1].err_p_abs > 0)
      rows[i].order_p = std::log(rows[i - 1].err_p_abs / rows[i].err_p_abs) / ln;
  }
}

std::vector<ErrorReport> convergence_study(Formulation f, const StudySetup& st, const std::vector<int>& N_list) {
  if (N_list.empty()) throw ParameterError("convergence: N list is empty");
  for (size_t i = 0; i < N_list.size(); ++i) {
    if (N_list[i] < 16) throw ParameterError("convergence: every N must be >= 16");
    if (i > 0 && N_list[i] <= N_list[i - 1]) throw ParameterError("convergence: N list must be ascending");
  }
  const OracleSolution exact = solve_oracle(st.material, st.R0, st.wave, st.oracle_n_max);
  std::vector<ErrorReport> rows;
  for (int N : N_list) {
    const BoundaryMesh mesh = build_circle_mesh(st.R0, N);
    SolveResult res;
    try {
      res = solve(build_system(f, mesh, st.material, st.wave, st.beta, st.assembly));
    } catch (const std::exception& e) {
      throw std::runtime_error("convergence study at N = " + std::to_string(N) + ": " + e.what());
    }
    ErrorReport r;
    if (f == Formulation::indirect) {
      const auto xu = circle_samples(st.R0 / 2), xp = circle_samples(2 * st.R0);
      std::vector<vec2<cplx>> un(xu.size());
      std::vector<cplx> pn(xp.size());
      const DensitySolution& d = res.densities();
#pragma omp parallel for schedule(dynamic)
      for (int j = 0; j < int(xu.size()); ++j) {
        un[j] = represent_field_indirect(d, st.material, xu[j], Region::solid).u;
        pn[j] = represent_field_indirect(d, st.material, xp[j], Region::fluid).p;
      }
      r = error_norms_Linf(un, pn, exact, st.R0 / 2, 2 * st.R0);
    } else {
      r = error_norms_L2(res.traces(), exact);
    }
    r.N = N;
    rows.push_back(r);
  }
  fill_orders(rows);
  return rows;
}

}  // namespace fsibem
