#include "fsibem/systems.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fsibem {

namespace {

using K = OperatorKind;

void incident_data(const BoundaryMesh& mesh, const PlaneWave& wave, cvector& b1, cvector& b2) {
  const int n = mesh.size();
  b1.resize(n);
  b2.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    const auto inc = incident_trace(wave, mesh.node(i), point(1, 0));
    b1(i) = inc.p;
    b2(2 * i) = inc.grad(0);
    b2(2 * i + 1) = inc.grad(1);
  }
}

BlockSystem shell(Formulation f, const BoundaryMesh& mesh, const MaterialSystem& mat, const PlaneWave& wave) {
  BlockSystem s;
  s.formulation = f;
  s.mesh = mesh;
  s.material = mat;
  s.wave = wave;
  const int n = mesh.size();
  s.matrix = cmatrix::Zero(3 * n, 3 * n);
  s.rhs = cvector::Zero(3 * n);
  return s;
}

cplx check_beta(const MaterialSystem& mat, std::optional<cplx> beta) {
  const cplx b = beta.value_or(cplx(0, mat.k));
  if (b.imag() == 0)
    throw ParameterError("burton_miller requires Im(beta) != 0 (unique solvability condition)");
  return b;
}

}  // namespace

const char* formulation_name(Formulation f) {
  switch (f) {
    case Formulation::direct: return "direct";
    case Formulation::indirect: return "indirect";
    default: return "burton_miller";
  }
}

Formulation parse_formulation(const std::string& s) {
  if (s == "direct") return Formulation::direct;
  if (s == "indirect") return Formulation::indirect;
  if (s == "burton_miller" || s == "burton-miller") return Formulation::burton_miller;
  throw ParameterError("run.formulation: unknown formulation '" + s + "'");
}

BlockSystem build_direct(const BoundaryMesh& mesh, const MaterialSystem& mat, const PlaneWave& wave,
                         const AssemblyOptions& opt) {
  const int n = mesh.size();
  const auto ops = assemble_operators(mesh, mat, {K::WsA, K::Wf, K::KspN, K::KfpN, K::Ih}, opt);
  BlockSystem s = shell(Formulation::direct, mesh, mat, wave);
  const cmatrix solid_c = 0.5 * ops[K::Ih] - ops[K::KspN];
  const cmatrix fluid_c = 0.5 * ops[K::Ih].transpose() + ops[K::KfpN];
  s.matrix.topLeftCorner(2 * n, 2 * n) = ops[K::WsA];
  s.matrix.topRightCorner(2 * n, n) = solid_c;
  s.matrix.bottomLeftCorner(n, 2 * n) = mat.eta * fluid_c;
  s.matrix.bottomRightCorner(n, n) = ops[K::Wf];
  cvector b1, b2;
  incident_data(mesh, wave, b1, b2);
  s.rhs.head(2 * n) = -solid_c * b1;
  s.rhs.tail(n) = fluid_c * b2;
  return s;
}

BlockSystem build_burton_miller(const BoundaryMesh& mesh, const MaterialSystem& mat, const PlaneWave& wave,
                                std::optional<cplx> beta_in, const AssemblyOptions& opt) {
  const cplx beta = check_beta(mat, beta_in);
  const int n = mesh.size();
  const auto ops =
      assemble_operators(mesh, mat, {K::WsA, K::Wf, K::KspN, K::KfpN, K::VfN, K::Kf, K::M, K::Ih}, opt);
  BlockSystem s = shell(Formulation::burton_miller, mesh, mat, wave);
  s.beta = beta;
  const cmatrix solid_c = 0.5 * ops[K::Ih] - ops[K::KspN];
  const cmatrix fluid_c = 0.5 * ops[K::Ih].transpose() + ops[K::KfpN] + beta * ops[K::VfN];
  s.matrix.topLeftCorner(2 * n, 2 * n) = ops[K::WsA];
  s.matrix.topRightCorner(2 * n, n) = solid_c;
  s.matrix.bottomLeftCorner(n, 2 * n) = mat.eta * fluid_c;
  s.matrix.bottomRightCorner(n, n) = beta * (0.5 * ops[K::M] - ops[K::Kf]) + ops[K::Wf];
  cvector b1, b2;
  incident_data(mesh, wave, b1, b2);
  s.rhs.head(2 * n) = -solid_c * b1;
  s.rhs.tail(n) = fluid_c * b2;
  return s;
}

BlockSystem build_indirect(const BoundaryMesh& mesh, const MaterialSystem& mat, const PlaneWave& wave,
                           const AssemblyOptions& opt) {
  const int n = mesh.size();
  const auto ops =
      assemble_operators(mesh, mat, {K::WsA, K::Wf, K::KspN, K::KfpN, K::NVfN, K::NVsN, K::Ih}, opt);
  BlockSystem s = shell(Formulation::indirect, mesh, mat, wave);
  s.semantics = UnknownSemantics::densities;
  // n Kf and n . Ks are the Galerkin transposes of Kf'(n .) and Ks'(n psi)
  s.matrix.topLeftCorner(2 * n, 2 * n) = ops[K::WsA] - mat.eta * ops[K::NVfN];
  s.matrix.topRightCorner(2 * n, n) = ops[K::KfpN].transpose() - ops[K::KspN];
  s.matrix.bottomLeftCorner(n, 2 * n) = ops[K::KfpN] - ops[K::KspN].transpose();
  s.matrix.bottomRightCorner(n, n) = ops[K::Wf] / mat.eta - ops[K::NVsN];
  cvector b1, b2;
  incident_data(mesh, wave, b1, b2);
  s.rhs.head(2 * n) = -ops[K::Ih] * b1;
  s.rhs.tail(n) = ops[K::Ih].transpose() * b2 / mat.eta;
  return s;
}

BlockSystem build_system(Formulation f, const BoundaryMesh& mesh, const MaterialSystem& mat,
                         const PlaneWave& wave, std::optional<cplx> beta, const AssemblyOptions& opt) {
  switch (f) {
    case Formulation::direct: return build_direct(mesh, mat, wave, opt);
    case Formulation::indirect: return build_indirect(mesh, mat, wave, opt);
    default: return build_burton_miller(mesh, mat, wave, beta, opt);
  }
}

SolveResult solve(const BlockSystem& sys, bool strict) {
  const cmatrix& a = sys.matrix;
  const int m = int(a.rows());
  if (a.cols() != m || sys.rhs.size() != m) throw ParameterError("solve: inconsistent system dimensions");
  // row then column equilibration: the blocks differ by many orders of magnitude
  Eigen::VectorXd dr(m), dc(m);
  for (int i = 0; i < m; ++i) {
    const real r = a.row(i).cwiseAbs().maxCoeff();
    dr(i) = r > 0 ? 1 / r : 1;
  }
  cmatrix s = dr.asDiagonal() * a;
  for (int j = 0; j < m; ++j) {
    const real c = s.col(j).cwiseAbs().maxCoeff();
    dc(j) = c > 0 ? 1 / c : 1;
  }
  s = s * dc.asDiagonal();
  Eigen::PartialPivLU<cmatrix> lu(s);
  SolveDiagnostics d;
  d.min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  const real rc = lu.rcond();
  d.condition_estimate = rc > 0 ? 1 / rc : std::numeric_limits<real>::infinity();
  d.near_singular = !(d.min_pivot >= 1e-13) || !(d.condition_estimate < 1e13);
  cvector y = lu.solve(dr.asDiagonal() * sys.rhs);
  cvector x = dc.asDiagonal() * y;
  const real bn = sys.rhs.norm();
  d.residual = bn > 0 ? (a * x - sys.rhs).norm() / bn : (a * x).norm();
  if (d.near_singular || d.condition_estimate > 1e6) {
    std::ostringstream w;
    w << "system is near-singular at omega = " << sys.material.omega << " (condition estimate "
      << d.condition_estimate << ", smallest pivot " << d.min_pivot << "); suspected resonance";
    d.warning = w.str();
  }
  if (strict && d.near_singular) throw NearSingularError(d.warning, sys.material.omega);

  SolveResult r;
  r.x = x;
  r.diagnostics = d;
  const int n = m / 3;
  std::vector<vec2<cplx>> vec(n);
  for (int i = 0; i < n; ++i) vec[i] = {x(2 * i), x(2 * i + 1)};
  if (sys.semantics == UnknownSemantics::traces)
    r.solution = TraceSolution{vec, x.tail(n), sys.mesh};
  else
    r.solution = DensitySolution{vec, x.tail(n), sys.mesh};
  return r;
}

real log_abs_det(const cmatrix& a) {
  Eigen::PartialPivLU<cmatrix> lu(a);
  real s = 0;
  for (int i = 0; i < a.rows(); ++i) s += std::log(std::abs(lu.matrixLU()(i, i)));
  return s;
}

std::vector<SweepRecord> logdet_sweep(Formulation f, const MaterialSystem& tmpl, const BoundaryMesh& mesh,
                                      const std::vector<real>& grid, std::optional<cplx> beta,
                                      const AssemblyOptions& opt) {
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0)) throw ParameterError("omega grid must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ParameterError("omega grid must be ascending");
  }
  std::vector<SweepRecord> out(grid.size());
  AssemblyOptions inner = opt;
  inner.threads = 1;
  if (opt.threads > 0) omp_set_num_threads(opt.threads);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < int(grid.size()); ++i) {
    const MaterialSystem m = with_omega(tmpl, grid[i]);
    const PlaneWave w = make_plane_wave({1, 0}, m.k);
    const BlockSystem s = build_system(f, mesh, m, w, beta, inner);
    out[i] = {grid[i], log_abs_det(s.matrix)};
  }
  return out;
}

std::vector<real> find_dips(const std::vector<SweepRecord>& sw, real window, real depth) {
  std::vector<real> dips;
  const int n = int(sw.size());
  for (int i = 1; i + 1 < n; ++i) {
    if (!(sw[i].logdet < sw[i - 1].logdet && sw[i].logdet < sw[i + 1].logdet)) continue;
    std::vector<real> nb;
    for (int j = 0; j < n; ++j)
      if (std::abs(sw[j].omega - sw[i].omega) <= window + 1e-12) nb.push_back(sw[j].logdet);
    std::nth_element(nb.begin(), nb.begin() + nb.size() / 2, nb.end());
    const real median = nb[nb.size() / 2];
    if (sw[i].logdet <= median - depth) dips.push_back(sw[i].omega);
  }
  return dips;
}

}  // namespace fsibem
