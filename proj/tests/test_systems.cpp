#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "fsibem/oracle.hpp"
#include "fsibem/systems.hpp"

using namespace fsibem;
using K = OperatorKind;

namespace {

MaterialSystem example1() { return from_wave_speeds(3122, 6198, 2700, 1000, 1500, 50 * pi * 1e3); }
MaterialSystem example2(double omega) { return derive_wavenumbers(1, 2, 1, 0.5, 1, omega); }
PlaneWave wave_for(const MaterialSystem& m) { return make_plane_wave({1, 0}, m.k); }

}  // namespace

TEST_CASE("identity stand-in returns the right-hand side") {
  BlockSystem s;
  s.mesh = build_circle_mesh(1.0, 4);
  s.material = example2(6.0);
  s.matrix = cmatrix::Identity(12, 12);
  s.rhs = cvector::LinSpaced(12, 1.0, 12.0) * cplx(1, -2);
  const auto r = solve(s);
  CHECK((r.x - s.rhs).norm() < 1e-14);
  CHECK(r.diagnostics.residual < 1e-15);
  CHECK(r.traces().u.size() == 4);
  CHECK(r.traces().p(3) == s.rhs(11));
}

TEST_CASE("block dimensions and layout") {
  const auto mesh = build_circle_mesh(1.0, 8);
  const auto mat = example2(6.0);
  const auto w = wave_for(mat);
  const auto ops = assemble_operators(mesh, mat, {K::WsA, K::Wf, K::KspN, K::KfpN, K::Ih, K::NVfN, K::NVsN});
  for (auto f : {Formulation::direct, Formulation::indirect, Formulation::burton_miller}) {
    const auto s = build_system(f, mesh, mat, w);
    CHECK(s.matrix.rows() == 24);
    CHECK(s.matrix.cols() == 24);
    CHECK(s.rhs.size() == 24);
  }
  // direct: [Ws, 1/2 Ih - Ks'N; eta (1/2 Ih^T + Kf'N), Wf]
  const auto d = build_direct(mesh, mat, w);
  CHECK((d.matrix.topLeftCorner(16, 16) - ops[K::WsA]).norm() == 0);
  CHECK((d.matrix.topRightCorner(16, 8) - (0.5 * ops[K::Ih] - ops[K::KspN])).norm() == 0);
  CHECK((d.matrix.bottomLeftCorner(8, 16) - mat.eta * (0.5 * ops[K::Ih].transpose() + ops[K::KfpN])).norm() <
        1e-12 * d.matrix.bottomLeftCorner(8, 16).norm());
  CHECK((d.matrix.bottomRightCorner(8, 8) - ops[K::Wf]).norm() == 0);
  CHECK(d.semantics == UnknownSemantics::traces);
  // indirect: the coupling blocks are Galerkin transposes of one another
  const auto ind = build_indirect(mesh, mat, w);
  CHECK(ind.semantics == UnknownSemantics::densities);
  const cmatrix b12 = ind.matrix.topRightCorner(16, 8), b21 = ind.matrix.bottomLeftCorner(8, 16);
  CHECK((b12 - b21.transpose()).norm() < 1e-12 * b12.norm());
  CHECK((ind.matrix.topLeftCorner(16, 16) - (ops[K::WsA] - mat.eta * ops[K::NVfN])).norm() <
        1e-12 * ops[K::WsA].norm());
  CHECK((ind.matrix.bottomRightCorner(8, 8) - (ops[K::Wf] / mat.eta - ops[K::NVsN])).norm() <
        1e-12 * ops[K::NVsN].norm());
}

TEST_CASE("Burton-Miller coupling constant") {
  const auto mesh = build_circle_mesh(1.0, 16);
  const auto mat = example2(6.0);
  const auto w = wave_for(mat);
  CHECK_THROWS_AS(build_burton_miller(mesh, mat, w, cplx(0, 0)), ParameterError);
  CHECK_THROWS_AS(build_burton_miller(mesh, mat, w, cplx(2.5, 0)), ParameterError);
  CHECK(build_burton_miller(mesh, mat, w).beta == cplx(0, mat.k));

  // beta -> 0 along the imaginary axis recovers the direct blocks
  const auto a = build_direct(mesh, mat, w);
  const auto c = build_burton_miller(mesh, mat, w, cplx(0, 1e-8));
  const double norm = a.matrix.cwiseAbs().maxCoeff();
  CHECK((c.matrix - a.matrix).cwiseAbs().maxCoeff() < 1e-6 * norm);
  CHECK((c.rhs - a.rhs).cwiseAbs().maxCoeff() < 1e-6 * a.rhs.cwiseAbs().maxCoeff());
}

TEST_CASE("Example 1 direct solve: residual and accuracy against the series solution") {
  const auto mat = example1();
  const auto mesh = build_circle_mesh(0.01, 64);
  const auto w = wave_for(mat);
  const auto r = solve(build_direct(mesh, mat, w));
  CHECK(r.diagnostics.residual < 1e-12);
  CHECK_FALSE(r.diagnostics.near_singular);
  const auto exact = solve_oracle(mat, 0.01, w);
  double e = 0, n = 0;
  for (int i = 0; i < 64; ++i) {
    const cplx pe = exact_pressure(exact, 0.01 * mesh.node(i).normalized());
    e += std::norm(r.traces().p(i) - pe);
    n += std::norm(pe);
  }
  CHECK(std::sqrt(e / n) < 5e-3);
}

TEST_CASE("indirect densities are not the physical pressure trace") {
  const auto mat = example1();
  const auto mesh = build_circle_mesh(0.01, 64);
  const auto w = wave_for(mat);
  const auto r = solve(build_indirect(mesh, mat, w));
  CHECK(r.diagnostics.residual < 1e-10);
  const auto exact = solve_oracle(mat, 0.01, w);
  double e = 0, n = 0;
  for (int i = 0; i < 64; ++i) {
    const cplx pe = exact_pressure(exact, 0.01 * mesh.node(i).normalized());
    e += std::norm(r.densities().psi(i) - pe);
    n += std::norm(pe);
  }
  CHECK(std::sqrt(e / n) > 0.1);
}

TEST_CASE("near-singular systems warn, strict mode throws with the frequency") {
  BlockSystem s;
  s.mesh = build_circle_mesh(1.0, 4);
  s.material = example2(6.5);
  s.matrix = cmatrix::Identity(12, 12);
  s.matrix(5, 5) = 0;
  s.rhs = cvector::Ones(12);
  const auto r = solve(s);
  CHECK(r.diagnostics.near_singular);
  CHECK(r.diagnostics.warning.find("6.5") != std::string::npos);
  try {
    solve(s, true);
    FAIL("expected NearSingularError");
  } catch (const NearSingularError& e) {
    CHECK(e.omega == 6.5);
    CHECK(std::string(e.what()).find("omega = 6.5") != std::string::npos);
  }
}

TEST_CASE("Jones frequency: every formulation is near-singular at N = 128") {
  const auto mat = example2(7.2629);
  const auto mesh = build_circle_mesh(1.0, 128);
  for (auto f : {Formulation::direct, Formulation::indirect, Formulation::burton_miller}) {
    CAPTURE(formulation_name(f));
    const auto r = solve(build_system(f, mesh, mat, wave_for(mat)));
    const bool flagged = r.diagnostics.near_singular || r.diagnostics.condition_estimate > 1e6;
    CAPTURE(r.diagnostics.condition_estimate);
    CHECK(flagged);
  }
}

TEST_CASE("discrete Jones resonance at N = 128 is detected where the solver lands on it") {
  const auto mesh = build_circle_mesh(1.0, 128);
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(7.257 + 2e-4 * i);
  const auto sw = logdet_sweep(Formulation::burton_miller, example2(6.0), mesh, grid);
  const auto lowest = std::min_element(sw.begin(), sw.end(), [](auto& a, auto& b) { return a.logdet < b.logdet; });
  CHECK(std::abs(lowest->omega - 7.2629) < 3e-3);
  const auto mat = example2(lowest->omega);
  const auto r = solve(build_burton_miller(mesh, mat, wave_for(mat)));
  CHECK(r.diagnostics.condition_estimate > 1e5);
  CHECK_FALSE(r.diagnostics.warning.empty());
}

TEST_CASE("linearity: doubling the incident amplitude doubles the solution") {
  const auto mat = example2(6.0);
  const auto mesh = build_circle_mesh(1.0, 24);
  for (auto f : {Formulation::direct, Formulation::indirect, Formulation::burton_miller}) {
    auto s = build_system(f, mesh, mat, wave_for(mat));
    const auto x1 = solve(s).x;
    s.rhs *= 2.0;
    const auto x2 = solve(s).x;
    CHECK((x2 - 2.0 * x1).norm() < 1e-12 * x1.norm());
  }
}

TEST_CASE("log-determinant sweep") {
  const auto mesh = build_circle_mesh(1.0, 16);
  const auto tmpl = example2(6.0);
  CHECK_THROWS_AS(logdet_sweep(Formulation::direct, tmpl, mesh, {6.0, 5.0}), ParameterError);
  CHECK_THROWS_AS(logdet_sweep(Formulation::direct, tmpl, mesh, {-1.0, 5.0}), ParameterError);
  CHECK(logdet_sweep(Formulation::direct, tmpl, mesh, {}).empty());

  const std::vector<double> grid{5.5, 5.6, 5.7};
  const auto a = logdet_sweep(Formulation::burton_miller, tmpl, mesh, grid);
  const auto b = logdet_sweep(Formulation::burton_miller, tmpl, mesh, grid);
  REQUIRE(a.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::memcmp(&a[i].logdet, &b[i].logdet, sizeof(double)) == 0);
    const auto m = with_omega(tmpl, grid[i]);
    const auto s = build_burton_miller(mesh, m, make_plane_wave({1, 0}, m.k));
    CHECK(a[i].logdet == doctest::Approx(log_abs_det(s.matrix)).epsilon(1e-12));
  }
  // log|det| agrees with the determinant on a small matrix
  cmatrix m(2, 2);
  m << cplx(2, 1), 1, cplx(0, 3), 4;
  CHECK(log_abs_det(m) == doctest::Approx(std::log(std::abs(m.determinant()))));
}

TEST_CASE("dip rule") {
  std::vector<SweepRecord> sw;
  for (double w = 5; w <= 6 + 1e-9; w += 0.005) sw.push_back({w, 0.3 * w + std::log(std::abs(w - 5.5003) + 1e-9)});
  const auto dips = find_dips(sw);
  REQUIRE(dips.size() == 1);
  CHECK(dips[0] == doctest::Approx(5.5).epsilon(1e-9));

  // a shallow minimum is not a dip
  std::vector<SweepRecord> shallow;
  for (double w = 5; w <= 6 + 1e-9; w += 0.005) shallow.push_back({w, 0.5 * std::log((w - 5.5) * (w - 5.5) + 1e-3)});
  CHECK(find_dips(shallow).empty());
}
