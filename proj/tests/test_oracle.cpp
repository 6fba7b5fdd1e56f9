#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <cmath>
#include <string>

#include "fsibem/oracle.hpp"

using namespace fsibem;

namespace {

MaterialSystem example1() { return from_wave_speeds(3122, 6198, 2700, 1000, 1500, 50 * pi * 1e3); }
MaterialSystem example2(double omega) { return derive_wavenumbers(1, 2, 1, 0.5, 1, omega); }
PlaneWave wave_for(const MaterialSystem& m) { return make_plane_wave({1, 0}, m.k); }

// Independent evaluation of the mode matrix through Boost, orders n-1 by reflection.
double bj(int n, double x) { return boost::math::cyl_bessel_j(n, x); }
cplx bh(int n, double x) { return {boost::math::cyl_bessel_j(n, x), boost::math::cyl_neumann(n, x)}; }

matrix<cplx, 3, 3> reference_En(int n, const MaterialSystem& m, double R) {
  const double k = m.k, kp = m.k_p, ks = m.k_s, mu = m.mu, eta = m.eta, nn = double(n) * n + n;
  matrix<cplx, 3, 3> E;
  E(0, 0) = -bh(n - 1, k * R) + (n / (k * R)) * bh(n, k * R);
  E(0, 1) = eta * kp / k * (bj(n - 1, kp * R) - n / (kp * R) * bj(n, kp * R));
  E(0, 2) = eta * n / (k * R) * bj(n, ks * R);
  E(1, 0) = 0;
  E(1, 1) = 2 * mu * n * kp / R * bj(n - 1, kp * R) - 2 * mu * nn / (R * R) * bj(n, kp * R);
  E(1, 2) = (2 * mu * nn - mu * ks * ks * R * R) / (R * R) * bj(n, ks * R) - 2 * mu * ks / R * bj(n - 1, ks * R);
  E(2, 0) = bh(n, k * R);
  E(2, 1) = (2 * mu * nn - mu * ks * ks * R * R) / (R * R) * bj(n, kp * R) - 2 * mu * kp / R * bj(n - 1, kp * R);
  E(2, 2) = 2 * mu * n * ks / R * bj(n - 1, ks * R) - 2 * mu * nn / (R * R) * bj(n, ks * R);
  return E;
}

}  // namespace

TEST_CASE("mode matrix structure and entries") {
  const auto m = example2(6.0);
  const auto modes = mode_matrices(60, m, 1.0);
  for (const auto& md : modes) {
    CAPTURE(md.n);
    CHECK(md.En(1, 0) == cplx(0));
    CHECK(md.en(1) == cplx(0));
    CHECK(md.En.allFinite());
    CHECK(md.en.allFinite());
  }
  for (int n : {0, 1, 2, 5, 12}) {
    CAPTURE(n);
    const auto ref = reference_En(n, m, 1.0);
    const auto got = mode_matrix(n, m, 1.0).En;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(std::abs(got(i, j) - ref(i, j)) <= 1e-11 * (std::abs(ref(i, j)) + 1e-300));
  }
  // E31 = H_0(kR0) at kR0 = 1
  const auto unit = derive_wavenumbers(1, 2, 1, 0.5, 1, 1.0);
  const cplx e31 = mode_matrix(0, unit, 1.0).En(2, 0);
  CHECK(e31.real() == doctest::Approx(0.7651977).epsilon(1e-7));
  CHECK(e31.imag() == doctest::Approx(0.0882570).epsilon(1e-6));
}

TEST_CASE("transmission conditions hold for both examples") {
  const auto m1 = example1();
  const auto s1 = solve_oracle(m1, 0.01, wave_for(m1));
  const auto r1 = transmission_residuals(s1, 100);
  CHECK(r1.kinematic < 1e-10);
  CHECK(r1.dynamic < 1e-10);
  const auto m2 = example2(6.0);
  const auto s2 = solve_oracle(m2, 1.0, wave_for(m2));
  const auto r2 = transmission_residuals(s2, 100);
  CHECK(r2.kinematic < 1e-10);
  CHECK(r2.dynamic < 1e-10);
  for (const auto& md : s2.modes) CHECK(md.residual < 1e-12);
  CHECK(s2.tail < 1e-14);
}

TEST_CASE("truncation extends beyond the default when the tail requires it") {
  const auto m = example2(6.0);
  const auto s = solve_oracle(m, 8.0, wave_for(m), 40);  // kR0 = 48
  CHECK(s.n_max_requested == 40);
  CHECK(s.n_max() > 40);
  CHECK(s.tail < 1e-14);
  const auto r = transmission_residuals(s, 100);
  CHECK(r.kinematic < 1e-9);
  CHECK(r.dynamic < 1e-9);
}

TEST_CASE("field properties") {
  const auto m = example2(6.0);
  const auto s = solve_oracle(m, 1.0, wave_for(m));
  for (double th : {0.3, 1.1, 2.5}) {
    const cplx a = std::get<cplx>(eval_exact(s, 1.7, th, ExactField::p_scattered));
    const cplx b = std::get<cplx>(eval_exact(s, 1.7, -th, ExactField::p_scattered));
    CHECK(std::abs(a - b) < 1e-13 * std::abs(a));
  }
  // r^(-1/2) decay
  for (double th : {0.0, 0.8, 2.0}) {
    const double p1 = std::abs(std::get<cplx>(eval_exact(s, 100.0, th, ExactField::p_scattered)));
    const double p2 = std::abs(std::get<cplx>(eval_exact(s, 200.0, th, ExactField::p_scattered)));
    CHECK(p2 / p1 == doctest::Approx(1 / std::sqrt(2.0)).epsilon(0.05));
  }
  CHECK_THROWS_AS(eval_exact(s, 0.5, 0.0, ExactField::p_scattered), DomainError);
  CHECK_THROWS_AS(eval_exact(s, 1.5, 0.0, ExactField::u), DomainError);
  // centre value matches the limit of nearby points
  const auto u0 = std::get<vec2<cplx>>(eval_exact(s, 0.0, 0.0, ExactField::u));
  const auto ue = std::get<vec2<cplx>>(eval_exact(s, 1e-7, 0.4, ExactField::u));
  CHECK(u0.allFinite());
  CHECK((u0 - ue).norm() < 1e-5 * u0.norm());
}

TEST_CASE("incident direction rotates the solution") {
  const auto m = example2(6.0);
  const auto sx = solve_oracle(m, 1.0, make_plane_wave({1, 0}, m.k));
  const auto sy = solve_oracle(m, 1.0, make_plane_wave({0, 1}, m.k));
  const point x(1.3, -0.4), xr(-0.4, -1.3);  // x rotated by -90 degrees
  CHECK(std::abs(exact_pressure(sy, x) - exact_pressure(sx, xr)) < 1e-12);
  const point y(0.2, 0.5), yr(0.5, -0.2);
  const vec2<cplx> uy = exact_displacement(sy, y), ux = exact_displacement(sx, yr);
  CHECK(std::abs(uy(0) + ux(1)) < 1e-12);
  CHECK(std::abs(uy(1) - ux(0)) < 1e-12);
}

TEST_CASE("Example 1 magnitudes") {
  const auto m = example1();
  CHECK(m.eta == doctest::Approx(2.467e13).epsilon(1e-3));
  const auto s = solve_oracle(m, 0.01, wave_for(m));
  double umax = 0, pmax = 0;
  for (int j = 0; j < 64; ++j) {
    const double th = 2 * pi * j / 64;
    umax = std::max(umax, std::get<vec2<cplx>>(eval_exact(s, 0.01, th, ExactField::u)).norm());
    pmax = std::max(pmax, std::abs(std::get<cplx>(eval_exact(s, 0.01, th, ExactField::p_scattered))));
  }
  // |u| ~ k |p| / eta: picometre displacements under unit-order pressure
  CHECK(pmax > 0.1);
  CHECK(pmax < 10);
  CHECK(umax > 1e-13);
  CHECK(umax < 1e-11);
  const auto uh = std::get<vec2<cplx>>(eval_exact(s, 0.005, 0.3, ExactField::u));
  CHECK(uh.allFinite());
  CHECK(uh.norm() < 1e-11);
}

TEST_CASE("mode decoupling") {
  const auto m = example2(6.0);
  const auto s = solve_oracle(m, 1.0, wave_for(m));
  auto t = s;
  t.modes[5].Xn(0) += cplx(0.3, 0.1);
  // kinematic residual Fourier coefficients change only in cos(5 theta)
  const int M = 64;
  std::vector<cplx> da(M);
  for (int j = 0; j < M; ++j) {
    const double th = 2 * pi * j / M;
    const point x(std::cos(th), std::sin(th));
    da[j] = exact_pressure_gradient(t, x).dot(x.cast<cplx>()) - exact_pressure_gradient(s, x).dot(x.cast<cplx>());
  }
  for (int q = 0; q < 12; ++q) {
    cplx c = 0;
    for (int j = 0; j < M; ++j) c += da[j] * std::cos(q * 2 * pi * j / M);
    if (q == 5)
      CHECK(std::abs(c) > 1);
    else
      CHECK(std::abs(c) < 1e-10);
  }
}

TEST_CASE("determinant varies smoothly away from resonances") {
  const auto tmpl = example2(6.0);
  for (int n = 0; n <= 6; ++n) {
    double prev = std::abs(mode_matrix(n, with_omega(tmpl, 5.5), 1.0).En.determinant());
    for (double w = 5.501; w <= 6.2; w += 0.001) {
      const double d = std::abs(mode_matrix(n, with_omega(tmpl, w), 1.0).En.determinant());
      CHECK(std::isfinite(d));
      CHECK(d / prev < 1.05);
      CHECK(prev / d < 1.05);
      prev = d;
    }
  }
}

TEST_CASE("errors and resonance") {
  auto m = example2(6.0);
  m.omega = 0;
  CHECK_THROWS_AS(solve_oracle(m, 1.0, wave_for(example2(6.0))), ParameterError);
  const auto j = example2(7.2629);
  try {
    solve_oracle(j, 1.0, wave_for(j));
    FAIL("expected ResonanceError");
  } catch (const ResonanceError& e) {
    const std::string w = e.what();
    CHECK(w.find("n = 0") != std::string::npos);
    CHECK(w.find("7.2629") != std::string::npos);
  }
}

TEST_CASE("Jones frequencies") {
  const auto tmpl = example2(6.0);
  const auto j = find_jones_frequencies(tmpl, 1.0, 5.0, 10.0);
  REQUIRE(j.size() == 1);
  CHECK(std::abs(j[0] - 7.2629) < 5e-4);
  CHECK(jones_dip_ratio(tmpl, 1.0, j[0]) < 1e-6);
  CHECK(find_jones_frequencies(tmpl, 1.0, 6.0, 6.0).empty());
  // the analytic traction-free torsional mode: J_2(k_s R0) = 0
  CHECK(std::abs(boost::math::cyl_bessel_j(2, j[0] / std::sqrt(2.0))) < 1e-8);
}

TEST_CASE("Neumann eigenfrequencies") {
  const std::vector<double> expected{5.3175, 5.3314, 6.4156, 6.7061, 7.0156, 7.5013,
                                     8.0152, 8.5363, 8.5778, 9.2824, 9.6474, 9.9695};
  const auto f = find_neumann_eigenfrequencies(1.0, 1.0, 5.0, 10.0);
  REQUIRE(f.size() == expected.size());
  for (size_t i = 0; i < f.size(); ++i) CHECK(std::abs(f[i] - expected[i]) < 5e-4);
  CHECK(find_neumann_eigenfrequencies(1.0, 1.0, 0.1, 1.8).empty());
  CHECK(find_neumann_eigenfrequencies(1.0, 1.0, 7.0, 5.0).empty());
  // attribution by order
  auto jp = [](int n, double x) { return boost::math::cyl_bessel_j_prime(n, x); };
  CHECK(std::abs(jp(1, f[1])) < 1e-9);
  CHECK(std::abs(jp(1, f[7])) < 1e-9);
  CHECK(std::abs(jp(0, f[4])) < 1e-9);
  CHECK(std::abs(jp(2, f[3])) < 1e-9);
  CHECK(std::abs(jp(2, f[11])) < 1e-9);
  // k = omega / c scaling
  const auto g = find_neumann_eigenfrequencies(0.5, 1.0, 10.0, 20.0);
  CHECK(std::abs(g.front() - 2 * expected.front()) < 1e-3);
}
