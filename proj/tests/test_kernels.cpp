#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fsibem/kernels.hpp"

using namespace fsibem;

namespace {

MaterialSystem example2(double omega = 6.0) { return derive_wavenumbers(1, 2, 1, 0.5, 1, omega); }

double maxabs(const mat2<cplx>& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("gamma at k = 1, |x - y| = 1") {
  const cplx g = eval_gamma(1.0, {0.3, 0.1}, {0.3, 1.1});
  CHECK(g.real() == doctest::Approx(-0.0220642).epsilon(1e-6));
  CHECK(g.imag() == doctest::Approx(0.1912994).epsilon(1e-6));
  CHECK(eval_gamma(1.0, {0.3, 1.1}, {0.3, 0.1}) == g);
  // at a zero of J0 the value is -Y0/4, purely real
  const cplx z = eval_gamma(2.0, {0, 0}, {2.404825557695773 / 2, 0});
  CHECK(std::abs(z.imag()) < 1e-15);
  CHECK_THROWS_AS(eval_gamma(1.0, {1, 1}, {1, 1}), SingularityError);
}

TEST_CASE("log-split of gamma is bounded") {
  const double k = 3.0;
  const cplx lim = -(std::log(k / 2) + 0.57721566490153286) / (2 * pi) + cplx(0, 0.25);
  for (double r : {1e-4, 1e-7, 1e-10}) {
    const cplx v = eval_gamma(k, {0, 0}, {r, 0}) + std::log(r) / (2 * pi);
    CHECK(std::abs(v - lim) < 10 * r);
  }
}

TEST_CASE("Helmholtz equation by finite differences") {
  const double k = 2.3, h = 1e-3;
  const point y{0.1, -0.2};
  for (point x : {point{1.0, 0.3}, point{-0.4, 0.8}}) {
    auto g = [&](double dx, double dy) { return eval_gamma(k, x + point{dx, dy}, y); };
    const cplx lap = (g(h, 0) + g(-h, 0) + g(0, h) + g(0, -h) - 4.0 * g(0, 0)) / (h * h);
    CHECK(std::abs(lap + k * k * g(0, 0)) < 1e-4);
  }
}

TEST_CASE("E is symmetric, even, and matches the Hessian of R") {
  const auto m = example2();
  const KernelBundle kb(m);
  const point x{0.4, -0.3}, y{-0.2, 0.5};
  const auto e = eval_E(m, x, y);
  CHECK(maxabs(e - e.transpose()) < 1e-15 * maxabs(e));
  CHECK(maxabs(e - eval_E(m, y, x)) < 1e-15 * maxabs(e));
  CHECK_THROWS_AS(eval_E(m, x, x), SingularityError);

  const double r = (x - y).norm(), h = 1e-5 * r;
  // gradient of R against central differences of R
  for (int l = 0; l < 2; ++l) {
    point d = point::Zero();
    d(l) = h;
    const cplx fd = (kb.R(x + d, y) - kb.R(x - d, y)) / (2 * h);
    CHECK(std::abs(fd - kb.grad_x_R(x, y)(l)) < 1e-8 * kb.grad_x_R(x, y).norm());
  }
  // Hessian of R against central differences of the gradient
  mat2<cplx> fdh;
  for (int l = 0; l < 2; ++l) {
    point d = point::Zero();
    d(l) = h;
    fdh.col(l) = (kb.grad_x_R(x + d, y) - kb.grad_x_R(x - d, y)) / (2 * h);
  }
  const mat2<cplx> hess = (e - (eval_gamma(m.k_s, x, y) / m.mu) * mat2<cplx>::Identity()) *
                          (m.rho * m.omega * m.omega);
  CHECK(maxabs(fdh - hess) < 1e-6 * maxabs(hess));
  CHECK(maxabs(kb.hess_R(x, y) - hess) < 1e-13 * maxabs(hess));
}

TEST_CASE("far-field decay of E") {
  const auto m = example2();
  for (double r : {40.0, 80.0}) {
    const double a = eval_E(m, {0, 0}, {r, 0.3 * r}).norm();
    const double b = eval_E(m, {0, 0}, {2 * r, 0.6 * r}).norm();
    CHECK(std::abs(b / a - 1 / std::sqrt(2.0)) < 0.05 / std::sqrt(2.0));
  }
}

TEST_CASE("R limit at coincidence") {
  const auto m = example2();
  const cplx lim = eval_R_limit(m);
  CHECK(lim.real() == doctest::Approx(-std::log(std::sqrt(2.5)) / (2 * pi)).epsilon(1e-14));
  CHECK(lim.real() == doctest::Approx(-0.0729).epsilon(1e-3));
  CHECK(lim.imag() == 0);
  CHECK(difference_limit(3.0, 3.0) == cplx(0, 0));
  const KernelBundle kb(m);
  CHECK(std::abs(kb.R({0, 0}, {1e-6, 0}) - lim) < 1e-8);
  CHECK(kb.R({1, 1}, {1, 1}) == lim);
  // bounded gradient as r -> 0
  for (double r : {1e-3, 1e-6, 1e-9}) CHECK(kb.grad_x_R({0, 0}, {r, 0}).norm() < 1.0);
}

TEST_CASE("series and Hankel forms of R agree across the switch") {
  for (double ks : {0.7, 3.0, 50.0}) {
    const double kp = ks / 1.98;
    for (double x : {0.05, 0.2, 0.249}) {
      const double r = x / ks;
      const Radial s = difference_radial(ks, kp, r, 3);
      const Radial a = helmholtz_radial(ks, r, 3), b = helmholtz_radial(kp, r, 3);
      CHECK(std::abs(s.f - (a.f - b.f)) < 1e-12);
      CHECK(std::abs(s.d1 - (a.d1 - b.d1)) < 1e-10 * std::abs(s.d1) + 1e-12 * ks);
      CHECK(std::abs(s.d2 - (a.d2 - b.d2)) < 1e-8 * std::abs(s.d2));
      CHECK(std::abs(s.d3 - (a.d3 - b.d3)) < 1e-6 * std::abs(s.d3));
    }
  }
}

TEST_CASE("difference identity k_s^2 gamma_ks - k_p^2 gamma_kp = -Laplacian R") {
  const auto m = example2(4.0);
  const KernelBundle kb(m);
  const point x{0.7, 0.2}, y{0, 0};
  const double h = 1e-3;
  auto R = [&](double dx, double dy) { return kb.R(x + point{dx, dy}, y); };
  const cplx lap = (R(h, 0) + R(-h, 0) + R(0, h) + R(0, -h) - 4.0 * R(0, 0)) / (h * h);
  const cplx lhs = m.k_s * m.k_s * eval_gamma(m.k_s, x, y) - m.k_p * m.k_p * eval_gamma(m.k_p, x, y);
  CHECK(std::abs(lhs + lap) < 1e-4);
}

TEST_CASE("E solves the Navier equation columnwise") {
  const auto m = example2(5.0);
  const point x{0.6, -0.5}, y{-0.1, 0.2};
  const double h = 1e-3;
  auto E = [&](double dx, double dy) { return eval_E(m, x + point{dx, dy}, y); };
  const mat2<cplx> e0 = E(0, 0);
  const mat2<cplx> exx = (E(h, 0) - 2.0 * e0 + E(-h, 0)) / (h * h);
  const mat2<cplx> eyy = (E(0, h) - 2.0 * e0 + E(0, -h)) / (h * h);
  const mat2<cplx> exy = (E(h, h) - E(h, -h) - E(-h, h) + E(-h, -h)) / (4 * h * h);
  for (int j = 0; j < 2; ++j) {
    // grad div u for u = column j
    const vec2<cplx> gdiv{exx(0, j) + exy(1, j), exy(0, j) + eyy(1, j)};
    const vec2<cplx> nav = m.mu * (exx.col(j) + eyy.col(j)) + (m.lambda + m.mu) * gdiv +
                           m.rho * m.omega * m.omega * e0.col(j);
    CHECK(nav.norm() < 1e-3);
  }
}

TEST_CASE("traction decomposition of T_x E") {
  const auto m = example2(6.0);
  const KernelBundle kb(m);
  const point y{0.1, 0.2};
  for (double ang : {0.3, 1.9, 4.0}) {
    const point x = y + 0.5 * point{std::cos(ang), std::sin(ang)};
    const point n{std::cos(ang + 0.7), std::sin(ang + 0.7)};
    const auto t = kb.traction_decomposition_TxE(x, y, n);
    const auto direct = kb.traction_TxE(x, y, n);
    CHECK(maxabs(t.sum() - direct) < 1e-10 * maxabs(direct));
    CHECK(std::abs(t.term_nR.determinant()) < 1e-15 * maxabs(t.term_nR) * maxabs(t.term_nR) + 1e-300);
    // the double-layer kernel is the transpose of the traction taken in y
    const auto ty = kb.traction_TyE_transposed(y, x, n);
    CHECK(maxabs(ty - direct.transpose()) < 1e-12 * maxabs(direct));
  }
}

TEST_CASE("Guenter derivative term integrates to zero around a closed curve") {
  // term_M = A d/ds_x [...] is an exact tangential derivative
  const auto m = example2(6.0);
  const KernelBundle kb(m);
  const point y{0.2, -0.1};
  const int n = 400;
  mat2<cplx> acc = mat2<cplx>::Zero();
  mat2<cplx> scale = mat2<cplx>::Zero();
  for (int i = 0; i < n; ++i) {
    const double a = 2 * pi * i / n;
    const point x{std::cos(a), std::sin(a)};
    const auto t = kb.traction_decomposition_TxE(x, y, x);
    acc += t.term_M * (2 * pi / n);
    scale += t.term_M.cwiseAbs().cast<cplx>() * (2 * pi / n);
  }
  CHECK(maxabs(acc) < 1e-12 * maxabs(scale));
  // the pointwise operator itself: M(d, n) = [0, n2 d1 - n1 d2; n1 d2 - n2 d1, 0] = A d/dt
  const point nn{0.6, 0.8};
  const point t = rot90(nn);
  // on u(x) = (x1^2, x1 x2): d/dt u = grad u t
  const point x0{0.3, 0.7};
  mat2<real> gu;
  gu << 2 * x0(0), 0, x0(1), x0(0);
  const point mu_ptw{nn(1) * gu(1, 0) - nn(0) * gu(1, 1), nn(0) * gu(0, 1) - nn(1) * gu(0, 0)};
  const point a_dt = rotation_A() * (gu * t);
  CHECK((mu_ptw - a_dt).norm() < 1e-15);
}

TEST_CASE("sample bundles the same values as the individual evaluators") {
  const auto m = example2(6.0);
  const KernelBundle kb(m);
  const point x{0.3, 0.4}, y{-0.5, 0.1};
  const auto s = kb.sample(x, y, true, true);
  CHECK(std::abs(s.g_k - eval_gamma(m.k, x, y)) < 1e-15);
  CHECK((s.grad_x_gk() - kb.grad_x_gamma(m.k, x, y)).norm() < 1e-15);
  CHECK(maxabs(s.E - eval_E(m, x, y)) < 1e-15);
  CHECK(std::abs(s.R - kb.R(x, y)) < 1e-15);
  CHECK((s.grad_x_R() - kb.grad_x_R(x, y)).norm() < 1e-15);
}
