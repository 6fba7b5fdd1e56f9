#include "fsibem/quadrature.hpp"

#include <cmath>
#include <string>

namespace fsibem {

Rule1D gauss_legendre(int q) {
  if (q < 1) throw ParameterError("gauss_legendre: order must be >= 1");
  Rule1D r;
  r.x.resize(q);
  r.w.resize(q);
  for (int i = 0; i < (q + 1) / 2; ++i) {
    real z = std::cos(pi * (i + 0.75) / (q + 0.5)), dp = 0;
    for (int it = 0; it < 100; ++it) {
      real p0 = 1, p1 = 0;
      for (int k = 1; k <= q; ++k) {
        const real p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = q * (z * p0 - p1) / (z * z - 1);
      const real dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    {
      real p0 = 1, p1 = 0;
      for (int k = 1; k <= q; ++k) {
        const real p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = q * (z * p0 - p1) / (z * z - 1);
    }
    const real w = 2 / ((1 - z * z) * dp * dp);
    r.x[i] = 0.5 * (1 - z);
    r.x[q - 1 - i] = 0.5 * (1 + z);
    r.w[i] = r.w[q - 1 - i] = 0.5 * w;
  }
  return r;
}

Rule1D gauss_log_rule(int q) {
  if (q < 4 || q > 16)
    throw ParameterError("gauss_log_rule: order " + std::to_string(q) + " outside 4..16");
  // Modified Chebyshev algorithm with monic shifted Legendre polynomials;
  // modified moments of ln(1/t) against P*_l are (-1)^l / (l (l+1)).
  using ld = long double;
  const int n = q, m2 = 2 * q;
  std::vector<ld> a(m2, 0.5L), b(m2, 0.0L), mom(m2);
  for (int l = 1; l < m2; ++l) b[l] = ld(l) * l / (4.0L * (4.0L * l * l - 1));
  ld binom = 1;  // C(2l, l)
  for (int l = 0; l < m2; ++l) {
    if (l > 0) binom *= ld(2 * l) * (2 * l - 1) / (ld(l) * l);
    const ld nu = (l == 0) ? 1.0L : ((l % 2 ? -1.0L : 1.0L) / (ld(l) * (l + 1)));
    mom[l] = nu / binom;
  }
  std::vector<ld> alpha(n), beta(n);
  std::vector<ld> sig_prev(m2, 0.0L), sig(mom), sig_next(m2, 0.0L);
  alpha[0] = a[0] + mom[1] / mom[0];
  beta[0] = mom[0];
  for (int k = 1; k < n; ++k) {
    for (int l = k; l < m2 - k; ++l) {
      sig_next[l] = sig[l + 1] - (alpha[k - 1] - a[l]) * sig[l] - beta[k - 1] * sig_prev[l] +
                    b[l] * sig[l - 1];
    }
    alpha[k] = a[k] + sig_next[k + 1] / sig_next[k] - sig[k] / sig[k - 1];
    beta[k] = sig_next[k] / sig[k - 1];
    sig_prev = sig;
    sig = sig_next;
  }
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    jac(i, i) = double(alpha[i]);
    if (i + 1 < n) jac(i, i + 1) = jac(i + 1, i) = double(std::sqrt(beta[i + 1]));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  Rule1D r;
  for (int i = 0; i < n; ++i) {
    r.x.push_back(es.eigenvalues()(i));
    const double v = es.eigenvectors()(0, i);
    r.w.push_back(double(beta[0]) * v * v);
  }
  return r;
}

Rule1D graded_rule(int q, int levels, real sigma) {
  const Rule1D g = gauss_legendre(q);
  Rule1D r;
  real hi = 1.0;
  for (int l = 0; l <= levels; ++l) {
    const real lo = (l == levels) ? 0.0 : hi * sigma;
    for (int i = 0; i < q; ++i) {
      r.x.push_back(lo + (hi - lo) * g.x[i]);
      r.w.push_back((hi - lo) * g.w[i]);
    }
    hi = lo;
  }
  return r;
}

PairRule pair_rule(PairKind kind, const QuadratureOptions& opt) {
  PairRule r;
  auto add = [&r](real s, real t, real w, real a = 0, real b = 0) {
    r.s.push_back(s);
    r.t.push_back(t);
    r.w.push_back(w);
    r.a.push_back(a);
    r.b.push_back(b);
  };
  if (kind == PairKind::separated) {
    const Rule1D g = gauss_legendre(opt.order);
    for (int i = 0; i < g.size(); ++i)
      for (int j = 0; j < g.size(); ++j) add(g.x[i], g.x[j], g.w[i] * g.w[j]);
    return r;
  }
  const Rule1D rad = graded_rule(opt.singular_order, opt.levels, opt.grading);
  const Rule1D g = gauss_legendre(opt.singular_order);
  if (kind == PairKind::coincident) {
    // relative coordinate d = |s - t|, graded towards the diagonal
    for (int i = 0; i < rad.size(); ++i) {
      const real d = rad.x[i];
      for (int j = 0; j < g.size(); ++j) {
        const real lo = (1 - d) * g.x[j];
        const real w = rad.w[i] * g.w[j] * (1 - d);
        add(lo + d, lo, w, d);
        add(lo, lo + d, w, -d);
      }
    }
    return r;
  }
  // Duffy split of the corner at the shared node, graded in the radial variable
  for (int i = 0; i < rad.size(); ++i) {
    const real rho = rad.x[i];
    for (int j = 0; j < g.size(); ++j) {
      const real w = rad.w[i] * g.w[j] * rho;
      const real u = rho * g.x[j];
      const real pa[2] = {rho, u}, pb[2] = {u, rho};
      for (int h = 0; h < 2; ++h) {
        if (kind == PairKind::adjacent_next)
          add(1 - pa[h], pb[h], w, pa[h], pb[h]);
        else
          add(pa[h], 1 - pb[h], w, pa[h], pb[h]);
      }
    }
  }
  return r;
}

}  // namespace fsibem
