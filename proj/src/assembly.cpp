#include "fsibem/assembly.hpp"

#include <omp.h>

#include <cmath>
#include <ostream>
#include <vector>

namespace fsibem {

namespace {

using K = OperatorKind;
using local_t = matrix<cplx, 4, 4>;
using cm2 = mat2<cplx>;
using cv2 = vec2<cplx>;

constexpr int nk = operator_kind_count;

bool vector_rows(K k) {
  switch (k) {
    case K::Vs: case K::Ks: case K::Ksp: case K::WsA: case K::WsB:
    case K::Ih: case K::KspN: case K::NVfN:
      return true;
    default:
      return false;
  }
}
bool vector_cols(K k) {
  switch (k) {
    case K::Vs: case K::Ks: case K::Ksp: case K::WsA: case K::WsB:
    case K::KfpN: case K::VfN: case K::NVfN:
      return true;
    default:
      return false;
  }
}
bool needs_fluid(K k) {
  return k == K::Vf || k == K::Kf || k == K::Kfp || k == K::Wf || k == K::KfpN || k == K::VfN ||
         k == K::NVfN;
}
bool single_integral(K k) { return k == K::Ih || k == K::M; }

struct Locals {
  std::array<local_t, nk> m;
  void zero(const std::array<bool, nk>& want) {
    for (int i = 0; i < nk; ++i)
      if (want[i]) m[i].setZero();
  }
};

// Hat data on one panel at local coordinate s.
struct Hats {
  real v[2], d[2];
};
Hats hats(real s, real h) { return {{1 - s, s}, {-1 / h, 1 / h}}; }

struct PairContext {
  const BoundaryMesh& mesh;
  const KernelBundle& kb;
  const std::array<bool, nk>& want;
  bool fluid, solid;
  bool tangential;
};

// Add w * (K00 phi psi + K11 phi' psi' + K01 phi psi' + K10 phi' psi) blockwise.
void add_vv(local_t& L, const Hats& a, const Hats& b, real w, const cm2& k00, const cm2* k11,
            const cm2* k01, const cm2* k10) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      cm2 blk = (a.v[i] * b.v[j]) * k00;
      if (k11) blk += (a.d[i] * b.d[j]) * *k11;
      if (k01) blk += (a.v[i] * b.d[j]) * *k01;
      if (k10) blk += (a.d[i] * b.v[j]) * *k10;
      L.block<2, 2>(2 * i, 2 * j) += w * blk;
    }
}

void integrate_pair(const PairContext& c, int p, int q, PairKind kind, const PairRule& rule, Locals& L) {
  const auto& mesh = c.mesh;
  const auto& m = c.kb.material();
  const auto& want = c.want;
  const real hp = mesh.length(p), hq = mesh.length(q);
  const point nx = mesh.normal(p), ny = mesh.normal(q), tp = mesh.tangent(p), ty = mesh.tangent(q);
  const cv2 nxc = nx.cast<cplx>(), nyc = ny.cast<cplx>();
  const cm2 A = rotation_A().cast<cplx>();
  const cm2 Id = cm2::Identity();
  const bool coincident = kind == PairKind::coincident;
  const real nxny = nx.dot(ny), nxty = nx.dot(ty);
  const real mu = m.mu, ks2 = m.k_s * m.k_s;

  for (int g = 0; g < rule.size(); ++g) {
    const real s = rule.s[g], t = rule.t[g];
    const real w = rule.w[g] * hp * hq;
    Hats a = hats(s, hp), b = hats(t, hq);
    if (!c.tangential) a.d[0] = a.d[1] = b.d[0] = b.d[1] = 0;
    point z;
    switch (kind) {
      case PairKind::coincident: z = (rule.a[g] * hp) * tp; break;
      case PairKind::adjacent_next: z = -(rule.a[g] * hp) * tp - (rule.b[g] * hq) * ty; break;
      case PairKind::adjacent_prev: z = (rule.a[g] * hp) * tp + (rule.b[g] * hq) * ty; break;
      default: z = mesh.at(p, s) - mesh.at(q, t);
    }
    const KernelSample k = c.kb.sample(z, c.fluid, c.solid);
    // flat coincident panels: x - y is tangential
    const real zx = coincident ? 0.0 : k.zhat.dot(nx);
    const real zy = coincident ? 0.0 : k.zhat.dot(ny);

    if (c.fluid) {
      const cplx dgdnx = k.g1_k * zx, dgdny = -k.g1_k * zy;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const real pp = a.v[i] * b.v[j];
          if (want[int(K::Vf)]) L.m[int(K::Vf)](i, j) += w * pp * k.g_k;
          if (want[int(K::Kf)]) L.m[int(K::Kf)](i, j) += w * pp * dgdny;
          if (want[int(K::Kfp)]) L.m[int(K::Kfp)](i, j) += w * pp * dgdnx;
          if (want[int(K::Wf)])
            L.m[int(K::Wf)](i, j) += w * (a.d[i] * b.d[j] - m.k * m.k * nxny * pp) * k.g_k;
          for (int e = 0; e < 2; ++e) {
            if (want[int(K::KfpN)]) L.m[int(K::KfpN)](i, 2 * j + e) += w * pp * dgdnx * ny(e);
            if (want[int(K::VfN)]) L.m[int(K::VfN)](i, 2 * j + e) += w * pp * k.g_k * ny(e);
            for (int f = 0; f < 2; ++f)
              if (want[int(K::NVfN)])
                L.m[int(K::NVfN)](2 * i + f, 2 * j + e) += w * pp * nx(f) * k.g_k * ny(e);
          }
        }
    }
    if (!c.solid) continue;

    const cv2 gradR = k.grad_x_R();  // grad_y R = -gradR
    const cplx dgsnx = k.g1_s * zx, dgsny = -k.g1_s * zy;
    const cm2 G = 2 * mu * k.E - k.g_s * Id;
    if (want[int(K::Vs)]) add_vv(L.m[int(K::Vs)], a, b, w, k.E, nullptr, nullptr, nullptr);
    if (want[int(K::Ks)]) {
      const cm2 k00 = dgsny * Id + gradR * nyc.transpose();
      const cm2 k01 = G * A;
      add_vv(L.m[int(K::Ks)], a, b, w, k00, nullptr, &k01, nullptr);
    }
    if (want[int(K::Ksp)]) {
      const cm2 k00 = -nxc * gradR.transpose() + dgsnx * Id;
      const cm2 k10 = -A * G;
      add_vv(L.m[int(K::Ksp)], a, b, w, k00, nullptr, nullptr, &k10);
    }
    if (want[int(K::WsA)] || want[int(K::WsB)]) {
      const cm2 base = mu * ks2 * (nxc * nyc.transpose() * k.R - (nxny * k.g_s) * Id);
      const cm2 k11 = 4 * mu * mu * k.E - (4 * mu * mu / (m.lambda + 2 * mu)) * k.g_p * Id;
      const cm2 nRA = 2 * mu * nxc * gradR.transpose() * A;
      if (want[int(K::WsA)]) {
        const cm2 k00 = base - (mu * ks2 * nxty * k.g_s) * A + (2 * mu * mu * ks2 * nxty) * A * k.E;
        const cm2 k01 = nRA - 2 * mu * A * gradR * nxc.transpose();
        add_vv(L.m[int(K::WsA)], a, b, w, k00, &k11, &k01, nullptr);
      }
      if (want[int(K::WsB)]) {
        const cm2 k00 = base + (mu * ks2 * nxty * k.g_s) * A;
        const cm2 k10 = 2 * mu * A * gradR * nyc.transpose();  // -2 mu A grad_y R n_y^T
        add_vv(L.m[int(K::WsB)], a, b, w, k00, &k11, &nRA, &k10);
      }
    }
    if (want[int(K::KspN)]) {
      const cv2 k00 = -nxc * (gradR(0) * ny(0) + gradR(1) * ny(1)) + dgsnx * nyc;
      const cv2 k10 = -A * G * nyc;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          L.m[int(K::KspN)].block<2, 1>(2 * i, j) += w * (a.v[i] * b.v[j] * k00 + a.d[i] * b.v[j] * k10);
    }
    if (want[int(K::NVsN)]) {
      const cplx v = nxc.transpose() * k.E * nyc;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) L.m[int(K::NVsN)](i, j) += w * a.v[i] * b.v[j] * v;
    }
  }
}

PairKind classify(const BoundaryMesh& mesh, int p, int q) {
  if (p == q) return PairKind::coincident;
  if (mesh.wrap(p + 1) == q) return PairKind::adjacent_next;
  if (mesh.wrap(q + 1) == p) return PairKind::adjacent_prev;
  return PairKind::separated;
}

struct Rules {
  std::array<PairRule, 4> r;
  explicit Rules(const QuadratureOptions& o) {
    for (auto k : {PairKind::separated, PairKind::coincident, PairKind::adjacent_next,
                   PairKind::adjacent_prev})
      r[int(k)] = pair_rule(k, o);
  }
  const PairRule& operator()(PairKind k) const { return r[int(k)]; }
};

// Scatter a local block of test panel p / trial panel q; Q rotates vector components.
void scatter(OperatorSet& out, const std::array<bool, nk>& want, const BoundaryMesh& mesh, int p, int q,
             const Locals& L, const mat2<real>* Q) {
  const int node_r[2] = {mesh.wrap(p), mesh.wrap(p + 1)};
  const int node_c[2] = {mesh.wrap(q), mesh.wrap(q + 1)};
  for (int kk = 0; kk < nk; ++kk) {
    if (!want[kk] || single_integral(K(kk))) continue;
    const K kind = K(kk);
    const bool vr = vector_rows(kind), vc = vector_cols(kind);
    local_t blk = L.m[kk];
    if (Q) {
      const cm2 Qc = Q->cast<cplx>();
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          if (vr && vc)
            blk.block<2, 2>(2 * i, 2 * j) = Qc * blk.block<2, 2>(2 * i, 2 * j) * Qc.transpose();
          else if (vr)
            blk.block<2, 1>(2 * i, j) = Qc * blk.block<2, 1>(2 * i, j);
          else if (vc)
            blk.block<1, 2>(i, 2 * j) = blk.block<1, 2>(i, 2 * j) * Qc.transpose();
        }
    }
    cmatrix& G = out[kind];
    const int dr = vr ? 2 : 1, dc = vc ? 2 : 1;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int a = 0; a < dr; ++a)
          for (int b = 0; b < dc; ++b) G(dr * node_r[i] + a, dc * node_c[j] + b) += blk(dr * i + a, dc * j + b);
  }
}

void assemble_single_integrals(const BoundaryMesh& mesh, const std::array<bool, nk>& want, OperatorSet& out) {
  for (int p = 0; p < mesh.size(); ++p) {
    const real h = mesh.length(p);
    const int nodes[2] = {mesh.wrap(p), mesh.wrap(p + 1)};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const real mass = h * (i == j ? 2.0 : 1.0) / 6.0;
        if (want[int(K::M)]) out[K::M](nodes[i], nodes[j]) += mass;
        if (want[int(K::Ih)])
          for (int a = 0; a < 2; ++a) out[K::Ih](2 * nodes[i] + a, nodes[j]) += mass * mesh.normal(p)(a);
      }
  }
}

}  // namespace

const char* kind_name(OperatorKind k) {
  static const char* names[] = {"Vf", "Kf", "Kfp", "Wf", "Vs", "Ks", "Ksp", "WsA", "WsB",
                                "Ih", "M", "KspN", "KfpN", "VfN", "NVfN", "NVsN"};
  return names[int(k)];
}

const cmatrix& OperatorSet::operator[](OperatorKind k) const {
  if (!present_[int(k)]) throw ParameterError(std::string("operator not assembled: ") + kind_name(k));
  return mats_[int(k)];
}

OperatorSet assemble_operators(const BoundaryMesh& mesh, const MaterialSystem& mat,
                               std::initializer_list<OperatorKind> kinds, const AssemblyOptions& opt) {
  const int n = mesh.size();
  std::array<bool, nk> want{};
  bool fluid = false, solid = false, pairs = false;
  OperatorSet out;
  for (K k : kinds) {
    want[int(k)] = true;
    out.set_present(k);
    out[k] = cmatrix::Zero(vector_rows(k) ? 2 * n : n, vector_cols(k) ? 2 * n : n);
    if (single_integral(k)) continue;
    pairs = true;
    (needs_fluid(k) ? fluid : solid) = true;
  }
  assemble_single_integrals(mesh, want, out);
  if (!pairs) return out;

  const KernelBundle kb(mat);
  const Rules rules(opt.quad);
  const PairContext ctx{mesh, kb, want, fluid, solid, opt.tangential_terms};
  if (opt.threads > 0) omp_set_num_threads(opt.threads);

  if (opt.use_symmetry && mesh.rotationally_symmetric()) {
    // regular polygon: only the first block row is integrated
    std::vector<Locals> row(n);
#pragma omp parallel for schedule(dynamic)
    for (int d = 0; d < n; ++d) {
      row[d].zero(want);
      integrate_pair(ctx, 0, d, classify(mesh, 0, d), rules(classify(mesh, 0, d)), row[d]);
    }
    for (int p = 0; p < n; ++p) {
      const real ang = 2 * pi * p / n;
      mat2<real> Q;
      Q << std::cos(ang), -std::sin(ang), std::sin(ang), std::cos(ang);
      for (int d = 0; d < n; ++d) scatter(out, want, mesh, p, p + d, row[d], &Q);
    }
    return out;
  }

  // test panels p and p+1 share a node row; colour by parity so writes stay disjoint
  for (int colour = 0; colour < 3; ++colour) {
#pragma omp parallel for schedule(dynamic)
    for (int p = 0; p < n; ++p) {
      const int c = (n % 2 == 1 && p == n - 1) ? 2 : p % 2;
      if (c != colour) continue;
      Locals L;
      for (int q = 0; q < n; ++q) {
        L.zero(want);
        const PairKind kind = classify(mesh, p, q);
        integrate_pair(ctx, p, q, kind, rules(kind), L);
        scatter(out, want, mesh, p, q, L, nullptr);
      }
    }
  }
  return out;
}

namespace {
OperatorMatrix single(const BoundaryMesh& mesh, const MaterialSystem& mat, K kind, const AssemblyOptions& opt) {
  OperatorSet s = assemble_operators(mesh, mat, {kind}, opt);
  return {kind, std::move(s[kind]), mesh.size(), mat.omega, opt.quad};
}
}  // namespace

OperatorMatrix assemble_Vf(const BoundaryMesh& m, const MaterialSystem& mat, const AssemblyOptions& o) {
  return single(m, mat, K::Vf, o);
}
OperatorMatrix assemble_Kf(const BoundaryMesh& m, const MaterialSystem& mat, const AssemblyOptions& o) {
  return single(m, mat, K::Kf, o);
}
OperatorMatrix assemble_Kfp(const BoundaryMesh& m, const MaterialSystem& mat, const AssemblyOptions& o) {
  return single(m, mat, K::Kfp, o);
}
OperatorMatrix assemble_Wf(const BoundaryMesh& m, const MaterialSystem& mat, const AssemblyOptions& o) {
  return single(m, mat, K::Wf, o);
}
OperatorMatrix assemble_Vs(const BoundaryMesh& m, const MaterialSystem& mat, const AssemblyOptions& o) {
  return single(m, mat, K::Vs, o);
}
OperatorMatrix assemble_Ks(const BoundaryMesh& m, const MaterialSystem& mat, const AssemblyOptions& o) {
  return single(m, mat, K::Ks, o);
}
OperatorMatrix assemble_Ksp(const BoundaryMesh& m, const MaterialSystem& mat, const AssemblyOptions& o) {
  return single(m, mat, K::Ksp, o);
}
OperatorMatrix assemble_Ws(const BoundaryMesh& m, const MaterialSystem& mat, WsForm form,
                           const AssemblyOptions& o) {
  return single(m, mat, form == WsForm::A ? K::WsA : K::WsB, o);
}
OperatorMatrix assemble_Ws(const BoundaryMesh& m, const MaterialSystem& mat, const std::string& form,
                           const AssemblyOptions& o) {
  if (form == "A") return assemble_Ws(m, mat, WsForm::A, o);
  if (form == "B") return assemble_Ws(m, mat, WsForm::B, o);
  throw ParameterError("unknown Ws form '" + form + "' (expected A or B)");
}
OperatorMatrix assemble_Ih(const BoundaryMesh& m) {
  OperatorSet s = assemble_operators(m, MaterialSystem{}, {K::Ih});
  return {K::Ih, std::move(s[K::Ih]), m.size(), 0.0, {}};
}

void dump_matrix(const OperatorMatrix& m, std::ostream& out) {
  out << kind_name(m.kind) << ' ' << m.n << ' ' << m.omega << '\n';
  out.precision(17);
  for (int i = 0; i < m.data.rows(); ++i)
    for (int j = 0; j < m.data.cols(); ++j) out << m.data(i, j).real() << ' ' << m.data(i, j).imag() << '\n';
}

}  // namespace fsibem
