#include "fsibem/mesh.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fsibem/quadrature.hpp"

namespace fsibem {

BoundaryMesh BoundaryMesh::from_points(const std::vector<point>& nodes) {
  const int n = int(nodes.size());
  if (n < 3) throw ParameterError("mesh needs at least 3 nodes");
  BoundaryMesh m;
  m.nodes_ = nodes;
  m.arc_.assign(n + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    const point d = nodes[(i + 1) % n] - nodes[i];
    const real h = d.norm();
    if (!(h > 0)) throw ParameterError("mesh has a zero-length segment at node " + std::to_string(i));
    const point t = d / h;
    m.length_.push_back(h);
    m.tangent_.push_back(t);
    m.normal_.push_back({t(1), -t(0)});
    m.arc_[i + 1] = m.arc_[i] + h;
  }
  return m;
}

real BoundaryMesh::diameter() const {
  real d = 0;
  for (const auto& a : nodes_)
    for (const auto& b : nodes_) d = std::max(d, (a - b).norm());
  return d;
}

BoundaryMesh BoundaryMesh::reversed() const {
  std::vector<point> r(nodes_.rbegin(), nodes_.rend());
  return from_points(r);
}

BoundaryMesh BoundaryMesh::scaled(real s) const {
  std::vector<point> r;
  for (const auto& p : nodes_) r.push_back(s * p);
  BoundaryMesh m = from_points(r);
  m.symmetric_ = symmetric_;
  return m;
}

BoundaryMesh build_circle_mesh(real R0, int N) {
  if (N < 4) throw ParameterError("geometry.elements must be >= 4 (got " + std::to_string(N) + ")");
  if (!(R0 > 0)) throw ParameterError("geometry.radius must be > 0");
  std::vector<point> nodes;
  for (int j = 0; j < N; ++j) {
    const real a = 2 * pi * j / N;
    nodes.push_back({R0 * std::cos(a), R0 * std::sin(a)});
  }
  BoundaryMesh m = BoundaryMesh::from_points(nodes);
  // identical panel lengths and exact normals keep the rotated copies consistent
  const real h = 2 * R0 * std::sin(pi / N);
  for (int i = 0; i < N; ++i) {
    const real a = 2 * pi * (i + 0.5) / N;
    m.length_[i] = h;
    m.normal_[i] = {std::cos(a), std::sin(a)};
    m.tangent_[i] = rot90(m.normal_[i]);
    m.arc_[i + 1] = h * (i + 1);
  }
  m.symmetric_ = true;
  return m;
}

BoundaryMesh load_polyline(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open polyline file " + path);
  std::vector<point> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    real x, y;
    if (!(ss >> x >> y)) throw ParameterError("malformed polyline line: " + line);
    pts.push_back({x, y});
  }
  real area = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    const auto& a = pts[i];
    const auto& b = pts[(i + 1) % pts.size()];
    area += a(0) * b(1) - a(1) * b(0);
  }
  if (area < 0) std::reverse(pts.begin(), pts.end());
  return BoundaryMesh::from_points(pts);
}

PanelQuadrature basis_quadrature_nodes(const BoundaryMesh& mesh, int q) {
  const Rule1D g = gauss_legendre(q);
  PanelQuadrature pq;
  pq.q = q;
  pq.s = g.x;
  pq.w = g.w;
  const int n = mesh.size();
  pq.points.resize(n);
  pq.weights.resize(n);
  pq.phi0.resize(n);
  pq.phi1.resize(n);
  for (int p = 0; p < n; ++p) {
    const real h = mesh.length(p);
    for (int k = 0; k < q; ++k) {
      pq.points[p].push_back(mesh.at(p, g.x[k]));
      pq.weights[p].push_back(h * g.w[k]);
      pq.phi0[p].push_back(1 - g.x[k]);
      pq.phi1[p].push_back(g.x[k]);
    }
    pq.dphi0.push_back(-1 / h);
    pq.dphi1.push_back(1 / h);
  }
  return pq;
}

real hat_value(const BoundaryMesh& mesh, int i, int panel, real s) {
  const auto [a, b] = mesh.segment(panel);
  const int ii = mesh.wrap(i);
  real v = 0;
  if (ii == a) v += 1 - s;
  if (ii == b) v += s;
  return v;
}

}  // namespace fsibem
