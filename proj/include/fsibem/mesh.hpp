#pragma once

#include <string>
#include <vector>

#include "fsibem/types.hpp"

namespace fsibem {

// Closed polygon; panel i joins node i to node (i+1) mod N.
class BoundaryMesh {
 public:
  BoundaryMesh() = default;
  // Keeps the given node order: normals point to the right of the direction of travel.
  static BoundaryMesh from_points(const std::vector<point>& nodes);

  int size() const { return int(nodes_.size()); }
  const point& node(int i) const { return nodes_[wrap(i)]; }
  std::pair<int, int> segment(int i) const { return {wrap(i), wrap(i + 1)}; }
  real length(int i) const { return length_[wrap(i)]; }
  const point& normal(int i) const { return normal_[wrap(i)]; }
  const point& tangent(int i) const { return tangent_[wrap(i)]; }
  real node_arc(int i) const { return arc_[i]; }  // i in 0..N, arc(N) = perimeter
  real perimeter() const { return arc_.back(); }
  real diameter() const;
  point at(int panel, real s) const { return node(panel) + s * length(panel) * tangent(panel); }
  int wrap(int i) const {
    const int n = size();
    return ((i % n) + n) % n;
  }

  // Regular polygon centred at the origin: panel p is panel 0 rotated by 2 pi p / N.
  bool rotationally_symmetric() const { return symmetric_; }
  BoundaryMesh reversed() const;
  BoundaryMesh scaled(real s) const;

 private:
  friend BoundaryMesh build_circle_mesh(real, int);
  std::vector<point> nodes_, normal_, tangent_;
  std::vector<real> length_, arc_;
  bool symmetric_ = false;
};

BoundaryMesh build_circle_mesh(real R0, int N);

// Plain text, one "x y" pair per line, implicitly closed; reoriented counter-clockwise.
BoundaryMesh load_polyline(const std::string& path);

// Tabulated Gauss data per panel. On panel i, node i carries phi = 1 - s, node i+1 carries phi = s.
struct PanelQuadrature {
  int q = 0;
  std::vector<real> s, w;                  // reference nodes on [0,1], weights scaled by h_i below
  std::vector<std::vector<point>> points;  // [panel][k]
  std::vector<std::vector<real>> weights;  // [panel][k], sum = h_i
  std::vector<std::vector<real>> phi0, phi1;
  std::vector<real> dphi0, dphi1;          // per panel: -1/h, +1/h
};

PanelQuadrature basis_quadrature_nodes(const BoundaryMesh& mesh, int q);

// Value of global hat i on panel p at local coordinate s.
real hat_value(const BoundaryMesh& mesh, int i, int panel, real s);

}  // namespace fsibem
