#pragma once

#include <array>
#include <initializer_list>
#include <iosfwd>
#include <string>

#include "fsibem/kernels.hpp"
#include "fsibem/mesh.hpp"
#include "fsibem/quadrature.hpp"

namespace fsibem {

// Galerkin matrices. Vector unknowns are interleaved: index 2 i + component.
// The *N kinds embed a scalar density along the trial panel normal n_y, the N* kinds
// contract the test side with n_x; NVfN and NVsN do both.
enum class OperatorKind {
  Vf, Kf, Kfp, Wf,        // N x N
  Vs, Ks, Ksp, WsA, WsB,  // 2N x 2N
  Ih,                     // 2N x N, int phi_j n phi_i
  M,                      // N x N mass
  KspN,                   // 2N x N, Ksp (n psi)
  KfpN,                   // N x 2N, Kfp (n . v)
  VfN,                    // N x 2N, Vf (n . v)
  NVfN,                   // 2N x 2N, n Vf (n . v)
  NVsN,                   // N x N, n . Vs (n psi)
  count_
};
inline constexpr int operator_kind_count = int(OperatorKind::count_);
const char* kind_name(OperatorKind k);

enum class WsForm { A, B };

struct AssemblyOptions {
  QuadratureOptions quad;
  bool use_symmetry = true;  // block-circulant shortcut on regular polygons
  int threads = 0;           // 0: OpenMP default
  bool tangential_terms = true;  // false drops every d/ds-weighted term (diagnostics)
};

struct OperatorMatrix {
  OperatorKind kind;
  cmatrix data;
  int n = 0;
  real omega = 0;
  QuadratureOptions quad;
};

class OperatorSet {
 public:
  bool has(OperatorKind k) const { return present_[int(k)]; }
  const cmatrix& operator[](OperatorKind k) const;
  cmatrix& operator[](OperatorKind k) { return mats_[int(k)]; }
  void set_present(OperatorKind k) { present_[int(k)] = true; }

 private:
  std::array<cmatrix, operator_kind_count> mats_;
  std::array<bool, operator_kind_count> present_{};
};

OperatorSet assemble_operators(const BoundaryMesh& mesh, const MaterialSystem& mat,
                               std::initializer_list<OperatorKind> kinds,
                               const AssemblyOptions& opt = {});

OperatorMatrix assemble_Vf(const BoundaryMesh&, const MaterialSystem&, const AssemblyOptions& = {});
OperatorMatrix assemble_Kf(const BoundaryMesh&, const MaterialSystem&, const AssemblyOptions& = {});
OperatorMatrix assemble_Kfp(const BoundaryMesh&, const MaterialSystem&, const AssemblyOptions& = {});
OperatorMatrix assemble_Wf(const BoundaryMesh&, const MaterialSystem&, const AssemblyOptions& = {});
OperatorMatrix assemble_Vs(const BoundaryMesh&, const MaterialSystem&, const AssemblyOptions& = {});
OperatorMatrix assemble_Ks(const BoundaryMesh&, const MaterialSystem&, const AssemblyOptions& = {});
OperatorMatrix assemble_Ksp(const BoundaryMesh&, const MaterialSystem&, const AssemblyOptions& = {});
OperatorMatrix assemble_Ws(const BoundaryMesh&, const MaterialSystem&, WsForm form,
                           const AssemblyOptions& = {});
OperatorMatrix assemble_Ws(const BoundaryMesh&, const MaterialSystem&, const std::string& form,
                           const AssemblyOptions& = {});
OperatorMatrix assemble_Ih(const BoundaryMesh&);

// Text dump: header "kind N omega", then one "re im" pair per entry, row-major.
void dump_matrix(const OperatorMatrix& m, std::ostream& out);

}  // namespace fsibem
