#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fsibem/assembly.hpp"
#include "fsibem/material.hpp"
#include "fsibem/mesh.hpp"

namespace fsibem {

enum class Formulation { direct, indirect, burton_miller };
const char* formulation_name(Formulation f);
Formulation parse_formulation(const std::string& s);

enum class UnknownSemantics { traces, densities };

// Unknown layout: [vector unknown (2N, interleaved) | scalar unknown (N)].
struct BlockSystem {
  Formulation formulation = Formulation::direct;
  cmatrix matrix;
  cvector rhs;
  cplx beta = 0;
  UnknownSemantics semantics = UnknownSemantics::traces;
  BoundaryMesh mesh;
  MaterialSystem material;
  PlaneWave wave;
};

struct TraceSolution {
  std::vector<vec2<cplx>> u;  // displacement at nodes
  cvector p;                  // scattered pressure at nodes
  BoundaryMesh mesh;
};

struct DensitySolution {
  std::vector<vec2<cplx>> v;
  cvector psi;
  BoundaryMesh mesh;
};

struct SolveDiagnostics {
  real residual = 0;            // |A x - b| / |b|
  real condition_estimate = 0;  // 1-norm estimate of the equilibrated matrix
  real min_pivot = 0;           // smallest |U_ii| after equilibration
  bool near_singular = false;
  std::string warning;
};

struct SolveResult {
  std::variant<TraceSolution, DensitySolution> solution;
  cvector x;
  SolveDiagnostics diagnostics;
  const TraceSolution& traces() const { return std::get<TraceSolution>(solution); }
  const DensitySolution& densities() const { return std::get<DensitySolution>(solution); }
};

BlockSystem build_direct(const BoundaryMesh& mesh, const MaterialSystem& mat, const PlaneWave& wave,
                         const AssemblyOptions& opt = {});
BlockSystem build_indirect(const BoundaryMesh& mesh, const MaterialSystem& mat, const PlaneWave& wave,
                           const AssemblyOptions& opt = {});
// beta defaults to i k; Im(beta) = 0 is rejected.
BlockSystem build_burton_miller(const BoundaryMesh& mesh, const MaterialSystem& mat, const PlaneWave& wave,
                                std::optional<cplx> beta = std::nullopt, const AssemblyOptions& opt = {});
BlockSystem build_system(Formulation f, const BoundaryMesh& mesh, const MaterialSystem& mat,
                         const PlaneWave& wave, std::optional<cplx> beta = std::nullopt,
                         const AssemblyOptions& opt = {});

// strict: throw NearSingularError instead of returning a flagged result.
SolveResult solve(const BlockSystem& system, bool strict = false);

struct SweepRecord {
  real omega;
  real logdet;
};

// log|det| of the system matrix on each grid frequency; beta (burton_miller) defaults to i k(omega).
std::vector<SweepRecord> logdet_sweep(Formulation f, const MaterialSystem& material_template,
                                      const BoundaryMesh& mesh, const std::vector<real>& omega_grid,
                                      std::optional<cplx> beta = std::nullopt,
                                      const AssemblyOptions& opt = {});

real log_abs_det(const cmatrix& a);

// Local minima lying at least `depth` (natural log) below the median of a +-window neighbourhood.
std::vector<real> find_dips(const std::vector<SweepRecord>& sweep, real window = 0.2,
                            real depth = 2 * 2.302585092994046);

}  // namespace fsibem
