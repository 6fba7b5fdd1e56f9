#pragma once

#include <map>
#include <optional>
#include <string>

#include "fsibem/assembly.hpp"
#include "fsibem/material.hpp"
#include "fsibem/systems.hpp"

namespace fsibem {

inline constexpr const char* version_string = "0.1.0";

enum class Parameterization { lame, wave_speeds };

struct Scenario {
  real radius = 1;
  int elements = 128;
  Parameterization parameterization = Parameterization::lame;
  MaterialSystem material;
  point direction{1.0, 0.0};
  Formulation formulation = Formulation::direct;
  std::optional<cplx> beta;  // burton_miller only; default i k
  int quadrature_order = 8;
  int oracle_n_max = 40;
  int threads = 0;
  std::map<std::string, std::string> entries;  // as read, after validation

  PlaneWave wave() const { return make_plane_wave(direction, material.k); }
  AssemblyOptions assembly() const;
};

// Flat "key = value" text; '#' starts a comment. Throws ParameterError with the offending key.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

// Canonical form: sorted "key=value" lines of the validated entries.
std::string canonical_text(const Scenario& s);
// 64-bit FNV-1a of the canonical form, 16 hex digits.
std::string scenario_hash(const Scenario& s);

}  // namespace fsibem
