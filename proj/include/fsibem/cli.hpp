#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fsibem/scenario.hpp"

namespace fsibem::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;     // malformed config or arguments
inline constexpr int exit_singular = 3;  // resonant or near-singular problem
inline constexpr int exit_internal = 1;

// Companion files live next to the main CSV: <stem>.meta.json, <stem>.reference.csv, <stem>.modes.csv.
std::string companion_path(const std::string& out, const std::string& suffix);
std::string csv_header_line(const Scenario& s);

int cmd_solve(const std::string& config, const std::string& out, std::optional<Formulation> formulation,
              std::ostream& log);
int cmd_convergence(const std::string& config, const std::string& n_list, const std::string& out,
                    std::optional<Formulation> formulation, std::ostream& log);
int cmd_sweep(const std::string& config, const std::string& omega_range, real step, const std::string& out,
              std::optional<Formulation> formulation, std::ostream& log);
int cmd_oracle(const std::string& config, const std::string& out, std::ostream& log);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fsibem::cli
