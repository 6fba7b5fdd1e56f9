#include "fsibem/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "fsibem/fields.hpp"
#include "fsibem/oracle.hpp"

namespace fsibem::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(real x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json cjson(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("out: cannot write '" + path + "'");
  return f;
}

void write_json(const std::string& path, const json& j) { open_out(path) << j.dump(2) << "\n"; }

Scenario load(const std::string& config, std::optional<Formulation> formulation) {
  Scenario s = load_scenario(config);
  if (formulation && *formulation != s.formulation) {
    if (s.beta && *formulation != Formulation::burton_miller)
      throw ParameterError("--formulation: run.beta is only valid with burton_miller");
    s.formulation = *formulation;
    s.entries["run.formulation"] = formulation_name(*formulation);
  }
  if (s.threads > 0) omp_set_num_threads(s.threads);
  return s;
}

json material_json(const Scenario& s) {
  const auto& m = s.material;
  return {{"parameterization", s.parameterization == Parameterization::lame ? "lame" : "wave_speeds"},
          {"lambda", m.lambda}, {"mu", m.mu}, {"rho", m.rho}, {"rho_f", m.rho_f}, {"c", m.c},
          {"omega", m.omega}, {"k", m.k}, {"k_s", m.k_s}, {"k_p", m.k_p}, {"eta", m.eta}};
}

json base_meta(const Scenario& s, const char* command) {
  return {{"version", version_string},    {"scenario_hash", scenario_hash(s)}, {"command", command},
          {"formulation", formulation_name(s.formulation)}, {"radius", s.radius},
          {"elements", s.elements},       {"direction", {s.direction.x(), s.direction.y()}},
          {"material", material_json(s)}};
}

real polar_angle(const point& x) {
  real t = std::atan2(x.y(), x.x());
  return t < 0 ? t + 2 * pi : t;
}

void write_row(std::ostream& f, real theta, const vec2<cplx>& u, cplx p) {
  f << num(theta) << ',' << num(u(0).real()) << ',' << num(u(0).imag()) << ',' << num(u(1).real()) << ','
    << num(u(1).imag()) << ',' << num(p.real()) << ',' << num(p.imag()) << '\n';
}

std::vector<real> parse_list(const std::string& flag, const std::string& text) {
  std::string s = text;
  for (char& ch : s)
    if (ch == ',' || ch == ':') ch = ' ';
  std::istringstream in(s);
  std::vector<real> v;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    real x = 0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || !std::isfinite(x)) throw UsageError(flag + ": not a number: '" + tok + "'");
    v.push_back(x);
  }
  return v;
}

// Known resonances within +-0.05 of omega, for the near-singular message.
std::string suspected_resonance(const Scenario& s) {
  const real w = s.material.omega, lo = std::max(w - 0.05, 1e-3), hi = w + 0.05;
  std::ostringstream msg;
  msg.precision(6);
  const char* sep = "";
  try {
    for (real j : find_jones_frequencies(s.material, s.radius, lo, hi, s.oracle_n_max)) {
      msg << sep << "Jones frequency " << j;
      sep = ", ";
    }
    if (s.formulation == Formulation::direct)
      for (real n : find_neumann_eigenfrequencies(1 / s.material.c, s.radius, lo, hi, s.oracle_n_max)) {
        msg << sep << "interior Neumann eigenfrequency " << n;
        sep = ", ";
      }
  } catch (const std::exception&) {
  }
  const std::string names = msg.str();
  return names.empty() ? "discrete eigenvalue of the boundary system near omega" : names;
}

}  // namespace

std::string companion_path(const std::string& out, const std::string& suffix) {
  std::filesystem::path p(out);
  return p.replace_extension(suffix).string();
}

std::string csv_header_line(const Scenario& s) {
  return std::string("# fsi-bem v") + version_string + ", scenario-hash=" + scenario_hash(s) + "\n";
}

int cmd_solve(const std::string& config, const std::string& out, std::optional<Formulation> formulation,
              std::ostream& log) {
  const Scenario s = load(config, formulation);
  const auto mesh = build_circle_mesh(s.radius, s.elements);
  const auto sys = build_system(s.formulation, mesh, s.material, s.wave(), s.beta, s.assembly());
  const auto res = solve(sys);

  auto f = open_out(out);
  f << csv_header_line(s);
  if (sys.semantics == UnknownSemantics::traces) {
    f << "theta,re_u1,im_u1,re_u2,im_u2,re_p,im_p\n";
    const auto& t = res.traces();
    for (int i = 0; i < mesh.size(); ++i) write_row(f, polar_angle(mesh.node(i)), t.u[i], t.p(i));
  } else {
    f << "theta,re_v1,im_v1,re_v2,im_v2,re_psi,im_psi\n";
    const auto& d = res.densities();
    for (int i = 0; i < mesh.size(); ++i) write_row(f, polar_angle(mesh.node(i)), d.v[i], d.psi(i));
  }

  const auto& dg = res.diagnostics;
  json meta = base_meta(s, "solve");
  meta["unknowns"] = sys.semantics == UnknownSemantics::traces ? "traces (u, scattered p)" : "densities (v, psi)";
  if (s.formulation == Formulation::burton_miller) meta["beta"] = cjson(sys.beta);
  meta["quadrature_order"] = s.quadrature_order;
  meta["residual"] = dg.residual;
  meta["condition_estimate"] = dg.condition_estimate;
  meta["min_pivot"] = dg.min_pivot;
  meta["near_singular"] = dg.near_singular;
  if (!dg.warning.empty()) meta["warning"] = dg.warning;
  write_json(companion_path(out, ".meta.json"), meta);

  if (dg.near_singular) {
    log << "error: " << dg.warning << ": " << suspected_resonance(s) << "\n";
    return exit_singular;
  }
  if (!dg.warning.empty()) log << "warning: " << dg.warning << "\n";
  return exit_ok;
}

int cmd_convergence(const std::string& config, const std::string& n_list, const std::string& out,
                    std::optional<Formulation> formulation, std::ostream& log) {
  const Scenario s = load(config, formulation);
  std::vector<int> Ns;
  for (real x : parse_list("--n-list", n_list)) {
    if (x != std::floor(x) || x < 1 || x > 1e6) throw UsageError("--n-list: not a valid element count: " + num(x));
    Ns.push_back(int(x));
  }
  if (Ns.empty()) throw UsageError("--n-list: empty");

  StudySetup setup{s.material, s.radius, s.wave(), s.beta, s.assembly(), s.oracle_n_max};
  const auto rows = convergence_study(s.formulation, setup, Ns);

  auto f = open_out(out);
  f << csv_header_line(s) << "N,err_u_abs,err_u_rel,order_u,err_p_abs,err_p_rel,order_p\n";
  for (const auto& r : rows) {
    f << r.N << ',' << num(r.err_u_abs) << ',' << num(r.err_u_rel) << ',' << (r.order_u ? num(*r.order_u) : "")
      << ',' << num(r.err_p_abs) << ',' << num(r.err_p_rel) << ',' << (r.order_p ? num(*r.order_p) : "") << '\n';
  }
  json meta = base_meta(s, "convergence");
  meta["n_list"] = Ns;
  if (!rows.empty() && rows.front().norm_kind == NormKind::Linf_circle) {
    meta["norm"] = "Linf on circles";
    meta["radius_u"] = rows.front().radius_u;
    meta["radius_p"] = rows.front().radius_p;
  } else {
    meta["norm"] = "L2 on the boundary";
  }
  write_json(companion_path(out, ".meta.json"), meta);
  log << "convergence: " << rows.size() << " rows written to " << out << "\n";
  return exit_ok;
}

int cmd_sweep(const std::string& config, const std::string& omega_range, real step, const std::string& out,
              std::optional<Formulation> formulation, std::ostream& log) {
  const auto range = parse_list("--omega-range", omega_range);
  if (range.size() != 2) throw UsageError("--omega-range: expected 'lo,hi'");
  const real lo = range[0], hi = range[1];
  if (!(lo < hi)) throw UsageError("--omega-range: inverted or empty range (lo must be < hi)");
  if (!(lo > 0)) throw UsageError("--omega-range: lo must be > 0");
  if (!(step > 0) || !std::isfinite(step)) throw UsageError("--step: must be > 0");
  const long count = long(std::floor((hi - lo) / step * (1 + 1e-12))) + 1;
  if (count > 10'000'000) throw UsageError("--step: too many grid points");
  const Scenario s = load(config, formulation);

  std::vector<real> grid(count);
  for (long i = 0; i < count; ++i) grid[i] = lo + real(i) * step;
  const auto mesh = build_circle_mesh(s.radius, s.elements);
  const auto sweep = logdet_sweep(s.formulation, s.material, mesh, grid, s.beta, s.assembly());

  auto f = open_out(out);
  f << csv_header_line(s) << "omega,logdet\n";
  for (const auto& r : sweep) f << num(r.omega) << ',' << num(r.logdet) << '\n';

  const auto jones = find_jones_frequencies(s.material, s.radius, lo, hi, s.oracle_n_max);
  const auto neumann = find_neumann_eigenfrequencies(1 / s.material.c, s.radius, lo, hi, s.oracle_n_max);
  struct Ref {
    real omega;
    const char* kind;
    bool expected;
  };
  std::vector<Ref> refs;
  for (real w : jones) refs.push_back({w, "jones", true});
  for (real w : neumann) refs.push_back({w, "neumann", s.formulation == Formulation::direct});
  std::stable_sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) { return a.omega < b.omega; });
  auto r = open_out(companion_path(out, ".reference.csv"));
  r << csv_header_line(s) << "omega,kind,expected_dip\n";
  for (const auto& x : refs) r << num(x.omega) << ',' << x.kind << ',' << (x.expected ? 1 : 0) << '\n';

  json meta = base_meta(s, "sweep");
  meta["omega_range"] = {lo, hi};
  meta["step"] = step;
  meta["points"] = count;
  meta["dips"] = find_dips(sweep);
  write_json(companion_path(out, ".meta.json"), meta);
  log << "sweep: " << count << " frequencies written to " << out << "\n";
  return exit_ok;
}

int cmd_oracle(const std::string& config, const std::string& out, std::ostream& log) {
  const Scenario s = load(config, std::nullopt);
  const auto sol = solve_oracle(s.material, s.radius, s.wave(), s.oracle_n_max);

  auto f = open_out(out);
  f << csv_header_line(s) << "theta,re_u1,im_u1,re_u2,im_u2,re_p,im_p\n";
  for (int i = 0; i < s.elements; ++i) {
    const real th = 2 * pi * i / s.elements;
    const point x = s.radius * point(std::cos(th), std::sin(th));
    write_row(f, th, exact_displacement(sol, x), exact_pressure(sol, x));
  }

  auto m = open_out(companion_path(out, ".modes.csv"));
  m << csv_header_line(s) << "n,re_A,im_A,re_B,im_B,re_C,im_C,residual\n";
  for (const auto& md : sol.modes) {
    m << md.n;
    for (int j = 0; j < 3; ++j) m << ',' << num(md.Xn(j).real()) << ',' << num(md.Xn(j).imag());
    m << ',' << num(md.residual) << '\n';
  }

  const auto tr = transmission_residuals(sol, 100);
  json meta = base_meta(s, "oracle");
  meta["n_max_requested"] = sol.n_max_requested;
  meta["n_max_used"] = sol.n_max();
  meta["tail"] = sol.tail;
  meta["transmission_residual"] = {{"kinematic", tr.kinematic}, {"dynamic", tr.dynamic}};
  write_json(companion_path(out, ".meta.json"), meta);
  log << "oracle: " << sol.modes.size() << " modes, traces written to " << out << "\n";
  return exit_ok;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Galerkin BEM for time-harmonic fluid-solid interaction", "fsibem"};
  app.set_version_flag("--version", std::string("fsi-bem v") + version_string);
  app.require_subcommand(1);

  std::string config, out_path, n_list, omega_range, form;
  real step = 0.005;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "scenario file (key = value)")->required();
    sub->add_option("--out", out_path, "output CSV")->required();
  };
  auto* solve_cmd = app.add_subcommand("solve", "solve one scenario, write boundary traces");
  auto* conv_cmd = app.add_subcommand("convergence", "error study against the series solution");
  auto* sweep_cmd = app.add_subcommand("sweep", "log|det| over a frequency grid");
  auto* oracle_cmd = app.add_subcommand("oracle", "series solution traces and mode coefficients");
  for (auto* sub : {solve_cmd, conv_cmd, sweep_cmd, oracle_cmd}) add_common(sub);
  for (auto* sub : {solve_cmd, conv_cmd, sweep_cmd})
    sub->add_option("--formulation", form, "direct | indirect | burton_miller (overrides run.formulation)");
  conv_cmd->add_option("--n-list", n_list, "element counts, e.g. 64,128,256")->required();
  sweep_cmd->add_option("--omega-range", omega_range, "lo,hi")->required();
  sweep_cmd->add_option("--step", step, "grid step")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }

  try {
    std::optional<Formulation> f;
    if (!form.empty()) f = parse_formulation(form);
    if (*solve_cmd) return cmd_solve(config, out_path, f, err);
    if (*conv_cmd) return cmd_convergence(config, n_list, out_path, f, err);
    if (*sweep_cmd) return cmd_sweep(config, omega_range, step, out_path, f, err);
    return cmd_oracle(config, out_path, err);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const ResonanceError& e) {
    err << "error: " << e.what() << "\n";
    return exit_singular;
  } catch (const NearSingularError& e) {
    err << "error: " << e.what() << "\n";
    return exit_singular;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_internal;
  }
}

}  // namespace fsibem::cli
