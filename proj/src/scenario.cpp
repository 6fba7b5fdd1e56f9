#include "fsibem/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace fsibem {

namespace {

const std::set<std::string> known_keys = {
    "geometry.radius",   "geometry.elements", "material.lambda",   "material.mu",
    "material.c_s",      "material.c_p",      "material.rho",      "material.rho_f",
    "material.c",        "material.omega",    "incident.direction", "run.formulation",
    "run.beta",          "run.quadrature_order", "run.n_max",      "oracle.n_max",
    "run.threads"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& key, const std::string& msg) {
  throw ParameterError(key + ": " + msg);
}

real to_real(const std::string& key, const std::string& v) {
  real x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(x))
    fail(key, "expected a finite number, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  int x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) fail(key, "expected an integer, got '" + v + "'");
  return x;
}

// "a, b" or "a b"
std::pair<real, real> to_pair(const std::string& key, const std::string& v) {
  std::string s = v;
  for (char& ch : s)
    if (ch == ',') ch = ' ';
  std::istringstream in(s);
  std::string a, b, extra;
  if (!(in >> a >> b) || (in >> extra)) fail(key, "expected two numbers, got '" + v + "'");
  return {to_real(key, a), to_real(key, b)};
}

}  // namespace

AssemblyOptions Scenario::assembly() const {
  AssemblyOptions opt;
  opt.quad.order = quadrature_order;
  opt.threads = threads;
  return opt;
}

Scenario parse_scenario(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("line " + std::to_string(lineno), "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (!known_keys.count(key)) fail(key, "unknown key (line " + std::to_string(lineno) + ")");
    if (value.empty()) fail(key, "empty value");
    if (kv.count(key)) fail(key, "given twice");
    kv[key] = value;
  }
  if (kv.count("run.n_max") && kv.count("oracle.n_max")) fail("oracle.n_max", "given twice (also run.n_max)");
  if (auto it = kv.find("run.n_max"); it != kv.end()) {
    kv["oracle.n_max"] = it->second;
    kv.erase(it);
  }

  Scenario s;
  auto get = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto need = [&](const char* key) -> const std::string& {
    if (auto v = get(key)) return *v;
    fail(key, "missing");
  };

  if (auto v = get("geometry.radius")) s.radius = to_real("geometry.radius", *v);
  if (!(s.radius > 0)) fail("geometry.radius", "must be > 0");
  if (auto v = get("geometry.elements")) s.elements = to_int("geometry.elements", *v);
  if (s.elements < 3) fail("geometry.elements", "must be >= 3");

  const bool has_lame = get("material.lambda") || get("material.mu");
  const bool has_speeds = get("material.c_s") || get("material.c_p");
  if (has_lame && has_speeds)
    fail("material", "give exactly one parameterization: Lame (lambda, mu) or wave speeds (c_s, c_p), not both");
  if (!has_lame && !has_speeds)
    fail("material", "missing parameterization: Lame (lambda, mu) or wave speeds (c_s, c_p)");
  const real rho = to_real("material.rho", need("material.rho"));
  const real rho_f = to_real("material.rho_f", need("material.rho_f"));
  const real c = to_real("material.c", need("material.c"));
  const real omega = to_real("material.omega", need("material.omega"));
  try {
    if (has_lame) {
      s.parameterization = Parameterization::lame;
      s.material = derive_wavenumbers(to_real("material.lambda", need("material.lambda")),
                                      to_real("material.mu", need("material.mu")), rho, rho_f, c, omega);
    } else {
      s.parameterization = Parameterization::wave_speeds;
      s.material = from_wave_speeds(to_real("material.c_s", need("material.c_s")),
                                    to_real("material.c_p", need("material.c_p")), rho, rho_f, c, omega);
    }
  } catch (const ParameterError& e) {
    const std::string what = e.what();
    if (what.rfind("material", 0) == 0) throw;
    throw ParameterError("material." + what);
  }

  if (auto v = get("incident.direction")) {
    const auto [x, y] = to_pair("incident.direction", *v);
    if (x == 0 && y == 0) fail("incident.direction", "must be non-zero");
    s.direction = point(x, y);
  }
  if (auto v = get("run.formulation")) s.formulation = parse_formulation(*v);
  if (auto v = get("run.beta")) {
    if (s.formulation != Formulation::burton_miller) fail("run.beta", "only valid with run.formulation = burton_miller");
    if (*v != "ik") {
      const auto [re, im] = to_pair("run.beta", *v);
      if (im == 0) fail("run.beta", "imaginary part must be non-zero");
      s.beta = cplx(re, im);
    }
  }
  if (auto v = get("run.quadrature_order")) {
    s.quadrature_order = to_int("run.quadrature_order", *v);
    if (s.quadrature_order < 1 || s.quadrature_order > 64) fail("run.quadrature_order", "must be in 1..64");
  }
  if (auto v = get("oracle.n_max")) {
    s.oracle_n_max = to_int("oracle.n_max", *v);
    if (s.oracle_n_max < 1) fail("oracle.n_max", "must be >= 1");
  }
  if (auto v = get("run.threads")) {
    s.threads = to_int("run.threads", *v);
    if (s.threads < 0) fail("run.threads", "must be >= 0");
  }
  s.entries = std::move(kv);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("config: cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string canonical_text(const Scenario& s) {
  std::string out;
  for (const auto& [k, v] : s.entries) out += k + "=" + v + "\n";
  return out;
}

std::string scenario_hash(const Scenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : canonical_text(s)) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fsibem
