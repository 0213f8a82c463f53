#pragma once

#include <array>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bregsolve/errors.hpp"
#include "bregsolve/problem.hpp"
#include "bregsolve/schedule.hpp"
#include "bregsolve/sets.hpp"
#include "bregsolve/solver.hpp"

namespace bregsolve {

/// Config file could not be read or parsed (CLI exit code 2).
class ParseError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline double parse_double(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    throw ParseError("key '" + key + "': cannot parse number from '" + s + "'");
  return v;
}

inline long parse_long(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  char* end = nullptr;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size())
    throw ParseError("key '" + key + "': cannot parse integer from '" + s + "'");
  return v;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw ParseError("key '" + key + "': empty list");
  return out;
}

inline Vector parse_vector(const std::string& key, const std::string& s, int dim) {
  auto vals = parse_list(key, s);
  if (static_cast<int>(vals.size()) == 1 && dim > 1)
    return Vector::constant(dim, vals[0]);  // scalar broadcast
  if (static_cast<int>(vals.size()) != dim)
    throw ParseError("key '" + key + "': expected " + std::to_string(dim) + " values");
  return Vector(std::move(vals));
}

inline Matrix parse_matrix(const std::string& key, const std::string& s, int dim) {
  auto vals = parse_list(key, s);
  if (static_cast<int>(vals.size()) == 1 && dim > 1) {
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i) m(i, i) = vals[0];
    return m;
  }
  if (static_cast<int>(vals.size()) != dim * dim)
    throw ParseError("key '" + key + "': expected " + std::to_string(dim * dim) +
                     " row-major values");
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = vals[static_cast<std::size_t>(i * dim + j)];
  return m;
}

using Section = std::map<std::string, std::string>;
using Sections = std::map<std::string, Section>;

inline const std::set<std::string>& allowed_keys(const std::string& section) {
  static const std::map<std::string, std::set<std::string>> allowed = {
      {"problem",
       {"preset", "legendre", "dim", "set", "box_lower", "box_upper", "ball_center", "ball_radius",
        "halfspace_normal", "halfspace_offset", "g_q", "g_r", "g_p", "c1", "c2", "phi", "phi_q",
        "phi_r", "phi_p", "s_scale", "s_matrix"}},
      {"schedule", {"preset", "lambda", "delta"}},
      {"run",
       {"x1", "anchor_u", "max_iters", "residual_tol", "track_target", "wiring", "cert_samples"}},
  };
  const auto it = allowed.find(section);
  if (it == allowed.end()) throw ParseError("unknown section [" + section + "]");
  return it->second;
}

inline Sections parse_sections(const std::string& text) {
  Sections out;
  std::string section;
  std::istringstream is(text);
  std::string line;
  long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ParseError("line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      allowed_keys(section);  // validates the name
      out[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw ParseError("line " + std::to_string(lineno) + ": key outside any section");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (!allowed_keys(section).count(key))
      throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "' in [" +
                       section + "]");
    out[section][key] = value;
  }
  return out;
}

}  // namespace detail

inline bool is_builtin_preset(const std::string& name) {
  return name == "paper-example" || name == "projection-only" || name == "multi-omega";
}

/// Canonical config text of a built-in preset; doubles rendered with enough
/// digits to round-trip.
inline std::string preset_config_text(const std::string& name) {
  if (name == "paper-example" || name == "projection-only") {
    std::string text =
        "[problem]\n"
        "legendre = squared-norm\n"
        "dim = 1\n"
        "set = box\n"
        "box_lower = 0\n"
        "box_upper = 2\n"
        "g_q = 16\n"
        "g_r = 9\n"
        "g_p = -25\n"
        "c1 = 9\n"
        "c2 = 9\n"
        "phi = zero\n"
        "s_scale = 0.33333333333333331\n"
        "[schedule]\n"
        "preset = paper-example\n"
        "lambda = 0.03125\n"
        "delta = 0.5\n"
        "[run]\n"
        "x1 = 5\n"
        "anchor_u = 1\n"
        "max_iters = 20000\n"
        "residual_tol = 1e-10\n"
        "track_target = 0\n";
    text += name == "projection-only" ? "wiring = projection\n" : "wiring = resolvent\n";
    return text;
  }
  if (name == "multi-omega") {
    return
        "[problem]\n"
        "legendre = squared-norm\n"
        "dim = 1\n"
        "set = box\n"
        "box_lower = 0\n"
        "box_upper = 2\n"
        "g_q = 0\n"
        "g_r = 0\n"
        "g_p = 0\n"
        "c1 = 1\n"
        "c2 = 1\n"
        "phi = zero\n"
        "s_scale = 1\n"
        "[schedule]\n"
        "preset = halpern-sqrt\n"
        "lambda = 0.5\n"
        "delta = 0.5\n"
        "[run]\n"
        "x1 = 2\n"
        "anchor_u = 0.69999999999999996\n"
        "max_iters = 400\n"
        "residual_tol = 1e-13\n"
        "track_target = 0.69999999999999996\n"
        "wiring = resolvent\n";
  }
  throw ParseError("unknown preset '" + name + "'");
}

/// A fully resolved run: problem data, schedule, run parameters, and the
/// byte-for-byte echo of the configuration they came from.
struct LoadedRun {
  ProblemBundle problem;
  ParamSchedule schedule;
  RunConfig run;
  std::string echo;
  std::string schedule_name;
};

inline LoadedRun load_run_config_text(const std::string& text) {
  auto sections = detail::parse_sections(text);

  // expand section-level presets (file keys override preset keys)
  for (auto& [section, keys] : sections) {
    if (section == "schedule") continue;  // schedule presets are functional, handled below
    const auto preset_it = keys.find("preset");
    if (preset_it == keys.end()) continue;
    const std::string preset = preset_it->second;
    if (!is_builtin_preset(preset)) throw ParseError("unknown preset '" + preset + "'");
    auto base = detail::parse_sections(preset_config_text(preset));
    detail::Section merged = base[section];
    for (const auto& [k, v] : keys)
      if (k != "preset") merged[k] = v;
    keys = merged;
  }

  const auto& prob = sections["problem"];
  auto get = [](const detail::Section& sec, const std::string& key) -> const std::string& {
    const auto it = sec.find(key);
    if (it == sec.end()) throw ParseError("missing key '" + key + "'");
    return it->second;
  };
  auto get_or = [](const detail::Section& sec, const std::string& key,
                   const std::string& fallback) -> std::string {
    const auto it = sec.find(key);
    return it == sec.end() ? fallback : it->second;
  };

  const int dim = static_cast<int>(detail::parse_long("dim", get(prob, "dim")));
  if (dim < 1) throw ParseError("dim must be >= 1");

  const std::string kind = get(prob, "legendre");
  LegendreSpec spec;
  if (kind == "squared-norm")
    spec = squared_norm(dim);
  else if (kind == "negative-entropy")
    spec = negative_entropy(dim);
  else
    throw ParseError("legendre must be squared-norm or negative-entropy");

  const std::string set_kind = get(prob, "set");
  std::optional<ConvexSet> set;
  try {
    if (set_kind == "box")
      set = ConvexSet::box(detail::parse_vector("box_lower", get(prob, "box_lower"), dim),
                           detail::parse_vector("box_upper", get(prob, "box_upper"), dim));
    else if (set_kind == "ball")
      set = ConvexSet::ball(detail::parse_vector("ball_center", get(prob, "ball_center"), dim),
                            detail::parse_double("ball_radius", get(prob, "ball_radius")));
    else if (set_kind == "halfspace")
      set = ConvexSet::halfspace(
          detail::parse_vector("halfspace_normal", get(prob, "halfspace_normal"), dim),
          detail::parse_double("halfspace_offset", get(prob, "halfspace_offset")));
    else if (set_kind == "simplex")
      set = ConvexSet::simplex(dim);
    else
      throw ParseError("set must be box, ball, halfspace or simplex");
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid set: ") + e.what());
  }

  QuadraticBifunction g{detail::parse_matrix("g_q", get(prob, "g_q"), dim),
                        detail::parse_matrix("g_r", get(prob, "g_r"), dim),
                        detail::parse_matrix("g_p", get(prob, "g_p"), dim)};

  Bifunction phi{ZeroBifunction{}};
  const std::string phi_kind = get_or(prob, "phi", "zero");
  if (phi_kind == "quadratic")
    phi = QuadraticBifunction{detail::parse_matrix("phi_q", get(prob, "phi_q"), dim),
                              detail::parse_matrix("phi_r", get(prob, "phi_r"), dim),
                              detail::parse_matrix("phi_p", get(prob, "phi_p"), dim)};
  else if (phi_kind != "zero")
    throw ParseError("phi must be zero or quadratic");

  LinearMap S = LinearMap::identity(dim);
  if (prob.count("s_matrix"))
    S = LinearMap{detail::parse_matrix("s_matrix", prob.at("s_matrix"), dim)};
  else
    S = LinearMap::scaling(dim, detail::parse_double("s_scale", get(prob, "s_scale")));

  const double c1 = detail::parse_double("c1", get(prob, "c1"));
  const double c2 = detail::parse_double("c2", get(prob, "c2"));
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw ParseError("c1 and c2 must be positive");

  const auto& sched_sec = sections["schedule"];
  const std::string sched_name = get_or(sched_sec, "preset", "paper-example");
  const double lam = detail::parse_double("lambda", get_or(sched_sec, "lambda", "0.03125"));
  ParamSchedule sched;
  if (sched_name == "paper-example")
    sched = paper_example_schedule(lam);
  else if (sched_name == "paper-literal")
    sched = paper_literal_schedule(lam);
  else if (sched_name == "halpern-sqrt")
    sched = halpern_sqrt_schedule(lam);
  else
    throw ParseError("schedule preset must be paper-example, paper-literal or halpern-sqrt");
  if (sched_sec.count("delta")) {
    const double d = detail::parse_double("delta", sched_sec.at("delta"));
    sched.delta = [d](long) { return d; };
  }

  const auto& run_sec = sections["run"];
  RunConfig rc;
  rc.x1 = detail::parse_vector("x1", get(run_sec, "x1"), dim);
  rc.anchor_u = detail::parse_vector("anchor_u", get(run_sec, "anchor_u"), dim);
  rc.max_iters = detail::parse_long("max_iters", get_or(run_sec, "max_iters", "20000"));
  if (rc.max_iters < 1) throw ParseError("max_iters must be >= 1");
  rc.residual_tol = detail::parse_double("residual_tol", get_or(run_sec, "residual_tol", "1e-10"));
  if (!(rc.residual_tol > 0.0)) throw ParseError("residual_tol must be positive");
  if (run_sec.count("track_target"))
    rc.track_target = detail::parse_vector("track_target", run_sec.at("track_target"), dim);
  const std::string wiring = get_or(run_sec, "wiring", "resolvent");
  if (wiring == "resolvent")
    rc.wiring = Wiring::Resolvent;
  else if (wiring == "projection")
    rc.wiring = Wiring::DirectProjection;
  else
    throw ParseError("wiring must be resolvent or projection");
  if (run_sec.count("cert_samples"))
    rc.cert_samples = static_cast<int>(detail::parse_long("cert_samples", run_sec.at("cert_samples")));

  LoadedRun out{ProblemBundle{spec, *set, std::move(g), std::move(phi), std::move(S), c1, c2},
                std::move(sched), std::move(rc), text, sched_name};
  return out;
}

/// Resolves a CLI argument: a built-in preset name or a path to a config
/// file. Unreadable files and malformed text raise ParseError.
inline LoadedRun load_run_config(const std::string& path_or_preset) {
  if (is_builtin_preset(path_or_preset))
    return load_run_config_text(preset_config_text(path_or_preset));
  std::ifstream in(path_or_preset, std::ios::binary);
  if (!in) throw ParseError("cannot read config file '" + path_or_preset + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_run_config_text(buf.str());
}

struct ValidationOutcome {
  ScheduleReport schedule;
  MonotoneReport monotone;
  BregmanLipschitzReport lipschitz;
  NonexpansiveReport nonexpansive;
  double equilibrium_defect = 0.0;
  double min_convexity_eig = 0.0;
  bool pass = false;
  std::string text;
};

/// Validates the schedule over the run horizon and the problem assumptions
/// (monotonicity, the Bregman-Lipschitz witness for c1/c2, nonexpansiveness
/// of S) on a deterministic sample of the constraint set.
inline ValidationOutcome validate_loaded(const LoadedRun& lr, int samples = 200,
                                         unsigned long seed = 1234,
                                         const Tolerances& tol = default_tolerances()) {
  ValidationOutcome out;
  const auto& pb = lr.problem;
  out.schedule = validate_schedule(lr.schedule, lr.run.max_iters, pb.c1, pb.c2);

  std::mt19937_64 rng(seed);
  const double floor = pb.spec.kind == LegendreKind::NegativeEntropy ? 1e-6 : 0.0;
  const auto pts = sample_points(pb.set, 3 * samples, rng, floor);
  std::vector<std::pair<Vector, Vector>> pairs;
  std::vector<std::array<Vector, 3>> triples;
  for (int i = 0; i + 2 < static_cast<int>(pts.size()); i += 3) {
    const auto& a = pts[static_cast<std::size_t>(i)];
    const auto& b = pts[static_cast<std::size_t>(i + 1)];
    const auto& c = pts[static_cast<std::size_t>(i + 2)];
    if (!(inf_norm(a - b) == 0.0)) pairs.emplace_back(a, b);
    triples.push_back({a, b, c});
  }
  out.monotone = check_monotone(pb.g, pairs);
  out.lipschitz = check_bregman_lipschitz(pb.g, pb.spec, pb.c1, pb.c2, triples, tol);
  out.nonexpansive = check_bregman_nonexpansive(pb.S, pb.spec, pairs, tol);
  out.equilibrium_defect = pb.g.equilibrium_defect();
  out.min_convexity_eig = pb.g.min_convexity_eigenvalue();

  const bool structure_ok = out.equilibrium_defect <= 1e-9 && out.min_convexity_eig >= -1e-9;
  out.pass = out.schedule.pass() && out.monotone.pass(tol.membership) &&
             out.lipschitz.pass(tol.membership) && out.nonexpansive.pass(tol.membership) &&
             structure_ok;

  std::ostringstream os;
  os << out.schedule.summary();
  os << "A1 monotonicity: max g(x,y)+g(y,x) = " << out.monotone.max_violation << " on "
     << out.monotone.samples << " pairs -> " << (out.monotone.pass(tol.membership) ? "ok" : "FAIL")
     << "\n";
  os << "A3 Bregman-Lipschitz (c1=" << pb.c1 << ", c2=" << pb.c2
     << "): min slack = " << out.lipschitz.min_slack << " on " << out.lipschitz.samples
     << " triples -> " << (out.lipschitz.pass(tol.membership) ? "ok" : "FAIL") << "\n";
  os << "S nonexpansive: max ratio = " << out.nonexpansive.max_ratio << " on "
     << out.nonexpansive.samples << " pairs -> "
     << (out.nonexpansive.pass(tol.membership) ? "ok" : "FAIL") << "\n";
  os << "g(x,x)=0 defect: " << out.equilibrium_defect << ", min convexity eigenvalue: "
     << out.min_convexity_eig << " -> " << (structure_ok ? "ok" : "FAIL") << "\n";
  os << (out.pass ? "VALID\n" : "INVALID\n");
  out.text = os.str();
  return out;
}

}  // namespace bregsolve
