#include "metapop/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace metapop {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw ConfigError(path + ": " + why);
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
}

double get_num(const json& obj, const std::string& path, const char* key,
               double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "must be a number");
  return v.get<double>();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  check_keys(root, "", {"form", "physical", "normalized", "reaction",
                        "coupling", "integrator", "solver", "seed"});

  RunConfig cfg;

  if (!root.contains("form")) fail("form", "required (physical | normalized)");
  std::string form = root.at("form").is_string()
                         ? root.at("form").get<std::string>()
                         : std::string();
  if (form == "physical")
    cfg.physical_form = true;
  else if (form == "normalized")
    cfg.physical_form = false;
  else
    fail("form", "must be \"physical\" or \"normalized\"");

  if (cfg.physical_form) {
    if (!root.contains("physical"))
      fail("physical", "required when form = physical");
    if (root.contains("normalized"))
      fail("normalized", "not allowed when form = physical");
    const json& ph = root.at("physical");
    if (!ph.is_object()) fail("physical", "must be an object");
    check_keys(ph, "physical",
               {"D", "lambda1", "lambda2", "k1", "k2", "a1", "a2"});
    double D = get_num(ph, "physical", "D", 1.0);
    double l1 = get_num(ph, "physical", "lambda1", 1.0);
    double l2 = get_num(ph, "physical", "lambda2", 1.0);
    double k1 = get_num(ph, "physical", "k1", 1.0);
    double k2 = get_num(ph, "physical", "k2", 1.0);
    double a1 = get_num(ph, "physical", "a1", 0.5);
    double a2 = get_num(ph, "physical", "a2", a1);
    try {
      cfg.physical = PatchParams(D, l1, l2, k1, k2, a1, a2);
    } catch (const std::invalid_argument& e) {
      fail("physical", e.what());
    }
  } else {
    if (!root.contains("normalized"))
      fail("normalized", "required when form = normalized");
    if (root.contains("physical"))
      fail("physical", "not allowed when form = normalized");
    const json& nm = root.at("normalized");
    if (!nm.is_object()) fail("normalized", "must be an object");
    check_keys(nm, "normalized", {"alpha", "beta", "gamma"});
    try {
      cfg.normalized = NormalizedParams(get_num(nm, "normalized", "alpha", 1.0),
                                        get_num(nm, "normalized", "beta", 1.0),
                                        get_num(nm, "normalized", "gamma", 1.0));
    } catch (const std::invalid_argument& e) {
      fail("normalized", e.what());
    }
  }

  if (root.contains("reaction")) {
    const json& re = root.at("reaction");
    if (!re.is_object()) fail("reaction", "must be an object");
    check_keys(re, "reaction", {"kind", "a"});
    std::string kind = re.contains("kind") && re.at("kind").is_string()
                           ? re.at("kind").get<std::string>()
                           : std::string("cubic");
    if (kind == "cubic") {
      try {
        cfg.reaction =
            ReactionKind::cubic_allee(get_num(re, "reaction", "a", 0.5));
      } catch (const std::invalid_argument& e) {
        fail("reaction.a", e.what());
      }
    } else if (kind == "sawtooth") {
      if (re.contains("a")) fail("reaction.a", "not allowed for sawtooth");
      cfg.reaction = ReactionKind::sawtooth();
    } else if (kind == "logistic") {
      if (re.contains("a")) fail("reaction.a", "not allowed for logistic");
      cfg.reaction = ReactionKind::logistic();
    } else {
      fail("reaction.kind", "must be cubic, sawtooth or logistic");
    }
  }

  if (root.contains("coupling")) {
    std::string c = root.at("coupling").is_string()
                        ? root.at("coupling").get<std::string>()
                        : std::string();
    if (c == "standard")
      cfg.coupling = Coupling::Standard;
    else if (c == "balanced")
      cfg.coupling = Coupling::Balanced;
    else
      fail("coupling", "must be \"standard\" or \"balanced\"");
  }

  if (root.contains("integrator")) {
    const json& ig = root.at("integrator");
    if (!ig.is_object()) fail("integrator", "must be an object");
    check_keys(ig, "integrator",
               {"method", "step", "rel_tol", "abs_tol", "t_max", "max_step",
                "convergence_radius", "stall_window"});
    if (ig.contains("method")) {
      std::string m = ig.at("method").is_string()
                          ? ig.at("method").get<std::string>()
                          : std::string();
      if (m == "rk4-fixed")
        cfg.integrator.method = IntegrationMethod::Rk4Fixed;
      else if (m == "rk45-adaptive")
        cfg.integrator.method = IntegrationMethod::Rk45Adaptive;
      else
        fail("integrator.method", "must be rk4-fixed or rk45-adaptive");
    }
    IntegratorOptions& o = cfg.integrator;
    o.step = get_num(ig, "integrator", "step", o.step);
    o.rel_tol = get_num(ig, "integrator", "rel_tol", o.rel_tol);
    o.abs_tol = get_num(ig, "integrator", "abs_tol", o.abs_tol);
    o.t_max = get_num(ig, "integrator", "t_max", o.t_max);
    o.max_step = get_num(ig, "integrator", "max_step", o.max_step);
    o.convergence_radius =
        get_num(ig, "integrator", "convergence_radius", o.convergence_radius);
    o.stall_window = get_num(ig, "integrator", "stall_window", o.stall_window);
    if (!(o.step > 0.0)) fail("integrator.step", "must be positive");
    if (!(o.rel_tol > 0.0)) fail("integrator.rel_tol", "must be positive");
    if (!(o.abs_tol > 0.0)) fail("integrator.abs_tol", "must be positive");
    if (!(o.t_max > 0.0)) fail("integrator.t_max", "must be positive");
    if (!(o.convergence_radius > 0.0))
      fail("integrator.convergence_radius", "must be positive");
  }

  if (root.contains("solver")) {
    const json& so = root.at("solver");
    if (!so.is_object()) fail("solver", "must be an object");
    check_keys(so, "solver",
               {"bracket_grid", "root_tol", "dedup_tol", "x_window"});
    SolverOptions& o = cfg.solver;
    if (so.contains("bracket_grid")) {
      if (!so.at("bracket_grid").is_number_integer())
        fail("solver.bracket_grid", "must be an integer");
      o.bracket_grid = so.at("bracket_grid").get<int>();
      if (o.bracket_grid < 1000)
        fail("solver.bracket_grid", "must be at least 1000");
    }
    o.root_tol = get_num(so, "solver", "root_tol", o.root_tol);
    o.dedup_tol = get_num(so, "solver", "dedup_tol", o.dedup_tol);
    if (!(o.root_tol > 0.0 && o.root_tol < o.dedup_tol))
      fail("solver.root_tol", "need 0 < root_tol < dedup_tol");
    if (so.contains("x_window")) {
      const json& w = so.at("x_window");
      if (!w.is_array() || w.size() != 2 || !w[0].is_number() ||
          !w[1].is_number())
        fail("solver.x_window", "must be [lo, hi]");
      o.x_window_lo = w[0].get<double>();
      o.x_window_hi = w[1].get<double>();
      if (!(o.x_window_lo < o.x_window_hi))
        fail("solver.x_window", "need lo < hi");
    }
  }

  if (root.contains("seed")) {
    if (!root.at("seed").is_number_integer() ||
        root.at("seed").get<long long>() < 0)
      fail("seed", "must be a nonnegative integer");
    cfg.seed = root.at("seed").get<std::uint64_t>();
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str());
}

}  // namespace metapop
