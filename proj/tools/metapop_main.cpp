// Command-line front end: equilibrium listing, certificate checks,
// parameter-plane sweeps, trajectory simulation and the perfect-mixing
// experiment. Data goes to stdout (or files), diagnostics to stderr.
// Exit codes: 0 success / certificate holds, 2 certificate fails,
// 1 usage, I/O or domain errors.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metapop/cartography.hpp"
#include "metapop/certificates.hpp"
#include "metapop/config.hpp"
#include "metapop/dynamics.hpp"
#include "metapop/equilibria.hpp"
#include "metapop/sawtooth.hpp"
#include "metapop/util.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace metapop;

struct ModelOverrides {
  std::optional<double> D, lambda1, lambda2, k1, k2, a1, a2;
  std::optional<double> alpha, beta, gamma;
};

void add_model_flags(CLI::App* cmd, ModelOverrides& mo) {
  cmd->add_option("--D", mo.D, "diffusion rate (physical form)");
  cmd->add_option("--lambda1", mo.lambda1, "patch-1 reaction strength");
  cmd->add_option("--lambda2", mo.lambda2, "patch-2 reaction strength");
  cmd->add_option("--k1", mo.k1, "patch-1 capacity");
  cmd->add_option("--k2", mo.k2, "patch-2 capacity");
  cmd->add_option("--a1", mo.a1, "patch-1 viability threshold");
  cmd->add_option("--a2", mo.a2, "patch-2 viability threshold");
  cmd->add_option("--alpha", mo.alpha, "normalized patch-1 reaction/diffusion");
  cmd->add_option("--beta", mo.beta, "normalized patch-2 reaction/diffusion");
  cmd->add_option("--gamma", mo.gamma, "capacity ratio k2/k1");
}

// Flags win over the config file. Physical and normalized overrides cannot
// be mixed in one invocation.
void apply_model_overrides(RunConfig& cfg, const ModelOverrides& mo) {
  bool phys = mo.D || mo.lambda1 || mo.lambda2 || mo.k1 || mo.k2 || mo.a1 ||
              mo.a2;
  bool norm = mo.alpha || mo.beta || mo.gamma;
  if (phys && norm)
    throw ConfigError(
        "cannot mix physical (--D/--lambda*/--k*/--a*) and normalized "
        "(--alpha/--beta/--gamma) overrides");
  if (phys) {
    PatchParams base = cfg.physical_form
                           ? cfg.physical
                           : denormalize(cfg.normalized, mo.D.value_or(1.0),
                                         mo.k1.value_or(1.0));
    cfg.physical = PatchParams(
        mo.D.value_or(base.D), mo.lambda1.value_or(base.lambda1),
        mo.lambda2.value_or(base.lambda2), mo.k1.value_or(base.k1),
        mo.k2.value_or(base.k2), mo.a1.value_or(base.a1),
        mo.a2.value_or(base.a2));
    cfg.physical_form = true;
  } else if (norm) {
    NormalizedParams base = cfg.as_normalized();
    cfg.normalized = NormalizedParams(mo.alpha.value_or(base.alpha),
                                      mo.beta.value_or(base.beta),
                                      mo.gamma.value_or(base.gamma));
    cfg.physical_form = false;
  }
}

ReactionKind parse_reaction(const std::string& name, double a) {
  if (name == "cubic") return ReactionKind::cubic_allee(a);
  if (name == "sawtooth") return ReactionKind::sawtooth();
  if (name == "logistic") return ReactionKind::logistic();
  throw ConfigError("unknown reaction '" + name +
                    "' (cubic | sawtooth | logistic)");
}

std::string eq_row(const Equilibrium& e) {
  std::string s = g17(e.point.x) + "," + g17(e.point.y) + "," +
                  g17(e.eig1.real()) + "," + g17(e.eig1.imag()) + "," +
                  g17(e.eig2.real()) + "," + g17(e.eig2.imag()) + "," +
                  to_string(e.stability) + "," + to_string(e.region);
  if (e.at_kink) s += ",kink";
  return s;
}

int cmd_equilibria(const RunConfig& cfg) {
  NormalizedParams n = cfg.as_normalized();
  EquilibriumSet eq;
  if (cfg.reaction.kind == ReactionKind::Sawtooth) {
    eq = sawtooth_equilibria_exact(n);
  } else if (cfg.physical_form && cfg.reaction.kind == ReactionKind::CubicAllee &&
             cfg.physical.a1 != cfg.physical.a2) {
    // Asymmetric viability thresholds exist numerically only.
    eq = find_equilibria(n, ReactionKind::cubic_allee(cfg.physical.a1),
                         ReactionKind::cubic_allee(cfg.physical.a2), cfg.solver);
  } else {
    eq = find_equilibria(n, cfg.reaction, cfg.solver);
  }
  for (const std::string& w : eq.warnings)
    std::cerr << "warning: " << w << "\n";
  std::cout << "x,y,eig1_re,eig1_im,eig2_re,eig2_im,stability,region\n";
  for (const Equilibrium& e : eq.points) std::cout << eq_row(e) << "\n";
  return 0;
}

int cmd_check(const RunConfig& cfg, const std::string& id) {
  CertificateVerdict v;
  if (id == "thm-main") {
    if (!cfg.physical_form)
      throw std::domain_error(
          "thm-main needs physical parameters; use corollary for the "
          "normalized form");
    v = check_thm_main(cfg.physical);
  } else if (id == "corollary") {
    v = check_corollary(cfg.as_normalized());
  } else if (id == "thm-general-a") {
    if (!cfg.physical_form)
      throw std::domain_error("thm-general-a needs physical parameters");
    v = check_thm_general_a(cfg.physical);
  } else if (id == "sawtooth-predicate") {
    NormalizedParams n = cfg.as_normalized();
    bool ok = thm_sawtooth_predicate(n);  // throws outside gamma in (0,1/2)
    v.certificate_id = "sawtooth-predicate";
    v.holds = ok;
    v.conditions.push_back({"origin is the unique stationary solution (iff)",
                            ok, n.alpha / n.beta, 0.0});
  } else {
    throw ConfigError("unknown certificate '" + id +
                      "' (thm-main | corollary | thm-general-a | "
                      "sawtooth-predicate)");
  }

  std::cout << "certificate: " << v.certificate_id << "\n";
  for (const auto& c : v.conditions)
    std::cout << "  " << c.name << ": lhs = " << g17(c.lhs)
              << ", rhs = " << g17(c.rhs) << "  ["
              << (c.satisfied ? "ok" : "violated") << "]\n";
  for (const auto& b : v.bounds)
    std::cout << "  bound " << b.first << " = " << g17(b.second) << "\n";
  for (const auto& nmsg : v.notes) std::cerr << "note: " << nmsg << "\n";
  std::cout << "verdict: " << (v.holds ? "holds" : "does-not-hold") << "\n";
  return v.holds ? 0 : 2;
}

struct SweepFlags {
  std::string plane;  // lambda | alpha-beta
  std::string range = "0:4:400";
  std::string csv_path, svg_path;
  std::string certificates;  // comma list, "auto", or "none"
};

AxisSpec parse_range(const std::string& text) {
  AxisSpec ax;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d", &ax.min, &ax.max, &ax.steps) != 3)
    throw ConfigError("bad --range '" + text + "', expected min:max:steps");
  return ax;
}

std::vector<CertificateId> auto_overlays(const SweepSpec& s) {
  if (s.classifier == CellClassifier::SawtoothExact ||
      s.reaction.kind == ReactionKind::Sawtooth) {
    if (s.plane == SweepPlane::NormalizedAlphaBeta && s.gamma > 0.0 &&
        s.gamma < 0.5)
      return {CertificateId::SawtoothPredicate};
    return {};
  }
  if (s.reaction.kind != ReactionKind::CubicAllee) return {};
  if (s.plane == SweepPlane::PhysicalLambda)
    return {s.reaction.a == 0.5 ? CertificateId::ThmMain
                                : CertificateId::ThmGeneralA};
  if (s.reaction.a == 0.5 && s.gamma > 0.0 && s.gamma < 0.5)
    return {CertificateId::Corollary};
  return {};
}

std::vector<CertificateId> parse_overlays(const std::string& text) {
  std::vector<CertificateId> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "thm-main") out.push_back(CertificateId::ThmMain);
    else if (item == "corollary") out.push_back(CertificateId::Corollary);
    else if (item == "thm-general-a") out.push_back(CertificateId::ThmGeneralA);
    else if (item == "sawtooth-predicate")
      out.push_back(CertificateId::SawtoothPredicate);
    else
      throw ConfigError("unknown certificate '" + item + "'");
  }
  return out;
}

int cmd_sweep(const RunConfig& cfg, const ModelOverrides& mo,
              const SweepFlags& fl) {
  SweepSpec spec;
  spec.reaction = cfg.reaction;
  spec.solver = cfg.solver;

  std::string plane = fl.plane;
  if (plane.empty()) plane = cfg.physical_form ? "lambda" : "alpha-beta";
  if (plane == "lambda") {
    spec.plane = SweepPlane::PhysicalLambda;
    PatchParams base = cfg.physical_form ? cfg.physical : PatchParams();
    spec.D = mo.D.value_or(base.D);
    spec.k1 = mo.k1.value_or(base.k1);
    spec.k2 = mo.k2.value_or(base.k2);
  } else if (plane == "alpha-beta") {
    spec.plane = SweepPlane::NormalizedAlphaBeta;
    spec.gamma = mo.gamma.value_or(cfg.as_normalized().gamma);
  } else {
    throw ConfigError("bad --plane '" + plane + "' (lambda | alpha-beta)");
  }

  spec.x_axis = spec.y_axis = parse_range(fl.range);
  if (spec.reaction.kind == ReactionKind::Sawtooth) {
    spec.classifier = CellClassifier::SawtoothExact;
    if (spec.plane != SweepPlane::NormalizedAlphaBeta)
      throw ConfigError("sawtooth sweeps need --plane alpha-beta");
  }
  spec.overlays = fl.certificates.empty() || fl.certificates == "auto"
                      ? auto_overlays(spec)
                      : fl.certificates == "none"
                            ? std::vector<CertificateId>{}
                            : parse_overlays(fl.certificates);

  RegionMap map = run_sweep(spec);

  std::map<int, size_t> by_count;
  size_t degenerate = 0;
  for (const RegionCell& c : map.cells) {
    if (c.degenerate) ++degenerate;
    ++by_count[c.count];
  }
  std::cout << "cells: " << map.cells.size() << " (" << spec.x_axis.steps
            << " x " << spec.y_axis.steps << ")\n";
  for (const auto& [count, cells] : by_count)
    std::cout << "count " << count << ": " << cells << " cells ("
              << g17(100.0 * cells / map.cells.size()) << "%)\n";
  std::cout << "degenerate cells: " << degenerate << "\n";
  for (CertificateId c : spec.overlays) {
    ContainmentReport rep = containment_report(map, c);
    std::cout << "certificate " << to_string(c) << ": certified "
              << rep.certified_cells << " cells, violations "
              << rep.violations.size() << ", inverse-violations "
              << rep.inverse_violations.size() << ", fraction-unique "
              << g17(rep.fraction_unique) << "\n";
  }
  if (!fl.csv_path.empty()) {
    export_csv(map, fl.csv_path);
    std::cout << "csv: " << fl.csv_path << "\n";
  }
  if (!fl.svg_path.empty()) {
    SvgStyle style;
    export_svg(map, fl.svg_path, style);
    std::cout << "svg: " << fl.svg_path << "\n";
  }
  return 0;
}

int cmd_simulate(const RunConfig& cfg, double x0, double y0,
                 std::optional<double> t_end) {
  IntegratorOptions opt = cfg.integrator;
  if (t_end) opt.t_max = *t_end;
  Trajectory tr;
  if (cfg.physical_form) {
    tr = integrate_physical(cfg.physical, cfg.reaction, cfg.coupling, {x0, y0},
                            opt);
    std::cout << "t,x1,x2\n";
  } else {
    tr = integrate(cfg.normalized, cfg.reaction, {x0, y0}, opt);
    std::cout << "t,x,y\n";
  }
  for (size_t i = 0; i < tr.times.size(); ++i)
    std::cout << g17(tr.times[i]) << "," << g17(tr.states[i].x) << ","
              << g17(tr.states[i].y) << "\n";
  switch (tr.terminal) {
    case TerminalKind::Converged:
      std::cout << "# terminal: converged-to(" << g17(tr.terminal_point.x)
                << "," << g17(tr.terminal_point.y) << ")\n";
      break;
    case TerminalKind::TMaxReached:
      std::cout << "# terminal: t-max-reached\n";
      break;
    case TerminalKind::Diverged:
      std::cout << "# terminal: diverged (" << tr.diagnostics << ")\n";
      std::cerr << "warning: trajectory diverged: " << tr.diagnostics << "\n";
      break;
  }
  return 0;
}

int cmd_mixing(const RunConfig& cfg, const std::string& d_list_text) {
  if (cfg.reaction.kind != ReactionKind::Logistic)
    throw std::domain_error(
        "mixing requires the logistic reaction (--reaction logistic)");
  if (!cfg.physical_form)
    throw std::domain_error("mixing requires physical parameters");
  std::vector<double> d_list;
  std::stringstream ss(d_list_text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) d_list.push_back(std::stod(item));
  if (d_list.empty()) throw ConfigError("--D-list is empty");

  const PatchParams& p = cfg.physical;
  std::vector<MixingEntry> rows = perfect_mixing_experiment(
      p.k1, p.k2, p.lambda1, p.lambda2, d_list, cfg.integrator);
  std::cout << "D,total,formula,rel_gap,converged\n";
  for (const MixingEntry& e : rows) {
    std::cout << g17(e.D) << "," << g17(e.total) << "," << g17(e.formula)
              << "," << g17(e.rel_gap) << "," << (e.converged ? 1 : 0) << "\n";
    if (!e.converged)
      std::cerr << "warning: no convergence within t_max at D = " << g17(e.D)
                << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-patch bistable metapopulation model toolkit"};
  app.require_subcommand(1);
  // Let global flags (--config, --reaction, ...) appear after the subcommand.
  app.fallthrough(true);

  std::string config_path;
  std::optional<std::uint64_t> seed_flag;
  int threads = 0;
  std::string reaction_name;
  double reaction_a = 0.5;
  std::string coupling_name;
  app.add_option("--config", config_path, "JSON run configuration")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed_flag, "sampling seed (overrides config)");
  app.add_option("--threads", threads, "cap worker threads (0 = default)");
  app.add_option("--reaction", reaction_name,
                 "reaction override: cubic | sawtooth | logistic");
  app.add_option("--a", reaction_a, "cubic viability threshold");
  app.add_option("--coupling", coupling_name,
                 "coupling override: standard | balanced");

  ModelOverrides mo;
  SweepFlags sweep_flags;
  std::string check_id;
  double x0 = 0.0, y0 = 0.0;
  std::optional<double> t_end;
  std::string d_list_text = "1,10,100,1000";

  CLI::App* eq_cmd =
      app.add_subcommand("equilibria", "list all nonnegative equilibria");
  add_model_flags(eq_cmd, mo);

  CLI::App* saw_cmd = app.add_subcommand(
      "sawtooth", "equilibria with the sawtooth reaction (exact)");
  add_model_flags(saw_cmd, mo);

  CLI::App* check_cmd =
      app.add_subcommand("check", "evaluate an analytical certificate");
  check_cmd->add_option("certificate", check_id,
                        "thm-main | corollary | thm-general-a | "
                        "sawtooth-predicate")
      ->required();
  add_model_flags(check_cmd, mo);

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "classify a parameter-plane grid");
  sweep_cmd->add_option("--plane", sweep_flags.plane, "lambda | alpha-beta");
  sweep_cmd->add_option("--range", sweep_flags.range,
                        "min:max:steps for both axes (default 0:4:400)");
  sweep_cmd->add_option("--csv", sweep_flags.csv_path, "CSV output path");
  sweep_cmd->add_option("--svg", sweep_flags.svg_path, "SVG output path");
  sweep_cmd->add_option("--certificates", sweep_flags.certificates,
                        "comma list, 'auto' or 'none'");
  add_model_flags(sweep_cmd, mo);

  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "integrate one trajectory, CSV to stdout");
  sim_cmd->add_option("--x0", x0, "initial patch-1 density")->required();
  sim_cmd->add_option("--y0", y0, "initial patch-2 density")->required();
  sim_cmd->add_option("--t-end", t_end, "integration horizon");
  add_model_flags(sim_cmd, mo);

  CLI::App* mix_cmd = app.add_subcommand(
      "mixing", "perfect-mixing experiment over a diffusion list");
  mix_cmd->add_option("--D-list", d_list_text, "comma-separated diffusion rates");
  add_model_flags(mix_cmd, mo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Collapse CLI11's error codes onto the documented contract: usage
    // errors exit 1, --help exits 0.
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config_file(config_path);
    if (seed_flag) cfg.seed = *seed_flag;
    if (!reaction_name.empty())
      cfg.reaction = parse_reaction(reaction_name, reaction_a);
    else if (app.count("--a") > 0)
      cfg.reaction = ReactionKind::cubic_allee(reaction_a);
    if (!coupling_name.empty()) {
      if (coupling_name == "standard") cfg.coupling = Coupling::Standard;
      else if (coupling_name == "balanced") cfg.coupling = Coupling::Balanced;
      else throw ConfigError("bad --coupling (standard | balanced)");
    }
    if (!sweep_cmd->parsed()) apply_model_overrides(cfg, mo);
    if (cfg.physical_form && cfg.physical.swapped)
      std::cerr << "note: patches reordered so k2 <= k1 (canonical "
                   "orientation)\n";

    if (eq_cmd->parsed()) return cmd_equilibria(cfg);
    if (saw_cmd->parsed()) {
      cfg.reaction = ReactionKind::sawtooth();
      return cmd_equilibria(cfg);
    }
    if (check_cmd->parsed()) return cmd_check(cfg, check_id);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, mo, sweep_flags);
    if (sim_cmd->parsed()) return cmd_simulate(cfg, x0, y0, t_end);
    if (mix_cmd->parsed()) return cmd_mixing(cfg, d_list_text);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
