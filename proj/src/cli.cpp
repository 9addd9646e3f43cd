#include "onestep/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "onestep/coefficient_file.hpp"
#include "onestep/csv.hpp"
#include "onestep/ensemble.hpp"
#include "onestep/errors.hpp"
#include "onestep/model.hpp"
#include "onestep/random.hpp"
#include "onestep/ssa.hpp"
#include "onestep/stochastizer.hpp"

namespace onestep::cli {

namespace {

/// Thrown for failures that should map to kExitUsage.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_artifact(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    out.flush();
    if (!out) throw Error("failed writing to standard output");
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot open '" + path + "' for writing");
  file << content;
  file.close();
  if (!file) throw Error("failed writing '" + path + "'");
}

double parse_number(const std::string& text, const std::string& what) {
  bool negative = !text.empty() && text.front() == '-';
  if (auto r = parse_rational(negative ? text.substr(1) : text))
    return negative ? -to_double(*r) : to_double(*r);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw UsageError("malformed number '" + text + "' in " + what);
  return v;
}

std::map<std::string, double> parse_assignments(const std::vector<std::string>& items,
                                                const std::string& flag) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw UsageError(flag + " expects NAME=VALUE, got '" + item + "'");
    std::string name = item.substr(0, eq);
    if (!out.emplace(name, parse_number(item.substr(eq + 1), flag + " " + name)).second)
      throw UsageError(flag + " given twice for '" + name + "'");
  }
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

/// A model read from disk: either the model language, or a coefficient
/// file whose species are named on the command line.
struct LoadedModel {
  SdeModel model;
  bool from_coefficients = false;
};

LoadedModel load_model(const std::string& path, const std::string& species_list) {
  const std::string text = read_file(path);
  LoadedModel loaded;
  if (text.starts_with("# A")) {
    if (species_list.empty())
      throw UsageError("coefficient file input needs --species NAME[,NAME...]");
    const auto file = parse_coefficient_file(text);
    const auto species = split_list(species_list);
    auto drift = file.drift();
    auto diffusion = file.diffusion();
    std::set<std::string> symbols;
    for (const auto& p : drift) symbols.merge(p.symbols());
    for (const auto& row : diffusion)
      for (const auto& p : row) symbols.merge(p.symbols());
    std::vector<std::string> params;
    for (const auto& s : symbols)
      if (std::find(species.begin(), species.end(), s) == species.end()) params.push_back(s);
    loaded.model = make_sde_model(species, params, std::move(drift), std::move(diffusion));
    loaded.from_coefficients = true;
  } else {
    if (!species_list.empty())
      throw UsageError("--species applies only to coefficient file input");
    loaded.model = stochastize(parse_model(text));
  }
  return loaded;
}

/// Everything that determines a run, echoed into the output header.
struct RunManifest {
  std::string model_path;
  std::string command;
  SimConfig config;
  std::map<std::string, double> param_overrides;
  std::map<std::string, double> init_overrides;
  std::string output_path;

  std::string header_extra() const {
    std::string out = std::string("rng=") + RandomStream::kAlgorithm +
                      " t0=" + format_shortest(config.t0) +
                      " t_end=" + format_shortest(config.t_end) +
                      " absorb=" + (config.absorb ? "on" : "off") + " model=" + model_path;
    auto join = [](const std::map<std::string, double>& m) {
      std::string s;
      for (const auto& [k, v] : m) s += (s.empty() ? "" : ";") + k + "=" + format_shortest(v);
      return s.empty() ? std::string("-") : s;
    };
    out += " params=" + join(param_overrides) + " init=" + join(init_overrides);
    return out;
  }
};

std::vector<double> resolve_initial_state(const SdeModel& model,
                                          const std::map<std::string, double>& overrides) {
  const auto& net = model.network;
  for (const auto& [name, _] : overrides)
    if (!net.species_index(name)) throw UsageError("--init names unknown species '" + name + "'");
  std::vector<double> x0;
  std::string missing;
  for (std::size_t i = 0; i < net.species.size(); ++i) {
    const auto& name = net.species[i].name;
    if (auto it = overrides.find(name); it != overrides.end())
      x0.push_back(it->second);
    else if (i < net.initial_state.size() && net.initial_state[i])
      x0.push_back(to_double(*net.initial_state[i]));
    else
      missing += (missing.empty() ? "" : ", ") + name;
  }
  if (!missing.empty()) throw UsageError("missing initial value for species: " + missing);
  return x0;
}

struct SimulationFlags {
  std::string model_path;
  std::string method = "srk3";
  double t0 = 0.0;
  double t_end = 0.0;
  double step = 0.0;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  std::vector<std::string> params;
  std::vector<std::string> inits;
  std::string out = "-";
  bool no_absorb = false;
  std::string species;
  std::size_t runs = 0;
  unsigned threads = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("model", model_path, "Model file (model language or coefficient file)")
        ->required();
    cmd->add_option("--method", method, "srk3 | em | rk4-det | ssa")->capture_default_str();
    cmd->add_option("--t0", t0, "Start time")->capture_default_str();
    cmd->add_option("--t-end", t_end, "End time")->required();
    cmd->add_option("--step", step, "Step size (grid spacing for ssa)")->required();
    seed_opt = cmd->add_option("--seed", seed, "Random seed (generated when omitted)");
    cmd->add_option("--param", params, "NAME=VALUE, overrides model defaults")
        ->allow_extra_args(false);
    cmd->add_option("--init", inits, "NAME=VALUE initial value")->allow_extra_args(false);
    cmd->add_option("--out", out, "Output path, '-' for stdout")->capture_default_str();
    cmd->add_flag("--no-absorb", no_absorb, "Keep integrating through zero populations");
    cmd->add_option("--species", species,
                    "Species names for coefficient file input, comma separated");
  }

  RunManifest manifest(const std::string& command) const {
    RunManifest m;
    m.model_path = model_path;
    m.command = command;
    m.config.method = parse_method(method);
    m.config.t0 = t0;
    m.config.t_end = t_end;
    m.config.h = step;
    m.config.absorb = !no_absorb;
    if (seed_opt->count() > 0) {
      m.config.seed = seed;
    } else {
      std::random_device rd;
      m.config.seed = (std::uint64_t{rd()} << 32) | rd();
    }
    m.param_overrides = parse_assignments(params, "--param");
    m.init_overrides = parse_assignments(inits, "--init");
    m.output_path = out;
    validate_config(m.config);
    return m;
  }
};

struct Prepared {
  LoadedModel loaded;
  RunManifest manifest;
  Binding binding;
  std::vector<double> x0;
};

Prepared prepare(const SimulationFlags& flags, const std::string& command) {
  Prepared p;
  p.manifest = flags.manifest(command);
  p.loaded = load_model(flags.model_path, flags.species);
  Binding overrides(p.manifest.param_overrides.begin(), p.manifest.param_overrides.end());
  p.binding = resolve_binding(p.loaded.model, overrides);
  p.x0 = resolve_initial_state(p.loaded.model, p.manifest.init_overrides);
  if (p.manifest.config.method == Method::Ssa) {
    if (p.loaded.from_coefficients)
      throw UsageError("--method ssa needs a reaction model, not a coefficient file");
    to_counts(p.x0);
  }
  return p;
}

int cmd_compile(const std::string& model_path, const std::string& out_path, std::ostream& out,
                std::ostream& err) {
  const SdeModel model = stochastize(parse_model(read_file(model_path)));
  const std::string text = emit_coefficient_file(model);

  std::ostream& echo = out_path == "-" ? err : out;
  const auto order = model.symbol_order();
  for (std::size_t i = 0; i < model.drift.size(); ++i)
    echo << "A[" << i + 1 << "] = " << render_poly(model.drift[i], order) << "\n";
  for (std::size_t i = 0; i < model.diffusion.size(); ++i)
    for (std::size_t j = 0; j < model.diffusion.size(); ++j)
      echo << "B[" << i + 1 << "," << j + 1
           << "] = " << render_poly(model.diffusion[i][j], order) << "\n";
  write_artifact(out_path, text, out);
  return kExitOk;
}

int cmd_simulate(const SimulationFlags& flags, std::ostream& out) {
  const Prepared p = prepare(flags, "simulate");
  const Trajectory traj = simulate(p.loaded.model, p.binding, p.x0, p.manifest.config);
  write_artifact(p.manifest.output_path,
                 trajectory_csv(traj, p.loaded.model.species_names(), p.manifest.header_extra()),
                 out);
  return kExitOk;
}

int cmd_ensemble(const SimulationFlags& flags, std::ostream& out) {
  if (flags.runs == 0) throw UsageError("--runs must be at least 1");
  const Prepared p = prepare(flags, "ensemble");
  const auto& cfg = p.manifest.config;
  const EnsembleStats stats =
      ensemble(p.loaded.model, p.binding, p.x0, cfg, flags.runs, flags.threads);
  write_artifact(p.manifest.output_path,
                 ensemble_csv(stats, p.loaded.model.species_names(), cfg.seed, cfg.method, cfg.h,
                              p.manifest.header_extra()),
                 out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compile one-step reaction models to Langevin form and simulate them", "onestep"};
  app.require_subcommand(1);

  std::string compile_model, compile_out = "-";
  auto* compile = app.add_subcommand("compile", "Derive drift and diffusion coefficients");
  compile->add_option("model", compile_model, "Model file")->required();
  compile->add_option("--out", compile_out, "Coefficient file path, '-' for stdout")
      ->capture_default_str();

  SimulationFlags sim_flags;
  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate one trajectory to CSV");
  sim_flags.attach(simulate_cmd);

  SimulationFlags ens_flags;
  auto* ensemble_cmd = app.add_subcommand("ensemble", "Simulate many runs, write statistics CSV");
  ens_flags.attach(ensemble_cmd);
  ensemble_cmd->add_option("--runs", ens_flags.runs, "Number of runs")->required();
  ensemble_cmd->add_option("--threads", ens_flags.threads, "Worker threads, 0 = all cores")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (compile->parsed()) return cmd_compile(compile_model, compile_out, out, err);
    if (simulate_cmd->parsed()) return cmd_simulate(sim_flags, out);
    return cmd_ensemble(ens_flags, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnboundSymbolError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace onestep::cli
