// harperlab command line driver: one subcommand per experiment plus run and
// verify. Exit status 0 on success, 2 for validation errors, 3 for numeric
// errors, 1 when a verify suite has failures.

#include <functional>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "driver/config.hpp"
#include "driver/runner.hpp"

using namespace harperlab;
using namespace harperlab::driver;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

using Setter = std::function<void(ExperimentConfig&)>;

/// An experiment subcommand: flags given on the command line override the
/// --config file, which overrides the defaults.
struct Command {
  CLI::App* app = nullptr;
  Experiment experiment = Experiment::le;
  std::string config_path;
  bool print_config = false;
  std::vector<Setter> setters;

  template <typename T>
  void option(const std::string& flags, const std::string& help, std::function<void(ExperimentConfig&, const T&)> set) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(flags, *value, help);
    setters.push_back([opt, value, set](ExperimentConfig& c) {
      if (opt->count() > 0) set(c, *value);
    });
  }

  void flag(const std::string& flags, const std::string& help, std::function<void(ExperimentConfig&)> set) {
    CLI::Option* opt = app->add_flag(flags, help);
    setters.push_back([opt, set](ExperimentConfig& c) {
      if (opt->count() > 0) set(c);
    });
  }

  ExperimentConfig build() const {
    ExperimentConfig c;
    if (!config_path.empty()) c = parse_config(read_file(config_path));
    c.experiment = experiment;
    for (const auto& s : setters) s(c);
    validate(c);
    return c;
  }
};

void common_options(Command& cmd, bool with_frequency = true) {
  cmd.app->add_option("--config", cmd.config_path, "Start from this experiment config (JSON)");
  cmd.app->add_flag("--print-config", cmd.print_config, "Print the resolved config instead of running");
  cmd.option<std::string>("--coupling", "Coupling l1,l2,l3",
                          [](ExperimentConfig& c, const std::string& v) { c.coupling = model::parse_coupling(v); });
  if (with_frequency) {
    cmd.option<std::string>("--freq", "golden, silver, forge, a literal (1/3, 0.414...) or a digit file (*.json)",
                            [](ExperimentConfig& c, const std::string& v) { c.frequency.spec = v; });
    cmd.option<int>("--freq-depth", "Continued-fraction digits to resolve",
                    [](ExperimentConfig& c, const int& v) { c.frequency.depth = v; });
    cmd.option<int>("--precision", "Decimal digits of a frequency literal",
                    [](ExperimentConfig& c, const int& v) { c.frequency.precision = v; });
    cmd.option<double>("--theta", "Phase", [](ExperimentConfig& c, const double& v) { c.theta = v; });
  }
  cmd.option<std::string>("--out", "Output path (default stdout)",
                          [](ExperimentConfig& c, const std::string& v) { c.output.path = v; });
  cmd.option<std::string>("--format", "csv or json",
                          [](ExperimentConfig& c, const std::string& v) { c.output.format = v; });
  cmd.option<std::uint64_t>("--seed", "Seed for phase grids and random data",
                            [](ExperimentConfig& c, const std::uint64_t& v) { c.seed = v; });
}

void energy_option(Command& cmd) {
  cmd.option<std::string>("--E", "Energy, or auto for the median eigenvalue of a size-512 truncation",
                          [](ExperimentConfig& c, const std::string& v) {
                            if (v == "auto") {
                              c.energy.reset();
                              return;
                            }
                            try {
                              std::size_t used = 0;
                              c.energy = std::stod(v, &used);
                              if (used != v.size()) throw std::invalid_argument(v);
                            } catch (const std::exception&) {
                              throw InvalidArgument("--E expects a number or auto, got '" + v + "'");
                            }
                          });
}

void forge_options(Command& cmd) {
  cmd.option<std::string>("--base", "golden or silver",
                          [](ExperimentConfig& c, const std::string& v) { c.forge.base = v; });
  cmd.option<int>("--n0", "Digits kept from the base", [](ExperimentConfig& c, const int& v) { c.forge.n0 = v; });
  cmd.option<std::string>("--schedule", "constant or burst",
                          [](ExperimentConfig& c, const std::string& v) { c.forge.schedule = v; });
  cmd.option<double>("--beta", "Target exponent", [](ExperimentConfig& c, const double& v) { c.forge.beta = v; });
  cmd.option<int>("--levels", "Forged levels", [](ExperimentConfig& c, const int& v) { c.forge.levels = v; });
}

void add_experiment_options(Command& cmd) {
  auto size = [&cmd](const char* help) {
    cmd.option<int>("--size", help, [](ExperimentConfig& c, const int& v) { c.size = v; });
  };
  auto phases = [&cmd] {
    cmd.option<int>("--phases", "Number of seeded phases (1: use --theta)",
                    [](ExperimentConfig& c, const int& v) { c.phases = v; });
  };
  switch (cmd.experiment) {
    case Experiment::le:
      energy_option(cmd);
      cmd.option<long>("--n", "Iterations per phase", [](ExperimentConfig& c, const long& v) { c.n_steps = v; });
      cmd.option<int>("--grid", "Phase grid size", [](ExperimentConfig& c, const int& v) { c.grid = v; });
      cmd.option<std::string>("--kind", "raw or normalized",
                              [](ExperimentConfig& c, const std::string& v) { c.kind = v; });
      cmd.option<double>("--zero-guard", "Phase distance to a zero of c below which raw samples are skipped",
                         [](ExperimentConfig& c, const double& v) { c.zero_guard = v; });
      break;
    case Experiment::spectrum:
      size("Truncation size");
      phases();
      break;
    case Experiment::duality:
      size("Truncation size");
      phases();
      cmd.flag("--no-edge-filter", "Keep eigenvalues of states pinned to the window ends",
               [](ExperimentConfig& c) { c.edge_filter = false; });
      break;
    case Experiment::forge:
      forge_options(cmd);
      break;
    case Experiment::delta:
      cmd.option<int>("--depth", "Levels", [](ExperimentConfig& c, const int& v) { c.depth = v; });
      cmd.option<int>("--warmup", "First reported level", [](ExperimentConfig& c, const int& v) { c.warmup = v; });
      forge_options(cmd);
      break;
    case Experiment::badness:
      cmd.option<double>("--C", "Badness constant", [](ExperimentConfig& c, const double& v) { c.C = v; });
      cmd.option<int>("--N", "Window half-width", [](ExperimentConfig& c, const int& v) { c.N = v; });
      cmd.option<int>("--energies", "Energies sampled from the truncated spectrum (0: all)",
                      [](ExperimentConfig& c, const int& v) { c.energy_count = v; });
      forge_options(cmd);
      break;
    case Experiment::decay:
      size("Truncation size");
      cmd.option<int>("--which", "Eigenvalue index (-1: best localized in the middle third)",
                      [](ExperimentConfig& c, const int& v) { c.which = v; });
      break;
    case Experiment::rotation:
      energy_option(cmd);
      cmd.option<long>("--n", "Iterations", [](ExperimentConfig& c, const long& v) { c.n_steps = v; });
      cmd.option<double>("--y0", "Initial angle in turns", [](ExperimentConfig& c, const double& v) { c.y0 = v; });
      break;
    case Experiment::perturb:
      cmd.option<int>("--N", "Window half-width", [](ExperimentConfig& c, const int& v) { c.N = v; });
      cmd.option<std::vector<double>>("--eps", "Frequency offsets",
                                      [](ExperimentConfig& c, const std::vector<double>& v) { c.epsilons = v; });
      break;
    case Experiment::cohomology:
      cmd.option<std::string>("--phi", "Fourier coefficients of phi, inline JSON [[re,im],...] or a file (default cos 2 pi x)",
                              [](ExperimentConfig& c, const std::string& v) { c.phi = v; });
      cmd.option<int>("--s-max", "Highest weight |k|^j in the norm report",
                      [](ExperimentConfig& c, const int& v) { c.s_max = v; });
      break;
    case Experiment::commutant:
      cmd.option<double>("--rho", "Constant part of rho", [](ExperimentConfig& c, const double& v) { c.rho = v; });
      cmd.option<double>("--rho-alpha", "Multiple of alpha added to rho",
                         [](ExperimentConfig& c, const double& v) { c.rho_alpha = v; });
      cmd.option<long>("--bandwidth", "Largest |k|", [](ExperimentConfig& c, const long& v) { c.bandwidth = v; });
      cmd.option<double>("--tau", "Diophantine exponent", [](ExperimentConfig& c, const double& v) { c.tau = v; });
      cmd.option<double>("--gamma", "Diophantine constant", [](ExperimentConfig& c, const double& v) { c.gamma = v; });
      break;
  }
}

int execute(const ExperimentConfig& config, unsigned threads) {
  const ResultRecord r = run(config, threads);
  emit(r, config);
  std::cerr << r.experiment << " " << r.config_hash << " done in " << r.wall_time << " s";
  if (!config.output.path.empty()) std::cerr << ", wrote " << config.output.path;
  std::cerr << '\n';
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"harperlab: numerical experiments on the extended Harper model"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", HARPERLAB_VERSION);
  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);

  std::vector<std::unique_ptr<Command>> commands;
  for (const std::string& name : experiment_names()) {
    auto cmd = std::make_unique<Command>();
    cmd->experiment = experiment_from_string(name);
    cmd->app = app.add_subcommand(name, "Run the " + name + " experiment");
    common_options(*cmd, cmd->experiment != Experiment::forge);
    add_experiment_options(*cmd);
    commands.push_back(std::move(cmd));
  }

  std::string run_path, run_out, run_format;
  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment config file");
  run_cmd->add_option("config", run_path, "Config JSON")->required();
  run_cmd->add_option("--out", run_out, "Override the output path");
  run_cmd->add_option("--format", run_format, "Override the output format");

  std::string suite_path;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run a suite of configs against expected values");
  verify_cmd->add_option("suite", suite_path, "Suite JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run_cmd) {
      ExperimentConfig c = parse_config(read_file(run_path));
      if (run_cmd->count("--out")) c.output.path = run_out;
      if (run_cmd->count("--format")) c.output.format = run_format;
      validate(c);
      return execute(c, threads);
    }
    if (*verify_cmd) {
      const VerifySummary s = verify(read_file(suite_path), threads);
      std::cout << format_summary(s);
      return s.all_pass() ? 0 : 1;
    }
    for (const auto& cmd : commands) {
      if (!*cmd->app) continue;
      const ExperimentConfig c = cmd->build();
      if (cmd->print_config) {
        std::cout << serialize(c);
        return 0;
      }
      return execute(c, threads);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.name() << ": " << e.what() << '\n';
    return e.kind() == ErrorKind::validation ? kExitValidation : kExitNumeric;
  }
  return 0;
}
