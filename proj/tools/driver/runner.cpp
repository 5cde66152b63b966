#include "runner.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "harperlab/cocycle.hpp"
#include "harperlab/cohomology.hpp"
#include "harperlab/io.hpp"
#include "harperlab/parallel.hpp"
#include "harperlab/spectral.hpp"

namespace harperlab::driver {

using json = nlohmann::ordered_json;

namespace {

std::string num(double x) { return io::format_double(x); }

json pair(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

std::vector<double> phase_list(const ExperimentConfig& c) {
  if (c.phases == 1) return {wrap01(c.theta)};
  return spectral::phase_grid(static_cast<std::size_t>(c.phases), derive_seed(c.seed, 0));
}

double energy_of(const ExperimentConfig& c, const model::OperatorSample& s, json& out) {
  const double E = c.energy ? *c.energy : spectral::mid_spectrum_energy(s, 512);
  out["E"] = E;
  out["E_source"] = c.energy ? "given" : "median eigenvalue of the size-512 truncation";
  return E;
}

void run_le(const ExperimentConfig& c, const ResolvedFrequency& f, unsigned threads, ResultRecord& r) {
  const model::OperatorSample s(c.coupling, f.alpha, c.theta);
  json& o = r.outputs;
  const double E = energy_of(c, s, o);
  const auto kind = c.kind == "raw" ? cocycle::Kind::raw : cocycle::Kind::normalized;
  const auto est = cocycle::lyapunov_numeric(s, E, c.n_steps, c.grid, kind, c.zero_guard, threads);
  const double formula = cocycle::lyapunov_formula(c.coupling);
  o["kind"] = cocycle::to_string(kind);
  o["value"] = est.value;
  o["stderr"] = est.std_error;
  o["n"] = est.n_steps;
  o["grid"] = est.theta_grid;
  o["excluded"] = est.excluded;
  o["excluded_fraction"] = est.excluded_fraction;
  o["formula"] = formula;
  o["relative_error"] = formula > 0 ? std::fabs(est.value - formula) / formula : est.value;
  o["region"] = model::classify(c.coupling).name();
  if (est.flagged) r.warnings.push_back("excluded fraction " + num(est.excluded_fraction) + " is at least 0.01");
  r.csv = io::lyapunov_csv_header() + io::lyapunov_csv_row(c.coupling, f.alpha.value(), E, est);
}

void run_spectrum(const ExperimentConfig& c, const ResolvedFrequency& f, unsigned threads, ResultRecord& r) {
  const auto phases = phase_list(c);
  const auto size = static_cast<std::size_t>(c.size);
  const auto sp = phases.size() == 1
                      ? spectral::truncated_spectrum(model::OperatorSample(c.coupling, f.alpha, phases[0]), size)
                      : spectral::aggregated_spectrum(c.coupling, f.alpha, size, phases, threads);
  json& o = r.outputs;
  o["size"] = sp.size;
  o["phases"] = sp.phases;
  o["method"] = sp.method;
  o["tolerance"] = sp.tolerance;
  o["count"] = sp.eigenvalues.size();
  o["min"] = sp.eigenvalues.front();
  o["max"] = sp.eigenvalues.back();
  o["eigenvalues"] = sp.eigenvalues;
  r.csv = io::spectrum_csv(sp);
}

void run_duality(const ExperimentConfig& c, const ResolvedFrequency& f, unsigned threads, ResultRecord& r) {
  const auto phases = phase_list(c);
  std::optional<spectral::EdgeFilter> filter;
  if (c.edge_filter) filter = spectral::EdgeFilter{};
  const auto d = spectral::duality_check(c.coupling, f.alpha, static_cast<std::size_t>(c.size), phases, threads, filter);
  json& o = r.outputs;
  o["distance"] = d.distance;
  o["dual"] = model::format_coupling(d.dual);
  o["size"] = d.size;
  o["phases"] = d.phase_count;
  o["eigenvalues"] = d.eigenvalue_count;
  o["edge_filter"] = d.filter.has_value();
  o["edge_dropped"] = d.edge_dropped;
  o["edge_dropped_dual"] = d.edge_dropped_dual;
  r.csv = "distance,size,phases,eigenvalues,edge_dropped,edge_dropped_dual\n" + num(d.distance) + ',' +
          std::to_string(d.size) + ',' + std::to_string(d.phase_count) + ',' + std::to_string(d.eigenvalue_count) +
          ',' + std::to_string(d.edge_dropped) + ',' + std::to_string(d.edge_dropped_dual) + '\n';
}

void run_forge(const ExperimentConfig& c, ResultRecord& r) {
  const auto cf = forged(c.forge, c.forge.n0);
  json& o = r.outputs;
  o["base"] = c.forge.base;
  o["n0"] = c.forge.n0;
  o["schedule"] = c.forge.schedule == "burst" ? contfrac::describe(contfrac::SingleBurst{c.forge.beta})
                                              : contfrac::describe(contfrac::ConstantBeta{c.forge.beta});
  o["depth"] = cf.depth();
  o["truncated"] = cf.truncated();
  json digits = json::array();
  std::string csv = "n,digit\n";
  for (std::size_t n = 1; n <= cf.depth(); ++n) {
    digits.push_back(to_decimal_string(cf.digit(n)));
    csv += std::to_string(n) + ',' + to_decimal_string(cf.digit(n)) + '\n';
  }
  o["digits"] = digits;
  if (cf.depth() >= 2) {
    const std::size_t warmup = std::min<std::size_t>(static_cast<std::size_t>(c.forge.n0), cf.depth() - 1);
    const auto fe = contfrac::beta_exponent(cf, cf.depth(), warmup);
    o["beta_estimate"] = fe.beta_estimate;
    json levels = json::array();
    for (const auto& l : fe.per_level) levels.push_back({{"n", l.n}, {"log_ratio", l.log_ratio}, {"digit_ratio", l.digit_ratio}});
    o["per_level"] = levels;
  }
  if (cf.truncated())
    r.warnings.push_back("digit-size cap reached: stream ends after " + std::to_string(cf.depth()) + " digits");
  r.csv = csv;
  r.artifact = io::digits_to_json(cf) + "\n";
}

void run_delta(const ExperimentConfig& c, const ResolvedFrequency& f, ResultRecord& r) {
  const std::size_t depth = std::min<std::size_t>(static_cast<std::size_t>(c.depth), f.cf.depth());
  const auto d = spectral::delta_exponent(c.coupling, f.cf, exact_rational(c.theta), depth,
                                          static_cast<std::size_t>(c.warmup));
  json& o = r.outputs;
  o["zeros"] = model::to_string(d.zeros);
  o["depth"] = d.depth;
  o["warmup"] = d.warmup;
  o["delta_estimate"] = d.delta_estimate;
  o["beta_estimate"] = d.beta_estimate;
  json levels = json::array();
  std::string csv = "n,delta,beta\n";
  for (const auto& l : d.per_level) {
    levels.push_back({{"n", l.n}, {"delta", l.delta}, {"beta", l.beta}});
    csv += std::to_string(l.n) + ',' + num(l.delta) + ',' + num(l.beta) + '\n';
  }
  o["per_level"] = levels;
  if (!levels.empty()) {
    const auto& last = d.per_level.back();
    o["deepest_ratio"] = last.beta != 0 ? last.delta / last.beta : 1.0;
  }
  if (static_cast<std::size_t>(c.depth) > f.cf.depth())
    r.warnings.push_back("depth reduced to the " + std::to_string(f.cf.depth()) + " available digits");
  r.csv = csv;
}

void run_badness(const ExperimentConfig& c, const ResolvedFrequency& f, ResultRecord& r) {
  const model::OperatorSample s(c.coupling, f.alpha, c.theta);
  const auto b = spectral::badness_scan(s, c.C, c.N, static_cast<std::size_t>(c.energy_count));
  json& o = r.outputs;
  o["C"] = b.C;
  o["N"] = b.N;
  o["truncation_size"] = b.truncation_size;
  o["bad"] = b.bad;
  o["min_mass"] = b.min_mass;
  o["note"] = b.note;
  auto energy = [](const spectral::BadnessEnergy& e) {
    return json{{"energy", e.energy}, {"min_mass", e.min_mass}, {"angle_a", e.angle_a}, {"angle_b", e.angle_b}};
  };
  o["witness"] = b.witness ? energy(*b.witness) : json(nullptr);
  json rows = json::array();
  std::string csv = "energy,min_mass,angle_a,angle_b\n";
  for (const auto& e : b.energies) {
    rows.push_back(energy(e));
    csv += num(e.energy) + ',' + num(e.min_mass) + ',' + num(e.angle_a) + ',' + num(e.angle_b) + '\n';
  }
  o["energies"] = rows;
  r.csv = csv;
}

void run_decay(const ExperimentConfig& c, const ResolvedFrequency& f, ResultRecord& r) {
  const model::OperatorSample s(c.coupling, f.alpha, c.theta);
  std::optional<std::size_t> which;
  if (c.which >= 0) which = static_cast<std::size_t>(c.which);
  const auto d = spectral::decay_fit(s, static_cast<std::size_t>(c.size), which);
  json& o = r.outputs;
  o["eigenvalue"] = d.eigenvalue;
  o["index"] = d.index;
  o["peak"] = d.peak;
  o["fit_min"] = d.fit_min;
  o["fit_max"] = d.fit_max;
  o["points"] = d.points;
  o["slope"] = d.slope;
  o["intercept"] = d.intercept;
  o["r2"] = d.r2;
  o["target"] = d.target;
  o["slope_ratio"] = d.target != 0 ? d.slope / d.target : 0.0;
  r.csv = "eigenvalue,peak,slope,r2,target\n" + num(d.eigenvalue) + ',' + std::to_string(d.peak) + ',' + num(d.slope) +
          ',' + num(d.r2) + ',' + num(d.target) + '\n';
}

void run_rotation(const ExperimentConfig& c, const ResolvedFrequency& f, ResultRecord& r) {
  const model::OperatorSample s(c.coupling, f.alpha, c.theta);
  json& o = r.outputs;
  const double E = energy_of(c, s, o);
  const auto est = cocycle::rotation_number(s, E, c.n_steps, c.theta, c.y0);
  o["value"] = est.value;
  o["lift_average"] = est.lift_average;
  o["stderr"] = est.std_error;
  o["n"] = est.n_steps;
  o["slow_decay"] = est.slow_decay;
  if (!est.warning.empty()) r.warnings.push_back(est.warning);
  r.csv = "E,value,lift_average,stderr,n\n" + num(E) + ',' + num(est.value) + ',' + num(est.lift_average) + ',' +
          num(est.std_error) + ',' + std::to_string(est.n_steps) + '\n';
}

void run_perturb(const ExperimentConfig& c, const ResolvedFrequency& f, ResultRecord& r) {
  std::vector<double> eps, sol, mat;
  json rows = json::array();
  std::string csv = "epsilon,energy,energy_prime,solution_deviation,matrix_deviation\n";
  for (double e : c.epsilons) {
    const auto p = spectral::perturbation_experiment(c.coupling, f.alpha, Frequency::from_double(f.alpha.value() + e),
                                                     c.theta, c.N, c.seed);
    eps.push_back(e);
    sol.push_back(p.solution_deviation);
    mat.push_back(p.matrix_deviation);
    rows.push_back({{"epsilon", e},
                    {"energy", p.energy},
                    {"energy_prime", p.energy_prime},
                    {"solution_deviation", p.solution_deviation},
                    {"matrix_deviation", p.matrix_deviation}});
    csv += num(e) + ',' + num(p.energy) + ',' + num(p.energy_prime) + ',' + num(p.solution_deviation) + ',' +
           num(p.matrix_deviation) + '\n';
  }
  json& o = r.outputs;
  o["N"] = c.N;
  o["rows"] = rows;
  if (eps.size() >= 2) {
    const auto fs = spectral::fit_power_law(eps, sol);
    const auto fm = spectral::fit_power_law(eps, mat);
    o["solution_fit"] = {{"exponent", fs.exponent}, {"prefactor", fs.prefactor}, {"r2", fs.r2}};
    o["matrix_fit"] = {{"exponent", fm.exponent}, {"prefactor", fm.prefactor}, {"r2", fm.r2}};
  }
  r.csv = csv;
}

void run_cohomology(const ExperimentConfig& c, const ResolvedFrequency& f, ResultRecord& r) {
  cocycle::FourierSeries phi(1);
  if (c.phi.empty()) {
    phi[1] = phi[-1] = 0.5;
  } else {
    phi = io::fourier_from_json(c.phi.front() == '[' ? c.phi : read_file(c.phi));
  }
  const auto sol = cocycle::solve_cohomological(phi, f.alpha, c.s_max);
  json& o = r.outputs;
  o["phi"] = c.phi.empty() ? "cos 2 pi x" : c.phi;
  o["bandwidth"] = phi.bandwidth();
  json psi = json::array();
  std::string csv = "k,re,im\n";
  for (long k = -phi.bandwidth(); k <= phi.bandwidth(); ++k) {
    psi.push_back(pair(sol.psi[k]));
    csv += std::to_string(k) + ',' + num(sol.psi[k].real()) + ',' + num(sol.psi[k].imag()) + '\n';
  }
  o["psi"] = psi;
  o["weighted"] = sol.report.weighted;
  o["block_edges"] = {sol.report.edges.low, sol.report.edges.high};
  o["blocks"] = sol.report.blocks;
  o["min_divisor"] = sol.report.min_divisor;
  o["min_divisor_k"] = sol.report.min_divisor_k;
  r.csv = csv;
}

void run_commutant(const ExperimentConfig& c, const ResolvedFrequency& f, ResultRecord& r) {
  const contfrac::Phase rho{exact_rational(c.rho), exact_rational(c.rho_alpha)};
  json& o = r.outputs;
  const auto dc = contfrac::dc_alpha_membership(rho, f.cf, c.tau, c.gamma, c.bandwidth);
  o["dc_alpha_holds"] = dc.holds();
  if (!dc.holds()) {
    o["dc_alpha_violation"] = {{"k", dc.violation->k}, {"log_value", dc.violation->log_value}};
    r.warnings.push_back("rho fails the DC_alpha test at k = " + std::to_string(dc.violation->k));
  }
  const auto rep = cocycle::commutant_rigidity_check(rho, f.cf, c.bandwidth, c.tau, c.gamma);
  o["bandwidth"] = rep.bandwidth;
  o["killed"] = rep.killed;
  json free = json::array();
  for (const auto& m : rep.free_modes) free.push_back({{"equation", cocycle::to_string(m.equation)}, {"k", m.k}});
  o["free_modes"] = free;
  o["min_ratio"] = rep.min_ratio;
  o["min_ratio_k"] = rep.min_ratio_k;
  r.csv = "bandwidth,killed,free,min_ratio,min_ratio_k\n" + std::to_string(rep.bandwidth) + ',' +
          std::to_string(rep.killed) + ',' + std::to_string(rep.free_modes.size()) + ',' + num(rep.min_ratio) + ',' +
          std::to_string(rep.min_ratio_k) + '\n';
}

}  // namespace

ResultRecord run(const ExperimentConfig& config, unsigned threads) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  ResultRecord r;
  r.experiment = to_string(config.experiment);
  r.config_hash = config_hash(config);
  r.version = HARPERLAB_VERSION;
  r.outputs = json::object();
  r.outputs["coupling"] = model::format_coupling(config.coupling);

  if (config.experiment == Experiment::forge) {
    run_forge(config, r);
  } else {
    const ResolvedFrequency f = resolve_frequency(config);
    r.warnings.insert(r.warnings.end(), f.notes.begin(), f.notes.end());
    r.outputs["alpha"] = f.alpha.value();
    r.outputs["theta"] = config.theta;
    switch (config.experiment) {
      case Experiment::le:
        run_le(config, f, threads, r);
        break;
      case Experiment::spectrum:
        run_spectrum(config, f, threads, r);
        break;
      case Experiment::duality:
        run_duality(config, f, threads, r);
        break;
      case Experiment::delta:
        run_delta(config, f, r);
        break;
      case Experiment::badness:
        run_badness(config, f, r);
        break;
      case Experiment::decay:
        run_decay(config, f, r);
        break;
      case Experiment::rotation:
        run_rotation(config, f, r);
        break;
      case Experiment::perturb:
        run_perturb(config, f, r);
        break;
      case Experiment::cohomology:
        run_cohomology(config, f, r);
        break;
      case Experiment::commutant:
        run_commutant(config, f, r);
        break;
      case Experiment::forge:
        break;
    }
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

json record_json(const ResultRecord& r) {
  json j;
  j["schema"] = kRecordSchema;
  j["experiment"] = r.experiment;
  j["config_hash"] = r.config_hash;
  j["version"] = r.version;
  j["outputs"] = r.outputs;
  j["warnings"] = r.warnings;
  return j;
}

std::string render(const ResultRecord& r, const std::string& format) {
  if (format == "csv") return r.csv;
  if (!r.artifact.empty()) return r.artifact;
  return record_json(r).dump(2) + "\n";
}

void emit(const ResultRecord& r, const ExperimentConfig& config) {
  const std::string bytes = render(r, config.output.format);
  if (config.output.path.empty()) {
    std::cout << bytes;
    return;
  }
  std::ofstream out(config.output.path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + config.output.path + "'");
  out << bytes;
}

}  // namespace harperlab::driver
