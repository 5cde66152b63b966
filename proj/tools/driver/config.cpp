#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "harperlab/io.hpp"
#include "json.hpp"

namespace harperlab::driver {

using json = nlohmann::ordered_json;

namespace {

const std::vector<std::pair<Experiment, std::string>>& names() {
  static const std::vector<std::pair<Experiment, std::string>> table{
      {Experiment::le, "le"},           {Experiment::spectrum, "spectrum"},     {Experiment::duality, "duality"},
      {Experiment::forge, "forge"},     {Experiment::delta, "delta"},           {Experiment::badness, "badness"},
      {Experiment::decay, "decay"},     {Experiment::rotation, "rotation"},     {Experiment::perturb, "perturb"},
      {Experiment::cohomology, "cohomology"}, {Experiment::commutant, "commutant"},
  };
  return table;
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!known.count(key)) throw InvalidArgument("unknown key '" + key + "' in " + where);
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string("config key '") + key + "' has the wrong type");
  }
}

void read_number(const json& obj, const char* key, double& out) {
  if (!obj.contains(key)) return;
  if (!obj.at(key).is_number()) throw InvalidArgument(std::string("config key '") + key + "' must be a number");
  out = obj.at(key).get<double>();
}

}  // namespace

const char* to_string(Experiment e) {
  for (const auto& [value, name] : names())
    if (value == e) return name.c_str();
  return "unknown";
}

Experiment experiment_from_string(const std::string& name) {
  for (const auto& [value, n] : names())
    if (n == name) return value;
  throw InvalidArgument("unknown experiment '" + name + "'");
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> list = [] {
    std::vector<std::string> out;
    for (const auto& entry : names()) out.push_back(entry.second);
    return out;
  }();
  return list;
}

std::string serialize(const ExperimentConfig& c) {
  json j;
  j["schema"] = kConfigSchema;
  j["experiment"] = to_string(c.experiment);
  j["coupling"] = model::format_coupling(c.coupling);
  j["frequency"] = {{"spec", c.frequency.spec}, {"depth", c.frequency.depth}, {"precision", c.frequency.precision}};
  j["forge"] = {{"base", c.forge.base},
                {"n0", c.forge.n0},
                {"schedule", c.forge.schedule},
                {"beta", c.forge.beta},
                {"levels", c.forge.levels}};
  j["theta"] = c.theta;
  j["energy"] = c.energy ? json(*c.energy) : json("auto");
  j["kind"] = c.kind;
  j["size"] = c.size;
  j["phases"] = c.phases;
  j["n_steps"] = c.n_steps;
  j["grid"] = c.grid;
  j["zero_guard"] = c.zero_guard;
  j["edge_filter"] = c.edge_filter;
  j["y0"] = c.y0;
  j["C"] = c.C;
  j["N"] = c.N;
  j["energy_count"] = c.energy_count;
  j["depth"] = c.depth;
  j["warmup"] = c.warmup;
  j["which"] = c.which;
  j["epsilons"] = c.epsilons;
  j["phi"] = c.phi;
  j["s_max"] = c.s_max;
  j["bandwidth"] = c.bandwidth;
  j["tau"] = c.tau;
  j["gamma"] = c.gamma;
  j["rho"] = c.rho;
  j["rho_alpha"] = c.rho_alpha;
  j["seed"] = c.seed;
  j["output"] = {{"path", c.output.path}, {"format", c.output.format}};
  return j.dump(2) + "\n";
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  if (!j.contains("schema") || j["schema"] != kConfigSchema)
    throw InvalidArgument(std::string("config schema must be \"") + kConfigSchema + "\"");
  reject_unknown(j,
                 {"schema", "experiment", "coupling", "frequency", "forge", "theta", "energy", "kind", "size", "phases",
                  "n_steps", "grid", "zero_guard", "edge_filter", "y0", "C", "N", "energy_count", "depth", "warmup",
                  "which", "epsilons", "phi", "s_max", "bandwidth", "tau", "gamma", "rho", "rho_alpha", "seed",
                  "output"},
                 "config");

  ExperimentConfig c;
  std::string text_value;
  read(j, "experiment", text_value);
  if (!text_value.empty()) c.experiment = experiment_from_string(text_value);
  if (j.contains("coupling")) {
    if (!j["coupling"].is_string()) throw InvalidArgument("coupling must be a string \"l1,l2,l3\"");
    c.coupling = model::parse_coupling(j["coupling"].get<std::string>());
  }
  if (j.contains("frequency")) {
    const json& f = j["frequency"];
    if (!f.is_object()) throw InvalidArgument("frequency must be an object");
    reject_unknown(f, {"spec", "depth", "precision"}, "frequency");
    read(f, "spec", c.frequency.spec);
    read(f, "depth", c.frequency.depth);
    read(f, "precision", c.frequency.precision);
  }
  if (j.contains("forge")) {
    const json& f = j["forge"];
    if (!f.is_object()) throw InvalidArgument("forge must be an object");
    reject_unknown(f, {"base", "n0", "schedule", "beta", "levels"}, "forge");
    read(f, "base", c.forge.base);
    read(f, "n0", c.forge.n0);
    read(f, "schedule", c.forge.schedule);
    read_number(f, "beta", c.forge.beta);
    read(f, "levels", c.forge.levels);
  }
  read_number(j, "theta", c.theta);
  if (j.contains("energy")) {
    const json& e = j["energy"];
    if (e.is_string() && e == "auto") {
      c.energy.reset();
    } else if (e.is_number()) {
      c.energy = e.get<double>();
    } else {
      throw InvalidArgument("energy must be a number or \"auto\"");
    }
  }
  read(j, "kind", c.kind);
  read(j, "size", c.size);
  read(j, "phases", c.phases);
  read(j, "n_steps", c.n_steps);
  read(j, "grid", c.grid);
  read_number(j, "zero_guard", c.zero_guard);
  read(j, "edge_filter", c.edge_filter);
  read_number(j, "y0", c.y0);
  read_number(j, "C", c.C);
  read(j, "N", c.N);
  read(j, "energy_count", c.energy_count);
  read(j, "depth", c.depth);
  read(j, "warmup", c.warmup);
  read(j, "which", c.which);
  read(j, "epsilons", c.epsilons);
  read(j, "phi", c.phi);
  read(j, "s_max", c.s_max);
  read(j, "bandwidth", c.bandwidth);
  read_number(j, "tau", c.tau);
  read_number(j, "gamma", c.gamma);
  read_number(j, "rho", c.rho);
  read_number(j, "rho_alpha", c.rho_alpha);
  read(j, "seed", c.seed);
  if (j.contains("output")) {
    const json& o = j["output"];
    if (!o.is_object()) throw InvalidArgument("output must be an object");
    reject_unknown(o, {"path", "format"}, "output");
    read(o, "path", c.output.path);
    read(o, "format", c.output.format);
  }
  validate(c);
  return c;
}

void validate(const ExperimentConfig& c) {
  model::validate(c.coupling);
  auto positive = [](bool ok, const char* what) {
    if (!ok) throw InvalidArgument(std::string(what));
  };
  positive(c.frequency.depth >= 1, "frequency depth must be at least 1");
  positive(c.frequency.precision >= 1, "frequency precision must be at least 1");
  positive(c.forge.n0 >= 1, "forge n0 must be at least 1");
  positive(c.forge.levels >= 0, "forge levels must be nonnegative");
  positive(c.forge.schedule == "constant" || c.forge.schedule == "burst", "forge schedule must be constant or burst");
  positive(c.forge.base == "golden" || c.forge.base == "silver", "forge base must be golden or silver");
  positive(std::isfinite(c.theta), "theta must be finite");
  positive(!c.energy || std::isfinite(*c.energy), "energy must be finite");
  positive(c.kind == "raw" || c.kind == "normalized", "kind must be raw or normalized");
  positive(c.size >= 1, "size must be at least 1");
  positive(c.phases >= 1, "phases must be at least 1");
  positive(c.n_steps >= 1, "n_steps must be at least 1");
  positive(c.grid >= 1, "grid must be at least 1");
  positive(c.zero_guard >= 0, "zero_guard must be nonnegative");
  positive(c.C > 0, "C must be positive");
  positive(c.N >= 1, "N must be at least 1");
  positive(c.energy_count >= 0, "energy_count must be nonnegative");
  positive(c.depth >= 1, "depth must be at least 1");
  positive(c.warmup >= 0 && c.warmup < c.depth, "warmup must lie in [0, depth)");
  positive(c.which >= -1, "which must be -1 or an eigenvalue index");
  positive(!c.epsilons.empty(), "epsilons must not be empty");
  for (double e : c.epsilons) positive(e > 0 && e < 0.5, "every epsilon must lie in (0, 0.5)");
  positive(c.s_max >= 0, "s_max must be nonnegative");
  positive(c.bandwidth >= 0, "bandwidth must be nonnegative");
  positive(c.tau > 0 && c.gamma > 0, "tau and gamma must be positive");
  positive(c.output.format == "json" || c.output.format == "csv", "format must be csv or json");
}

std::string config_hash(const ExperimentConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

namespace {

contfrac::ContinuedFraction named(const std::string& name, std::size_t depth) {
  if (name == "golden") return contfrac::golden(depth);
  if (name == "silver") return contfrac::silver(depth);
  throw InvalidArgument("unknown named frequency '" + name + "'");
}

bool is_digit_file(const std::string& spec) {
  return spec.rfind("file:", 0) == 0 || (spec.size() > 5 && spec.compare(spec.size() - 5, 5, ".json") == 0);
}

}  // namespace

contfrac::ContinuedFraction forged(const ForgeSpec& f, int base_depth) {
  const auto n0 = static_cast<std::size_t>(f.n0);
  const auto base = named(f.base, std::max<std::size_t>(n0, static_cast<std::size_t>(base_depth)));
  const auto levels = static_cast<std::size_t>(f.levels);
  if (f.schedule == "burst") return contfrac::forge(base, n0, contfrac::SingleBurst{f.beta}, levels);
  return contfrac::forge(base, n0, contfrac::ConstantBeta{f.beta}, levels);
}

ResolvedFrequency resolve_frequency(const ExperimentConfig& c) {
  const std::string& spec = c.frequency.spec;
  const auto depth = static_cast<std::size_t>(c.frequency.depth);
  if (spec == "golden" || spec == "silver") {
    auto cf = named(spec, depth);
    Frequency alpha = Frequency::from_cf(cf);
    return {std::move(cf), alpha, {alpha.substitution_note()}};
  }
  if (spec == "forge") {
    auto cf = forged(c.forge, c.forge.n0);
    Frequency alpha = Frequency::from_cf(cf);
    std::vector<std::string> notes{alpha.substitution_note()};
    if (cf.truncated()) notes.push_back("forged digit stream stopped at the digit-size cap after " +
                                        std::to_string(cf.depth()) + " digits");
    return {std::move(cf), alpha, notes};
  }
  if (is_digit_file(spec)) {
    const std::string path = spec.rfind("file:", 0) == 0 ? spec.substr(5) : spec;
    auto cf = io::digits_from_json(read_file(path), path);
    Frequency alpha = Frequency::from_cf(cf);
    return {std::move(cf), alpha, {alpha.substitution_note()}};
  }
  const Rational center = parse_rational(spec);
  const bool exact = spec.find('/') != std::string::npos;
  const auto x = exact ? contfrac::RealInterval::point(center)
                       : contfrac::RealInterval::around(center, c.frequency.precision);
  auto e = contfrac::expand_prefix(x, depth, spec, exact ? 0 : c.frequency.precision);
  std::vector<std::string> notes;
  if (e.termination != contfrac::Termination::complete)
    notes.push_back("literal " + spec + ": expansion " + contfrac::to_string(e.termination) + " after " +
                    std::to_string(e.cf.depth()) + " digits");
  if (e.cf.depth() == 0) throw contfrac::PrecisionExhausted(e);
  return {std::move(e.cf), Frequency::from_rational(center), notes};
}

}  // namespace harperlab::driver
