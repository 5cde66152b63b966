#pragma once

// Declarative experiment configs. Every knob has a default and is always
// written out, so a canonical file parses and re-serializes byte for byte.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "harperlab/contfrac.hpp"
#include "harperlab/frequency.hpp"
#include "harperlab/model.hpp"

namespace harperlab::driver {

inline constexpr const char* kConfigSchema = "harperlab.experiment/1";

enum class Experiment { le, spectrum, duality, forge, delta, badness, decay, rotation, perturb, cohomology, commutant };

const char* to_string(Experiment e);
Experiment experiment_from_string(const std::string& name);
const std::vector<std::string>& experiment_names();

/// golden | silver | forge | a literal ("1/3", "0.4142...") | a digit file
/// (a path ending in .json or prefixed with "file:").
struct FrequencySpec {
  std::string spec = "golden";
  int depth = 60;
  int precision = 60;  // decimal digits of a literal
};

struct ForgeSpec {
  std::string base = "golden";
  int n0 = 5;
  std::string schedule = "constant";  // constant | burst
  double beta = 0.5;
  int levels = 3;
};

struct OutputSpec {
  std::string path;  // empty: stdout
  std::string format = "json";
};

struct ExperimentConfig {
  Experiment experiment = Experiment::le;
  model::CouplingTriple coupling{0.1, 0.5, 0.2};
  FrequencySpec frequency;
  ForgeSpec forge;
  double theta = 0.0;
  std::optional<double> energy;  // nullopt: "auto", the middle of a truncated spectrum
  std::string kind = "normalized";
  int size = 512;
  int phases = 1;
  long n_steps = 100000;
  int grid = 64;
  double zero_guard = 1e-7;
  bool edge_filter = true;
  double y0 = 0.1;
  double C = 3.0;
  int N = 20;
  int energy_count = 16;
  int depth = 20;
  int warmup = 0;
  int which = -1;  // decay eigenvector index; -1 picks the best localized
  std::vector<double> epsilons{1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
  std::string phi;  // Fourier JSON, inline or a file path; empty: cos 2 pi x
  int s_max = 3;
  long bandwidth = 1000;
  double tau = 2.0;
  double gamma = 0.05;
  double rho = 0.25;
  double rho_alpha = 0.0;  // rho = rho + rho_alpha * alpha
  std::uint64_t seed = 2024;
  OutputSpec output;
};

/// Canonical JSON, two-space indent, trailing newline.
std::string serialize(const ExperimentConfig& c);
/// Unknown keys, a wrong schema or a malformed value raise InvalidArgument.
ExperimentConfig parse_config(const std::string& text);
void validate(const ExperimentConfig& c);

/// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

struct ResolvedFrequency {
  contfrac::ContinuedFraction cf;
  Frequency alpha;
  std::vector<std::string> notes;
};
ResolvedFrequency resolve_frequency(const ExperimentConfig& c);
contfrac::ContinuedFraction forged(const ForgeSpec& f, int base_depth);

std::string read_file(const std::string& path);

}  // namespace harperlab::driver
