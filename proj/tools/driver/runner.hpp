#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace harperlab::driver {

inline constexpr const char* kRecordSchema = "harperlab.result/1";

/// Everything a run produced. wall_time is kept out of serialized records
/// so that a fixed config and seed always give the same bytes.
struct ResultRecord {
  std::string experiment;
  std::string config_hash;
  std::string version;
  double wall_time = 0.0;  // seconds
  nlohmann::ordered_json outputs;
  std::vector<std::string> warnings;
  std::string csv;       // table for --format csv
  std::string artifact;  // replaces the JSON record in files when nonempty (forge: the digit stream)
};

ResultRecord run(const ExperimentConfig& config, unsigned threads = 1);

nlohmann::ordered_json record_json(const ResultRecord& r);

/// Bytes written for the record in the configured format.
std::string render(const ResultRecord& r, const std::string& format);

/// Writes to config.output.path, or stdout when it is empty.
void emit(const ResultRecord& r, const ExperimentConfig& config);

struct CaseOutcome {
  std::string name;
  bool pass = false;
  std::string detail;
  double wall_time = 0.0;
};

struct VerifySummary {
  std::vector<CaseOutcome> cases;
  std::vector<std::string> warnings;
  bool all_pass() const;
};

/// Suite: {"schema": "harperlab.suite/1", "cases": [{"name", "config", "expect": [...], "expect_error"}]}.
/// Each expectation names a JSON pointer into the record and one of
/// {"value", "abs_tol" | "rel_tol"}, {"min", "max"} or {"equals"}.
VerifySummary verify(const std::string& suite_text, unsigned threads = 1);

std::string format_summary(const VerifySummary& s);

}  // namespace harperlab::driver
