#include <cmath>
#include <sstream>

#include "harperlab/io.hpp"
#include "runner.hpp"

namespace harperlab::driver {

using json = nlohmann::ordered_json;

namespace {

inline constexpr const char* kSuiteSchema = "harperlab.suite/1";

std::string show(const json& v) { return v.is_number() ? io::format_double(v.get<double>()) : v.dump(); }

/// Empty string when the expectation holds, otherwise what went wrong.
std::string check(const json& record, const json& expect) {
  if (!expect.is_object() || !expect.contains("path")) return "expectation needs a \"path\"";
  const std::string path = expect["path"].get<std::string>();
  json::json_pointer ptr;
  try {
    ptr = json::json_pointer(path);
  } catch (const json::exception&) {
    return "bad JSON pointer " + path;
  }
  if (!record.contains(ptr)) return path + " missing";
  const json& got = record.at(ptr);

  if (expect.contains("equals")) {
    if (got != expect["equals"]) return path + " = " + show(got) + ", expected " + show(expect["equals"]);
    return {};
  }
  if (!got.is_number()) return path + " is not a number";
  const double x = got.get<double>();
  if (expect.contains("value")) {
    const double want = expect["value"].get<double>();
    double tol = 0.0;
    if (expect.contains("abs_tol")) tol = expect["abs_tol"].get<double>();
    if (expect.contains("rel_tol")) tol = std::max(tol, expect["rel_tol"].get<double>() * std::fabs(want));
    if (!(std::fabs(x - want) <= tol))
      return path + " = " + io::format_double(x) + ", expected " + io::format_double(want) + " +- " +
             io::format_double(tol);
    return {};
  }
  if (expect.contains("min") && !(x >= expect["min"].get<double>()))
    return path + " = " + io::format_double(x) + " below " + show(expect["min"]);
  if (expect.contains("max") && !(x <= expect["max"].get<double>()))
    return path + " = " + io::format_double(x) + " above " + show(expect["max"]);
  if (!expect.contains("min") && !expect.contains("max")) return "expectation on " + path + " has no criterion";
  return {};
}

CaseOutcome run_case(const json& c, unsigned threads) {
  CaseOutcome out;
  out.name = c.value("name", "unnamed");
  json config = c.value("config", json::object());
  if (!config.contains("schema")) config["schema"] = kConfigSchema;
  const std::string expect_error = c.value("expect_error", "");
  try {
    const ExperimentConfig cfg = parse_config(config.dump());
    const ResultRecord r = run(cfg, threads);
    out.wall_time = r.wall_time;
    if (!expect_error.empty()) {
      out.detail = "expected " + expect_error + " but the run succeeded";
      return out;
    }
    const json record = record_json(r);
    std::vector<std::string> failures, passes;
    for (const auto& e : c.value("expect", json::array())) {
      const std::string problem = check(record, e);
      if (problem.empty()) {
        const std::string path = e.value("path", "");
        const json::json_pointer ptr(path);
        passes.push_back(path + " = " + show(record.at(ptr)));
      } else {
        failures.push_back(problem);
      }
    }
    out.pass = failures.empty();
    std::ostringstream os;
    const auto& list = failures.empty() ? passes : failures;
    for (std::size_t i = 0; i < list.size(); ++i) os << (i ? "; " : "") << list[i];
    out.detail = os.str();
  } catch (const Error& e) {
    out.pass = e.name() == expect_error;
    out.detail = out.pass ? "raised " + e.name() + " as expected" : e.name() + ": " + e.what();
  }
  return out;
}

}  // namespace

bool VerifySummary::all_pass() const {
  for (const auto& c : cases)
    if (!c.pass) return false;
  return true;
}

VerifySummary verify(const std::string& suite_text, unsigned threads) {
  json suite;
  try {
    suite = json::parse(suite_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("suite is not valid JSON: ") + e.what());
  }
  if (!suite.is_object() || suite.value("schema", "") != kSuiteSchema)
    throw InvalidArgument(std::string("suite schema must be \"") + kSuiteSchema + "\"");
  const json cases = suite.value("cases", json::array());
  if (!cases.is_array()) throw InvalidArgument("suite cases must be an array");
  VerifySummary s;
  if (cases.empty()) s.warnings.push_back("suite has no cases; passing vacuously");
  for (const auto& c : cases) s.cases.push_back(run_case(c, threads));
  return s;
}

std::string format_summary(const VerifySummary& s) {
  std::size_t width = 4;
  for (const auto& c : s.cases) width = std::max(width, c.name.size());
  std::ostringstream os;
  for (const auto& w : s.warnings) os << "warning: " << w << '\n';
  std::size_t passed = 0;
  for (const auto& c : s.cases) {
    passed += c.pass;
    char time[32];
    std::snprintf(time, sizeof time, "%8.2fs", c.wall_time);
    os << (c.pass ? "PASS  " : "FAIL  ") << c.name << std::string(width - c.name.size() + 2, ' ') << time << "  "
       << c.detail << '\n';
  }
  os << passed << "/" << s.cases.size() << " passed\n";
  return os.str();
}

}  // namespace harperlab::driver
