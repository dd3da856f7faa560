#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "grs/extension.hpp"
#include "grs/warped.hpp"

// Named example scenarios with their structural checks, plus a verifier for
// user-supplied scenario files. Reports are deterministic for a fixed
// configuration: rerunning with the same seed reproduces every value bit for
// bit, only wall_ms differs.

namespace grs {

struct scenario_error : error {
  using error::error;
};

struct RunConfig {
  int points = 1000;        // base-chart sample budget per check
  std::uint64_t seed = 42;  // sampling seed; each scenario derives its own
  double tol = 1.0;         // multiplier on every check tolerance
};

// A single named measurement. pass compares value against tol in the
// direction the check declares (usually value <= tol); expected records
// whether the catalog predicts the check to pass, so a documented
// counterexample keeps its honest failure without failing the scenario.
struct CheckResult {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  bool pass = false;
  bool expected = true;
};

struct ScenarioReport {
  std::string name;
  std::string kind;  // affine, extension, metric
  bool ok = false;   // every check matched its expectation
  double wall_ms = 0.0;
  std::vector<CheckResult> checks;
};

struct CatalogEntry {
  std::string name;
  std::string kind;
  std::string description;
  std::function<ScenarioReport(const RunConfig&)> run;
};

const std::vector<CatalogEntry>& catalog();

// Runs one entry by name; throws scenario_error for an unknown name.
ScenarioReport run_scenario(const std::string& name, const RunConfig& cfg);

// Validates and runs a scenario object with kind affine, extension, or
// metric. Unknown or ill-typed keys throw scenario_error naming the key.
ScenarioReport verify_scenario(const nlohmann::ordered_json& spec);
ScenarioReport verify_scenario_file(const std::string& path);

nlohmann::ordered_json report_json(const ScenarioReport& rep);
nlohmann::ordered_json catalog_report_json(
    const std::vector<ScenarioReport>& reps, const RunConfig& cfg);

}  // namespace grs
