#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hamred/moduli.hpp"

namespace hamred {

inline constexpr const char* kReportSchemaVersion = "1";
// Bound on |τ_j| for the non-compact ℝ^ℓ actions.
inline constexpr double kTauCap = 2.0;

enum class SpaceType { Cotangent, Heisenberg, Double, Moduli, Sphere4 };

std::string space_name(SpaceType s);

// One requested trajectory export.
struct FlowExport {
  std::string function = "chi_1";  // chi_j, xi_j, retr^k, imtr^k, phi_j, pow^k
  int block = 0;                   // moduli: index into family_blocks; double: 0 = A, 1 = B, 2 = [A,B]
  double start = 0.0, stop = 1.0;
  int steps = 10;                  // number of grid points; 0 gives a header-only file
  bool principal = false;          // start at a crafted point instead of a random one
  std::string file = "trajectory.csv";
};

struct ScenarioConfig {
  SpaceType space = SpaceType::Double;
  int m = 0, n_factors = 0;  // shape of M_{m,n} for moduli and sphere4
  int n = 2;                 // K = SU(n)
  std::optional<IntervalFamily> family;
  bool tilde = false;        // 𝔥̃ instead of 𝔥 on the closed-form spaces
  std::uint64_t seed = 0;
  double tol_scale = 1.0;
  std::map<std::string, double> tolerances;
  std::vector<std::string> checks;  // empty selects the default suite
  int points = 20, probes = 8;
  std::vector<FlowExport> exports;
};

// Throws ConfigError naming the offending field, or AssumptionViolation for
// an inadmissible interval family.
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::filesystem::path& p);

enum class Comparison { AtMost, AtLeast };

struct CheckResult {
  std::string name;
  std::string tag;
  int criterion = 0;
  double residual = 0;
  double tolerance = 0;
  Comparison comparison = Comparison::AtMost;
  bool passed = false;
  std::string note;
  std::string error;  // set when the check threw
};

struct VerificationReport {
  std::string schema_version = kReportSchemaVersion;
  std::uint64_t seed = 0;
  int n = 0;
  std::string space;
  std::string family;
  std::vector<CheckResult> checks;   // sorted by name
  std::map<std::string, double> timing;  // seconds per check, excluded from the body

  bool all_passed() const;
};

// Names of the checks a config would run, sorted.
std::vector<std::string> suite_for(const ScenarioConfig& c);
std::vector<std::string> all_check_names();

VerificationReport run_scenario(const ScenarioConfig& c);

enum class ReportFormat { Json, Text };
std::string emit_report(const VerificationReport& r, ReportFormat f, bool with_timing = false);
VerificationReport parse_report(const std::string& json_text);

struct ExportResult {
  std::filesystem::path path;
  int rows = 0;
  std::map<std::string, double> max_deviation;
};

ExportResult export_trajectory(const ScenarioConfig& c, const FlowExport& req, const std::filesystem::path& dir);

}  // namespace hamred
