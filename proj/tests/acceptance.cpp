// Acceptance run: every shipped scenario, aggregated into one PASS/FAIL line
// per criterion. Exit status is 0 only if all ten criteria pass.

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "hamred/scenario.hpp"
#include "validation_cases.hpp"

using namespace hamred;

namespace {

struct Tally {
  int checks = 0, failed = 0;
  double worst_ratio = 0;  // residual / tolerance, inverted for lower bounds
  std::set<std::string> configs;
  std::vector<std::string> failures;
  std::vector<std::string> missing;
};

struct Required {
  int criterion;
  std::string check, config;
};

// Checks each criterion needs to have exercised, and where.
const std::vector<Required> kRequired = {
    {1, "flow.bracket_consistency", "cotangent_n3_h"},
    {1, "flow.bracket_consistency", "cotangent_n3_h_tilde"},
    {1, "flow.bracket_consistency", "heisenberg_n3_h"},
    {1, "flow.bracket_consistency", "heisenberg_n3_h_tilde"},
    {1, "flow.bracket_consistency", "double_n3_default"},
    {1, "flow.bracket_consistency", "double_n3_tilde"},
    {1, "flow.bracket_consistency", "sphere4_n3"},
    {2, "abelian.brackets", "moduli_genus2_dd2"},
    {2, "abelian.brackets", "moduli_m1n1"},
    {2, "abelian.brackets", "moduli_m2n2"},
    {2, "abelian.brackets", "moduli_nested"},
    {2, "abelian.brackets", "moduli_commutator_tail"},
    {2, "abelian.flow_commutation", "moduli_nested"},
    {2, "abelian.flow_commutation", "moduli_commutator_tail"},
    {3, "conservation.remark_pairs", "cotangent_n3_h"},
    {3, "conservation.xi_r_law", "heisenberg_n3_h_tilde"},
    {3, "conservation.sphere_invariants", "sphere4_n3"},
    {4, "torus.periodicity", "double_n3_default"},
    {5, "isotropy.principal_points", "moduli_genus2_dd2"},
    {5, "isotropy.torus_freeness", "cotangent_n3_h"},
    {6, "identity.f1", "double_n3_default"},
    {6, "identity.commutator_solve", "double_n3_default"},
    {7, "structure.shifting_trick", "sphere4_n3"},
    {7, "structure.shifting_trick", "moduli_m1n1"},
    {7, "structure.momentum_condition", "moduli_m2n2"},
    {8, "gradient.phi_borel", "heisenberg_n3_h"},
    {9, "permutation.bracket_preservation", "moduli_m2n2"},
    {9, "permutation.pulled_back_abelian", "moduli_m2n2"},
};

const std::vector<std::string> kConfigs = {
    "cotangent_n3_h",   "cotangent_n3_h_tilde", "heisenberg_n3_h", "heisenberg_n3_h_tilde",
    "double_n2_minimal", "double_n3_default",   "double_n3_tilde", "sphere4_n3",
    "moduli_m1n1",      "moduli_genus2_dd2",    "moduli_m2n2",     "moduli_nested",
    "moduli_commutator_tail",
};

const char* kCriteria[] = {"",
                           "bracket-flow consistency",
                           "abelian families",
                           "conservation",
                           "torus structure",
                           "isotropy",
                           "identity (F1) and commutator solve",
                           "structural exactness",
                           "gradient oracles",
                           "permutation pushforward",
                           "CLI determinism, runtime, validation"};

std::filesystem::path config_path(const std::string& name) {
  return std::filesystem::path(HAMRED_CONFIG_DIR) / (name + ".json");
}

double ratio(const CheckResult& c) {
  if (c.comparison == Comparison::AtLeast) return c.residual > 0 ? c.tolerance / c.residual : INFINITY;
  if (c.tolerance == 0) return c.residual == 0 ? 0 : INFINITY;
  return c.residual / c.tolerance;
}

void print(int k, const Tally& t, const std::string& detail) {
  const bool ok = t.failed == 0 && t.missing.empty() && t.checks > 0;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << std::setw(2) << k << "  " << kCriteria[k] << ": " << detail
            << "\n";
  for (const auto& f : t.failures) std::cout << "       failed: " << f << "\n";
  for (const auto& m : t.missing) std::cout << "       not exercised: " << m << "\n";
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  std::map<int, Tally> tally;
  std::set<std::pair<std::string, std::string>> ran;
  std::string default_body;
  double default_seconds = 0;

  for (const auto& name : kConfigs) {
    const ScenarioConfig c = load_config(config_path(name));
    const auto t0 = clock::now();
    const VerificationReport r = run_scenario(c);
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    if (name == "double_n3_default") {
      default_body = emit_report(r, ReportFormat::Json);
      default_seconds = secs;
    }
    for (const auto& ch : r.checks) {
      Tally& t = tally[ch.criterion];
      ran.insert({ch.name, name});
      ++t.checks;
      t.configs.insert(name);
      t.worst_ratio = std::max(t.worst_ratio, ratio(ch));
      if (!ch.passed) {
        ++t.failed;
        std::ostringstream os;
        os << ch.name << " on " << name << ": residual " << ch.residual << " vs " << ch.tolerance
           << (ch.error.empty() ? "" : " (" + ch.error + ")");
        t.failures.push_back(os.str());
      }
    }
  }
  for (const auto& [k, check, cfg] : kRequired)
    if (!ran.count({check, cfg})) tally[k].missing.push_back(check + " on " + cfg);

  // Criterion 10: determinism, runtime of the default suite, validation clauses.
  Tally& t10 = tally[10];
  {
    const auto again = emit_report(run_scenario(load_config(config_path("double_n3_default"))), ReportFormat::Json);
    ++t10.checks;
    if (again != default_body) {
      ++t10.failed;
      t10.failures.push_back("double_n3_default report differs between two runs");
    }
    ++t10.checks;
    if (!(default_seconds < 60)) {
      ++t10.failed;
      t10.failures.push_back("double_n3_default took " + std::to_string(default_seconds) + " s");
    }
    for (const auto& v : cases::violations()) {
      ++t10.checks;
      std::string got = "accepted";
      try {
        parse_config(nlohmann::json::parse(v.config));
      } catch (const AssumptionViolation& e) {
        got = e.clause();
      } catch (const std::exception& e) {
        got = e.what();
      }
      if (got != v.clause) {
        ++t10.failed;
        t10.failures.push_back("expected clause '" + v.clause + "', got '" + got + "'");
      }
    }
  }

  bool all = true;
  for (int k = 1; k <= 10; ++k) {
    const Tally& t = tally[k];
    std::ostringstream d;
    if (k == 10) {
      d << "report stable across runs, default (double, n=3) suite " << std::fixed << std::setprecision(2)
        << default_seconds << " s, " << cases::violations().size() << " violation classes";
    } else {
      d << t.checks << " checks over " << t.configs.size() << " configs, worst residual/tolerance "
        << std::scientific << std::setprecision(2) << t.worst_ratio;
    }
    print(k, t, d.str());
    all = all && t.failed == 0 && t.missing.empty() && t.checks > 0;
  }
  std::cout << (all ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << "\n";
  return all ? 0 : 1;
}
