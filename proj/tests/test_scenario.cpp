#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hamred/scenario.hpp"
#include "validation_cases.hpp"

using namespace hamred;
using nlohmann::json;

namespace {

ScenarioConfig small_double(std::uint64_t seed) {
  ScenarioConfig c = parse_config(json{{"space", "double"}, {"n", 2}, {"seed", seed}});
  c.points = 4;
  c.probes = 4;
  c.checks = {"abelian.brackets", "conservation.momentum", "flow.bracket_consistency", "torus.additivity"};
  return c;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path& p, std::vector<std::string>& header) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  header.clear();
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) header.push_back(cell);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> r;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) r.push_back(std::stod(cell));
    rows.push_back(r);
  }
  return rows;
}

std::filesystem::path scratch(const std::string& name) {
  const auto d = std::filesystem::temp_directory_path() / ("hamred_test_" + name);
  std::filesystem::remove_all(d);
  return d;
}

}  // namespace

TEST(Config, DefaultsAndOverrides) {
  const auto c = parse_config(json::parse(R"({"space":"heisenberg","n":4,"hamiltonians":"h_tilde","seed":9,
      "tol_scale":2,"tolerances":{"torus.additivity":1e-7},"samples":{"points":21,"probes":9}})"));
  EXPECT_EQ(c.space, SpaceType::Heisenberg);
  EXPECT_EQ(c.n, 4);
  EXPECT_TRUE(c.tilde);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.tol_scale, 2.0);
  EXPECT_EQ(c.tolerances.at("torus.additivity"), 1e-7);
  EXPECT_EQ(c.points, 21);
  EXPECT_EQ(c.probes, 9);

  const auto s = parse_config(json{{"space", "sphere4"}, {"n", 3}});
  EXPECT_EQ(s.m, 0);
  EXPECT_EQ(s.n_factors, 3);
  ASSERT_TRUE(s.family.has_value());
  ASSERT_EQ(s.family->J.size(), 1u);
  EXPECT_EQ(s.family->J[0].lo, 1);
  EXPECT_EQ(s.family->J[0].hi, 2);
}

TEST(Config, RejectsMalformedFields) {
  const std::vector<std::pair<std::string, std::string>> bad = {
      {R"({"space":"double","colour":1})", "[config]"},
      {R"({"n":3})", "[space]"},
      {R"({"space":"torus"})", "[space]"},
      {R"({"space":"double","n":9})", "[n]"},
      {R"({"space":"double","n":1})", "[n]"},
      {R"({"space":"double","hamiltonians":"h_hat"})", "[hamiltonians]"},
      {R"({"space":"sphere4","hamiltonians":"h"})", "[hamiltonians]"},
      {R"({"space":"double","family":{"I":[1]}})", "[family]"},
      {R"({"space":{"kind":"moduli","m":1,"n":1}})", "[family]"},
      {R"({"space":{"kind":"moduli","m":1,"n":1},"family":{"K":[1]}})", "[family]"},
      {R"({"space":"double","seed":-3})", "[seed]"},
      {R"({"space":"double","tol_scale":0})", "[tol_scale]"},
      {R"({"space":"double","tolerances":{"no.such":1}})", "[tolerances]"},
      {R"({"space":"double","checks":["no.such"]})", "[checks]"},
      {R"({"space":"double","flow_exports":[{"hamiltonian":{"function":"sin_1"}}]})", "[flow_exports"},
  };
  for (const auto& [text, field] : bad) {
    try {
      parse_config(json::parse(text));
      ADD_FAILURE() << "accepted " << text;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << text << " -> " << e.what();
    }
  }
}

TEST(Config, EachFamilyViolationNamesItsClause) {
  for (const auto& v : cases::violations()) {
    try {
      parse_config(json::parse(v.config));
      ADD_FAILURE() << "accepted " << v.config;
    } catch (const AssumptionViolation& e) {
      EXPECT_EQ(e.clause(), v.clause) << v.config;
    }
  }
}

TEST(Config, ShippedConfigsLoad) {
  for (const auto& e : std::filesystem::directory_iterator(HAMRED_CONFIG_DIR)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("invalid_", 0) == 0) {
      EXPECT_THROW(load_config(e.path()), AssumptionViolation) << name;
    } else {
      EXPECT_NO_THROW(load_config(e.path())) << name;
    }
  }
}

TEST(Suite, SelectionFollowsSpace) {
  const auto all = all_check_names();
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
  const auto dbl = suite_for(parse_config(json{{"space", "double"}}));
  const auto sph = suite_for(parse_config(json{{"space", "sphere4"}, {"n", 3}}));
  auto has = [](const std::vector<std::string>& s, const std::string& n) {
    return std::find(s.begin(), s.end(), n) != s.end();
  };
  EXPECT_FALSE(has(dbl, "structure.shifting_trick"));
  EXPECT_TRUE(has(sph, "structure.shifting_trick"));
  EXPECT_TRUE(has(sph, "conservation.sphere_invariants"));
  EXPECT_TRUE(has(dbl, "structure.momentum_condition"));
  EXPECT_FALSE(has(suite_for(parse_config(json{{"space", "cotangent"}})), "structure.momentum_condition"));
}

TEST(Report, DeterministicForFixedSeed) {
  const auto a = emit_report(run_scenario(small_double(5)), ReportFormat::Json);
  const auto b = emit_report(run_scenario(small_double(5)), ReportFormat::Json);
  EXPECT_EQ(a, b);
  const auto c = emit_report(run_scenario(small_double(6)), ReportFormat::Json);
  EXPECT_NE(a, c);
}

TEST(Report, JsonRoundTripIsExact) {
  VerificationReport r = run_scenario(small_double(11));
  const auto text = emit_report(r, ReportFormat::Json, true);
  const VerificationReport q = parse_report(text);
  ASSERT_EQ(q.checks.size(), r.checks.size());
  for (std::size_t k = 0; k < r.checks.size(); ++k) {
    EXPECT_EQ(q.checks[k].name, r.checks[k].name);
    EXPECT_EQ(q.checks[k].residual, r.checks[k].residual);
    EXPECT_EQ(q.checks[k].tolerance, r.checks[k].tolerance);
    EXPECT_EQ(q.checks[k].passed, r.checks[k].passed);
    EXPECT_EQ(q.checks[k].criterion, r.checks[k].criterion);
  }
  EXPECT_EQ(q.seed, r.seed);
  EXPECT_EQ(q.timing.size(), r.timing.size());
  EXPECT_EQ(emit_report(q, ReportFormat::Json, true), text);

  const auto j = json::parse(text);
  EXPECT_EQ(j.at("schema_version"), kReportSchemaVersion);
  EXPECT_EQ(j.at("environment").at("space"), "double");
}

TEST(Report, TimingStaysOutOfTheBody) {
  const auto r = run_scenario(small_double(3));
  EXPECT_FALSE(r.timing.empty());
  EXPECT_FALSE(json::parse(emit_report(r, ReportFormat::Json)).contains("timing"));
}

TEST(Report, TextHasOneLinePerCheck) {
  const auto r = run_scenario(small_double(2));
  const auto ls = lines_of(emit_report(r, ReportFormat::Text));
  ASSERT_EQ(ls.size(), r.checks.size() + 2);
  EXPECT_NE(ls.front().find("schema " + std::string(kReportSchemaVersion)), std::string::npos);
  for (std::size_t k = 0; k < r.checks.size(); ++k) {
    EXPECT_EQ(ls[k + 1].rfind(r.checks[k].passed ? "PASS " : "FAIL ", 0), 0u);
    EXPECT_NE(ls[k + 1].find(r.checks[k].name), std::string::npos);
  }
  EXPECT_EQ(ls.back().rfind("summary:", 0), 0u);
}

TEST(Report, TolScaleMultipliesTolerances) {
  ScenarioConfig c = small_double(1);
  const auto base = run_scenario(c);
  c.tol_scale = 10;
  const auto scaled = run_scenario(c);
  for (std::size_t k = 0; k < base.checks.size(); ++k)
    EXPECT_DOUBLE_EQ(scaled.checks[k].tolerance, 10 * base.checks[k].tolerance);
}

TEST(Export, EmptyGridGivesHeaderOnly) {
  const auto dir = scratch("empty");
  ScenarioConfig c = parse_config(json{{"space", "double"}, {"n", 2}, {"seed", 1}});
  FlowExport req;
  req.steps = 0;
  req.file = "empty.csv";
  const auto res = export_trajectory(c, req, dir);
  EXPECT_EQ(res.rows, 0);
  std::vector<std::string> header;
  EXPECT_TRUE(read_csv(res.path, header).empty());
  ASSERT_FALSE(header.empty());
  EXPECT_EQ(header.front(), "tau");
  EXPECT_EQ(header[header.size() - 2], "H");
  std::filesystem::remove_all(dir);
}

TEST(Export, ChiFlowOnSU2DoubleIsPeriodic) {
  const auto dir = scratch("periodic");
  ScenarioConfig c = parse_config(json{{"space", "double"}, {"n", 2}, {"seed", 42}});
  FlowExport req;
  req.function = "chi_1";
  req.block = 0;
  req.start = 0;
  req.stop = 2 * std::numbers::pi;
  req.steps = 65;
  req.file = "chi1.csv";
  const auto res = export_trajectory(c, req, dir);
  EXPECT_EQ(res.rows, 65);

  std::vector<std::string> header;
  const auto rows = read_csv(res.path, header);
  ASSERT_EQ(rows.size(), 65u);
  // tau, 2 slots of 2x2 complex entries, H, one deviation column.
  ASSERT_EQ(header.size(), 1u + 16u + 2u);
  EXPECT_EQ(header.back(), "dev_Phi");
  EXPECT_DOUBLE_EQ(rows.back()[0], 2 * std::numbers::pi);
  for (std::size_t k = 1; k + 2 < header.size(); ++k) EXPECT_NEAR(rows.back()[k], rows.front()[k], 1e-8) << header[k];

  double hmax = 0, dev = 0;
  for (const auto& r : rows) {
    hmax = std::max(hmax, std::abs(r[17] - rows.front()[17]));
    dev = std::max(dev, r[18]);
  }
  EXPECT_LT(hmax, 1e-10);
  EXPECT_DOUBLE_EQ(dev, res.max_deviation.at("Phi"));
  EXPECT_LT(dev, 1e-10);
  std::filesystem::remove_all(dir);
}

TEST(Export, SameRequestSameFile) {
  const auto d1 = scratch("det1"), d2 = scratch("det2");
  ScenarioConfig c = parse_config(json{{"space", "sphere4"}, {"n", 3}, {"seed", 4}});
  FlowExport req;
  req.function = "retr^2";
  req.steps = 7;
  req.file = "s.csv";
  const auto a = export_trajectory(c, req, d1), b = export_trajectory(c, req, d2);
  std::ifstream ia(a.path), ib(b.path);
  std::stringstream sa, sb;
  sa << ia.rdbuf();
  sb << ib.rdbuf();
  EXPECT_EQ(sa.str(), sb.str());
  std::filesystem::remove_all(d1);
  std::filesystem::remove_all(d2);
}
