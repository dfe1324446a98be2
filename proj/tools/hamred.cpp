// Command-line front end: verify, flow, report.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hamred/scenario.hpp"

using namespace hamred;

namespace {

std::filesystem::path out_dir() {
  const char* d = std::getenv("HAMRED_OUT_DIR");
  return d && *d ? std::filesystem::path(d) : std::filesystem::path(".");
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> n;
  double tol_scale = 1.0;
};

ScenarioConfig load(const std::string& path, const Overrides& o) {
  ScenarioConfig c = load_config(path);
  if (o.seed) c.seed = *o.seed;
  if (o.n) {
    if (*o.n < 2 || *o.n > 8) throw ConfigError("[n] group size must lie in 2..8");
    c.n = *o.n;
  }
  if (!(o.tol_scale > 0)) throw ConfigError("[tol_scale] must be positive");
  c.tol_scale *= o.tol_scale;
  return c;
}

void write_file(const std::filesystem::path& p, const std::string& body) {
  std::filesystem::create_directories(p.parent_path().empty() ? "." : p.parent_path());
  std::ofstream os(p);
  os << body;
  if (!os) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hamred: seeded verification of Hamiltonian reduction identities"};
  app.require_subcommand(1);

  Overrides ov;
  std::string config, format = "text", input;
  bool timing = false;

  auto add_overrides = [&](CLI::App* s) {
    s->add_option("config", config, "scenario config (JSON)")->required()->check(CLI::ExistingFile);
    s->add_option("--seed", ov.seed, "root seed");
    s->add_option("--n", ov.n, "group size n of SU(n)");
    s->add_option("--tol-scale", ov.tol_scale, "multiply every tolerance");
  };

  auto* verify = app.add_subcommand("verify", "run the check suite of a config");
  add_overrides(verify);
  verify->add_option("--format", format, "stdout format")->check(CLI::IsMember({"json", "text"}));
  verify->add_flag("--timing", timing, "include per-check timing");

  auto* flow = app.add_subcommand("flow", "export the trajectories requested by a config as CSV");
  add_overrides(flow);

  auto* report = app.add_subcommand("report", "re-emit a stored JSON report");
  report->add_option("input", input, "report.json written by verify (default: $HAMRED_OUT_DIR/report.json)");
  report->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      const ScenarioConfig c = load(config, ov);
      const VerificationReport r = run_scenario(c);
      std::cout << emit_report(r, format == "json" ? ReportFormat::Json : ReportFormat::Text, timing);
      if (std::getenv("HAMRED_OUT_DIR")) {
        write_file(out_dir() / "report.json", emit_report(r, ReportFormat::Json));
        write_file(out_dir() / "timing.json", nlohmann::json(r.timing).dump(2) + "\n");
      }
      return r.all_passed() ? 0 : 1;
    }
    if (flow->parsed()) {
      const ScenarioConfig c = load(config, ov);
      if (c.exports.empty()) std::cerr << "config has no flow_exports\n";
      for (const auto& req : c.exports) {
        const auto res = export_trajectory(c, req, out_dir());
        std::cout << res.path.string() << ": " << res.rows << " rows";
        for (const auto& [k, v] : res.max_deviation) std::cout << ", max dev " << k << " = " << v;
        std::cout << "\n";
      }
      return 0;
    }
    if (report->parsed()) {
      const std::filesystem::path p = input.empty() ? out_dir() / "report.json" : std::filesystem::path(input);
      std::ifstream in(p);
      if (!in) throw ConfigError("[report] cannot open " + p.string());
      std::stringstream ss;
      ss << in.rdbuf();
      const VerificationReport r = parse_report(ss.str());
      std::cout << emit_report(r, format == "json" ? ReportFormat::Json : ReportFormat::Text, !r.timing.empty());
      return r.all_passed() ? 0 : 1;
    }
  } catch (const AssumptionViolation& e) {
    std::cerr << "invalid family: clause '" << e.clause() << "': " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 2;
}
