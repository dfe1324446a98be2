#include "hamred/scenario.hpp"

#include <chrono>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "space_model.hpp"

namespace hamred {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

[[noreturn]] void config_error(const std::string& field, const std::string& detail) {
  throw ConfigError("[" + field + "] " + detail);
}

int get_int(const json& j, const std::string& key, const std::string& field) {
  if (!j.contains(key)) config_error(field, "missing '" + key + "'");
  if (!j.at(key).is_number_integer()) config_error(field, "'" + key + "' must be an integer");
  return j.at(key).get<int>();
}

std::vector<int> int_list(const json& j, const std::string& field) {
  if (!j.is_array()) config_error(field, "expected a list of integers");
  std::vector<int> out;
  for (const auto& e : j) {
    if (!e.is_number_integer()) config_error(field, "expected a list of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

std::vector<Interval> interval_list(const json& j, const std::string& field) {
  if (!j.is_array()) config_error(field, "expected a list of [lo, hi] pairs");
  std::vector<Interval> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      config_error(field, "expected a list of [lo, hi] pairs");
    out.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  return out;
}

IntervalFamily parse_family(const json& j, int m, int n) {
  if (!j.is_object()) config_error("family", "expected an object");
  static const std::set<std::string> keys = {"I", "I_hat", "J", "nested", "commutator_blocks", "tails"};
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) config_error("family", "unknown key '" + k + "'");
  IntervalFamily f;
  f.m = m;
  f.n = n;
  if (j.contains("I")) f.I = int_list(j["I"], "family.I");
  if (j.contains("I_hat")) f.I_hat = int_list(j["I_hat"], "family.I_hat");
  if (j.contains("J")) f.J = interval_list(j["J"], "family.J");
  if (j.contains("nested")) {
    if (!j["nested"].is_array()) config_error("family.nested", "expected a list of interval lists");
    for (const auto& level : j["nested"]) f.nested.push_back(interval_list(level, "family.nested"));
  }
  if (j.contains("commutator_blocks")) f.commutator_blocks = interval_list(j["commutator_blocks"], "family.commutator_blocks");
  if (j.contains("tails"))
    for (const auto& iv : interval_list(j["tails"], "family.tails")) f.tails.push_back({iv.lo, iv.hi});
  return f;
}

// Class function or invariant function named in an export request.
struct FunctionSpec {
  bool invariant = false;
  ClassFunction cf{};
  InvariantFunction inv{};
};

FunctionSpec parse_function(const std::string& s, int n) {
  static const std::regex re(R"((chi|xi|phi)_(\d+)|(retr|imtr|pow)\^(\d+))");
  std::smatch mt;
  if (!std::regex_match(s, mt, re)) config_error("flow_exports.function", "unknown function '" + s + "'");
  FunctionSpec f;
  if (mt[1].matched) {
    const int j = std::stoi(mt[2]);
    if (j < 1 || j > n - 1) config_error("flow_exports.function", "alcove index out of range in '" + s + "'");
    if (mt[1] == "chi") f.cf = ClassFunction::chi(j - 1);
    if (mt[1] == "xi") f.cf = ClassFunction::xi(j - 1);
    if (mt[1] == "phi") {
      f.invariant = true;
      f.inv = InvariantFunction::phi(j - 1);
    }
  } else {
    const int k = std::stoi(mt[4]);
    if (k < 1) config_error("flow_exports.function", "power must be positive in '" + s + "'");
    if (mt[3] == "retr") f.cf = ClassFunction::re_power(k);
    if (mt[3] == "imtr") f.cf = ClassFunction::im_power(k);
    if (mt[3] == "pow") {
      f.invariant = true;
      f.inv = InvariantFunction::power(k);
    }
  }
  return f;
}

std::string family_label(const ScenarioConfig& c) {
  if (!(c.space == SpaceType::Moduli || c.space == SpaceType::Sphere4)) return c.tilde ? "h_tilde" : "h";
  std::string s;
  for (const auto& b : family_blocks(c.family.value_or(IntervalFamily::sphere()))) s += (s.empty() ? "" : " ") + b.label;
  return s;
}

std::string cmp_symbol(Comparison c) { return c == Comparison::AtMost ? "<=" : ">="; }

// Exact, locale-free rendering for the text report.
std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << std::scientific << v;
  return os.str();
}

detail::Generator export_generator(const ScenarioConfig& c, const detail::SpaceModel& model, const FlowExport& r) {
  const FunctionSpec f = parse_function(r.function, c.n);
  using HS = HamiltonianSpec;
  switch (c.space) {
    case SpaceType::Cotangent:
      return detail::from_spec(f.invariant ? HS::cotangent_phi(f.inv) : HS::cotangent_chi(f.cf));
    case SpaceType::Heisenberg:
      return detail::from_spec(f.invariant ? HS::heisenberg_phi(f.inv) : HS::heisenberg_chi(f.cf));
    case SpaceType::Double:
      if (f.invariant) config_error("flow_exports.function", "D(K) flows take class functions");
      if (r.block == 0) return detail::from_spec(HS::double_p1(f.cf));
      if (r.block == 1) return detail::from_spec(HS::double_p2(f.cf));
      if (r.block == 2) return detail::from_spec(HS::double_momentum(f.cf));
      config_error("flow_exports.block", "D(K) blocks are 0 (A), 1 (B), 2 ([A,B])");
    default: {
      if (f.invariant) config_error("flow_exports.function", "moduli flows take class functions");
      const auto blocks = family_blocks(model.family());
      if (r.block < 0 || r.block >= static_cast<int>(blocks.size()))
        config_error("flow_exports.block", "family has " + std::to_string(blocks.size()) + " blocks");
      const auto& b = blocks[r.block];
      return detail::from_word({b.block, b.first, b.last, f.cf, b.label});
    }
  }
}

}  // namespace

std::string space_name(SpaceType s) {
  switch (s) {
    case SpaceType::Cotangent: return "cotangent";
    case SpaceType::Heisenberg: return "heisenberg";
    case SpaceType::Double: return "double";
    case SpaceType::Moduli: return "moduli";
    case SpaceType::Sphere4: return "sphere4";
  }
  return "";
}

ScenarioConfig parse_config(const json& j) {
  if (!j.is_object()) config_error("config", "expected a JSON object");
  static const std::set<std::string> keys = {"space", "n", "family", "hamiltonians", "seed", "tolerances",
                                             "tol_scale", "checks", "samples", "flow_exports"};
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) config_error("config", "unknown key '" + k + "'");

  ScenarioConfig c;
  if (!j.contains("space")) config_error("space", "missing");
  const json& sp = j["space"];
  const std::string kind = sp.is_string() ? sp.get<std::string>()
                           : sp.is_object() && sp.contains("kind") && sp["kind"].is_string()
                               ? sp["kind"].get<std::string>()
                               : "";
  if (kind == "cotangent") c.space = SpaceType::Cotangent;
  else if (kind == "heisenberg") c.space = SpaceType::Heisenberg;
  else if (kind == "double") c.space = SpaceType::Double;
  else if (kind == "sphere4") c.space = SpaceType::Sphere4;
  else if (kind == "moduli") c.space = SpaceType::Moduli;
  else config_error("space", "expected cotangent, heisenberg, double, sphere4 or {\"kind\": \"moduli\", \"m\", \"n\"}");

  const bool is_moduli = c.space == SpaceType::Moduli || c.space == SpaceType::Sphere4;
  if (c.space == SpaceType::Moduli) {
    if (!sp.is_object()) config_error("space", "moduli needs m and n");
    c.m = get_int(sp, "m", "space");
    c.n_factors = get_int(sp, "n", "space");
    if (c.m < 0 || c.n_factors < 0 || c.m + c.n_factors == 0)
      config_error("space", "M_{m,n} needs m, n >= 0, not both 0");
  } else if (c.space == SpaceType::Sphere4) {
    c.m = 0;
    c.n_factors = 3;
  }

  c.n = j.contains("n") ? get_int(j, "n", "n") : 2;
  if (c.n < 2 || c.n > 8) config_error("n", "group size must lie in 2..8");

  if (j.contains("hamiltonians")) {
    if (is_moduli) config_error("hamiltonians", "the h / h_tilde choice applies to cotangent, heisenberg and double");
    const auto& h = j["hamiltonians"];
    if (h == "h") c.tilde = false;
    else if (h == "h_tilde") c.tilde = true;
    else config_error("hamiltonians", "expected \"h\" or \"h_tilde\"");
  }
  if (j.contains("family")) {
    if (!is_moduli) config_error("family", "interval families apply to moduli and sphere4 only");
    c.family = parse_family(j["family"], c.m, c.n_factors);
  } else if (c.space == SpaceType::Moduli) {
    config_error("family", "moduli spaces need an interval family");
  } else if (c.space == SpaceType::Sphere4) {
    c.family = IntervalFamily::sphere();
  }
  if (c.family) validate(*c.family);

  if (j.contains("seed")) {
    const auto& sd = j["seed"];
    if (!sd.is_number_unsigned() && !(sd.is_number_integer() && sd.get<std::int64_t>() >= 0))
      config_error("seed", "expected a non-negative 64-bit integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("tol_scale")) {
    if (!j["tol_scale"].is_number() || j["tol_scale"].get<double>() <= 0) config_error("tol_scale", "must be positive");
    c.tol_scale = j["tol_scale"].get<double>();
  }
  const auto names = all_check_names();
  auto known = [&](const std::string& s) { return std::find(names.begin(), names.end(), s) != names.end(); };
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) config_error("tolerances", "expected an object of check name to number");
    for (const auto& [k, v] : j["tolerances"].items()) {
      if (!known(k)) config_error("tolerances", "unknown check '" + k + "'");
      if (!v.is_number() || v.get<double>() < 0) config_error("tolerances", "tolerance of '" + k + "' must be >= 0");
      c.tolerances[k] = v.get<double>();
    }
  }
  if (j.contains("checks")) {
    if (!j["checks"].is_array()) config_error("checks", "expected a list of check names");
    for (const auto& e : j["checks"]) {
      if (!e.is_string() || !known(e.get<std::string>())) config_error("checks", "unknown check " + e.dump());
      c.checks.push_back(e.get<std::string>());
    }
  }
  if (j.contains("samples")) {
    const auto& s = j["samples"];
    if (!s.is_object()) config_error("samples", "expected {points, probes}");
    if (s.contains("points")) c.points = get_int(s, "points", "samples");
    if (s.contains("probes")) c.probes = get_int(s, "probes", "samples");
    if (c.points < 1 || c.probes < 1) config_error("samples", "points and probes must be positive");
  }
  if (j.contains("flow_exports")) {
    if (!j["flow_exports"].is_array()) config_error("flow_exports", "expected a list");
    for (const auto& e : j["flow_exports"]) {
      if (!e.is_object()) config_error("flow_exports", "expected objects");
      FlowExport r;
      if (e.contains("hamiltonian")) {
        const auto& h = e["hamiltonian"];
        if (h.contains("function")) r.function = h["function"].get<std::string>();
        if (h.contains("block")) r.block = get_int(h, "block", "flow_exports.block");
      }
      parse_function(r.function, c.n);
      if (e.contains("times")) {
        const auto& t = e["times"];
        r.start = t.value("start", 0.0);
        r.stop = t.value("stop", 1.0);
        r.steps = t.value("steps", 10);
        if (r.steps < 0) config_error("flow_exports.times", "steps must be >= 0");
        if (r.steps > 1 && !(r.stop > r.start)) config_error("flow_exports.times", "stop must exceed start");
      }
      if (e.contains("point")) {
        const auto p = e["point"].get<std::string>();
        if (p != "random" && p != "principal") config_error("flow_exports.point", "expected random or principal");
        r.principal = p == "principal";
      }
      if (e.contains("file")) r.file = e["file"].get<std::string>();
      c.exports.push_back(r);
    }
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("[config] cannot open " + p.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("[config] " + p.string() + ": " + e.what());
  }
  return parse_config(j);
}

bool VerificationReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

std::vector<std::string> all_check_names() {
  std::vector<std::string> out;
  for (const auto& d : detail::check_catalog()) out.push_back(d.name);
  return out;
}

std::vector<std::string> suite_for(const ScenarioConfig& c) {
  const detail::SpaceModel model(c);
  std::vector<std::string> out;
  for (const auto& d : detail::check_catalog()) {
    const bool requested = c.checks.empty() || std::find(c.checks.begin(), c.checks.end(), d.name) != c.checks.end();
    if (requested && d.applies(model)) out.push_back(d.name);
  }
  return out;
}

VerificationReport run_scenario(const ScenarioConfig& c) {
  using clock = std::chrono::steady_clock;
  const detail::SpaceModel model(c);
  VerificationReport rep;
  rep.seed = c.seed;
  rep.n = c.n;
  rep.space = c.space == SpaceType::Moduli
                  ? "moduli(" + std::to_string(c.m) + "," + std::to_string(c.n_factors) + ")"
                  : space_name(c.space);
  rep.family = family_label(c);
  const auto t_all = clock::now();
  const auto suite = suite_for(c);
  for (const auto& d : detail::check_catalog()) {
    if (std::find(suite.begin(), suite.end(), d.name) == suite.end()) continue;
    CheckResult r;
    r.name = d.name;
    r.tag = d.tag;
    r.criterion = d.criterion;
    r.comparison = d.comparison;
    const double base = c.tolerances.count(d.name) ? c.tolerances.at(d.name) : d.tolerance;
    r.tolerance = d.comparison == Comparison::AtMost ? base * c.tol_scale : base / c.tol_scale;
    Rng rng(fnv1a(d.name) ^ c.seed);
    detail::CheckContext ctx{c, model, rng};
    const auto t0 = clock::now();
    try {
      const auto o = d.run(ctx);
      r.residual = o.residual;
      r.note = o.note;
      r.passed = std::isfinite(o.residual) &&
                 (d.comparison == Comparison::AtMost ? o.residual <= r.tolerance : o.residual >= r.tolerance);
    } catch (const std::exception& e) {
      r.passed = false;
      r.error = e.what();
    }
    rep.timing[d.name] = std::chrono::duration<double>(clock::now() - t0).count();
    rep.checks.push_back(std::move(r));
  }
  rep.timing["total"] = std::chrono::duration<double>(clock::now() - t_all).count();
  return rep;
}

std::string emit_report(const VerificationReport& r, ReportFormat f, bool with_timing) {
  int passed = 0;
  for (const auto& c : r.checks) passed += c.passed;
  const int failed = static_cast<int>(r.checks.size()) - passed;
  if (f == ReportFormat::Text) {
    std::ostringstream os;
    os << "schema " << r.schema_version << " space=" << r.space << " n=" << r.n << " seed=" << r.seed
       << " family=" << r.family << "\n";
    for (const auto& c : r.checks) {
      os << (c.passed ? "PASS " : "FAIL ") << c.name << " [" << c.tag << ", criterion " << c.criterion
         << "] residual=" << num(c.residual) << " " << cmp_symbol(c.comparison) << " " << num(c.tolerance);
      if (!c.error.empty()) os << " error: " << c.error;
      os << "\n";
    }
    os << "summary: " << passed << " passed, " << failed << " failed\n";
    if (with_timing)
      for (const auto& [k, v] : r.timing) os << "time " << k << " " << num(v) << " s\n";
    return os.str();
  }
  ojson j;
  j["schema_version"] = r.schema_version;
  j["environment"] = {{"space", r.space}, {"n", r.n}, {"seed", r.seed}, {"family", r.family}};
  j["summary"] = {{"passed", passed}, {"failed", failed}};
  j["checks"] = ojson::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"name", c.name},
                           {"tag", c.tag},
                           {"criterion", c.criterion},
                           {"residual", c.residual},
                           {"comparison", cmp_symbol(c.comparison)},
                           {"tolerance", c.tolerance},
                           {"passed", c.passed},
                           {"note", c.note},
                           {"error", c.error}});
  if (with_timing) j["timing"] = r.timing;
  return j.dump(2) + "\n";
}

VerificationReport parse_report(const std::string& text) {
  const json j = json::parse(text);
  VerificationReport r;
  r.schema_version = j.at("schema_version").get<std::string>();
  const auto& env = j.at("environment");
  r.space = env.at("space").get<std::string>();
  r.n = env.at("n").get<int>();
  r.seed = env.at("seed").get<std::uint64_t>();
  r.family = env.at("family").get<std::string>();
  for (const auto& e : j.at("checks")) {
    CheckResult c;
    c.name = e.at("name").get<std::string>();
    c.tag = e.at("tag").get<std::string>();
    c.criterion = e.at("criterion").get<int>();
    c.residual = e.at("residual").get<double>();
    c.comparison = e.at("comparison").get<std::string>() == "<=" ? Comparison::AtMost : Comparison::AtLeast;
    c.tolerance = e.at("tolerance").get<double>();
    c.passed = e.at("passed").get<bool>();
    c.note = e.at("note").get<std::string>();
    c.error = e.at("error").get<std::string>();
    r.checks.push_back(std::move(c));
  }
  if (j.contains("timing")) r.timing = j["timing"].get<std::map<std::string, double>>();
  return r;
}

ExportResult export_trajectory(const ScenarioConfig& c, const FlowExport& req, const std::filesystem::path& dir) {
  const detail::SpaceModel model(c);
  const detail::Generator g = export_generator(c, model, req);
  Rng rng(fnv1a("export:" + req.file) ^ c.seed);
  const PhasePoint x0 = req.principal ? model.crafted() : model.sample(rng);

  std::vector<double> times;
  for (int k = 0; k < req.steps; ++k)
    times.push_back(req.steps == 1 ? req.start : req.start + (req.stop - req.start) * k / (req.steps - 1));
  const Trajectory tr = integrate_trajectory(x0, g.flow, times, model.momenta());

  ExportResult out;
  std::filesystem::create_directories(dir);
  out.path = dir / req.file;
  std::ofstream os(out.path);
  if (!os) throw ConfigError("[flow_exports.file] cannot write " + out.path.string());
  os.precision(17);

  const int n = point_dim(x0), slots = slot_count(x0);
  os << "tau";
  for (int s = 0; s < slots; ++s)
    for (int r = 0; r < n; ++r)
      for (int col = 0; col < n; ++col)
        os << ",s" << s << "_" << r << col << "_re,s" << s << "_" << r << col << "_im";
  os << ",H";
  for (const auto& q : model.momenta()) os << ",dev_" << q.name;
  os << "\n";

  std::vector<Mat> ref;
  for (const auto& q : model.momenta()) ref.push_back(q.eval(x0));
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const PhasePoint& x = tr.points[k];
    os << tr.times[k];
    const Vec v = flatten(x);
    for (int i = 0; i < v.size(); ++i) os << "," << v(i);
    os << "," << g.H(x);
    for (std::size_t q = 0; q < ref.size(); ++q) os << "," << (model.momenta()[q].eval(x) - ref[q]).norm();
    os << "\n";
  }
  if (!os) throw ConfigError("[flow_exports.file] write failed for " + out.path.string());
  out.rows = static_cast<int>(tr.times.size());
  out.max_deviation = tr.conserved;
  return out;
}

}  // namespace hamred
