#include "zklab/cli.hpp"

#include <fftw3.h>

#include <Eigen/Core>
#include <algorithm>
#include <filesystem>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "zklab/estimates.hpp"
#include "zklab/report_io.hpp"
#include "zklab/solver.hpp"

#ifndef ZKLAB_VERSION
#define ZKLAB_VERSION "0.0.0"
#endif

namespace zk {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

// Scope tokens: commands "solve", "report", "resonance-cmd", "verify" and the
// verify families.
const char* const kStrichartz = "str1 str2 l4 lpq";
const char* const kBilinear = "bil1 bil2 bil3 bil4";

struct KeyDef {
  std::string name, type, help;
  std::string scope;  ///< space separated tokens; "*" for every command
};

const std::vector<KeyDef>& key_defs() {
  static const std::vector<KeyDef> defs = [] {
    const std::string str = kStrichartz, bil = kBilinear;
    const std::string ensembles = "linear key " + str + " " + bil;
    return std::vector<KeyDef>{
        {"command", "string", "solve | verify | resonance | report", "*"},
        {"family", "string", "verify family", "verify"},
        {"output_dir", "string", "artifact directory", "*"},
        {"seed", "integer", "64-bit seed", "*"},
        {"nx", "integer", "grid points in x", "solve"},
        {"ny", "integer", "grid points in y", "solve"},
        {"T", "number", "final time (solve) or cutoff scale (estimates)",
         "solve linear key " + str + " " + bil},
        {"nt", "integer", "time panels (solve) or time samples (estimates)", "solve key " + str + " " + bil},
        {"amplitude", "number", "initial data amplitude", "solve"},
        {"init", "string", "initial data: cos (cos x cos y) or random", "solve"},
        {"method", "string", "picard or rk4", "solve"},
        {"max_picard_iters", "integer", "Picard iteration cap", "solve"},
        {"picard_tol", "number", "Picard stopping tolerance", "solve"},
        {"nonlinearity", "boolean", "include the quadratic term", "solve"},
        {"stride", "integer", "write every stride-th time sample", "solve"},
        {"band", "integer", "band limit for random initial data", "solve"},
        {"max_l2_drift", "number", "fail if the relative L2 drift exceeds this", "solve"},
        {"max_energy_drift", "number", "fail if the relative energy drift exceeds this", "solve"},
        {"s", "number", "spatial regularity", "linear key"},
        {"b", "number", "modulation exponent", "linear key " + str + " " + bil},
        {"b_prime", "number", "dual modulation exponent", "linear key"},
        {"p", "number", "time exponent", str},
        {"q", "number", "space exponent", str},
        {"k_min", "integer", "smallest dyadic index", bil},
        {"k_max", "integer", "largest dyadic index", bil},
        {"s0", "number", "output Bessel exponent", "bil4"},
        {"s1", "number", "first factor Bessel exponent", "bil4"},
        {"s2", "number", "second factor Bessel exponent", "bil4"},
        {"ensemble", "integer", "ensemble size", ensembles},
        {"samples", "integer", "random triples per kind", "resonance regions resonance-cmd"},
        {"max_frequency", "number", "frequency box for random triples", "resonance regions resonance-cmd"},
        {"c0", "number", "region comparison constant", "regions key resonance-cmd"},
        {"modulation", "number", "forcing modulation c in cos(c t / T)", "linear"},
        {"max_modulation", "number", "largest temporal modulation", "key"},
        {"inputs", "strings", "report.json files or directories", "report"},
    };
  }();
  return defs;
}

const std::set<std::string> kCommands{"solve", "verify", "resonance", "report"};
const std::set<std::string> kFamilies{"linear", "str1", "str2", "l4",  "lpq",       "bil1",
                                      "bil2",   "bil3", "bil4", "key", "resonance", "regions"};

bool type_matches(const std::string& type, const nlohmann::json& v) {
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "strings") {
    if (!v.is_array()) return false;
    return std::all_of(v.begin(), v.end(), [](const auto& e) { return e.is_string(); });
  }
  return false;
}

bool in_scope(const std::string& scope, const std::string& context, const std::string& command) {
  if (scope == "*") return true;
  std::istringstream in(scope);
  for (std::string tok; in >> tok;)
    if (tok == context || tok == command) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Family configs

Ensemble ensemble_of(const RunConfig& c, Ensemble e) {
  e.size = c.get<int>("ensemble", e.size);
  e.seed = c.seed();
  return e;
}

LinearLemmaConfig linear_config(const RunConfig& c) {
  LinearLemmaConfig k;
  k.spec.s = c.get("s", k.spec.s);
  k.spec.b = c.get("b", k.spec.b);
  k.spec.b_prime = c.get("b_prime", k.spec.b_prime);
  k.T = c.get("T", k.T);
  k.modulation = c.get("modulation", k.modulation);
  k.ensemble = ensemble_of(c, k.ensemble);
  return k;
}

StrichartzConfig strichartz_config(const RunConfig& c, StrichartzFamily f) {
  StrichartzConfig k = StrichartzConfig::defaults(f);
  k.p = c.get("p", k.p);
  k.q = c.get("q", k.q);
  k.b = c.get("b", k.b);
  k.T = c.get("T", k.T);
  k.nt = c.get("nt", k.nt);
  k.ensemble = ensemble_of(c, k.ensemble);
  return k;
}

BilinearConfig bilinear_config(const RunConfig& c, BilinearFamily f) {
  BilinearConfig k;
  k.which = f;
  k.k_min = c.get("k_min", k.k_min);
  k.k_max = c.get("k_max", k.k_max);
  k.b = c.get("b", k.b);
  k.T = c.get("T", k.T);
  k.s0 = c.get("s0", k.s0);
  k.s1 = c.get("s1", k.s1);
  k.s2 = c.get("s2", k.s2);
  k.nt = c.get("nt", k.nt);
  k.ensemble = ensemble_of(c, k.ensemble);
  return k;
}

KeyEstimateConfig key_config(const RunConfig& c) {
  KeyEstimateConfig k;
  k.s = c.get("s", k.s);
  k.b = c.get("b", k.b);
  k.b_prime = c.get("b_prime", k.b_prime);
  k.T = c.get("T", k.T);
  k.max_modulation = c.get("max_modulation", k.max_modulation);
  k.nt = c.get("nt", k.nt);
  k.c0 = c.get("c0", k.c0);
  k.ensemble = ensemble_of(c, k.ensemble);
  return k;
}

ResonanceConfig resonance_config(const RunConfig& c) {
  ResonanceConfig k;
  k.samples = c.get("samples", k.samples);
  k.max_frequency = c.get("max_frequency", k.max_frequency);
  k.seed = c.seed();
  return k;
}

RegionConfig region_config(const RunConfig& c) {
  RegionConfig k;
  k.samples = c.get("samples", k.samples);
  k.max_frequency = static_cast<int>(c.get<double>("max_frequency", k.max_frequency));
  k.c0 = c.get("c0", k.c0);
  k.seed = c.seed();
  return k;
}

using Job = std::function<EstimateReport()>;

// Validated jobs for a verify family; nothing is computed here.
std::vector<Job> verify_jobs(const RunConfig& c, const std::string& family) {
  if (family == "linear") {
    auto k = linear_config(c);
    k.validate();
    return {[k] { return verify_linear_lemma(k); }};
  }
  for (auto f : {StrichartzFamily::str1, StrichartzFamily::str2, StrichartzFamily::l4, StrichartzFamily::lpq})
    if (family == to_string(f)) {
      auto k = strichartz_config(c, f);
      k.validate();
      return {[k] { return verify_strichartz(k); }};
    }
  for (auto f : {BilinearFamily::bil1, BilinearFamily::bil2, BilinearFamily::bil3, BilinearFamily::bil4})
    if (family == to_string(f)) {
      auto k = bilinear_config(c, f);
      k.validate();
      return {[k] { return verify_bilinear(k); }};
    }
  if (family == "key") {
    auto k = key_config(c);
    k.validate();
    return {[k] { return verify_key_estimate(k); }};
  }
  if (family == "resonance") {
    auto k = resonance_config(c);
    k.validate();
    return {[k] { return verify_resonance(k); }};
  }
  if (family == "regions") {
    auto k = region_config(c);
    k.validate();
    return {[k] { return verify_regions(k); }};
  }
  throw UsageError("unknown family '" + family + "'");
}

// ---------------------------------------------------------------------------
// Artifacts

ojson meta_json(const RunConfig& c) {
  nlohmann::json echo = c.values;  // sorted keys
  echo.erase("output_dir");
  ojson m;
  m["schema_version"] = kReportSchemaVersion;
  m["tool"] = "zklab";
  m["command"] = c.command();
  m["seed"] = c.seed();
  m["config"] = echo;
  m["versions"] = {{"zklab", ZKLAB_VERSION},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                 "." + std::to_string(EIGEN_MINOR_VERSION)},
                   {"fftw", std::string(fftw_version)},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                   {"compiler", std::string(__VERSION__)}};
  return m;
}

fs::path prepare_output_dir(const RunConfig& c) {
  const fs::path dir = c.output_dir();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw UsageError("cannot create output directory '" + dir.string() + "'");
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path.string() + "'");
  f << text;
  if (!f.flush()) throw UsageError("write failed for '" + path.string() + "'");
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

ojson report_document(const RunConfig& c, const std::vector<EstimateReport>& reports) {
  ojson doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["command"] = c.command();
  if (c.command() == "verify") doc["family"] = c.family();
  doc["seed"] = c.seed();
  bool ok = true;
  auto arr = ojson::array();
  for (const auto& r : reports) {
    ok = ok && r.passed();
    arr.push_back(to_json(r));
  }
  doc["passed"] = ok;
  doc["reports"] = arr;
  return doc;
}

void print_summary(std::ostream& out, const EstimateReport& r) {
  out << r.name << ": " << (r.passed() ? "PASS" : "FAIL") << "  max_ratio=" << format_double(r.max_ratio)
      << "  refinement_drift=" << format_double(r.refinement_drift);
  if (r.scaling_slope) out << "  slope=" << format_double(*r.scaling_slope);
  out << '\n';
  for (const auto& ch : r.checks)
    out << "  [" << (ch.passed ? "ok" : "FAIL") << "] " << ch.name << ' ' << format_double(ch.value) << ' '
        << ch.relation << ' ' << format_double(ch.bound) << '\n';
}

int finish_reports(const RunConfig& c, const fs::path& dir, const std::vector<EstimateReport>& reports,
                   std::ostream& out) {
  const ojson doc = report_document(c, reports);
  write_file(dir / "report.json", dump(doc));
  std::ostringstream csv;
  write_ratios_csv(csv, reports);
  write_file(dir / "report.csv", csv.str());
  for (const auto& r : reports) print_summary(out, r);
  return doc["passed"].get<bool>() ? exit_pass : exit_threshold;
}

// ---------------------------------------------------------------------------
// Commands

int run_verify(const RunConfig& c, std::ostream& out) {
  if (!c.has("family")) throw UsageError("verify: --family is required");
  const auto jobs = verify_jobs(c, c.family());
  const fs::path dir = prepare_output_dir(c);
  write_file(dir / "meta.json", dump(meta_json(c)));
  std::vector<EstimateReport> reports;
  for (const auto& job : jobs) reports.push_back(job());
  return finish_reports(c, dir, reports, out);
}

int run_resonance(const RunConfig& c, std::ostream& out) {
  auto rk = resonance_config(c);
  auto gk = region_config(c);
  rk.validate();
  gk.validate();
  const fs::path dir = prepare_output_dir(c);
  write_file(dir / "meta.json", dump(meta_json(c)));
  return finish_reports(c, dir, {verify_resonance(rk), verify_regions(gk)}, out);
}

int run_solve(const RunConfig& c, std::ostream& out) {
  SolveConfig sc;
  sc.grid = Grid2(c.get("nx", 32), c.get("ny", 32));
  sc.T = c.get("T", sc.T);
  sc.nt = c.get("nt", sc.nt);
  sc.max_picard_iters = c.get("max_picard_iters", sc.max_picard_iters);
  sc.picard_tol = c.get("picard_tol", sc.picard_tol);
  sc.nonlinearity_on = c.get("nonlinearity", sc.nonlinearity_on);
  sc.validate();
  const double amplitude = c.get("amplitude", 0.05);
  const std::string init = c.get<std::string>("init", "cos");
  const std::string method = c.get<std::string>("method", "picard");
  const int stride = c.get("stride", 1);
  const int band = c.get("band", 4);
  if (!std::isfinite(amplitude)) throw UsageError("solve: amplitude must be finite");
  if (init != "cos" && init != "random") throw UsageError("solve: init must be cos or random");
  if (method != "picard" && method != "rk4") throw UsageError("solve: method must be picard or rk4");
  if (stride < 1) throw UsageError("solve: stride must be >= 1");
  if (init == "random" && (band < 1 || 3 * band > std::min(sc.grid.nx, sc.grid.ny)))
    throw UsageError("solve: random init needs 1 <= band <= min(nx, ny) / 3");

  Field2 phi(sc.grid);
  if (init == "cos") {
    for (int j = 0; j < sc.grid.ny; ++j)
      for (int i = 0; i < sc.grid.nx; ++i)
        phi.values(i, j) = amplitude * std::cos(sc.grid.x(i)) * std::cos(sc.grid.y(j));
  } else {
    phi = random_field(sc.grid, Ensemble{1, c.seed(), band, band}, 0);
    phi *= amplitude;
  }

  const fs::path dir = prepare_output_dir(c);
  write_file(dir / "meta.json", dump(meta_json(c)));
  const SolveResult r = method == "picard" ? picard_solve(phi, sc) : reference_solve(phi, sc);

  std::ostringstream csv;
  write_trajectory_csv(csv, r.trajectory, stride);
  write_file(dir / "trajectory.csv", csv.str());

  std::vector<ThresholdCheck> checks;
  if (method == "picard")
    checks.push_back(make_check("picard_converged",
                                r.picard_residuals.empty() ? 0.0 : r.picard_residuals.back(), "<",
                                sc.picard_tol));
  if (c.has("max_l2_drift")) checks.push_back(make_check("l2_drift", r.l2_drift, "<=", c.get("max_l2_drift", 0.0)));
  if (c.has("max_energy_drift"))
    checks.push_back(make_check("energy_drift", r.energy_drift, "<=", c.get("max_energy_drift", 0.0)));
  const bool ok = std::all_of(checks.begin(), checks.end(), [](const auto& ch) { return ch.passed; });

  ojson solve = solve_summary(r);
  auto arr = ojson::array();
  for (const auto& ch : checks)
    arr.push_back({{"name", ch.name},
                   {"value", ch.value},
                   {"relation", ch.relation},
                   {"bound", ch.bound},
                   {"passed", ch.passed}});
  solve["checks"] = arr;
  ojson doc = report_document(c, {});
  doc["passed"] = ok;
  doc["solve"] = solve;
  write_file(dir / "report.json", dump(doc));
  write_file(dir / "report.csv", "name,sample,ratio\n");

  out << "solve (" << r.method << "): " << (ok ? "PASS" : "FAIL") << "  status=" << solve["status"].get<std::string>()
      << "  iterations=" << r.picard_residuals.size() << "  l2_drift=" << format_double(r.l2_drift)
      << "  energy_drift=" << format_double(r.energy_drift) << '\n';
  for (const auto& ch : checks)
    out << "  [" << (ch.passed ? "ok" : "FAIL") << "] " << ch.name << ' ' << format_double(ch.value) << ' '
        << ch.relation << ' ' << format_double(ch.bound) << '\n';
  return ok ? exit_pass : exit_threshold;
}

int run_report(const RunConfig& c, std::ostream& out) {
  const auto inputs = c.get<std::vector<std::string>>("inputs", {});
  if (inputs.empty()) throw UsageError("report: at least one input is required");
  std::vector<EstimateReport> reports;
  bool solves_ok = true;
  for (const auto& in : inputs) {
    fs::path p = in;
    if (fs::is_directory(p)) p /= "report.json";
    std::ifstream f(p);
    if (!f) throw UsageError("report: cannot read '" + p.string() + "'");
    ojson doc;
    try {
      doc = ojson::parse(f);
      for (const auto& r : doc.at("reports")) reports.push_back(report_from_json(r));
      if (doc.contains("solve")) solves_ok = solves_ok && doc.at("passed").get<bool>();
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("report: '" + p.string() + "' is not a zklab report (" + e.what() + ")");
    }
  }
  const fs::path dir = prepare_output_dir(c);
  write_file(dir / "meta.json", dump(meta_json(c)));
  const int code = finish_reports(c, dir, reports, out);
  return solves_ok ? code : exit_threshold;
}

}  // namespace

// ---------------------------------------------------------------------------

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> k;
    for (const auto& d : key_defs()) {
      ConfigKey key{d.name, d.type, d.help, {}};
      std::set<std::string> cmds;
      std::istringstream in(d.scope);
      for (std::string tok; in >> tok;) {
        if (tok == "*") cmds.insert(kCommands.begin(), kCommands.end());
        else if (tok == "resonance-cmd") cmds.insert("resonance");
        else if (kCommands.count(tok)) cmds.insert(tok);
        if (kFamilies.count(tok)) cmds.insert("verify");
      }
      key.commands.assign(cmds.begin(), cmds.end());
      k.push_back(key);
    }
    return k;
  }();
  return keys;
}

RunConfig RunConfig::from_json(const nlohmann::json& flat) {
  if (!flat.is_object()) throw UsageError("config must be a JSON object");
  RunConfig c;
  c.values = flat;
  if (!flat.contains("command") || !flat.at("command").is_string())
    throw UsageError("config: missing command (solve, verify, resonance or report)");
  const std::string command = c.command();
  if (!kCommands.count(command)) throw UsageError("unknown command '" + command + "'");
  std::string context = command == "resonance" ? "resonance-cmd" : command;
  if (command == "verify" && flat.contains("family")) {
    if (!flat.at("family").is_string() || !kFamilies.count(flat.at("family").get<std::string>()))
      throw UsageError("unknown family '" + flat.at("family").dump() + "'");
    context = c.family();
  }
  for (const auto& [name, value] : flat.items()) {
    const auto it = std::find_if(key_defs().begin(), key_defs().end(),
                                 [&](const KeyDef& d) { return d.name == name; });
    if (it == key_defs().end()) throw UsageError("unknown config key '" + name + "'");
    if (!type_matches(it->type, value))
      throw UsageError("config key '" + name + "' must be of type " + it->type);
    if (!in_scope(it->scope, context, command))
      throw UsageError("config key '" + name + "' does not apply to " +
                       (command == "verify" ? "verify --family " + context : command));
  }
  if (flat.contains("seed") && flat.at("seed").is_number_integer() && !flat.at("seed").is_number_unsigned() &&
      flat.at("seed").get<long long>() < 0)
    throw UsageError("seed must be nonnegative");
  return c;
}

RunConfig RunConfig::merged(const nlohmann::json& base, const nlohmann::json& overrides) {
  nlohmann::json m = base.is_null() ? nlohmann::json::object() : base;
  if (!m.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [k, v] : overrides.items()) m[k] = v;
  return from_json(m);
}

std::string RunConfig::command() const { return get<std::string>("command", ""); }
std::string RunConfig::family() const { return get<std::string>("family", ""); }
std::string RunConfig::output_dir() const { return get<std::string>("output_dir", "zklab-out"); }
std::uint64_t RunConfig::seed() const { return get<std::uint64_t>("seed", 1); }

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const std::string command = cfg.command();
    if (command == "solve") return run_solve(cfg, out);
    if (command == "verify") return run_verify(cfg, out);
    if (command == "resonance") return run_resonance(cfg, out);
    if (command == "report") return run_report(cfg, out);
    throw UsageError("unknown command '" + command + "'");
  } catch (const std::invalid_argument& e) {
    err << "zklab: error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "zklab: run failed: " << e.what() << '\n';
    return exit_threshold;
  }
}

}  // namespace zk
