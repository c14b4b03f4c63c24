#include "zklab/report_io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace zk {

std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

nlohmann::ordered_json to_json(const EstimateReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["seed"] = r.seed;
  j["ensemble_size"] = r.ensemble_size;
  j["params"] = r.params;
  j["grids"] = r.grids;
  j["max_ratio"] = r.max_ratio;
  j["refinement_drift"] = r.refinement_drift;
  j["scaling_slope"] = r.scaling_slope ? nlohmann::ordered_json(*r.scaling_slope) : nlohmann::ordered_json();
  j["ratios"] = r.ratios;
  j["metrics"] = r.metrics;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"relation", c.relation},
                      {"bound", c.bound},
                      {"passed", c.passed}});
  j["checks"] = checks;
  j["notes"] = r.notes;
  j["passed"] = r.passed();
  return j;
}

EstimateReport report_from_json(const nlohmann::ordered_json& j) {
  EstimateReport r;
  r.name = j.at("name").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.ensemble_size = j.at("ensemble_size").get<int>();
  r.params = j.at("params").get<std::map<std::string, double>>();
  r.grids = j.at("grids").get<std::map<std::string, std::string>>();
  r.max_ratio = j.at("max_ratio").get<double>();
  r.refinement_drift = j.at("refinement_drift").get<double>();
  if (!j.at("scaling_slope").is_null()) r.scaling_slope = j.at("scaling_slope").get<double>();
  r.ratios = j.at("ratios").get<std::vector<double>>();
  r.metrics = j.at("metrics").get<std::map<std::string, double>>();
  for (const auto& c : j.at("checks"))
    r.checks.push_back({c.at("name").get<std::string>(), c.at("value").get<double>(),
                        c.at("bound").get<double>(), c.at("relation").get<std::string>(),
                        c.at("passed").get<bool>()});
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

void write_ratios_csv(std::ostream& out, const std::vector<EstimateReport>& reports) {
  out << "name,sample,ratio\n";
  for (const auto& r : reports)
    for (std::size_t i = 0; i < r.ratios.size(); ++i)
      out << r.name << ',' << i << ',' << format_double(r.ratios[i]) << '\n';
}

nlohmann::ordered_json solve_summary(const SolveResult& r) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  j["status"] = r.status == SolveStatus::converged ? "converged" : "divergent";
  j["iterations"] = r.picard_residuals.size();
  j["picard_residuals"] = r.picard_residuals;
  j["l2_drift"] = r.l2_drift;
  j["energy_drift"] = r.energy_drift;
  const SpaceTimeField& u = r.trajectory;
  j["nt"] = u.nt();
  j["dt"] = u.dt;
  j["t_final"] = u.t1();
  return j;
}

void write_trajectory_csv(std::ostream& out, const SpaceTimeField& u, int stride) {
  if (stride < 1) throw std::invalid_argument("write_trajectory_csv: stride must be >= 1");
  const Grid2& g = u.grid;
  out << "t,x,y,value\n";
  for (int n = 0; n < u.nt(); n += stride) {
    const std::string t = format_double(u.time(n));
    for (int j = 0; j < g.ny; ++j) {
      const std::string y = format_double(g.y(j));
      for (int i = 0; i < g.nx; ++i)
        out << t << ',' << format_double(g.x(i)) << ',' << y << ',' << format_double(u.slices[n].values(i, j))
            << '\n';
    }
  }
}

}  // namespace zk
