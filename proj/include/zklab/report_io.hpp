#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "zklab/estimates.hpp"
#include "zklab/solver.hpp"

namespace zk {

inline constexpr int kReportSchemaVersion = 1;

nlohmann::ordered_json to_json(const EstimateReport& r);
EstimateReport report_from_json(const nlohmann::ordered_json& j);

/// Flat CSV with header `name,sample,ratio`.
void write_ratios_csv(std::ostream& out, const std::vector<EstimateReport>& reports);

/// Solve diagnostics (the trajectory itself goes to CSV).
nlohmann::ordered_json solve_summary(const SolveResult& r);

/// Trajectory as `t,x,y,value`, every `stride`-th time sample.
void write_trajectory_csv(std::ostream& out, const SpaceTimeField& u, int stride = 1);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace zk
