#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace zk {

/// Bad command, unknown key, wrong type, or a violated hypothesis.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum ExitCode : int { exit_pass = 0, exit_usage = 1, exit_threshold = 2 };

/// Flat run configuration. Keys (all optional except `command`):
///
///   command       solve | verify | resonance | report
///   family        verify only: linear str1 str2 l4 lpq bil1 bil2 bil3 bil4 key resonance regions
///   output_dir    artifact directory (default "zklab-out")
///   seed          64-bit seed for every random draw (default 1)
///   nx, ny, T, nt, amplitude, init, method, max_picard_iters, picard_tol,
///   nonlinearity, stride, band                       solve
///   s, b, b_prime, p, q, k_min, k_max, s0, s1, s2, ensemble, samples, c0,
///   max_frequency, modulation, max_modulation, T, nt  verify / resonance
///   inputs        report: list of report.json files or directories holding one
///
/// Keys that do not apply to the selected command or family are rejected.
struct RunConfig {
  nlohmann::json values = nlohmann::json::object();

  /// Checks key names, value types and scope. Throws UsageError.
  static RunConfig from_json(const nlohmann::json& flat);
  /// `base` with every key of `overrides` replacing the file value.
  static RunConfig merged(const nlohmann::json& base, const nlohmann::json& overrides);

  [[nodiscard]] std::string command() const;
  [[nodiscard]] std::string family() const;
  [[nodiscard]] std::string output_dir() const;
  [[nodiscard]] std::uint64_t seed() const;
  [[nodiscard]] bool has(const std::string& key) const { return values.contains(key); }
  template <typename T>
  [[nodiscard]] T get(const std::string& key, T fallback) const {
    return values.contains(key) ? values.at(key).get<T>() : fallback;
  }
};

/// Names and one-line help of every config key, for the CLI front end.
struct ConfigKey {
  std::string name;
  std::string type;  ///< integer | number | string | boolean | strings
  std::string help;
  std::vector<std::string> commands;  ///< subcommands that accept the key
};
const std::vector<ConfigKey>& config_keys();

/// Validates, writes meta.json, computes, writes the remaining artifacts and
/// returns the exit code. Progress goes to `out`, diagnostics to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace zk
