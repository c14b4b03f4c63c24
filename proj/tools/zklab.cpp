// zklab: solves, verification suites and resonance sweeps for the symmetrized
// Zakharov-Kuznetsov equation.
//
//   zklab [--config run.json] <solve|verify|resonance|report> [--key value ...]
//
// Every config key is also a flag (--b 0.6, --family l4, ...); flags win over
// the file. Exit status: 0 pass, 1 usage or config error, 2 threshold failure.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "zklab/cli.hpp"

namespace {

nlohmann::json parse_value(const zk::ConfigKey& key, const std::string& text) {
  try {
    std::size_t used = 0;
    if (key.type == "integer") {
      if (!text.empty() && text[0] != '-') {
        const unsigned long long v = std::stoull(text, &used);
        if (used == text.size()) return v;
      } else {
        const long long v = std::stoll(text, &used);
        if (used == text.size()) return v;
      }
    } else if (key.type == "number") {
      const double v = std::stod(text, &used);
      if (used == text.size()) return v;
    } else if (key.type == "boolean") {
      if (text == "true" || text == "1" || text == "on") return true;
      if (text == "false" || text == "0" || text == "off") return false;
    } else {
      return text;
    }
  } catch (const std::exception&) {
  }
  throw zk::UsageError("--" + key.name + ": expected " + key.type + ", got '" + text + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudospectral lab for the 2D Zakharov-Kuznetsov equation"};
  app.set_version_flag("--version", std::string(ZKLAB_VERSION));
  std::string config_path;
  app.add_option("-c,--config", config_path, "JSON config with flat keys")->check(CLI::ExistingFile);
  app.require_subcommand(0, 1);

  // --max_l2_drift and --max-l2-drift both work
  auto flag_names = [](const std::string& name) {
    std::string dashed = name;
    std::replace(dashed.begin(), dashed.end(), '_', '-');
    return dashed == name ? "--" + name : "--" + name + ",--" + dashed;
  };

  std::map<std::string, CLI::App*> subs;
  subs["solve"] = app.add_subcommand("solve", "run a solve and write trajectory.csv");
  subs["verify"] = app.add_subcommand("verify", "run one verification family");
  subs["resonance"] = app.add_subcommand("resonance", "resonance identity and region sweep");
  subs["report"] = app.add_subcommand("report", "merge and summarize report.json files");

  // one string slot per (subcommand, key)
  std::map<std::string, std::map<std::string, std::string>> scalar;
  std::map<std::string, std::vector<std::string>> lists;
  for (const auto& key : zk::config_keys()) {
    if (key.name == "command") continue;
    for (const auto& cmd : key.commands) {
      CLI::App* sub = subs.at(cmd);
      if (key.type == "strings") {
        auto* opt = sub->add_option(flag_names(key.name), lists[cmd], key.help);
        if (key.name == "inputs") sub->add_option("paths", lists[cmd], key.help)->excludes(opt);
      } else if (key.name == "family") {
        sub->add_option("--family", scalar[cmd][key.name], key.help)
            ->check(CLI::IsMember({"linear", "str1", "str2", "l4", "lpq", "bil1", "bil2", "bil3", "bil4", "key",
                                   "resonance", "regions"}));
      } else {
        sub->add_option(flag_names(key.name), scalar[cmd][key.name], key.help);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? zk::exit_pass : zk::exit_usage;
  }

  try {
    nlohmann::json base = nlohmann::json::object();
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      try {
        base = nlohmann::json::parse(f);
      } catch (const nlohmann::json::exception& e) {
        throw zk::UsageError("cannot parse " + config_path + ": " + e.what());
      }
    }
    nlohmann::json overrides = nlohmann::json::object();
    for (const auto& [cmd, sub] : subs) {
      if (!sub->parsed()) continue;
      overrides["command"] = cmd;
      for (const auto& key : zk::config_keys()) {
        if (key.name == "command") continue;
        if (key.type == "strings") {
          if (!lists[cmd].empty()) overrides[key.name] = lists[cmd];
          continue;
        }
        const auto* opt = sub->get_option_no_throw("--" + key.name);
        if (opt && opt->count() > 0) overrides[key.name] = parse_value(key, scalar[cmd][key.name]);
      }
    }
    if (!base.contains("command") && !overrides.contains("command")) {
      std::cerr << app.help();
      return zk::exit_usage;
    }
    return zk::run(zk::RunConfig::merged(base, overrides), std::cout, std::cerr);
  } catch (const std::invalid_argument& e) {
    std::cerr << "zklab: error: " << e.what() << '\n';
    return zk::exit_usage;
  }
}
