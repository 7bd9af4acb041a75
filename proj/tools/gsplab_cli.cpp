// Copyright 2026 The gsplab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: every subcommand builds an experiment config
// (from --config and/or flags), runs it, and writes report.json (plus
// rounds.csv when logging is on) into --out. Identical config and seed give
// byte-identical files at any --threads value.
//
// Exit codes: 0 ok, 2 config/schema violation, 3 budget exceeded,
// 4 internal invariant breach.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsplab/errors.hpp"
#include "gsplab/experiments.hpp"
#include "gsplab/version.hpp"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInvariant = 4;

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

json parse_csv_doubles(const std::string& text) {
  json arr = json::array();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      arr.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw gsp::ConfigError("flag: '" + item + "' is not a number");
    }
  }
  if (arr.empty()) throw gsp::ConfigError("flag: empty number list");
  return arr;
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gsp::ConfigError("config file '" + path + "' does not exist");
  json config;
  try {
    in >> config;
  } catch (const json::exception& e) {
    throw gsp::ConfigError("config file '" + path + "' is not valid JSON: " +
                           e.what());
  }
  if (!config.is_object()) {
    throw gsp::ConfigError("config file '" + path + "' must hold an object");
  }
  return config;
}

int run(const std::string& experiment, const CommonOptions& common,
        const json& flag_overrides) {
  json config = json::object();
  if (!common.config_path.empty()) config = load_config_file(common.config_path);
  config["experiment"] = experiment;
  for (auto it = flag_overrides.begin(); it != flag_overrides.end(); ++it) {
    config[it.key()] = it.value();
  }
  if (common.seed) config["seed"] = *common.seed;
  if (!config.contains("seed")) {
    throw gsp::ConfigError("config: a seed is required (--seed or config)");
  }

  gsp::ExperimentResult result = gsp::run_experiment(config, common.threads);

  std::filesystem::path out_dir(common.out_dir);
  std::filesystem::create_directories(out_dir);
  std::filesystem::path report_path = out_dir / "report.json";
  {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw gsp::ConfigError("cannot write " + report_path.string());
    out << result.report.dump(2) << '\n';
  }
  if (result.csv) {
    std::ofstream out(out_dir / result.csv_filename, std::ios::binary);
    if (!out) {
      throw gsp::ConfigError("cannot write " +
                             (out_dir / result.csv_filename).string());
    }
    out << *result.csv;
  }

  std::cout << result.summary << '\n';
  std::cout << "report: " << report_path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GSP auction simulation and analysis toolkit"};
  app.set_version_flag("--version", std::string(gsp::kVersion));
  app.require_subcommand(1);

  CommonOptions common;
  json flags = json::object();

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", common.config_path, "Experiment config JSON");
    cmd->add_option("--out", common.out_dir, "Output directory");
    cmd->add_option("--seed", common.seed, "RNG seed (overrides config)");
    cmd->add_option("--threads", common.threads,
                    "Worker threads (never affects results)");
  };
  auto add_instance_flags = [&](CLI::App* cmd, bool with_bids) {
    cmd->add_option_function<std::string>(
        "--values",
        [&](const std::string& v) { flags["instance"]["values"] = parse_csv_doubles(v); },
        "Per-agent values, comma separated");
    cmd->add_option_function<std::string>(
        "--alphas",
        [&](const std::string& v) { flags["instance"]["alphas"] = parse_csv_doubles(v); },
        "Slot CTRs, comma separated");
    if (with_bids) {
      cmd->add_option_function<std::string>(
          "--bids",
          [&](const std::string& v) { flags["bids"] = parse_csv_doubles(v); },
          "Per-agent bids, comma separated");
    }
    cmd->add_option_function<std::string>(
        "--instance-file",
        [&](const std::string& v) { flags["instance_file"] = v; },
        "Instance JSON file (values/alphas/bids)");
  };

  // simulate
  auto* simulate = app.add_subcommand("simulate", "One GSP round on an instance");
  add_common(simulate);
  add_instance_flags(simulate, true);

  // check-ne
  auto* check = app.add_subcommand("check-ne", "Pure-equilibrium check of a bid profile");
  add_common(check);
  add_instance_flags(check, true);
  check->add_option_function<std::uint64_t>(
      "--grid-points", [&](const std::uint64_t& v) { flags["grid_points"] = v; },
      "Deviation grid size per agent");
  check->add_option_function<double>(
      "--epsilon", [&](const double& v) { flags["epsilon"] = v; },
      "Approximation slack");

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "Exhaustive pure-equilibrium enumeration");
  add_common(enumerate);
  add_instance_flags(enumerate, false);
  enumerate->add_option_function<std::uint64_t>(
      "--grid-points", [&](const std::uint64_t& v) { flags["grid_points"] = v; },
      "Bid grid size per agent");
  enumerate->add_option_function<std::uint64_t>(
      "--budget", [&](const std::uint64_t& v) { flags["budget"] = v; },
      "Joint-profile budget");

  // learn
  auto* learn = app.add_subcommand("learn", "Repeated auction with Hedge bidders");
  add_common(learn);
  add_instance_flags(learn, false);
  learn->add_option_function<std::uint64_t>(
      "--rounds", [&](const std::uint64_t& v) { flags["rounds"] = v; },
      "Number of rounds T");
  learn->add_option_function<std::uint64_t>(
      "--grid-points", [&](const std::uint64_t& v) { flags["grid_points"] = v; },
      "Action menu size per agent");
  learn->add_option_function<std::uint64_t>(
      "--burn-in", [&](const std::uint64_t& v) { flags["burn_in"] = v; },
      "Rounds excluded from welfare averaging");
  learn->add_flag_function(
      "--log-csv", [&](std::int64_t) { flags["log_csv"] = true; },
      "Write the per-round CSV log");

  // bpoa
  auto* bpoa = app.add_subcommand("bpoa", "Bayesian price-of-anarchy estimate");
  add_common(bpoa);
  bpoa->add_option_function<std::uint64_t>(
      "--samples", [&](const std::uint64_t& v) { flags["samples"] = v; },
      "Monte Carlo profiles");
  bpoa->add_option_function<std::string>(
      "--strategy", [&](const std::string& v) { flags["strategy"] = v; },
      "truthful | search");

  // byzantine
  auto* byz = app.add_subcommand("byzantine", "Mixed rational/scripted population run");
  add_common(byz);
  add_instance_flags(byz, false);
  byz->add_option_function<std::uint64_t>(
      "--rounds", [&](const std::uint64_t& v) { flags["rounds"] = v; },
      "Number of rounds T");

  // poa3
  auto* poa3 = app.add_subcommand("poa3", "3-slot worst-case objective maximization");
  add_common(poa3);
  poa3->add_option_function<std::string>(
      "--case", [&](const std::string& v) { flags["case"] = v; }, "i | ii");
  poa3->add_option_function<std::uint64_t>(
      "--resolution", [&](const std::uint64_t& v) { flags["resolution"] = v; },
      "Grid points per axis");
  poa3->add_option_function<std::uint64_t>(
      "--restarts", [&](const std::uint64_t& v) { flags["restarts"] = v; },
      "Compass restarts");

  // cyclic
  auto* cyclic = app.add_subcommand("cyclic", "n-slot cyclic-allocation frontier");
  add_common(cyclic);
  cyclic->add_option_function<std::uint64_t>(
      "--n-min", [&](const std::uint64_t& v) { flags["n_min"] = v; }, "Smallest n");
  cyclic->add_option_function<std::uint64_t>(
      "--n-max", [&](const std::uint64_t& v) { flags["n_max"] = v; }, "Largest n");
  cyclic->add_option_function<std::uint64_t>(
      "--resolution", [&](const std::uint64_t& v) { flags["resolution"] = v; },
      "Grid points per axis before coarsening");

  // tight-instance
  auto* tight = app.add_subcommand("tight-instance",
                                   "Emit the worst-case 3-slot instance");
  add_common(tight);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return (code == 0) ? 0 : kExitConfig;
  } catch (const gsp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::string experiment;
  for (auto* cmd : app.get_subcommands()) experiment = cmd->get_name();

  try {
    return run(experiment, common, flags);
  } catch (const gsp::BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const gsp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const gsp::InvariantError& e) {
    std::cerr << "invariant breach: " << e.invariant() << ": " << e.what()
              << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
}
