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

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gsplab/learning.hpp"
#include "gsplab/profiles.hpp"

namespace gsp::byzantine {

// Scripted (non-equilibrium) bidding rule for one agent. All scripts must
// respect no-overbidding against that agent's true value; random scripts
// draw uniformly from [0, value] on the counter stream.
struct Script {
  enum class Kind { kConstant, kSequence, kRandom };
  Kind kind = Kind::kConstant;
  double constant = 0.0;
  std::vector<double> sequence;  // cycled when shorter than the run

  static Script constant_bid(double bid);
  static Script bid_sequence(std::vector<double> bids);
  static Script random_bid();
};

// Partition of the agents into rational learners N and scripted agents M.
struct PopulationSpec {
  std::vector<std::size_t> rational;
  std::vector<std::pair<std::size_t, Script>> scripted;

  static PopulationSpec all_rational(std::size_t agents);
  // Checks the partition and that every script stays within value.
  void validate(const ValueProfile& values) const;
};

struct ByzantineReport {
  double average_total_welfare = 0.0;
  double average_rational_welfare = 0.0;
  double opt_rational = 0.0;
  double opt_total = 0.0;
  std::vector<double> rational_regret;  // aligned with population.rational
  double delta_regret = 0.0;  // sum of positive rational regrets / (2 OPT_N)
  // avg total SW / OPT_N; meaningful only when OPT_N > 0 (informational for
  // an empty rational set).
  double welfare_ratio = 0.0;
  // avg total SW >= (0.3161 - delta_regret) * OPT_N.
  bool welfare_bound_ok = true;
};

struct ByzantineRunResult {
  learning::DynamicsResult run;
  ByzantineReport report;
};

// Repeated GSP with Hedge learners on N and scripts on M. Learners use
// `grid_points` no-overbid menus with the horizon-tuned rate. With an empty
// M this is exactly run_repeated_auction, bit for bit, at the same seed.
ByzantineRunResult run_byzantine(const ValueProfile& values,
                                 const CtrProfile& ctrs,
                                 const PopulationSpec& population,
                                 std::size_t grid_points, std::size_t rounds,
                                 std::uint64_t seed);

// OPT_N: the best welfare the rational set alone can achieve.
double opt_rational(const ValueProfile& values, const CtrProfile& ctrs,
                    const PopulationSpec& population);

void to_json(nlohmann::ordered_json& j, const Script& s);
Script script_from_json(const nlohmann::json& j);
PopulationSpec population_from_json(const nlohmann::json& j,
                                    std::size_t agents);

}  // namespace gsp::byzantine
