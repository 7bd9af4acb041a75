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

#include "gsplab/byzantine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gsplab/auction.hpp"
#include "gsplab/rng.hpp"
#include "gsplab/structural.hpp"

namespace gsp::byzantine {
namespace {

// Scripted agents draw from their own stream family so adding or removing
// them never perturbs the learners' randomness.
constexpr std::uint64_t kScriptStreamBase = 0x9000;

}  // namespace

Script Script::constant_bid(double bid) {
  Script s;
  s.kind = Kind::kConstant;
  s.constant = bid;
  return s;
}

Script Script::bid_sequence(std::vector<double> bids) {
  Script s;
  s.kind = Kind::kSequence;
  s.sequence = std::move(bids);
  return s;
}

Script Script::random_bid() {
  Script s;
  s.kind = Kind::kRandom;
  return s;
}

PopulationSpec PopulationSpec::all_rational(std::size_t agents) {
  PopulationSpec pop;
  pop.rational.resize(agents);
  for (std::size_t i = 0; i < agents; ++i) pop.rational[i] = i;
  return pop;
}

void PopulationSpec::validate(const ValueProfile& values) const {
  std::size_t n = values.agents();
  std::vector<int> seen(n, 0);
  for (std::size_t agent : rational) {
    if (agent >= n) throw std::invalid_argument("population: agent index");
    ++seen[agent];
  }
  for (const auto& [agent, script] : scripted) {
    if (agent >= n) throw std::invalid_argument("population: agent index");
    ++seen[agent];
    double value = values.value(agent);
    switch (script.kind) {
      case Script::Kind::kConstant:
        if (!std::isfinite(script.constant) || script.constant < 0.0 ||
            script.constant > value) {
          throw std::invalid_argument("script overbids (constant)");
        }
        break;
      case Script::Kind::kSequence:
        if (script.sequence.empty()) {
          throw std::invalid_argument("script sequence is empty");
        }
        for (double b : script.sequence) {
          if (!std::isfinite(b) || b < 0.0 || b > value) {
            throw std::invalid_argument("script overbids (sequence)");
          }
        }
        break;
      case Script::Kind::kRandom:
        break;  // draws from [0, value] by construction
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i] != 1) {
      throw std::invalid_argument(
          "population: rational and scripted sets must partition the agents");
    }
  }
}

double opt_rational(const ValueProfile& values, const CtrProfile& ctrs,
                    const PopulationSpec& population) {
  return optimal_restricted_welfare(population.rational, values, ctrs);
}

ByzantineRunResult run_byzantine(const ValueProfile& values,
                                 const CtrProfile& ctrs,
                                 const PopulationSpec& population,
                                 std::size_t grid_points, std::size_t rounds,
                                 std::uint64_t seed) {
  population.validate(values);
  std::size_t n = values.agents();

  std::vector<learning::AgentPolicy> policies(n);
  for (std::size_t agent : population.rational) {
    auto grid = equilibria::BidGrid::uniform(grid_points, values.value(agent));
    double bound = ctrs.alpha(0) * values.value(agent);
    double eta = learning::hedge_eta(grid.size(), rounds, bound);
    policies[agent].learner =
        learning::make_hedge_learner(agent, std::move(grid), eta, bound);
  }
  for (const auto& [agent, script] : population.scripted) {
    double value = values.value(agent);
    switch (script.kind) {
      case Script::Kind::kConstant: {
        double bid = script.constant;
        policies[agent].script = [bid](std::size_t) { return bid; };
        break;
      }
      case Script::Kind::kSequence: {
        std::vector<double> sequence = script.sequence;
        policies[agent].script = [sequence](std::size_t t) {
          return sequence[t % sequence.size()];
        };
        break;
      }
      case Script::Kind::kRandom: {
        std::uint64_t stream = kScriptStreamBase + agent;
        policies[agent].script = [value, seed, stream](std::size_t t) {
          return value * rng::uniform01(seed, stream, t);
        };
        break;
      }
    }
  }

  learning::DynamicsResult run =
      learning::run_dynamics(values, ctrs, std::move(policies), rounds, seed);

  ByzantineReport report;
  report.average_total_welfare = run.average_welfare;
  report.average_rational_welfare =
      run.sequence.average_restricted_welfare(population.rational, values, ctrs);
  report.opt_rational = opt_rational(values, ctrs, population);
  report.opt_total = optimal_welfare(values, ctrs);
  report.rational_regret.reserve(population.rational.size());
  double regret_sum = 0.0;
  for (std::size_t agent : population.rational) {
    double r = run.average_regret[agent];
    report.rational_regret.push_back(r);
    regret_sum += std::max(r, 0.0);
  }
  if (report.opt_rational > 0.0) {
    report.delta_regret = regret_sum / (2.0 * report.opt_rational);
    report.welfare_ratio =
        report.average_total_welfare / report.opt_rational;
    report.welfare_bound_ok =
        report.average_total_welfare >=
        (equilibria::kWelfareFloor - report.delta_regret) * report.opt_rational;
  } else {
    report.delta_regret = 0.0;
    report.welfare_ratio = 0.0;
    report.welfare_bound_ok = true;  // no rational agents, nothing claimed
  }
  return ByzantineRunResult{std::move(run), std::move(report)};
}

void to_json(nlohmann::ordered_json& j, const Script& s) {
  switch (s.kind) {
    case Script::Kind::kConstant:
      j = nlohmann::ordered_json{{"kind", "constant"}, {"bid", s.constant}};
      return;
    case Script::Kind::kSequence:
      j = nlohmann::ordered_json{{"kind", "sequence"}, {"bids", s.sequence}};
      return;
    case Script::Kind::kRandom:
      j = nlohmann::ordered_json{{"kind", "random"}};
      return;
  }
}

Script script_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw std::invalid_argument("script: needs a kind");
  }
  std::string kind = j["kind"].get<std::string>();
  if (kind == "constant") {
    if (!j.contains("bid")) throw std::invalid_argument("script: needs bid");
    return Script::constant_bid(j["bid"].get<double>());
  }
  if (kind == "sequence") {
    if (!j.contains("bids")) throw std::invalid_argument("script: needs bids");
    return Script::bid_sequence(j["bids"].get<std::vector<double>>());
  }
  if (kind == "random") return Script::random_bid();
  throw std::invalid_argument("script: unknown kind " + kind);
}

PopulationSpec population_from_json(const nlohmann::json& j,
                                    std::size_t agents) {
  PopulationSpec pop;
  std::vector<bool> scripted(agents, false);
  if (j.contains("byzantine")) {
    if (!j["byzantine"].is_array()) {
      throw std::invalid_argument("population: byzantine must be an array");
    }
    for (const auto& entry : j["byzantine"]) {
      if (!entry.is_object() || !entry.contains("agent")) {
        throw std::invalid_argument("population: byzantine entry needs agent");
      }
      std::size_t agent = entry["agent"].get<std::size_t>();
      if (agent >= agents || scripted[agent]) {
        throw std::invalid_argument("population: bad byzantine agent index");
      }
      scripted[agent] = true;
      pop.scripted.emplace_back(agent, script_from_json(entry));
    }
  }
  for (std::size_t i = 0; i < agents; ++i) {
    if (!scripted[i]) pop.rational.push_back(i);
  }
  return pop;
}

}  // namespace gsp::byzantine
