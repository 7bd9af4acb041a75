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
#include <vector>

#include <json.hpp>

#include "gsplab/bid_grid.hpp"
#include "gsplab/profiles.hpp"
#include "gsplab/structural.hpp"

namespace gsp::bayes {

// Per-agent value distribution: point mass, uniform interval, or weighted
// atoms. Support lies in [0, inf); draws are counter-based.
struct DistributionSpec {
  enum class Kind { kPoint, kUniform, kDiscrete };

  Kind kind = Kind::kPoint;
  double point = 0.0;
  double lo = 0.0, hi = 0.0;
  std::vector<double> atoms;
  std::vector<double> weights;

  static DistributionSpec point_mass(double value);
  static DistributionSpec uniform(double lo, double hi);
  static DistributionSpec discrete(std::vector<double> atoms,
                                   std::vector<double> weights);

  void validate() const;
  double support_lo() const;
  double support_hi() const;
  double sample(std::uint64_t seed, std::uint64_t stream,
                std::uint64_t counter) const;
};

// Independent product draw; (seed, index) fully determines the profile.
ValueProfile sample_profile(const std::vector<DistributionSpec>& dists,
                            std::uint64_t seed, std::uint64_t index);

// Per-agent bidding strategy on a finite value grid. Pure rows carry one
// bid; mixed rows carry weights over a shared action menu. Off-grid values
// use the nearest grid row. No row may put support above its value.
class StrategyTable {
 public:
  struct AgentStrategy {
    std::vector<double> value_grid;  // ascending
    std::vector<double> bids;        // pure bid per value row
    // Mixed support (optional): per-row weights over `action_bids`.
    std::vector<double> action_bids;
    std::vector<std::vector<double>> action_weights;

    bool mixed() const { return !action_bids.empty(); }
  };

  explicit StrategyTable(std::vector<AgentStrategy> strategies);

  // b_i(v) = v on an evenly spaced grid over each distribution's support.
  static StrategyTable truthful(const std::vector<DistributionSpec>& dists,
                                std::size_t value_points);
  // Constant bids (full-information strategies); value grid is {v_i}.
  static StrategyTable constant(const BidProfile& bids,
                                const ValueProfile& values);

  std::size_t agents() const { return strategies_.size(); }
  const AgentStrategy& strategy(std::size_t agent) const {
    return strategies_[agent];
  }
  AgentStrategy& strategy(std::size_t agent) { return strategies_[agent]; }

  std::size_t nearest_row(std::size_t agent, double value) const;
  // Bid prescribed at `value`; mixed rows sample with the given counters.
  double bid_for(std::size_t agent, double value, std::uint64_t seed,
                 std::uint64_t stream, std::uint64_t counter) const;

  // Hard no-overbidding assertion over every row's support.
  void validate() const;

 private:
  std::vector<AgentStrategy> strategies_;
};

struct InterimCell {
  std::size_t agent = 0;
  double value = 0.0;
  double prescribed_utility = 0.0;
  double best_bid = 0.0;
  double best_utility = 0.0;
  double gain = 0.0;     // best - prescribed (may be negative)
  double gain_se = 0.0;  // standard error of the paired difference
};

struct BneReport {
  std::vector<double> epsilon;     // per agent: max(0, max gain)
  std::vector<double> epsilon_se;  // SE at each agent's arg-max cell
  double epsilon_max = 0.0;
  std::size_t samples = 0;
  std::vector<InterimCell> cells;
};

// Interim check: for every agent and value row, the prescribed bid's
// expected utility against v_{-i} ~ F_{-i} versus the best fixed grid
// deviation, with paired sampling.
BneReport bne_epsilon(const StrategyTable& strategies,
                      const std::vector<DistributionSpec>& dists,
                      const CtrProfile& ctrs,
                      const std::vector<equilibria::BidGrid>& deviation_grids,
                      std::size_t samples, std::uint64_t seed,
                      unsigned threads = 1);

struct BpoaReport {
  double e_opt = 0.0;
  double e_sw = 0.0;
  double ratio = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t samples = 0;
};

// Paired Monte Carlo estimate of E[OPT] / E[SW] with a delta-method 95%
// interval. Throws std::domain_error when the welfare estimate is <= 0.
BpoaReport bpoa_estimate(const StrategyTable& strategies,
                         const std::vector<DistributionSpec>& dists,
                         const CtrProfile& ctrs, std::size_t samples,
                         std::uint64_t seed, unsigned threads = 1);

struct BneSearchResult {
  StrategyTable table;
  std::vector<double> epsilon_trace;  // per-iteration best-response gains
  BneReport final_check;
};

// Iterated interim best response on the value grid, simultaneous updates.
// Convergence is not guaranteed; inspect the trace and the final epsilon.
BneSearchResult approx_bne_search(const std::vector<DistributionSpec>& dists,
                                  const CtrProfile& ctrs,
                                  std::size_t grid_points,
                                  std::size_t value_points,
                                  std::size_t iterations, std::size_t samples,
                                  std::uint64_t seed, unsigned threads = 1);

// Structural-property report for strategies under value distributions: the
// own bid is re-derived from the strategy at each tested value, opponents
// are drawn interim.
equilibria::GammaReport structural_gamma_bayesian(
    const StrategyTable& strategies, const std::vector<DistributionSpec>& dists,
    const CtrProfile& ctrs, std::size_t samples, std::size_t value_points,
    std::uint64_t seed, unsigned threads = 1);

void to_json(nlohmann::ordered_json& j, const DistributionSpec& d);
DistributionSpec distribution_from_json(const nlohmann::json& j);

}  // namespace gsp::bayes
