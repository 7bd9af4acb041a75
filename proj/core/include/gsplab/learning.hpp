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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gsplab/auction.hpp"
#include "gsplab/bid_grid.hpp"
#include "gsplab/profiles.hpp"

namespace gsp::learning {

// Exponential-weights bidder over a finite bid menu. Weights are the
// softmax of eta times the cumulative counterfactual utilities, which is
// the multiplicative-update rule in closed form (uniform start).
struct LearnerState {
  std::size_t agent = 0;
  equilibria::BidGrid actions;
  double eta = 0.0;
  double utility_bound = 0.0;  // alpha_1 * v_i, scales eta and the regret bound
  std::vector<double> weights;
  std::vector<double> cumulative_utility;
};

// Horizon-tuned rate sqrt(8 ln K / T) / G for utilities in [0, G].
double hedge_eta(std::size_t actions, std::size_t rounds, double utility_bound);

// Guaranteed average regret sqrt(ln K / (2T)) * G at the rate above.
double hedge_regret_bound(std::size_t actions, std::size_t rounds,
                          double utility_bound);

LearnerState make_hedge_learner(std::size_t agent, equilibria::BidGrid actions,
                                double eta, double utility_bound);

// One full-information update with the realized utility of every action.
// Rejects non-finite utilities.
void hedge_update(LearnerState& state, std::span<const double> utilities);

// Samples an action index from the current weights.
std::size_t hedge_sample(const LearnerState& state, double u01);

// Bid history of a repeated auction, with each round's GSP outcome.
// Doubles as the empirical joint bid distribution (uniform over rounds).
class DeclarationSequence {
 public:
  explicit DeclarationSequence(std::size_t agents);

  void append(const BidProfile& bids, const AuctionOutcome& outcome);

  std::size_t agents() const { return agents_; }
  std::size_t rounds() const { return rounds_; }

  std::span<const double> round_bids(std::size_t t) const;
  std::span<const std::uint32_t> round_assignment(std::size_t t) const;
  std::span<const double> round_payments(std::size_t t) const;
  BidProfile bids_at(std::size_t t) const;
  std::size_t slot_of(std::size_t t, std::size_t agent) const;

  double round_welfare(std::size_t t, const ValueProfile& values,
                       const CtrProfile& ctrs) const;
  double average_welfare(const ValueProfile& values, const CtrProfile& ctrs,
                         std::size_t burn_in = 0) const;
  // Average welfare counting only the given agents.
  double average_restricted_welfare(std::span<const std::size_t> subset,
                                    const ValueProfile& values,
                                    const CtrProfile& ctrs,
                                    std::size_t burn_in = 0) const;

  bool operator==(const DeclarationSequence&) const = default;

 private:
  std::size_t agents_ = 0;
  std::size_t rounds_ = 0;
  std::vector<double> bids_;              // rounds x agents
  std::vector<std::uint32_t> assignment_;  // rounds x slots, slot -> agent
  std::vector<double> payments_;          // rounds x agents
};

// Per-agent policy for the repeated-auction engine: exactly one of a
// learner or a scripted bid function of the round index.
struct AgentPolicy {
  std::optional<LearnerState> learner;
  std::function<double(std::size_t round)> script;
};

struct DynamicsResult {
  DeclarationSequence sequence;
  std::vector<std::optional<LearnerState>> learners;  // final states
  // Average external regret per agent, from the engine's own accumulators;
  // zero for scripted agents. Matches external_regret() bit for bit.
  std::vector<double> average_regret;
  double average_welfare = 0.0;
};

// Runs T rounds: learners sample bids from their weights, every learner
// observes the full-information counterfactual utilities of its whole menu
// against the realized opponent bids, and updates. Bid sampling draws from
// the (seed, agent, round) counter stream, so a run is reproducible and
// unaffected by which other agents are scripted.
DynamicsResult run_dynamics(const ValueProfile& values, const CtrProfile& ctrs,
                            std::vector<AgentPolicy> policies,
                            std::size_t rounds, std::uint64_t seed);

struct RepeatedAuctionResult {
  DeclarationSequence sequence;
  std::vector<LearnerState> learners;
  std::vector<double> average_regret;
  double average_welfare = 0.0;
};

// All-learner wrapper around run_dynamics.
RepeatedAuctionResult run_repeated_auction(const ValueProfile& values,
                                           const CtrProfile& ctrs,
                                           std::vector<LearnerState> learners,
                                           std::size_t rounds,
                                           std::uint64_t seed);

// Average regret of `agent` against the best fixed grid bid in hindsight.
double external_regret(std::size_t agent, const DeclarationSequence& sequence,
                       const ValueProfile& values, const CtrProfile& ctrs,
                       const equilibria::BidGrid& grid);

// OPT(v) divided by the average welfare of the sequence.
double pota_ratio(const DeclarationSequence& sequence,
                  const ValueProfile& values, const CtrProfile& ctrs,
                  std::size_t burn_in = 0);

struct CceCheck {
  bool holds = false;
  double max_regret = 0.0;
  std::vector<double> per_agent_regret;
};

// The uniform distribution over rounds is an epsilon-coarse-correlated
// equilibrium iff no fixed grid deviation gains more than epsilon on
// average; this is exactly the external-regret computation, agent by agent.
CceCheck empirical_cce_check(const DeclarationSequence& sequence,
                             const ValueProfile& values,
                             const CtrProfile& ctrs,
                             const std::vector<equilibria::BidGrid>& grids,
                             double epsilon);

}  // namespace gsp::learning
