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

#include "gsplab/learning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gsplab/rng.hpp"

namespace gsp::learning {
namespace {

constexpr std::uint64_t kBidStreamBase = 0x1000;

}  // namespace

double hedge_eta(std::size_t actions, std::size_t rounds,
                 double utility_bound) {
  if (actions < 1 || rounds < 1) {
    throw std::invalid_argument("hedge_eta: actions and rounds must be >= 1");
  }
  if (actions == 1 || utility_bound <= 0.0) return 0.0;
  return std::sqrt(8.0 * std::log(static_cast<double>(actions)) /
                   static_cast<double>(rounds)) /
         utility_bound;
}

double hedge_regret_bound(std::size_t actions, std::size_t rounds,
                          double utility_bound) {
  if (actions <= 1 || utility_bound <= 0.0) return 0.0;
  return std::sqrt(std::log(static_cast<double>(actions)) /
                   (2.0 * static_cast<double>(rounds))) *
         utility_bound;
}

LearnerState make_hedge_learner(std::size_t agent, equilibria::BidGrid actions,
                                double eta, double utility_bound) {
  if (eta < 0.0 || !std::isfinite(eta)) {
    throw std::invalid_argument("make_hedge_learner: bad eta");
  }
  LearnerState state{agent, std::move(actions), eta, utility_bound, {}, {}};
  state.weights.assign(state.actions.size(),
                       1.0 / static_cast<double>(state.actions.size()));
  state.cumulative_utility.assign(state.actions.size(), 0.0);
  return state;
}

void hedge_update(LearnerState& state, std::span<const double> utilities) {
  if (utilities.size() != state.actions.size()) {
    throw std::invalid_argument("hedge_update: utility count mismatch");
  }
  for (double u : utilities) {
    if (!std::isfinite(u)) {
      throw std::invalid_argument("hedge_update: non-finite utility");
    }
  }
  for (std::size_t a = 0; a < utilities.size(); ++a) {
    state.cumulative_utility[a] += utilities[a];
  }
  // Softmax of eta * cumulative payoff; equals the running multiplicative
  // update without its numeric drift.
  double top = state.eta * *std::max_element(state.cumulative_utility.begin(),
                                             state.cumulative_utility.end());
  double norm = 0.0;
  for (std::size_t a = 0; a < state.weights.size(); ++a) {
    double w = std::exp(state.eta * state.cumulative_utility[a] - top);
    state.weights[a] = w;
    norm += w;
  }
  for (double& w : state.weights) w /= norm;
}

std::size_t hedge_sample(const LearnerState& state, double u01) {
  return rng::pick_weighted(state.weights, u01);
}

DeclarationSequence::DeclarationSequence(std::size_t agents)
    : agents_(agents) {
  if (agents == 0) {
    throw std::invalid_argument("DeclarationSequence: needs agents");
  }
}

void DeclarationSequence::append(const BidProfile& bids,
                                 const AuctionOutcome& outcome) {
  if (bids.agents() != agents_ || outcome.assignment.size() != agents_) {
    throw std::invalid_argument("DeclarationSequence::append: shape mismatch");
  }
  bids_.insert(bids_.end(), bids.bids().begin(), bids.bids().end());
  for (std::size_t agent : outcome.assignment) {
    assignment_.push_back(static_cast<std::uint32_t>(agent));
  }
  payments_.insert(payments_.end(), outcome.payments.begin(),
                   outcome.payments.end());
  ++rounds_;
}

std::span<const double> DeclarationSequence::round_bids(std::size_t t) const {
  return {bids_.data() + t * agents_, agents_};
}

std::span<const std::uint32_t> DeclarationSequence::round_assignment(
    std::size_t t) const {
  return {assignment_.data() + t * agents_, agents_};
}

std::span<const double> DeclarationSequence::round_payments(
    std::size_t t) const {
  return {payments_.data() + t * agents_, agents_};
}

BidProfile DeclarationSequence::bids_at(std::size_t t) const {
  auto span = round_bids(t);
  return BidProfile(std::vector<double>(span.begin(), span.end()));
}

std::size_t DeclarationSequence::slot_of(std::size_t t,
                                         std::size_t agent) const {
  auto assignment = round_assignment(t);
  for (std::size_t k = 0; k < assignment.size(); ++k) {
    if (assignment[k] == agent) return k;
  }
  throw std::out_of_range("DeclarationSequence::slot_of");
}

double DeclarationSequence::round_welfare(std::size_t t,
                                          const ValueProfile& values,
                                          const CtrProfile& ctrs) const {
  auto assignment = round_assignment(t);
  double sw = 0.0;
  for (std::size_t k = 0; k < agents_; ++k) {
    sw += ctrs.alpha(k) * values.value(assignment[k]);
  }
  return sw;
}

double DeclarationSequence::average_welfare(const ValueProfile& values,
                                            const CtrProfile& ctrs,
                                            std::size_t burn_in) const {
  if (burn_in >= rounds_) {
    throw std::invalid_argument("average_welfare: burn-in swallows the run");
  }
  double total = 0.0;
  for (std::size_t t = burn_in; t < rounds_; ++t) {
    total += round_welfare(t, values, ctrs);
  }
  return total / static_cast<double>(rounds_ - burn_in);
}

double DeclarationSequence::average_restricted_welfare(
    std::span<const std::size_t> subset, const ValueProfile& values,
    const CtrProfile& ctrs, std::size_t burn_in) const {
  if (burn_in >= rounds_) {
    throw std::invalid_argument("average_restricted_welfare: burn-in");
  }
  std::vector<bool> in_subset(agents_, false);
  for (std::size_t agent : subset) in_subset.at(agent) = true;
  double total = 0.0;
  for (std::size_t t = burn_in; t < rounds_; ++t) {
    auto assignment = round_assignment(t);
    for (std::size_t k = 0; k < agents_; ++k) {
      if (in_subset[assignment[k]]) {
        total += ctrs.alpha(k) * values.value(assignment[k]);
      }
    }
  }
  return total / static_cast<double>(rounds_ - burn_in);
}

DynamicsResult run_dynamics(const ValueProfile& values, const CtrProfile& ctrs,
                            std::vector<AgentPolicy> policies,
                            std::size_t rounds, std::uint64_t seed) {
  std::size_t n = values.agents();
  if (ctrs.slots() != n || policies.size() != n) {
    throw std::invalid_argument("run_dynamics: length mismatch");
  }
  if (rounds < 1) throw std::invalid_argument("run_dynamics: rounds >= 1");
  for (std::size_t i = 0; i < n; ++i) {
    bool has_learner = policies[i].learner.has_value();
    bool has_script = static_cast<bool>(policies[i].script);
    if (has_learner == has_script) {
      throw std::invalid_argument(
          "run_dynamics: each agent needs exactly one of learner or script");
    }
    if (has_learner && policies[i].learner->agent != i) {
      throw std::invalid_argument("run_dynamics: learner agent index mismatch");
    }
  }

  DynamicsResult result{DeclarationSequence(n), {}, std::vector<double>(n, 0.0),
                        0.0};
  std::vector<double> bids(n, 0.0);
  std::vector<double> realized_sum(n, 0.0);
  equilibria::CounterfactualSweep sweep;
  std::vector<double> menu_utils;

  for (std::size_t t = 0; t < rounds; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      if (policies[i].learner) {
        const LearnerState& st = *policies[i].learner;
        double u = rng::uniform01(seed, kBidStreamBase + i, t);
        bids[i] = st.actions.bid(hedge_sample(st, u));
      } else {
        bids[i] = policies[i].script(t);
      }
    }
    BidProfile profile(bids);
    AuctionOutcome outcome = run_gsp(profile, ctrs);
    result.sequence.append(profile, outcome);

    for (std::size_t i = 0; i < n; ++i) {
      if (!policies[i].learner) continue;
      LearnerState& st = *policies[i].learner;
      realized_sum[i] += utility(i, values, outcome);
      sweep.prepare(i, bids);
      menu_utils.resize(st.actions.size());
      sweep.run(values.value(i), ctrs, st.actions.bids(), menu_utils);
      hedge_update(st, menu_utils);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!policies[i].learner) {
      result.learners.emplace_back(std::nullopt);
      continue;
    }
    const LearnerState& st = *policies[i].learner;
    double best_fixed = *std::max_element(st.cumulative_utility.begin(),
                                          st.cumulative_utility.end());
    result.average_regret[i] =
        (best_fixed - realized_sum[i]) / static_cast<double>(rounds);
    result.learners.emplace_back(std::move(*policies[i].learner));
  }
  result.average_welfare = result.sequence.average_welfare(values, ctrs);
  return result;
}

RepeatedAuctionResult run_repeated_auction(const ValueProfile& values,
                                           const CtrProfile& ctrs,
                                           std::vector<LearnerState> learners,
                                           std::size_t rounds,
                                           std::uint64_t seed) {
  std::vector<AgentPolicy> policies;
  policies.reserve(learners.size());
  for (auto& learner : learners) {
    policies.push_back(AgentPolicy{std::move(learner), nullptr});
  }
  DynamicsResult dyn =
      run_dynamics(values, ctrs, std::move(policies), rounds, seed);
  RepeatedAuctionResult out{std::move(dyn.sequence), {},
                            std::move(dyn.average_regret),
                            dyn.average_welfare};
  out.learners.reserve(dyn.learners.size());
  for (auto& learner : dyn.learners) out.learners.push_back(std::move(*learner));
  return out;
}

double external_regret(std::size_t agent, const DeclarationSequence& sequence,
                       const ValueProfile& values, const CtrProfile& ctrs,
                       const equilibria::BidGrid& grid) {
  if (sequence.rounds() == 0) {
    throw std::invalid_argument("external_regret: empty sequence");
  }
  if (agent >= sequence.agents()) {
    throw std::out_of_range("external_regret: agent index");
  }
  std::vector<double> fixed_sum(grid.size(), 0.0);
  std::vector<double> menu_utils(grid.size());
  double realized_sum = 0.0;
  equilibria::CounterfactualSweep sweep;
  for (std::size_t t = 0; t < sequence.rounds(); ++t) {
    sweep.prepare(agent, sequence.round_bids(t));
    sweep.run(values.value(agent), ctrs, grid.bids(), menu_utils);
    for (std::size_t g = 0; g < menu_utils.size(); ++g) {
      fixed_sum[g] += menu_utils[g];
    }
    std::size_t slot = sequence.slot_of(t, agent);
    realized_sum += ctrs.alpha(slot) *
                    (values.value(agent) - sequence.round_payments(t)[agent]);
  }
  double best_fixed = *std::max_element(fixed_sum.begin(), fixed_sum.end());
  return (best_fixed - realized_sum) / static_cast<double>(sequence.rounds());
}

double pota_ratio(const DeclarationSequence& sequence,
                  const ValueProfile& values, const CtrProfile& ctrs,
                  std::size_t burn_in) {
  if (sequence.rounds() == 0) {
    throw std::invalid_argument("pota_ratio: empty sequence");
  }
  double avg = sequence.average_welfare(values, ctrs, burn_in);
  if (avg <= 0.0) {
    throw std::domain_error("pota_ratio: average welfare is zero");
  }
  return optimal_welfare(values, ctrs) / avg;
}

CceCheck empirical_cce_check(const DeclarationSequence& sequence,
                             const ValueProfile& values,
                             const CtrProfile& ctrs,
                             const std::vector<equilibria::BidGrid>& grids,
                             double epsilon) {
  if (grids.size() != sequence.agents()) {
    throw std::invalid_argument("empirical_cce_check: grid count mismatch");
  }
  CceCheck check;
  check.per_agent_regret.resize(sequence.agents());
  for (std::size_t i = 0; i < sequence.agents(); ++i) {
    check.per_agent_regret[i] =
        external_regret(i, sequence, values, ctrs, grids[i]);
  }
  check.max_regret = *std::max_element(check.per_agent_regret.begin(),
                                       check.per_agent_regret.end());
  check.holds = check.max_regret <= epsilon;
  return check;
}

}  // namespace gsp::learning
