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

#include "gsplab/auction.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace gsp {
namespace {

// Agent indices in GSP rank order: bid descending, index ascending on ties.
std::vector<std::size_t> rank_agents(const std::vector<double>& bids) {
  std::vector<std::size_t> order(bids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (bids[a] != bids[b]) return bids[a] > bids[b];
    return a < b;
  });
  return order;
}

void require_bijection(std::span<const std::size_t> assignment,
                       std::size_t n) {
  if (assignment.size() != n) {
    throw std::invalid_argument("assignment length mismatch");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t agent : assignment) {
    if (agent >= n || seen[agent]) {
      throw std::invalid_argument("assignment is not a bijection");
    }
    seen[agent] = true;
  }
}

}  // namespace

AuctionOutcome run_gsp(const BidProfile& bids, const CtrProfile& ctrs) {
  std::size_t n = bids.agents();
  if (n != ctrs.slots()) {
    throw std::invalid_argument(
        "run_gsp: bids and ctrs must have equal length");
  }

  AuctionOutcome out;
  out.assignment = rank_agents(bids.bids());
  out.slot_of.assign(n, 0);
  out.payments.assign(n, 0.0);
  out.clicks.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t agent = out.assignment[k];
    out.slot_of[agent] = k;
    out.clicks[agent] = ctrs.alpha(k);
    out.payments[agent] =
        (k + 1 < n) ? bids.bid(out.assignment[k + 1]) : 0.0;
  }
  return out;
}

double utility(std::size_t agent, const ValueProfile& values,
               const AuctionOutcome& outcome) {
  if (agent >= values.agents() || agent >= outcome.clicks.size()) {
    throw std::out_of_range("utility: agent index");
  }
  return outcome.clicks[agent] * (values.value(agent) - outcome.payments[agent]);
}

double social_welfare(std::span<const std::size_t> assignment,
                      const ValueProfile& values, const CtrProfile& ctrs) {
  std::size_t n = values.agents();
  if (ctrs.slots() != n) {
    throw std::invalid_argument("social_welfare: length mismatch");
  }
  require_bijection(assignment, n);
  double sw = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sw += ctrs.alpha(k) * values.value(assignment[k]);
  }
  return sw;
}

std::vector<std::size_t> optimal_assignment(const ValueProfile& values,
                                            const CtrProfile& ctrs) {
  if (ctrs.slots() != values.agents()) {
    throw std::invalid_argument("optimal_assignment: length mismatch");
  }
  return rank_agents(values.values());
}

double optimal_welfare(const ValueProfile& values, const CtrProfile& ctrs) {
  return social_welfare(optimal_assignment(values, ctrs), values, ctrs);
}

std::vector<std::size_t> assignment_excluding(std::size_t agent,
                                              const BidProfile& bids,
                                              const CtrProfile& ctrs) {
  std::size_t n = bids.agents();
  if (agent >= n) throw std::out_of_range("assignment_excluding: agent index");
  if (n != ctrs.slots()) {
    throw std::invalid_argument(
        "assignment_excluding: bids and ctrs must have equal length");
  }
  std::vector<std::size_t> order = rank_agents(bids.bids());
  std::vector<std::size_t> result;
  result.reserve(n);
  for (std::size_t who : order) {
    if (who != agent) result.push_back(who);
  }
  result.push_back(kVirtualAgent);
  return result;
}

std::vector<double> excluded_slot_bids(std::size_t agent,
                                       const BidProfile& bids) {
  std::size_t n = bids.agents();
  if (agent >= n) throw std::out_of_range("excluded_slot_bids: agent index");
  std::vector<double> others;
  others.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i != agent) others.push_back(bids.bid(i));
  }
  std::sort(others.begin(), others.end(), std::greater<>());
  others.push_back(0.0);  // virtual occupant of the last slot
  return others;
}

double restricted_welfare(std::span<const std::size_t> subset,
                          std::span<const std::size_t> assignment,
                          const ValueProfile& values, const CtrProfile& ctrs) {
  std::size_t n = values.agents();
  require_bijection(assignment, n);
  std::vector<bool> in_subset(n, false);
  for (std::size_t agent : subset) {
    if (agent >= n) throw std::invalid_argument("restricted_welfare: subset");
    in_subset[agent] = true;
  }
  double sw = 0.0;
  for (std::size_t k = 0; k < assignment.size() && k < ctrs.slots(); ++k) {
    if (in_subset[assignment[k]]) {
      sw += ctrs.alpha(k) * values.value(assignment[k]);
    }
  }
  return sw;
}

double optimal_restricted_welfare(std::span<const std::size_t> subset,
                                  const ValueProfile& values,
                                  const CtrProfile& ctrs) {
  std::size_t n = values.agents();
  std::vector<double> subset_values;
  std::vector<bool> seen(n, false);
  subset_values.reserve(subset.size());
  for (std::size_t agent : subset) {
    if (agent >= n || seen[agent]) {
      throw std::invalid_argument("optimal_restricted_welfare: subset");
    }
    seen[agent] = true;
    subset_values.push_back(values.value(agent));
  }
  std::sort(subset_values.begin(), subset_values.end(), std::greater<>());
  double sw = 0.0;
  std::size_t m = std::min(subset_values.size(), ctrs.slots());
  for (std::size_t k = 0; k < m; ++k) {
    sw += ctrs.alpha(k) * subset_values[k];
  }
  return sw;
}

void to_json(nlohmann::ordered_json& j, const AuctionOutcome& o) {
  j = nlohmann::ordered_json{{"assignment", o.assignment},
                             {"slot_of", o.slot_of},
                             {"payments", o.payments},
                             {"clicks", o.clicks}};
}

}  // namespace gsp
