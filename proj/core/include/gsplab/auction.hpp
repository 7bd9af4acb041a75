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

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <json.hpp>

#include "gsplab/profiles.hpp"

namespace gsp {

// Marks the zero-bid placeholder occupying the last slot when one agent is
// removed from the auction.
inline constexpr std::size_t kVirtualAgent =
    std::numeric_limits<std::size_t>::max();

// Result of one GSP round. `assignment[k]` is the agent in slot k;
// `slot_of` is its inverse. Payments are per click: the bid of the agent one
// slot down, zero for the last slot. `clicks[i]` is the CTR of agent i's
// slot.
struct AuctionOutcome {
  std::vector<std::size_t> assignment;
  std::vector<std::size_t> slot_of;
  std::vector<double> payments;
  std::vector<double> clicks;
};

// Runs the GSP auction: slots in CTR order go to agents in bid order, each
// winner pays the next-highest bid. Ties broken by lower agent index.
// Requires bids and ctrs of equal length (see pad_instance for ragged
// inputs).
AuctionOutcome run_gsp(const BidProfile& bids, const CtrProfile& ctrs);

// alpha_{sigma(i)} * (v_i - p_i).
double utility(std::size_t agent, const ValueProfile& values,
               const AuctionOutcome& outcome);

// Sum over slots of alpha_k * v_{assignment[k]}. The assignment must be a
// bijection between slots and agents.
double social_welfare(std::span<const std::size_t> assignment,
                      const ValueProfile& values, const CtrProfile& ctrs);

// Assortative matching: k-th highest value into slot k, ties by index.
std::vector<std::size_t> optimal_assignment(const ValueProfile& values,
                                            const CtrProfile& ctrs);

double optimal_welfare(const ValueProfile& values, const CtrProfile& ctrs);

// GSP assignment when `agent` stays out: slots 0..n-2 get the remaining
// agents in bid order, slot n-1 gets kVirtualAgent (bid zero).
std::vector<std::size_t> assignment_excluding(std::size_t agent,
                                              const BidProfile& bids,
                                              const CtrProfile& ctrs);

// Bid of the occupant of each slot when `agent` is excluded; the last slot
// reads zero. This is the order statistic of the other agents' bids, used by
// the structural-property estimators.
std::vector<double> excluded_slot_bids(std::size_t agent,
                                       const BidProfile& bids);

// Welfare of `assignment` counting only agents in `subset`.
double restricted_welfare(std::span<const std::size_t> subset,
                          std::span<const std::size_t> assignment,
                          const ValueProfile& values, const CtrProfile& ctrs);

// Best welfare achievable by `subset` alone, over all injective assignments
// of the subset into the slots (assortative on the subset).
double optimal_restricted_welfare(std::span<const std::size_t> subset,
                                  const ValueProfile& values,
                                  const CtrProfile& ctrs);

void to_json(nlohmann::ordered_json& j, const AuctionOutcome& o);

}  // namespace gsp
