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
#include <span>
#include <utility>
#include <vector>

#include "gsplab/auction.hpp"
#include "gsplab/profiles.hpp"

namespace gsp::equilibria {

// Finite menu of allowed bids for one agent: ascending, distinct,
// nonnegative. Under no-overbidding the top point is the agent's value.
class BidGrid {
 public:
  explicit BidGrid(std::vector<double> bids);

  // `points` evenly spaced bids on [0, cap]. A single point or a zero cap
  // collapses to the obvious degenerate grid.
  static BidGrid uniform(std::size_t points, double cap);

  // One uniform grid per agent, capped at that agent's value.
  static std::vector<BidGrid> no_overbid_uniform(const ValueProfile& values,
                                                 std::size_t points);

  std::size_t size() const { return bids_.size(); }
  double bid(std::size_t i) const { return bids_[i]; }
  const std::vector<double>& bids() const { return bids_; }
  double cap() const { return bids_.back(); }

 private:
  std::vector<double> bids_;
};

// Evaluates one agent's utility at every candidate bid against a fixed set
// of opponent bids, with the exact allocation, pricing, and tie rules of
// run_gsp. Reusable to keep the per-round cost of repeated sweeps at
// O(n log n + K).
class CounterfactualSweep {
 public:
  // Ranks everyone except `agent` from the full bid vector.
  void prepare(std::size_t agent, std::span<const double> all_bids);

  // out[i] = utility of bidding grid[i]; grid must be ascending.
  void run(double value, const CtrProfile& ctrs,
           std::span<const double> grid_ascending, std::span<double> out) const;

  // Utility of a single candidate bid.
  double utility_of_bid(double value, const CtrProfile& ctrs, double bid) const;

 private:
  std::size_t agent_ = 0;
  // (bid, agent) for the opponents, bid descending then index ascending.
  std::vector<std::pair<double, std::size_t>> ranked_;
};

}  // namespace gsp::equilibria
