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

#include "gsplab/bid_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gsp::equilibria {

BidGrid::BidGrid(std::vector<double> bids) : bids_(std::move(bids)) {
  if (bids_.empty()) throw std::invalid_argument("BidGrid must be nonempty");
  for (std::size_t i = 0; i < bids_.size(); ++i) {
    if (!std::isfinite(bids_[i]) || bids_[i] < 0.0) {
      throw std::invalid_argument("BidGrid bids must be finite, nonnegative");
    }
    if (i > 0 && bids_[i] <= bids_[i - 1]) {
      throw std::invalid_argument("BidGrid bids must be strictly ascending");
    }
  }
}

BidGrid BidGrid::uniform(std::size_t points, double cap) {
  if (points == 0) throw std::invalid_argument("BidGrid needs >= 1 point");
  if (!std::isfinite(cap) || cap < 0.0) {
    throw std::invalid_argument("BidGrid cap must be finite, nonnegative");
  }
  if (cap == 0.0) return BidGrid({0.0});
  if (points == 1) return BidGrid({cap});
  std::vector<double> bids(points);
  for (std::size_t i = 0; i < points; ++i) {
    bids[i] = cap * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return BidGrid(std::move(bids));
}

std::vector<BidGrid> BidGrid::no_overbid_uniform(const ValueProfile& values,
                                                 std::size_t points) {
  std::vector<BidGrid> grids;
  grids.reserve(values.agents());
  for (std::size_t i = 0; i < values.agents(); ++i) {
    grids.push_back(uniform(points, values.value(i)));
  }
  return grids;
}

void CounterfactualSweep::prepare(std::size_t agent,
                                  std::span<const double> all_bids) {
  agent_ = agent;
  ranked_.clear();
  ranked_.reserve(all_bids.size() - 1);
  for (std::size_t j = 0; j < all_bids.size(); ++j) {
    if (j != agent) ranked_.emplace_back(all_bids[j], j);
  }
  std::sort(ranked_.begin(), ranked_.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
}

void CounterfactualSweep::run(double value, const CtrProfile& ctrs,
                              std::span<const double> grid_ascending,
                              std::span<double> out) const {
  // Walk the grid from the highest bid down; the number of opponents ranked
  // above is nondecreasing along the walk.
  std::size_t above = 0;
  for (std::size_t gi = grid_ascending.size(); gi-- > 0;) {
    double bid = grid_ascending[gi];
    while (above < ranked_.size() &&
           (ranked_[above].first > bid ||
            (ranked_[above].first == bid && ranked_[above].second < agent_))) {
      ++above;
    }
    double payment = (above < ranked_.size()) ? ranked_[above].first : 0.0;
    out[gi] = ctrs.alpha(above) * (value - payment);
  }
}

double CounterfactualSweep::utility_of_bid(double value, const CtrProfile& ctrs,
                                           double bid) const {
  double out = 0.0;
  run(value, ctrs, std::span<const double>(&bid, 1), std::span<double>(&out, 1));
  return out;
}

}  // namespace gsp::equilibria
