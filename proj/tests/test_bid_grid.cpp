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

#include <doctest.h>

#include <vector>

#include "gsplab/auction.hpp"
#include "gsplab/bid_grid.hpp"
#include "gsplab/rng.hpp"

using namespace gsp;
using equilibria::BidGrid;
using equilibria::CounterfactualSweep;

TEST_CASE("uniform grids") {
  BidGrid grid = BidGrid::uniform(5, 2.0);
  CHECK(grid.bids() == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
  CHECK(BidGrid::uniform(1, 3.0).bids() == std::vector<double>{3.0});
  CHECK(BidGrid::uniform(64, 0.0).bids() == std::vector<double>{0.0});
  CHECK_THROWS_AS(BidGrid({0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(BidGrid({1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(BidGrid(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("no-overbid grids cap at each value") {
  auto grids = BidGrid::no_overbid_uniform(ValueProfile({2.0, 0.5, 0.0}), 4);
  CHECK(grids[0].cap() == 2.0);
  CHECK(grids[1].cap() == 0.5);
  CHECK(grids[2].bids() == std::vector<double>{0.0});
}

TEST_CASE("counterfactual sweep equals rerunning the auction") {
  for (std::uint64_t idx = 0; idx < 300; ++idx) {
    std::size_t n = 2 + idx % 5;
    std::vector<double> bids(n), alphas{1.0};
    for (std::size_t i = 0; i < n; ++i) {
      double u = rng::uniform01(51, i, idx);
      bids[i] = (idx % 2 == 0) ? std::floor(u * 4.0) / 4.0 : u;
    }
    for (std::size_t k = 1; k < n; ++k) {
      alphas.push_back(alphas.back() * rng::uniform01(53, k, idx));
    }
    CtrProfile ctrs(alphas);
    std::size_t agent = idx % n;
    double value = rng::uniform01(57, 0, idx) * 2.0;
    ValueProfile values(std::vector<double>(n, value));

    BidGrid grid = BidGrid::uniform(9, 1.0);
    CounterfactualSweep sweep;
    sweep.prepare(agent, bids);
    std::vector<double> got(grid.size());
    sweep.run(value, ctrs, grid.bids(), got);

    for (std::size_t g = 0; g < grid.size(); ++g) {
      std::vector<double> modified = bids;
      modified[agent] = grid.bid(g);
      AuctionOutcome out = run_gsp(BidProfile(modified), ctrs);
      CHECK(got[g] == utility(agent, values, out));
    }
  }
}
