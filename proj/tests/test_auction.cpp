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

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gsplab/auction.hpp"
#include "gsplab/rng.hpp"
#include "oracles.hpp"

using namespace gsp;

namespace {

std::vector<double> random_bids(std::size_t n, std::uint64_t seed,
                                std::uint64_t index, bool quantized) {
  std::vector<double> bids(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng::uniform01(seed, i, index);
    // The quantized half forces ties so the index rule gets exercised.
    bids[i] = quantized ? std::floor(u * 4.0) / 4.0 : u;
  }
  return bids;
}

std::vector<double> sorted_ctrs(std::size_t n, std::uint64_t seed,
                                std::uint64_t index) {
  std::vector<double> alphas{1.0};
  for (std::size_t k = 1; k < n; ++k) {
    alphas.push_back(alphas.back() *
                     rng::uniform01(seed, 100 + k, index));
  }
  return alphas;
}

}  // namespace

TEST_CASE("run_gsp matches the worked example") {
  BidProfile bids({0.9, 0.5, 0.2});
  CtrProfile ctrs({1.0, 0.6, 0.3});
  AuctionOutcome out = run_gsp(bids, ctrs);
  CHECK(out.assignment == std::vector<std::size_t>{0, 1, 2});
  CHECK(out.payments[0] == doctest::Approx(0.5));
  CHECK(out.payments[1] == doctest::Approx(0.2));
  CHECK(out.payments[2] == 0.0);
  CHECK(out.clicks[0] == 1.0);
  CHECK(out.slot_of[2] == 2);
}

TEST_CASE("run_gsp breaks ties by index") {
  CtrProfile ctrs({1.0, 0.6, 0.3});
  AuctionOutcome zero = run_gsp(BidProfile({0, 0, 0}), ctrs);
  CHECK(zero.assignment == std::vector<std::size_t>{0, 1, 2});
  CHECK(zero.payments == std::vector<double>{0, 0, 0});

  AuctionOutcome pair = run_gsp(BidProfile({1, 1}), CtrProfile({1.0, 0.5}));
  CHECK(pair.assignment == std::vector<std::size_t>{0, 1});
  CHECK(pair.payments[0] == 1.0);
  CHECK(pair.payments[1] == 0.0);
}

TEST_CASE("run_gsp rejects mismatched shapes") {
  CHECK_THROWS_AS(run_gsp(BidProfile({1, 2}), CtrProfile({1.0})),
                  std::invalid_argument);
}

TEST_CASE("run_gsp agrees with the sort-and-shift oracle") {
  for (std::uint64_t idx = 0; idx < 500; ++idx) {
    std::size_t n = 1 + idx % 10;
    auto bids = random_bids(n, 7, idx, idx % 2 == 0);
    auto alphas = sorted_ctrs(n, 7, idx);
    AuctionOutcome out = run_gsp(BidProfile(bids), CtrProfile(alphas));
    auto expect = oracles::gsp_sort_and_shift(bids, alphas);
    CHECK(out.assignment == expect.assignment);
    CHECK(out.payments == expect.payments);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(out.payments[i] <= bids[i]);
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
      CHECK(bids[out.assignment[k]] >= bids[out.assignment[k + 1]]);
    }
  }
}

TEST_CASE("utility matches the worked example") {
  BidProfile bids({0.9, 0.5, 0.2});
  CtrProfile ctrs({1.0, 0.6, 0.3});
  ValueProfile values({1.0, 0.8, 0.5});
  AuctionOutcome out = run_gsp(bids, ctrs);
  CHECK(utility(0, values, out) == doctest::Approx(0.5));
  CHECK(utility(1, values, out) == doctest::Approx(0.36));
  CHECK(utility(2, values, out) == doctest::Approx(0.15));
  CHECK_THROWS_AS(utility(3, values, out), std::out_of_range);
}

TEST_CASE("utility edge cases: zero margin and zero clicks") {
  CtrProfile ctrs({1.0, 0.0});
  AuctionOutcome out = run_gsp(BidProfile({0.7, 0.7}), ctrs);
  // Agent 0 pays the tied bid and values exactly that.
  CHECK(utility(0, ValueProfile({0.7, 1.0}), out) == 0.0);
  // Agent 1 sits in the zero-CTR slot.
  CHECK(utility(1, ValueProfile({0.7, 1.0}), out) == 0.0);
}

TEST_CASE("social_welfare on the assortative example") {
  ValueProfile values({3, 2, 1});
  CtrProfile ctrs({3, 2, 1});
  std::vector<std::size_t> identity{0, 1, 2};
  CHECK(social_welfare(identity, values, ctrs) == doctest::Approx(14.0));
  CHECK(oracles::brute_force_opt(values.values(), ctrs.alphas()) ==
        doctest::Approx(14.0));

  CHECK(social_welfare(identity, values, CtrProfile({0, 0, 0})) == 0.0);
  CHECK(social_welfare(std::vector<std::size_t>{0}, ValueProfile({5}),
                       CtrProfile({2})) == doctest::Approx(10.0));

  std::vector<std::size_t> repeated{0, 0, 1};
  CHECK_THROWS_AS(social_welfare(repeated, values, ctrs),
                  std::invalid_argument);
}

TEST_CASE("optimal_assignment is assortative with index tie-break") {
  CHECK(optimal_assignment(ValueProfile({1, 2, 3}), CtrProfile({3, 2, 1})) ==
        std::vector<std::size_t>{2, 1, 0});
  CHECK(optimal_assignment(ValueProfile({5, 5, 5}), CtrProfile({3, 2, 1})) ==
        std::vector<std::size_t>{0, 1, 2});
  CHECK(optimal_assignment(ValueProfile({4}), CtrProfile({1})) ==
        std::vector<std::size_t>{0});
}

TEST_CASE("optimal_welfare equals the brute-force maximum") {
  CHECK(optimal_welfare(ValueProfile({1, 2, 3}), CtrProfile({3, 2, 1})) ==
        doctest::Approx(14.0));
  CHECK(optimal_welfare(ValueProfile({0, 0}), CtrProfile({1, 0.5})) == 0.0);
  CHECK(optimal_welfare(ValueProfile({1, 3, 2}), CtrProfile({2, 0, 0})) ==
        doctest::Approx(6.0));

  for (std::uint64_t idx = 0; idx < 200; ++idx) {
    std::size_t n = 2 + idx % 6;  // up to 7 agents
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = rng::uniform01(11, i, idx);
    }
    auto alphas = sorted_ctrs(n, 13, idx);
    double fast = optimal_welfare(ValueProfile(values), CtrProfile(alphas));
    double brute = oracles::brute_force_opt(values, alphas);
    CHECK(fast == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("assignment_excluding drops one agent and appends the virtual slot") {
  BidProfile bids({0.9, 0.5, 0.2});
  CtrProfile ctrs({1.0, 0.6, 0.3});
  CHECK(assignment_excluding(0, bids, ctrs) ==
        std::vector<std::size_t>{1, 2, kVirtualAgent});
  // Excluding the lowest bidder leaves the others in place.
  CHECK(assignment_excluding(2, bids, ctrs) ==
        std::vector<std::size_t>{0, 1, kVirtualAgent});
  CHECK(assignment_excluding(0, BidProfile({3.0}), CtrProfile({1.0})) ==
        std::vector<std::size_t>{kVirtualAgent});
  CHECK_THROWS_AS(assignment_excluding(5, bids, ctrs), std::out_of_range);

  CHECK(excluded_slot_bids(0, bids) == std::vector<double>{0.5, 0.2, 0.0});
  CHECK(excluded_slot_bids(2, bids) == std::vector<double>{0.9, 0.5, 0.0});
}

TEST_CASE("restricted_welfare and its optimal variant") {
  ValueProfile values({3, 2, 1});
  CtrProfile ctrs({3, 2, 1});
  std::vector<std::size_t> identity{0, 1, 2};
  std::vector<std::size_t> all{0, 1, 2};
  std::vector<std::size_t> none{};
  std::vector<std::size_t> pair{1, 2};

  CHECK(restricted_welfare(all, identity, values, ctrs) ==
        social_welfare(identity, values, ctrs));
  CHECK(restricted_welfare(none, identity, values, ctrs) == 0.0);
  CHECK(optimal_restricted_welfare(pair, values, ctrs) == doctest::Approx(8.0));
  CHECK(oracles::brute_force_restricted_opt(pair, values.values(),
                                            ctrs.alphas()) ==
        doctest::Approx(8.0));

  std::vector<std::size_t> bad{7};
  CHECK_THROWS_AS(restricted_welfare(bad, identity, values, ctrs),
                  std::invalid_argument);
}

TEST_CASE("optimal_restricted_welfare equals brute force on random subsets") {
  for (std::uint64_t idx = 0; idx < 100; ++idx) {
    std::size_t n = 2 + idx % 5;
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = rng::uniform01(17, i, idx);
    auto alphas = sorted_ctrs(n, 19, idx);
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng::uniform01(23, i, idx) < 0.5) subset.push_back(i);
    }
    double fast = optimal_restricted_welfare(subset, ValueProfile(values),
                                             CtrProfile(alphas));
    double brute = oracles::brute_force_restricted_opt(subset, values, alphas);
    CHECK(fast == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("individual rationality and truthful efficiency") {
  for (std::uint64_t idx = 0; idx < 200; ++idx) {
    std::size_t n = 2 + idx % 5;
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = rng::uniform01(29, i, idx);
    auto alphas = sorted_ctrs(n, 31, idx);
    ValueProfile v(values);
    CtrProfile ctrs(alphas);

    // Bidding below value never yields negative utility.
    std::vector<double> bids(n);
    for (std::size_t i = 0; i < n; ++i) {
      bids[i] = values[i] * rng::uniform01(37, i, idx);
    }
    AuctionOutcome shaded = run_gsp(BidProfile(bids), ctrs);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(utility(i, v, shaded) >= -1e-15);
    }

    // Truthful bidding lands the optimal assignment exactly.
    AuctionOutcome truthful = run_gsp(BidProfile(values), ctrs);
    CHECK(social_welfare(truthful.assignment, v, ctrs) ==
          optimal_welfare(v, ctrs));
  }
}

TEST_CASE("rearrangement: swaps of the assortative assignment never help") {
  for (std::uint64_t idx = 0; idx < 50; ++idx) {
    std::size_t n = 3 + idx % 4;
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = rng::uniform01(41, i, idx);
    auto alphas = sorted_ctrs(n, 43, idx);
    ValueProfile v(values);
    CtrProfile ctrs(alphas);
    auto best = optimal_assignment(v, ctrs);
    double opt = social_welfare(best, v, ctrs);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        auto swapped = best;
        std::swap(swapped[a], swapped[b]);
        CHECK(social_welfare(swapped, v, ctrs) <= opt + 1e-12);
      }
    }
  }
}

TEST_CASE("scale equivariance of bids") {
  std::vector<double> bids{0.4, 0.9, 0.1, 0.4};
  CtrProfile ctrs({1.0, 0.7, 0.2, 0.0});
  AuctionOutcome base = run_gsp(BidProfile(bids), ctrs);
  for (double c : {0.5, 3.0, 1024.0}) {
    std::vector<double> scaled(bids);
    for (double& b : scaled) b *= c;
    AuctionOutcome out = run_gsp(BidProfile(scaled), ctrs);
    CHECK(out.assignment == base.assignment);
    for (std::size_t i = 0; i < bids.size(); ++i) {
      CHECK(out.payments[i] == base.payments[i] * c);
    }
  }
}

TEST_CASE("pad_instance squares ragged inputs") {
  Instance more_agents = pad_instance({1, 2, 3}, {1.0});
  CHECK(more_agents.ctrs.slots() == 3);
  CHECK(more_agents.ctrs.alpha(2) == 0.0);

  Instance more_slots = pad_instance({1.0}, {1.0, 0.5, 0.2});
  CHECK(more_slots.values.agents() == 3);
  CHECK(more_slots.values.value(2) == 0.0);
}

TEST_CASE("profile validation") {
  CHECK_THROWS_AS(CtrProfile({0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(CtrProfile(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(CtrProfile({-0.1}), std::invalid_argument);
  CHECK_THROWS_AS(ValueProfile({-1.0}), std::invalid_argument);
  CHECK_THROWS_AS(BidProfile({std::nan("")}), std::invalid_argument);
}
