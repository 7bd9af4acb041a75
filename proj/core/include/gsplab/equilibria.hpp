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
#include <optional>
#include <vector>

#include "gsplab/bid_grid.hpp"
#include "gsplab/profiles.hpp"

namespace gsp::equilibria {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

// Scale-aware slack for approximate-equilibrium checks.
double default_ne_epsilon(const ValueProfile& values, const CtrProfile& ctrs);

struct BestResponse {
  double bid = 0.0;
  double utility = 0.0;
};

// Utility-maximizing grid bid against the fixed bids of everyone else
// (profile[agent] is ignored). Ties resolve to the lowest maximizing bid.
BestResponse best_response(std::size_t agent, const BidProfile& profile,
                           const ValueProfile& values, const CtrProfile& ctrs,
                           const BidGrid& grid);

struct Deviation {
  std::size_t agent = 0;
  double bid = 0.0;
  double gain = 0.0;
};

struct NeVerdict {
  bool is_ne = false;
  double epsilon = 0.0;
  // Most profitable unilateral grid deviation found (gain may be <= 0).
  Deviation worst_deviation;
};

// True iff no agent gains more than epsilon by any unilateral grid bid.
NeVerdict check_pure_ne(const BidProfile& bids, const ValueProfile& values,
                        const CtrProfile& ctrs,
                        const std::vector<BidGrid>& grids, double epsilon);

// All joint grid profiles that are exact (epsilon = 0) pure Nash equilibria.
// Refuses with BudgetError when the joint grid exceeds `budget` profiles.
std::vector<BidProfile> enumerate_pure_ne(
    const ValueProfile& values, const CtrProfile& ctrs,
    const std::vector<BidGrid>& grids,
    std::uint64_t budget = kDefaultEnumerationBudget, unsigned threads = 1);

struct PoaWitness {
  std::vector<double> values;
  std::vector<double> alphas;
  std::vector<double> ne_bids;
  double ratio = 1.0;
};

struct PoaSearchResult {
  double worst_ratio = 0.0;
  // Worst ratio among equilibria whose allocation fixes some slot
  // (assignment[k] == k for value-sorted agents).
  double worst_ratio_fixed_point = 0.0;
  PoaWitness witness;
  std::size_t instances = 0;
  std::uint64_t equilibria_seen = 0;
};

// Worst OPT/SW over sampled instances and their enumerated pure equilibria
// under no-overbidding. Instances are drawn per (seed, index); half the
// draws are uniform, half are concentrated near the known worst-case
// frontier so the search actually attains the tight ratios.
PoaSearchResult pure_poa_search(std::size_t slots, std::size_t ctr_samples,
                                std::size_t value_samples,
                                std::size_t grid_points, std::uint64_t seed,
                                unsigned threads = 1,
                                std::uint64_t budget = kDefaultEnumerationBudget);

// The instance sampler behind pure_poa_search, exposed for tests and the
// acceptance suite. Values and CTRs come out sorted descending with
// alpha_1 = 1.
Instance sample_poa_instance(std::size_t slots, std::uint64_t seed,
                             std::uint64_t index);

}  // namespace gsp::equilibria
