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

#include "gsplab/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gsplab/errors.hpp"
#include "gsplab/parallel.hpp"
#include "gsplab/rng.hpp"

namespace gsp::equilibria {
namespace {

constexpr std::uint64_t kCtrStream = 0x11;
constexpr std::uint64_t kValueStream = 0x22;

struct JointGrid {
  const std::vector<BidGrid>* grids;

  explicit JointGrid(const std::vector<BidGrid>& gs) : grids(&gs) {}

  void decode(std::uint64_t index, std::vector<double>& bids) const {
    for (std::size_t i = 0; i < grids->size(); ++i) {
      const BidGrid& g = (*grids)[i];
      bids[i] = g.bid(index % g.size());
      index /= g.size();
    }
  }
};

// Exact joint-grid size with overflow saturation.
std::uint64_t joint_size(const std::vector<BidGrid>& grids) {
  std::uint64_t total = 1;
  for (const auto& g : grids) {
    if (total > UINT64_MAX / g.size()) return UINT64_MAX;
    total *= g.size();
  }
  return total;
}

// True iff no agent has a strictly profitable grid deviation. Uses the same
// sweep for the current utility (own bid is a grid point) and for the
// deviations, so the comparison is exact.
bool is_grid_ne(const std::vector<double>& bids, const ValueProfile& values,
                const CtrProfile& ctrs, const std::vector<BidGrid>& grids,
                CounterfactualSweep& sweep, std::vector<double>& scratch) {
  std::size_t n = bids.size();
  for (std::size_t i = 0; i < n; ++i) {
    const BidGrid& grid = grids[i];
    sweep.prepare(i, bids);
    scratch.resize(grid.size());
    sweep.run(values.value(i), ctrs, grid.bids(), scratch);
    double current = sweep.utility_of_bid(values.value(i), ctrs, bids[i]);
    for (double u : scratch) {
      if (u > current) return false;
    }
  }
  return true;
}

}  // namespace

double default_ne_epsilon(const ValueProfile& values, const CtrProfile& ctrs) {
  return 1e-6 * ctrs.alpha(0) * values.max_value();
}

BestResponse best_response(std::size_t agent, const BidProfile& profile,
                           const ValueProfile& values, const CtrProfile& ctrs,
                           const BidGrid& grid) {
  if (agent >= profile.agents() || agent >= values.agents()) {
    throw std::out_of_range("best_response: agent index");
  }
  if (profile.agents() != ctrs.slots()) {
    throw std::invalid_argument("best_response: length mismatch");
  }
  CounterfactualSweep sweep;
  sweep.prepare(agent, profile.bids());
  std::vector<double> utilities(grid.size());
  sweep.run(values.value(agent), ctrs, grid.bids(), utilities);
  std::size_t best = 0;
  for (std::size_t i = 1; i < utilities.size(); ++i) {
    if (utilities[i] > utilities[best]) best = i;  // ties keep lowest bid
  }
  return BestResponse{grid.bid(best), utilities[best]};
}

NeVerdict check_pure_ne(const BidProfile& bids, const ValueProfile& values,
                        const CtrProfile& ctrs,
                        const std::vector<BidGrid>& grids, double epsilon) {
  std::size_t n = bids.agents();
  if (values.agents() != n || ctrs.slots() != n || grids.size() != n) {
    throw std::invalid_argument("check_pure_ne: length mismatch");
  }
  if (epsilon < 0.0) throw std::invalid_argument("check_pure_ne: epsilon < 0");

  NeVerdict verdict;
  verdict.worst_deviation =
      Deviation{0, bids.bid(0), -std::numeric_limits<double>::infinity()};
  CounterfactualSweep sweep;
  std::vector<double> utilities;
  for (std::size_t i = 0; i < n; ++i) {
    sweep.prepare(i, bids.bids());
    double current = sweep.utility_of_bid(values.value(i), ctrs, bids.bid(i));
    utilities.resize(grids[i].size());
    sweep.run(values.value(i), ctrs, grids[i].bids(), utilities);
    for (std::size_t g = 0; g < utilities.size(); ++g) {
      double gain = utilities[g] - current;
      if (gain > verdict.worst_deviation.gain) {
        verdict.worst_deviation = Deviation{i, grids[i].bid(g), gain};
      }
    }
  }
  verdict.epsilon = epsilon;
  verdict.is_ne = verdict.worst_deviation.gain <= epsilon;
  return verdict;
}

std::vector<BidProfile> enumerate_pure_ne(const ValueProfile& values,
                                          const CtrProfile& ctrs,
                                          const std::vector<BidGrid>& grids,
                                          std::uint64_t budget,
                                          unsigned threads) {
  std::size_t n = values.agents();
  if (ctrs.slots() != n || grids.size() != n) {
    throw std::invalid_argument("enumerate_pure_ne: length mismatch");
  }
  std::uint64_t total = joint_size(grids);
  if (total > budget) {
    throw BudgetError("enumerate_pure_ne: joint grid has " +
                          std::to_string(total) + " profiles, budget is " +
                          std::to_string(budget),
                      total);
  }

  constexpr std::uint64_t kChunk = 8192;
  std::size_t chunks = static_cast<std::size_t>((total + kChunk - 1) / kChunk);
  std::vector<std::vector<std::uint64_t>> found(chunks);

  JointGrid joint(grids);
  parallel_for(chunks, threads, [&](std::size_t c) {
    std::uint64_t lo = static_cast<std::uint64_t>(c) * kChunk;
    std::uint64_t hi = std::min(total, lo + kChunk);
    CounterfactualSweep sweep;
    std::vector<double> bids(n), scratch;
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      joint.decode(idx, bids);
      if (is_grid_ne(bids, values, ctrs, grids, sweep, scratch)) {
        found[c].push_back(idx);
      }
    }
  });

  std::vector<BidProfile> result;
  std::vector<double> bids(n);
  for (const auto& chunk : found) {
    for (std::uint64_t idx : chunk) {
      joint.decode(idx, bids);
      result.push_back(BidProfile(bids));
    }
  }
  return result;
}

Instance sample_poa_instance(std::size_t slots, std::uint64_t seed,
                             std::uint64_t index) {
  if (slots == 0) throw std::invalid_argument("sample_poa_instance: slots");
  auto u = [&](std::uint64_t lane) {
    return rng::uniform01(seed, rng::substream(kCtrStream, lane),
                          index);
  };

  std::vector<double> alphas{1.0};
  std::vector<double> vals;
  bool guided = (index % 2 == 1);

  if (slots == 2 && guided) {
    double r = 0.30 + 0.40 * u(0);
    double v1 = 0.5 + u(1);
    double w = std::min(1.0, (1.0 - r) * (1.0 + 0.05 * u(2)));
    alphas.push_back(r);
    vals = {v1, w * v1};
  } else if (slots == 3 && guided) {
    // Jittered neighborhood of the tight 3-slot construction.
    double a2 = 0.55079 * (1.0 + 0.10 * (u(0) - 0.5));
    double a3 = 0.4704 * (1.0 + 0.10 * (u(1) - 0.5));
    a2 = std::min(a2, 1.0);
    a3 = std::min(a3, a2);
    double v1 = 0.5 + u(2);
    double jb = 0.01 + 0.04 * u(3);
    double jc = 0.01 + 0.04 * u(4);
    double v2 = std::min(v1, (1.0 - a3) * v1 * (1.0 + jb));
    double v3 = std::min(v2, ((a2 - a3) / a2) * v1 * (1.0 + jc));
    alphas = {1.0, a2, a3};
    vals = {v1, v2, v3};
  } else {
    for (std::size_t k = 1; k < slots; ++k) {
      alphas.push_back(alphas.back() * (0.30 + 0.70 * u(10 + k)));
    }
    double v1 = 0.5 + rng::uniform01(seed, rng::substream(kValueStream, 0), index);
    vals = {v1};
    for (std::size_t i = 1; i < slots; ++i) {
      double frac =
          rng::uniform01(seed, rng::substream(kValueStream, i), index);
      vals.push_back(vals.back() * frac);
    }
  }
  return Instance{ValueProfile(std::move(vals)), CtrProfile(std::move(alphas))};
}

PoaSearchResult pure_poa_search(std::size_t slots, std::size_t ctr_samples,
                                std::size_t value_samples,
                                std::size_t grid_points, std::uint64_t seed,
                                unsigned threads, std::uint64_t budget) {
  if (slots == 0 || slots > 4) {
    throw std::invalid_argument("pure_poa_search supports 1..4 slots");
  }
  std::size_t instances = ctr_samples * value_samples;
  if (instances == 0) throw std::invalid_argument("pure_poa_search: no samples");

  struct InstanceResult {
    double worst = 0.0;
    double worst_fixed = 0.0;
    std::uint64_t ne_count = 0;
    std::vector<double> witness_bids;
    std::vector<double> values;
    std::vector<double> alphas;
  };
  std::vector<InstanceResult> results(instances);

  parallel_for(instances, threads, [&](std::size_t idx) {
    Instance inst = sample_poa_instance(slots, seed, idx);
    auto grids = BidGrid::no_overbid_uniform(inst.values, grid_points);
    auto nes = enumerate_pure_ne(inst.values, inst.ctrs, grids, budget, 1);
    InstanceResult& r = results[idx];
    r.ne_count = nes.size();
    double opt = optimal_welfare(inst.values, inst.ctrs);
    for (const auto& ne : nes) {
      AuctionOutcome outcome = run_gsp(ne, inst.ctrs);
      double sw = social_welfare(outcome.assignment, inst.values, inst.ctrs);
      if (sw <= 0.0) continue;
      double ratio = opt / sw;
      bool fixed_point = false;
      for (std::size_t k = 0; k < outcome.assignment.size(); ++k) {
        if (outcome.assignment[k] == k) {
          fixed_point = true;
          break;
        }
      }
      if (fixed_point && ratio > r.worst_fixed) r.worst_fixed = ratio;
      if (ratio > r.worst) {
        r.worst = ratio;
        r.witness_bids = ne.bids();
        r.values = inst.values.values();
        r.alphas = inst.ctrs.alphas();
      }
    }
  });

  PoaSearchResult out;
  out.instances = instances;
  for (const auto& r : results) {
    out.equilibria_seen += r.ne_count;
    if (r.worst_fixed > out.worst_ratio_fixed_point) {
      out.worst_ratio_fixed_point = r.worst_fixed;
    }
    if (r.worst > out.worst_ratio) {
      out.worst_ratio = r.worst;
      out.witness =
          PoaWitness{r.values, r.alphas, r.witness_bids, r.worst};
    }
  }
  return out;
}

}  // namespace gsp::equilibria
