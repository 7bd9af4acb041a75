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

#include "gsplab/poa_frontier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gsplab/auction.hpp"
#include "gsplab/equilibria.hpp"
#include "gsplab/errors.hpp"
#include "gsplab/parallel.hpp"
#include "gsplab/rng.hpp"

namespace gsp::poa {
namespace {

// Inputs this close to a vanishing denominator are rejected, not
// extrapolated.
constexpr double kSingularGuard = 1e-9;

void require_3slot(const CtrProfile& ctrs, const char* what) {
  if (ctrs.slots() != 3) {
    throw std::invalid_argument(std::string(what) + ": needs exactly 3 slots");
  }
}

double cyclic_objective(std::span<const double> a) {
  std::size_t n = a.size();
  double an = a[n - 1];
  double num = a[0];
  double den = an;
  for (std::size_t i = 1; i < n; ++i) {
    num += a[i] * (a[i - 1] - an) / a[i - 1];
    den += a[i - 1] - an;
  }
  if (den <= kSingularGuard) {
    throw std::domain_error("cyclic objective: vanishing denominator");
  }
  return num / den;
}

// ---- grid + compass maximization over ordered CTR vectors -----------------

struct Objective {
  Case tag;
  std::size_t slots;  // total slots including the fixed alpha_1 = 1

  // x holds (a2, ..., an); feasibility is 1 >= a2 >= ... >= an >= 0 plus the
  // case-specific singularity guards.
  bool feasible(std::span<const double> x) const {
    double prev = 1.0;
    for (double v : x) {
      if (v < 0.0 || v > prev) return false;
      prev = v;
    }
    switch (tag) {
      case Case::kCaseI:
        return x[0] > kSingularGuard;
      case Case::kCaseII:
        return x[0] < 1.0 - kSingularGuard && x[1] < 1.0 - kSingularGuard;
      case Case::kCyclic:
        for (std::size_t i = 0; i + 1 < x.size(); ++i) {
          if (x[i] <= kSingularGuard) return false;
        }
        return true;
    }
    return false;
  }

  double eval(std::span<const double> x) const {
    if (tag == Case::kCaseII) {
      double a2 = x[0], a3 = x[1];
      double c1 = 1.0 / (1.0 - a2);
      double c2 = 1.0 / (1.0 - a3);
      return (c1 + a2 * c2 + a3) / (a2 * c1 + a3 * c2 + 1.0);
    }
    thread_local std::vector<double> a;
    a.assign(1, 1.0);
    a.insert(a.end(), x.begin(), x.end());
    return cyclic_objective(a);
  }
};

struct CompassResult {
  std::vector<double> x;
  double value;
  std::uint64_t evaluations;
};

CompassResult compass_refine(const Objective& obj, std::vector<double> x,
                             double step) {
  double best = obj.eval(x);
  std::uint64_t evals = 1;
  std::vector<double> trial = x;
  while (step > 1e-12) {
    bool improved = false;
    for (std::size_t d = 0; d < x.size(); ++d) {
      for (double sign : {+1.0, -1.0}) {
        trial = x;
        trial[d] += sign * step;
        if (!obj.feasible(trial)) continue;
        double v = obj.eval(trial);
        ++evals;
        if (v > best) {
          best = v;
          x = trial;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return CompassResult{std::move(x), best, evals};
}

OptimizerResult maximize(const Objective& obj, std::size_t resolution,
                         std::size_t restarts, std::uint64_t seed,
                         unsigned threads) {
  if (resolution < 2) throw std::invalid_argument("resolution too small");
  std::size_t dims = obj.slots - 1;

  // Ordered grid enumeration, parallel over the leading coordinate.
  struct RowBest {
    double value = -1.0;
    std::vector<double> x;
    std::uint64_t evals = 0;
  };
  std::vector<RowBest> rows(resolution + 1);
  double h = 1.0 / static_cast<double>(resolution);

  parallel_for(resolution + 1, threads, [&](std::size_t j) {
    RowBest& row = rows[j];
    std::vector<double> x(dims);
    x[0] = static_cast<double>(j) * h;
    // Ordered odometer: digit t covers x[t + 1] and is capped by the digit
    // to its left, so only nonincreasing tuples are visited.
    std::size_t m = dims - 1;
    std::vector<std::size_t> idx(m, 0);
    for (;;) {
      for (std::size_t t = 0; t < m; ++t) {
        x[t + 1] = static_cast<double>(idx[t]) * h;
      }
      if (obj.feasible(x)) {
        double v = obj.eval(x);
        ++row.evals;
        if (v > row.value) {
          row.value = v;
          row.x = x;
        }
      }
      if (m == 0) break;
      std::size_t t = m;
      bool done = false;
      for (;;) {
        if (t == 0) {
          done = true;
          break;
        }
        --t;
        ++idx[t];
        std::size_t cap = (t == 0) ? j : idx[t - 1];
        if (idx[t] <= cap) break;
        idx[t] = 0;
      }
      if (done) break;
    }
  });

  double grid_best = -1.0;
  std::vector<double> grid_arg;
  std::uint64_t evaluations = 0;
  for (const auto& row : rows) {
    evaluations += row.evals;
    if (row.value > grid_best) {
      grid_best = row.value;
      grid_arg = row.x;
    }
  }
  if (grid_arg.empty()) {
    throw InvariantError("poa_maximize_feasible_grid",
                         "no feasible grid point");
  }

  // Refinement: compass descent from the grid argmax plus seeded restarts.
  std::vector<CompassResult> refined(restarts + 1);
  parallel_for(restarts + 1, threads, [&](std::size_t r) {
    std::vector<double> start(dims);
    if (r == 0) {
      start = grid_arg;
    } else {
      // Random ordered point: sorted uniforms, nudged into the guards.
      for (std::size_t d = 0; d < dims; ++d) {
        start[d] = rng::uniform01(seed, 0xF00D + d, r);
      }
      std::sort(start.begin(), start.end(), std::greater<>());
      if (!obj.feasible(start)) {
        for (double& v : start) v = std::clamp(v, 2e-9, 1.0 - 2e-9);
        std::sort(start.begin(), start.end(), std::greater<>());
      }
      if (!obj.feasible(start)) start = grid_arg;
    }
    refined[r] = compass_refine(obj, std::move(start), std::max(h, 1e-4));
  });

  CompassResult best = refined[0];
  for (std::size_t r = 1; r < refined.size(); ++r) {
    evaluations += refined[r].evaluations;
    if (refined[r].value > best.value) best = refined[r];
  }
  evaluations += refined[0].evaluations;

  if (grid_best > best.value + 1e-6) {
    throw InvariantError("poa_maximize_certification",
                         "grid point exceeds refined optimum");
  }

  OptimizerResult out;
  out.best.alphas.assign(1, 1.0);
  out.best.alphas.insert(out.best.alphas.end(), best.x.begin(), best.x.end());
  out.best.value = best.value;
  out.best.tag = obj.tag;
  out.evaluations = evaluations;
  out.restarts = restarts;
  out.resolution = resolution;
  return out;
}

}  // namespace

double poa_case_i(const CtrProfile& ctrs) {
  require_3slot(ctrs, "poa_case_i");
  if (ctrs.alpha(0) <= kSingularGuard || ctrs.alpha(1) <= kSingularGuard) {
    throw std::domain_error("poa_case_i: alpha_1 and alpha_2 must be positive");
  }
  return cyclic_objective(ctrs.alphas());
}

double poa_case_ii(const CtrProfile& ctrs) {
  require_3slot(ctrs, "poa_case_ii");
  double a1 = ctrs.alpha(0), a2 = ctrs.alpha(1), a3 = ctrs.alpha(2);
  if (a1 - a2 <= kSingularGuard * a1 || a1 - a3 <= kSingularGuard * a1) {
    throw std::domain_error(
        "poa_case_ii: alpha_1 must exceed alpha_2 and alpha_3");
  }
  double c1 = a1 / (a1 - a2);
  double c2 = a1 / (a1 - a3);
  return (a1 * c1 + a2 * c2 + a3) / (a2 * c1 + a3 * c2 + a1);
}

CtrProfile symmetry_map(const CtrProfile& ctrs) {
  require_3slot(ctrs, "symmetry_map");
  if (std::abs(ctrs.alpha(0) - 1.0) > 1e-12) {
    throw std::invalid_argument("symmetry_map: alpha_1 must be normalized to 1");
  }
  double a2 = ctrs.alpha(1), a3 = ctrs.alpha(2);
  if (a2 <= kSingularGuard) {
    throw std::domain_error("symmetry_map: alpha_2 must be positive");
  }
  return CtrProfile({1.0, 1.0 - a3, (a2 - a3) / a2});
}

double poa_cyclic(const CtrProfile& ctrs) {
  std::size_t n = ctrs.slots();
  if (n < 3) throw std::invalid_argument("poa_cyclic: needs n >= 3 slots");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (ctrs.alpha(i) <= kSingularGuard) {
      throw std::domain_error("poa_cyclic: alpha_1..alpha_{n-1} must be positive");
    }
  }
  return cyclic_objective(ctrs.alphas());
}

OptimizerResult maximize_3slot(Case tag, std::size_t resolution,
                               std::size_t restarts, std::uint64_t seed,
                               unsigned threads) {
  if (tag == Case::kCyclic) {
    throw std::invalid_argument("maximize_3slot: use maximize_cyclic");
  }
  if (resolution < 1000) {
    throw std::invalid_argument(
        "maximize_3slot: certification needs resolution >= 1000");
  }
  Objective obj{tag, 3};
  return maximize(obj, resolution, restarts, seed, threads);
}

OptimizerResult maximize_cyclic(std::size_t slots, std::size_t resolution,
                                std::size_t restarts, std::uint64_t seed,
                                unsigned threads) {
  if (slots < 3) throw std::invalid_argument("maximize_cyclic: n >= 3");
  // Keep the ordered enumeration within budget: the grid has
  // ~resolution^(n-1)/(n-1)! ordered cells.
  double budget = 4e6;
  std::size_t res = resolution;
  auto cells = [&](std::size_t r) {
    double c = 1.0;
    for (std::size_t d = 0; d < slots - 1; ++d) {
      c *= static_cast<double>(r + d + 1) / static_cast<double>(d + 1);
    }
    return c;
  };
  while (res > 8 && cells(res) > budget) --res;
  Objective obj{Case::kCyclic, slots};
  return maximize(obj, res, restarts, seed, threads);
}

CyclicCandidates cyclic_candidates(const CtrProfile& argmax3,
                                   std::size_t slots) {
  require_3slot(argmax3, "cyclic_candidates");
  if (slots < 3) throw std::invalid_argument("cyclic_candidates: n >= 3");
  double a2 = argmax3.alpha(1) / argmax3.alpha(0);
  double a3 = argmax3.alpha(2) / argmax3.alpha(0);

  std::vector<double> flat{1.0, a2};
  flat.insert(flat.end(), slots - 2, a3);

  std::vector<double> sorted{1.0, a2};
  sorted.insert(sorted.end(), slots - 2, 1.0);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  return CyclicCandidates{CtrProfile(std::move(flat)),
                          CtrProfile(std::move(sorted))};
}

TightInstance tight_instance_3slot() {
  OptimizerResult opt =
      maximize_3slot(Case::kCaseI, 2000, 32, /*seed=*/0x90A3, /*threads=*/1);
  double a2 = opt.best.alphas[1];
  double a3 = opt.best.alphas[2];

  // Values chosen so the equilibrium-constraint substitutions hold with
  // equality; the top-value agent is then indifferent across all slots.
  double v1 = 1.0;
  double v2 = (1.0 - a3) * v1;
  double v3 = ((a2 - a3) / a2) * v1;

  TightInstance inst;
  inst.alphas = {1.0, a2, a3};
  inst.values = {v1, v2, v3};
  inst.bids = {0.0, v2, v3};

  ValueProfile values(inst.values);
  CtrProfile ctrs(inst.alphas);
  BidProfile bids(inst.bids);

  AuctionOutcome outcome = run_gsp(bids, ctrs);
  inst.sw = social_welfare(outcome.assignment, values, ctrs);
  inst.opt = optimal_welfare(values, ctrs);
  inst.ratio = inst.opt / inst.sw;

  auto grids = equilibria::BidGrid::no_overbid_uniform(values, 1000);
  auto verdict = equilibria::check_pure_ne(bids, values, ctrs, grids, 1e-3);
  inst.ne_gain = verdict.worst_deviation.gain;
  if (!verdict.is_ne) {
    throw InvariantError("tight_instance_equilibrium",
                         "constructed profile failed the deviation check");
  }
  if (inst.ratio < 1.25) {
    throw InvariantError("tight_instance_ratio",
                         "constructed ratio below 1.25");
  }
  return inst;
}

}  // namespace gsp::poa
