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

// Deliberately naive reference implementations, kept independent of the
// library's code paths. The library sorts an index array once; these pick
// winners one by one and enumerate permutations outright.

#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace oracles {

struct GspOutcome {
  std::vector<std::size_t> assignment;  // slot -> agent
  std::vector<double> payments;         // per agent
};

// Selection-based GSP: repeatedly take the highest remaining bid (lowest
// index on ties); each winner pays the bid of the next pick.
inline GspOutcome gsp_sort_and_shift(const std::vector<double>& bids,
                                     const std::vector<double>& alphas) {
  std::size_t n = bids.size();
  (void)alphas;
  GspOutcome out;
  std::vector<bool> used(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      if (pick == n || bids[i] > bids[pick]) pick = i;
    }
    used[pick] = true;
    out.assignment.push_back(pick);
  }
  out.payments.assign(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    out.payments[out.assignment[k]] = bids[out.assignment[k + 1]];
  }
  return out;
}

inline double welfare_of(const std::vector<std::size_t>& assignment,
                         const std::vector<double>& values,
                         const std::vector<double>& alphas) {
  double sw = 0.0;
  for (std::size_t k = 0; k < assignment.size(); ++k) {
    sw += alphas[k] * values[assignment[k]];
  }
  return sw;
}

// Exhaustive max over all n! assignments.
inline double brute_force_opt(const std::vector<double>& values,
                              const std::vector<double>& alphas) {
  std::vector<std::size_t> perm(values.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  do {
    best = std::max(best, welfare_of(perm, values, alphas));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Exhaustive max over assignments, counting only agents in `subset`.
inline double brute_force_restricted_opt(const std::vector<std::size_t>& subset,
                                         const std::vector<double>& values,
                                         const std::vector<double>& alphas) {
  std::vector<bool> in_subset(values.size(), false);
  for (std::size_t agent : subset) in_subset[agent] = true;
  std::vector<std::size_t> perm(values.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    double sw = 0.0;
    for (std::size_t k = 0; k < perm.size(); ++k) {
      if (in_subset[perm[k]]) sw += alphas[k] * values[perm[k]];
    }
    best = std::max(best, sw);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace oracles
