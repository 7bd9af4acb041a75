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
#include <vector>

#include "gsplab/profiles.hpp"

namespace gsp::poa {

// Worst-case OPT/SW over pure equilibria of the 3-slot auction, attained at
// the root of a quartic. Certified numerically, never symbolically.
inline constexpr double kTightPoa3 = 1.25913;

enum class Case { kCaseI, kCaseII, kCyclic };

// Upper-bound objective for the slot-cycled allocation where the top-value
// agent takes the worst slot: value bounds substituted, v_1 eliminated,
// leaving a function of the CTRs alone. Requires 3 slots with
// alpha_1, alpha_2 > 0.
double poa_case_i(const CtrProfile& ctrs);

// Same for the other fixed-point-free 3-slot allocation, v_3 eliminated.
// Requires alpha_1 strictly above alpha_2 and alpha_3.
double poa_case_ii(const CtrProfile& ctrs);

// The involution carrying case-(i) points to case-(ii) points of equal
// objective value: (1, a2, a3) -> (1, 1 - a3, (a2 - a3)/a2). Input must be
// normalized to alpha_1 = 1 with alpha_2 > 0.
CtrProfile symmetry_map(const CtrProfile& ctrs);

// n-slot generalization of case (i) for the cyclic allocation
// sigma(1) = n, sigma(i) = i - 1. Coincides with poa_case_i at n = 3.
double poa_cyclic(const CtrProfile& ctrs);

struct PoaPoint {
  std::vector<double> alphas;  // alpha_1 normalized to 1
  double value = 0.0;
  Case tag = Case::kCaseI;
};

struct OptimizerResult {
  PoaPoint best;
  std::uint64_t evaluations = 0;
  std::size_t restarts = 0;
  std::size_t resolution = 0;
};

// Global maximization over {1 >= a2 >= a3 >= 0}: full grid at `resolution`
// points per axis, then seeded compass refinement from the best cell and
// random restarts. Throws InvariantError if refinement ever ends below a
// grid point (certification pass).
OptimizerResult maximize_3slot(Case tag, std::size_t resolution,
                               std::size_t restarts, std::uint64_t seed,
                               unsigned threads = 1);

// Same machinery over the (n-1)-dimensional ordered box for poa_cyclic.
// The grid is coarsened automatically so the ordered enumeration stays
// within ~4e6 cells.
OptimizerResult maximize_cyclic(std::size_t slots, std::size_t resolution,
                                std::size_t restarts, std::uint64_t seed,
                                unsigned threads = 1);

// Candidate n-slot maximizers built from a 3-slot argmax, covering the
// plausible readings of extending (a1, a2, a3) by unit entries: either pad
// with a3 after normalizing alpha_1 to 1, or sort the literal padded tuple.
struct CyclicCandidates {
  CtrProfile flat_extension;    // (1, a2, a3, a3, ..., a3)
  CtrProfile sorted_extension;  // sort desc of (1, a2, 1, ..., 1)
};
CyclicCandidates cyclic_candidates(const CtrProfile& argmax3,
                                   std::size_t slots);

// The worst-case 3-slot instance: values derived from the case-(i) argmax,
// bids that make the cyclic allocation an exact pure Nash equilibrium under
// no-overbidding. Construction is verified by an exhaustive grid deviation
// check and by the OPT/SW ratio; failures throw InvariantError.
struct TightInstance {
  std::vector<double> values;
  std::vector<double> alphas;
  std::vector<double> bids;
  double opt = 0.0;
  double sw = 0.0;
  double ratio = 0.0;
  double ne_gain = 0.0;  // worst deviation gain on the verification grid
};
TightInstance tight_instance_3slot();

}  // namespace gsp::poa
