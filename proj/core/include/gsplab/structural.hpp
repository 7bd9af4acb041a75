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
#include <functional>
#include <vector>

#include "gsplab/learning.hpp"
#include "gsplab/profiles.hpp"

namespace gsp::equilibria {

// Asserted floor on SW/OPT for no-regret play before the measured-regret
// correction: half of 1 - 1/e, rounded up at the fourth decimal.
inline constexpr double kWelfareFloor = 0.3161;

// One tested (agent, slot, value) triple of the structural property: the
// ratio E[alpha_sigma * v + alpha_k * b_excluded] / (alpha_k * v) and the
// normal-approximation half-width of its numerator estimate.
struct GammaCell {
  std::size_t agent = 0;
  std::size_t slot = 0;
  double value = 0.0;
  double ratio = 0.0;
  double half_width = 0.0;
};

struct GammaReport {
  double gamma_hat = 0.0;  // min ratio over cells, clipped to [0, 1]
  double gamma_raw = 0.0;  // unclipped minimum
  double half_width = 0.0; // of the minimizing cell
  std::size_t samples = 0;
  GammaCell worst;
  // Per (agent, slot): the minimum over tested values.
  std::vector<GammaCell> per_slot_minima;
};

// Exact evaluation over the empirical bid distribution of a declaration
// sequence (uniform over rounds, own bid and opponents drawn jointly, as in
// the shared-randomness reading of a coarse correlated equilibrium). The
// tested value for each agent is its true value; cells with
// alpha_k * v_i = 0 are vacuous and skipped.
GammaReport structural_gamma_empirical(
    const learning::DeclarationSequence& sequence, const ValueProfile& values,
    const CtrProfile& ctrs);

// Monte Carlo evaluation for an arbitrary conditional bid sampler.
// For sample s of cell (agent i, test value v), `sample_bids` must fill
// `bids` with a joint profile in which agent i's own bid is generated at
// value v and the opponents follow their usual strategies/distributions.
using ConditionalBidSampler = std::function<void(
    std::size_t agent, double value, std::uint64_t sample, std::vector<double>& bids)>;

GammaReport structural_gamma_sampled(const ConditionalBidSampler& sample_bids,
                                     const std::vector<std::vector<double>>& test_values,
                                     const CtrProfile& ctrs,
                                     std::size_t samples, unsigned threads = 1);

// Operational form of the welfare implication: measured_sw must be at least
// (gamma_hat / 2 - tolerance) * measured_opt.
bool lemma1_consistency(double gamma_hat, double measured_sw,
                        double measured_opt, double tolerance = 1e-9);

}  // namespace gsp::equilibria
