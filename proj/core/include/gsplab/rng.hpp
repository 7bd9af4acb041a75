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
#include <span>

namespace gsp::rng {

// Counter-based random stream: every draw is a pure function of
// (seed, stream, counter), so results do not depend on evaluation order or
// on how work is split across threads. Streams identify independent
// consumers (an agent, an experiment leg); counters index draws within a
// stream (a round, a sample).
//
// Mixing is three chained SplitMix64/Murmur3 finalizers, which is plenty for
// Monte Carlo use.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash3(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t counter) {
  std::uint64_t h = mix64(seed + kGolden);
  h = mix64(h ^ (stream + kGolden));
  h = mix64(h ^ (counter + kGolden));
  return h;
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t counter) {
  return static_cast<double>(hash3(seed, stream, counter) >> 11) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t counter, double lo, double hi) {
  return lo + (hi - lo) * uniform01(seed, stream, counter);
}

// Index into a weight vector by inverse-CDF walk. Weights must be
// nonnegative; a zero-sum vector selects index 0.
inline std::size_t pick_weighted(std::span<const double> weights, double u01) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    acc += weights[i];
    if (u01 < acc) return i;
  }
  return weights.empty() ? 0 : weights.size() - 1;
}

// Derive a sub-stream id from a parent stream and a small tag, so modules
// can carve disjoint stream spaces out of one user seed.
inline std::uint64_t substream(std::uint64_t stream, std::uint64_t tag) {
  return mix64(stream ^ (tag * kGolden));
}

}  // namespace gsp::rng
