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

#include "gsplab/structural.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gsplab/parallel.hpp"

namespace gsp::equilibria {
namespace {

constexpr double kZ95 = 1.959963984540054;  // two-sided 95% normal quantile

struct CellAccumulator {
  double sum = 0.0;
  double sumsq = 0.0;

  void add(double x) {
    sum += x;
    sumsq += x * x;
  }

  double mean(std::size_t n) const { return sum / static_cast<double>(n); }

  double half_width(std::size_t n) const {
    if (n < 2) return 0.0;
    double m = mean(n);
    double var = (sumsq - static_cast<double>(n) * m * m) /
                 static_cast<double>(n - 1);
    var = std::max(var, 0.0);
    return kZ95 * std::sqrt(var / static_cast<double>(n));
  }
};

GammaReport finalize(std::vector<GammaCell> cells, std::size_t samples) {
  GammaReport report;
  report.samples = samples;
  report.gamma_raw = std::numeric_limits<double>::infinity();
  for (const GammaCell& cell : cells) {
    if (cell.ratio < report.gamma_raw) {
      report.gamma_raw = cell.ratio;
      report.worst = cell;
      report.half_width = cell.half_width;
    }
  }
  report.gamma_hat = std::clamp(report.gamma_raw, 0.0, 1.0);

  // Reduce to the per-(agent, slot) minima over tested values.
  for (const GammaCell& cell : cells) {
    auto it = std::find_if(report.per_slot_minima.begin(),
                           report.per_slot_minima.end(), [&](const GammaCell& c) {
                             return c.agent == cell.agent && c.slot == cell.slot;
                           });
    if (it == report.per_slot_minima.end()) {
      report.per_slot_minima.push_back(cell);
    } else if (cell.ratio < it->ratio) {
      *it = cell;
    }
  }
  return report;
}

}  // namespace

GammaReport structural_gamma_empirical(
    const learning::DeclarationSequence& sequence, const ValueProfile& values,
    const CtrProfile& ctrs) {
  std::size_t n = sequence.agents();
  std::size_t rounds = sequence.rounds();
  if (rounds == 0) {
    throw std::invalid_argument("structural_gamma_empirical: empty sequence");
  }
  if (values.agents() != n || ctrs.slots() != n) {
    throw std::invalid_argument("structural_gamma_empirical: length mismatch");
  }

  std::vector<CellAccumulator> acc(n * n);
  std::vector<std::size_t> rank(n);
  for (std::size_t t = 0; t < rounds; ++t) {
    auto bids = sequence.round_bids(t);
    auto assignment = sequence.round_assignment(t);
    for (std::size_t k = 0; k < n; ++k) rank[assignment[k]] = k;

    for (std::size_t i = 0; i < n; ++i) {
      double own_term = ctrs.alpha(rank[i]) * values.value(i);
      for (std::size_t k = 0; k < n; ++k) {
        // k-th highest bid among the others; the last slot is the virtual
        // zero bidder.
        double other_bid;
        if (k < rank[i]) {
          other_bid = bids[assignment[k]];
        } else if (k + 1 < n) {
          other_bid = bids[assignment[k + 1]];
        } else {
          other_bid = 0.0;
        }
        acc[i * n + k].add(own_term + ctrs.alpha(k) * other_bid);
      }
    }
  }

  std::vector<GammaCell> cells;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      double denom = ctrs.alpha(k) * values.value(i);
      if (denom == 0.0) continue;  // vacuous triple
      const CellAccumulator& a = acc[i * n + k];
      cells.push_back(GammaCell{i, k, values.value(i), a.mean(rounds) / denom,
                                a.half_width(rounds) / denom});
    }
  }
  return finalize(std::move(cells), rounds);
}

GammaReport structural_gamma_sampled(
    const ConditionalBidSampler& sample_bids,
    const std::vector<std::vector<double>>& test_values,
    const CtrProfile& ctrs, std::size_t samples, unsigned threads) {
  std::size_t n = test_values.size();
  if (n == 0 || ctrs.slots() != n) {
    throw std::invalid_argument("structural_gamma_sampled: length mismatch");
  }
  if (samples == 0) {
    throw std::invalid_argument("structural_gamma_sampled: needs samples >= 1");
  }

  struct Job {
    std::size_t agent;
    double value;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < n; ++i) {
    for (double v : test_values[i]) jobs.push_back(Job{i, v});
  }

  std::vector<std::vector<GammaCell>> job_cells(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t j) {
    const Job& job = jobs[j];
    std::vector<CellAccumulator> acc(n);
    std::vector<double> bids(n);
    std::vector<double> others(n - 1);
    for (std::uint64_t s = 0; s < samples; ++s) {
      sample_bids(job.agent, job.value, s, bids);
      std::size_t rank = 0;
      for (std::size_t a = 0; a < n; ++a) {
        if (a == job.agent) continue;
        if (bids[a] > bids[job.agent] ||
            (bids[a] == bids[job.agent] && a < job.agent)) {
          ++rank;
        }
      }
      others.clear();
      for (std::size_t a = 0; a < n; ++a) {
        if (a != job.agent) others.push_back(bids[a]);
      }
      std::sort(others.begin(), others.end(), std::greater<>());
      double own_term = ctrs.alpha(rank) * job.value;
      for (std::size_t k = 0; k < n; ++k) {
        double other_bid = (k + 1 < n) ? others[k] : 0.0;
        acc[k].add(own_term + ctrs.alpha(k) * other_bid);
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      double denom = ctrs.alpha(k) * job.value;
      if (denom == 0.0) continue;
      job_cells[j].push_back(GammaCell{job.agent, k, job.value,
                                       acc[k].mean(samples) / denom,
                                       acc[k].half_width(samples) / denom});
    }
  });

  std::vector<GammaCell> cells;
  for (const auto& jc : job_cells) {
    cells.insert(cells.end(), jc.begin(), jc.end());
  }
  return finalize(std::move(cells), samples);
}

bool lemma1_consistency(double gamma_hat, double measured_sw,
                        double measured_opt, double tolerance) {
  return measured_sw >= (gamma_hat / 2.0 - tolerance) * measured_opt;
}

}  // namespace gsp::equilibria
