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

#include "gsplab/bayesian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gsplab/auction.hpp"
#include "gsplab/parallel.hpp"
#include "gsplab/rng.hpp"

namespace gsp::bayes {
namespace {

constexpr double kZ95 = 1.959963984540054;

// Stream tags carved out of the user seed.
constexpr std::uint64_t kValueStream = 0x2000;
constexpr std::uint64_t kMixedStream = 0x3000;

double sample_opponent_value(const std::vector<DistributionSpec>& dists,
                             std::size_t agent, std::uint64_t seed,
                             std::uint64_t counter) {
  return dists[agent].sample(seed, kValueStream + agent, counter);
}

}  // namespace

DistributionSpec DistributionSpec::point_mass(double value) {
  DistributionSpec d;
  d.kind = Kind::kPoint;
  d.point = value;
  d.validate();
  return d;
}

DistributionSpec DistributionSpec::uniform(double lo, double hi) {
  DistributionSpec d;
  d.kind = Kind::kUniform;
  d.lo = lo;
  d.hi = hi;
  d.validate();
  return d;
}

DistributionSpec DistributionSpec::discrete(std::vector<double> atoms,
                                            std::vector<double> weights) {
  DistributionSpec d;
  d.kind = Kind::kDiscrete;
  d.atoms = std::move(atoms);
  d.weights = std::move(weights);
  d.validate();
  return d;
}

void DistributionSpec::validate() const {
  switch (kind) {
    case Kind::kPoint:
      if (!std::isfinite(point) || point < 0.0) {
        throw std::invalid_argument("point mass must be finite, nonnegative");
      }
      return;
    case Kind::kUniform:
      if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || hi < lo) {
        throw std::invalid_argument("uniform needs 0 <= lo <= hi");
      }
      return;
    case Kind::kDiscrete: {
      if (atoms.empty() || atoms.size() != weights.size()) {
        throw std::invalid_argument("discrete needs matching atoms/weights");
      }
      double total = 0.0;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!std::isfinite(atoms[i]) || atoms[i] < 0.0 || weights[i] < 0.0) {
          throw std::invalid_argument("discrete atoms/weights out of range");
        }
        total += weights[i];
      }
      if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("discrete weights must sum to 1");
      }
      return;
    }
  }
  throw std::invalid_argument("unknown distribution kind");
}

double DistributionSpec::support_lo() const {
  switch (kind) {
    case Kind::kPoint:
      return point;
    case Kind::kUniform:
      return lo;
    case Kind::kDiscrete:
      return *std::min_element(atoms.begin(), atoms.end());
  }
  return 0.0;
}

double DistributionSpec::support_hi() const {
  switch (kind) {
    case Kind::kPoint:
      return point;
    case Kind::kUniform:
      return hi;
    case Kind::kDiscrete:
      return *std::max_element(atoms.begin(), atoms.end());
  }
  return 0.0;
}

double DistributionSpec::sample(std::uint64_t seed, std::uint64_t stream,
                                std::uint64_t counter) const {
  switch (kind) {
    case Kind::kPoint:
      return point;
    case Kind::kUniform:
      return rng::uniform(seed, stream, counter, lo, hi);
    case Kind::kDiscrete:
      return atoms[rng::pick_weighted(weights,
                                      rng::uniform01(seed, stream, counter))];
  }
  return 0.0;
}

ValueProfile sample_profile(const std::vector<DistributionSpec>& dists,
                            std::uint64_t seed, std::uint64_t index) {
  if (dists.empty()) throw std::invalid_argument("sample_profile: no agents");
  std::vector<double> values;
  values.reserve(dists.size());
  for (std::size_t i = 0; i < dists.size(); ++i) {
    values.push_back(dists[i].sample(seed, kValueStream + i, index));
  }
  return ValueProfile(std::move(values));
}

StrategyTable::StrategyTable(std::vector<AgentStrategy> strategies)
    : strategies_(std::move(strategies)) {
  if (strategies_.empty()) {
    throw std::invalid_argument("StrategyTable: needs agents");
  }
  validate();
}

StrategyTable StrategyTable::truthful(
    const std::vector<DistributionSpec>& dists, std::size_t value_points) {
  if (value_points < 1) {
    throw std::invalid_argument("truthful: needs value points");
  }
  std::vector<AgentStrategy> strategies;
  strategies.reserve(dists.size());
  for (const auto& dist : dists) {
    AgentStrategy s;
    double lo = dist.support_lo(), hi = dist.support_hi();
    std::size_t points = (hi > lo) ? value_points : 1;
    for (std::size_t p = 0; p < points; ++p) {
      double v = (points == 1)
                     ? lo
                     : lo + (hi - lo) * static_cast<double>(p) /
                               static_cast<double>(points - 1);
      s.value_grid.push_back(v);
      s.bids.push_back(v);
    }
    strategies.push_back(std::move(s));
  }
  return StrategyTable(std::move(strategies));
}

StrategyTable StrategyTable::constant(const BidProfile& bids,
                                      const ValueProfile& values) {
  if (bids.agents() != values.agents()) {
    throw std::invalid_argument("constant: length mismatch");
  }
  std::vector<AgentStrategy> strategies;
  for (std::size_t i = 0; i < bids.agents(); ++i) {
    AgentStrategy s;
    s.value_grid = {values.value(i)};
    s.bids = {bids.bid(i)};
    strategies.push_back(std::move(s));
  }
  return StrategyTable(std::move(strategies));
}

std::size_t StrategyTable::nearest_row(std::size_t agent, double value) const {
  const auto& grid = strategies_.at(agent).value_grid;
  auto it = std::lower_bound(grid.begin(), grid.end(), value);
  if (it == grid.begin()) return 0;
  if (it == grid.end()) return grid.size() - 1;
  std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  std::size_t lo = hi - 1;
  return (value - grid[lo] <= grid[hi] - value) ? lo : hi;
}

double StrategyTable::bid_for(std::size_t agent, double value,
                              std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t counter) const {
  const AgentStrategy& s = strategies_.at(agent);
  std::size_t row = nearest_row(agent, value);
  if (!s.mixed()) return s.bids[row];
  double u = rng::uniform01(seed, stream, counter);
  return s.action_bids[rng::pick_weighted(s.action_weights[row], u)];
}

void StrategyTable::validate() const {
  for (std::size_t i = 0; i < strategies_.size(); ++i) {
    const AgentStrategy& s = strategies_[i];
    if (s.value_grid.empty()) {
      throw std::invalid_argument("StrategyTable: empty value grid");
    }
    if (!std::is_sorted(s.value_grid.begin(), s.value_grid.end())) {
      throw std::invalid_argument("StrategyTable: value grid must ascend");
    }
    if (s.mixed()) {
      if (s.action_weights.size() != s.value_grid.size()) {
        throw std::invalid_argument("StrategyTable: weight rows mismatch");
      }
      for (std::size_t r = 0; r < s.value_grid.size(); ++r) {
        const auto& w = s.action_weights[r];
        if (w.size() != s.action_bids.size()) {
          throw std::invalid_argument("StrategyTable: weight width mismatch");
        }
        double total = 0.0;
        for (std::size_t a = 0; a < w.size(); ++a) {
          if (w[a] < 0.0) {
            throw std::invalid_argument("StrategyTable: negative weight");
          }
          // No-overbidding: positive mass above the row value is forbidden.
          if (w[a] > 0.0 && s.action_bids[a] > s.value_grid[r]) {
            throw std::invalid_argument(
                "StrategyTable: support above value (overbidding)");
          }
          total += w[a];
        }
        if (std::abs(total - 1.0) > 1e-9) {
          throw std::invalid_argument("StrategyTable: weights must sum to 1");
        }
      }
    } else {
      if (s.bids.size() != s.value_grid.size()) {
        throw std::invalid_argument("StrategyTable: bid rows mismatch");
      }
      for (std::size_t r = 0; r < s.bids.size(); ++r) {
        if (s.bids[r] < 0.0 || s.bids[r] > s.value_grid[r]) {
          throw std::invalid_argument(
              "StrategyTable: bid above value (overbidding)");
        }
      }
    }
  }
}

BneReport bne_epsilon(const StrategyTable& strategies,
                      const std::vector<DistributionSpec>& dists,
                      const CtrProfile& ctrs,
                      const std::vector<equilibria::BidGrid>& deviation_grids,
                      std::size_t samples, std::uint64_t seed,
                      unsigned threads) {
  std::size_t n = strategies.agents();
  if (dists.size() != n || ctrs.slots() != n || deviation_grids.size() != n) {
    throw std::invalid_argument("bne_epsilon: length mismatch");
  }
  if (samples == 0) throw std::invalid_argument("bne_epsilon: samples >= 1");

  struct Job {
    std::size_t agent;
    double value;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < n; ++i) {
    for (double v : strategies.strategy(i).value_grid) jobs.push_back({i, v});
  }

  std::vector<InterimCell> cells(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t j) {
    const Job& job = jobs[j];
    const equilibria::BidGrid& grid = deviation_grids[job.agent];

    std::vector<double> bids(n, 0.0);
    std::vector<double> menu(grid.size());
    std::vector<double> diff_sum(grid.size(), 0.0);
    std::vector<double> diff_sumsq(grid.size(), 0.0);
    double prescribed_sum = 0.0;
    equilibria::CounterfactualSweep sweep;

    for (std::uint64_t s = 0; s < samples; ++s) {
      for (std::size_t a = 0; a < n; ++a) {
        if (a == job.agent) continue;
        double va = sample_opponent_value(dists, a, seed,
                                          s + samples * (j + 1));
        bids[a] = strategies.bid_for(a, va, seed, kMixedStream + a,
                                     s + samples * (j + 1));
      }
      sweep.prepare(job.agent, bids);
      sweep.run(job.value, ctrs, grid.bids(), menu);

      // Prescribed utility; mixed rows take the exact expectation over the
      // action menu.
      const auto& strat = strategies.strategy(job.agent);
      double prescribed;
      if (strat.mixed()) {
        std::size_t row = strategies.nearest_row(job.agent, job.value);
        prescribed = 0.0;
        for (std::size_t a = 0; a < strat.action_bids.size(); ++a) {
          double w = strat.action_weights[row][a];
          if (w > 0.0) {
            prescribed +=
                w * sweep.utility_of_bid(job.value, ctrs, strat.action_bids[a]);
          }
        }
      } else {
        prescribed = sweep.utility_of_bid(
            job.value, ctrs, strat.bids[strategies.nearest_row(job.agent, job.value)]);
      }
      prescribed_sum += prescribed;
      for (std::size_t g = 0; g < menu.size(); ++g) {
        double d = menu[g] - prescribed;
        diff_sum[g] += d;
        diff_sumsq[g] += d * d;
      }
    }

    std::size_t best = 0;
    for (std::size_t g = 1; g < diff_sum.size(); ++g) {
      if (diff_sum[g] > diff_sum[best]) best = g;  // ties keep lowest bid
    }
    double mean_gain = diff_sum[best] / static_cast<double>(samples);
    double se = 0.0;
    if (samples > 1) {
      double var = (diff_sumsq[best] -
                    static_cast<double>(samples) * mean_gain * mean_gain) /
                   static_cast<double>(samples - 1);
      se = std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
    }
    InterimCell& cell = cells[j];
    cell.agent = job.agent;
    cell.value = job.value;
    cell.prescribed_utility = prescribed_sum / static_cast<double>(samples);
    cell.best_bid = grid.bid(best);
    cell.best_utility = cell.prescribed_utility + mean_gain;
    cell.gain = mean_gain;
    cell.gain_se = se;
  });

  BneReport report;
  report.samples = samples;
  report.epsilon.assign(n, 0.0);
  report.epsilon_se.assign(n, 0.0);
  std::vector<double> best_gain(n, -std::numeric_limits<double>::infinity());
  for (const InterimCell& cell : cells) {
    if (cell.gain > best_gain[cell.agent]) {
      best_gain[cell.agent] = cell.gain;
      report.epsilon[cell.agent] = std::max(0.0, cell.gain);
      report.epsilon_se[cell.agent] = cell.gain_se;
    }
  }
  report.epsilon_max =
      *std::max_element(report.epsilon.begin(), report.epsilon.end());
  report.cells = std::move(cells);
  return report;
}

BpoaReport bpoa_estimate(const StrategyTable& strategies,
                         const std::vector<DistributionSpec>& dists,
                         const CtrProfile& ctrs, std::size_t samples,
                         std::uint64_t seed, unsigned threads) {
  std::size_t n = strategies.agents();
  if (dists.size() != n || ctrs.slots() != n) {
    throw std::invalid_argument("bpoa_estimate: length mismatch");
  }
  if (samples == 0) throw std::invalid_argument("bpoa_estimate: samples >= 1");

  constexpr std::size_t kChunk = 4096;
  std::size_t chunks = (samples + kChunk - 1) / kChunk;
  struct Moments {
    double opt = 0.0, sw = 0.0, opt2 = 0.0, sw2 = 0.0, cross = 0.0;
  };
  std::vector<Moments> partial(chunks);

  parallel_for(chunks, threads, [&](std::size_t c) {
    Moments& m = partial[c];
    std::vector<double> vals(n), bids(n);
    std::size_t lo = c * kChunk, hi = std::min(samples, lo + kChunk);
    for (std::size_t s = lo; s < hi; ++s) {
      for (std::size_t a = 0; a < n; ++a) {
        vals[a] = dists[a].sample(seed, kValueStream + a, s);
        bids[a] = strategies.bid_for(a, vals[a], seed, kMixedStream + a, s);
      }
      ValueProfile values(vals);
      double opt = optimal_welfare(values, ctrs);
      AuctionOutcome outcome = run_gsp(BidProfile(bids), ctrs);
      double sw = social_welfare(outcome.assignment, values, ctrs);
      m.opt += opt;
      m.sw += sw;
      m.opt2 += opt * opt;
      m.sw2 += sw * sw;
      m.cross += opt * sw;
    }
  });

  Moments total;
  for (const Moments& m : partial) {
    total.opt += m.opt;
    total.sw += m.sw;
    total.opt2 += m.opt2;
    total.sw2 += m.sw2;
    total.cross += m.cross;
  }

  double count = static_cast<double>(samples);
  double e_opt = total.opt / count;
  double e_sw = total.sw / count;
  if (e_sw <= 0.0) {
    throw std::domain_error("bpoa_estimate: welfare estimate is zero");
  }
  double ratio = e_opt / e_sw;
  double ci_low = ratio, ci_high = ratio;
  if (samples > 1) {
    double var_opt = (total.opt2 - count * e_opt * e_opt) / (count - 1.0);
    double var_sw = (total.sw2 - count * e_sw * e_sw) / (count - 1.0);
    double cov = (total.cross - count * e_opt * e_sw) / (count - 1.0);
    double var_ratio = (var_opt - 2.0 * ratio * cov + ratio * ratio * var_sw) /
                       (count * e_sw * e_sw);
    double hw = kZ95 * std::sqrt(std::max(var_ratio, 0.0));
    ci_low = ratio - hw;
    ci_high = ratio + hw;
  }
  return BpoaReport{e_opt, e_sw, ratio, ci_low, ci_high, samples};
}

BneSearchResult approx_bne_search(const std::vector<DistributionSpec>& dists,
                                  const CtrProfile& ctrs,
                                  std::size_t grid_points,
                                  std::size_t value_points,
                                  std::size_t iterations, std::size_t samples,
                                  std::uint64_t seed, unsigned threads) {
  if (iterations == 0) {
    throw std::invalid_argument("approx_bne_search: iterations >= 1");
  }
  std::size_t n = dists.size();
  if (n == 0 || ctrs.slots() != n) {
    throw std::invalid_argument("approx_bne_search: length mismatch");
  }

  StrategyTable table = StrategyTable::truthful(dists, value_points);
  std::vector<equilibria::BidGrid> grids;
  grids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    grids.push_back(
        equilibria::BidGrid::uniform(grid_points, dists[i].support_hi()));
  }

  std::vector<double> trace;
  for (std::size_t iter = 0; iter < iterations; ++iter) {
    std::uint64_t iter_seed = rng::mix64(seed ^ (0xBE57 + iter));
    struct Update {
      std::size_t agent;
      std::size_t row;
      double bid;
      double gain;
    };
    struct Job {
      std::size_t agent;
      std::size_t row;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t r = 0; r < table.strategy(i).value_grid.size(); ++r) {
        jobs.push_back({i, r});
      }
    }
    std::vector<Update> updates(jobs.size());

    parallel_for(jobs.size(), threads, [&](std::size_t j) {
      std::size_t i = jobs[j].agent;
      std::size_t row = jobs[j].row;
      double value = table.strategy(i).value_grid[row];
      const equilibria::BidGrid& grid = grids[i];

      std::vector<double> bids(n, 0.0);
      std::vector<double> menu(grid.size());
      std::vector<double> sums(grid.size(), 0.0);
      double prescribed_sum = 0.0;
      equilibria::CounterfactualSweep sweep;
      for (std::uint64_t s = 0; s < samples; ++s) {
        std::uint64_t ctr = s + samples * (j + 1);
        for (std::size_t a = 0; a < n; ++a) {
          if (a == i) continue;
          double va = dists[a].sample(iter_seed, kValueStream + a, ctr);
          bids[a] = table.bid_for(a, va, iter_seed, kMixedStream + a, ctr);
        }
        sweep.prepare(i, bids);
        sweep.run(value, ctrs, grid.bids(), menu);
        for (std::size_t g = 0; g < menu.size(); ++g) sums[g] += menu[g];
        prescribed_sum += sweep.utility_of_bid(
            value, ctrs, table.strategy(i).bids[row]);
      }
      // Best response restricted to no-overbidding; ties to the lowest bid.
      std::size_t best = 0;
      bool found = false;
      for (std::size_t g = 0; g < grid.size(); ++g) {
        if (grid.bid(g) > value) break;
        if (!found || sums[g] > sums[best]) {
          best = g;
          found = true;
        }
      }
      double bid = found ? grid.bid(best) : 0.0;
      double gain = found ? (sums[best] - prescribed_sum) /
                                static_cast<double>(samples)
                          : 0.0;
      updates[j] = Update{i, row, bid, gain};
    });

    double worst_gain = 0.0;
    for (const Update& u : updates) {
      table.strategy(u.agent).bids[u.row] = u.bid;
      worst_gain = std::max(worst_gain, u.gain);
    }
    table.validate();
    trace.push_back(worst_gain);
  }

  BneReport final_check =
      bne_epsilon(table, dists, ctrs, grids, samples, seed ^ 0xF1AA, threads);
  return BneSearchResult{std::move(table), std::move(trace),
                         std::move(final_check)};
}

equilibria::GammaReport structural_gamma_bayesian(
    const StrategyTable& strategies, const std::vector<DistributionSpec>& dists,
    const CtrProfile& ctrs, std::size_t samples, std::size_t value_points,
    std::uint64_t seed, unsigned threads) {
  std::size_t n = strategies.agents();
  if (dists.size() != n || ctrs.slots() != n) {
    throw std::invalid_argument("structural_gamma_bayesian: length mismatch");
  }
  std::vector<std::vector<double>> test_values(n);
  for (std::size_t i = 0; i < n; ++i) {
    double lo = dists[i].support_lo(), hi = dists[i].support_hi();
    std::size_t points = (hi > lo) ? value_points : 1;
    for (std::size_t p = 0; p < points; ++p) {
      double v = (points == 1) ? lo
                               : lo + (hi - lo) * static_cast<double>(p) /
                                         static_cast<double>(points - 1);
      test_values[i].push_back(v);
    }
  }

  auto sampler = [&](std::size_t agent, double value, std::uint64_t sample,
                     std::vector<double>& bids) {
    bids.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
      if (a == agent) {
        bids[a] = strategies.bid_for(a, value, seed, kMixedStream + a, sample);
      } else {
        double va = dists[a].sample(seed, kValueStream + a,
                                    sample + 0x51A7 * (agent + 1));
        bids[a] = strategies.bid_for(a, va, seed, kMixedStream + a,
                                     sample + 0x51A7 * (agent + 1));
      }
    }
  };
  return equilibria::structural_gamma_sampled(sampler, test_values, ctrs,
                                              samples, threads);
}

void to_json(nlohmann::ordered_json& j, const DistributionSpec& d) {
  switch (d.kind) {
    case DistributionSpec::Kind::kPoint:
      j = nlohmann::ordered_json{{"kind", "point"}, {"value", d.point}};
      return;
    case DistributionSpec::Kind::kUniform:
      j = nlohmann::ordered_json{{"kind", "uniform"}, {"lo", d.lo}, {"hi", d.hi}};
      return;
    case DistributionSpec::Kind::kDiscrete:
      j = nlohmann::ordered_json{
          {"kind", "discrete"}, {"atoms", d.atoms}, {"weights", d.weights}};
      return;
  }
}

DistributionSpec distribution_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw std::invalid_argument("distribution: needs a kind");
  }
  std::string kind = j["kind"].get<std::string>();
  if (kind == "point") {
    if (!j.contains("value") || !j["value"].is_number()) {
      throw std::invalid_argument("point distribution: needs value");
    }
    return DistributionSpec::point_mass(j["value"].get<double>());
  }
  if (kind == "uniform") {
    if (!j.contains("lo") || !j.contains("hi")) {
      throw std::invalid_argument("uniform distribution: needs lo and hi");
    }
    return DistributionSpec::uniform(j["lo"].get<double>(),
                                     j["hi"].get<double>());
  }
  if (kind == "discrete") {
    if (!j.contains("atoms") || !j.contains("weights")) {
      throw std::invalid_argument("discrete distribution: needs atoms/weights");
    }
    return DistributionSpec::discrete(j["atoms"].get<std::vector<double>>(),
                                      j["weights"].get<std::vector<double>>());
  }
  throw std::invalid_argument("distribution: unknown kind " + kind);
}

}  // namespace gsp::bayes
