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

#include "gsplab/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "gsplab/auction.hpp"
#include "gsplab/bayesian.hpp"
#include "gsplab/byzantine.hpp"
#include "gsplab/equilibria.hpp"
#include "gsplab/errors.hpp"
#include "gsplab/learning.hpp"
#include "gsplab/poa_frontier.hpp"
#include "gsplab/profiles.hpp"
#include "gsplab/sha256.hpp"
#include "gsplab/structural.hpp"
#include "gsplab/version.hpp"

namespace gsp {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// ---- config access ---------------------------------------------------------

[[noreturn]] void fail(const std::string& message) {
  throw ConfigError(message);
}

const json& require_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    fail(std::string("config: missing field '") + key + "'");
  }
  return j.at(key);
}

std::uint64_t get_uint(const json& j, const char* key,
                       std::optional<std::uint64_t> fallback = {}) {
  if (!j.is_object() || !j.contains(key)) {
    if (fallback) return *fallback;
    fail(std::string("config: missing field '") + key + "'");
  }
  const json& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    fail(std::string("config: field '") + key + "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

double get_double(const json& j, const char* key,
                  std::optional<double> fallback = {}) {
  if (!j.is_object() || !j.contains(key)) {
    if (fallback) return *fallback;
    fail(std::string("config: missing field '") + key + "'");
  }
  const json& v = j.at(key);
  if (!v.is_number()) {
    fail(std::string("config: field '") + key + "' must be a number");
  }
  return v.get<double>();
}

bool get_bool(const json& j, const char* key, bool fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) {
    fail(std::string("config: field '") + key + "' must be a boolean");
  }
  return v.get<bool>();
}

std::string get_string(const json& j, const char* key,
                       std::optional<std::string> fallback = {}) {
  if (!j.is_object() || !j.contains(key)) {
    if (fallback) return *fallback;
    fail(std::string("config: missing field '") + key + "'");
  }
  const json& v = j.at(key);
  if (!v.is_string()) {
    fail(std::string("config: field '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

std::vector<double> get_doubles(const json& j, const char* key) {
  const json& v = require_field(j, key);
  if (!v.is_array() || v.empty()) {
    fail(std::string("config: field '") + key + "' must be a nonempty array");
  }
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) {
      fail(std::string("config: field '") + key + "' must hold numbers");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

// Instance with ragged inputs padded to a square auction. check-ne style
// configs may point at a previously emitted instance file instead.
json load_instance_json(const json& params) {
  if (params.contains("instance_file")) {
    std::string path = get_string(params, "instance_file");
    std::ifstream in(path);
    if (!in) fail("config: instance_file '" + path + "' does not exist");
    json file;
    try {
      in >> file;
    } catch (const json::exception& e) {
      fail("config: instance_file '" + path + "' is not valid JSON");
    }
    if (file.contains("values")) return file;
    if (file.contains("results") && file["results"].contains("values")) {
      return file["results"];
    }
    fail("config: instance_file '" + path + "' holds no instance");
  }
  return require_field(params, "instance");
}

Instance load_instance(const json& params) {
  json inst = load_instance_json(params);
  return pad_instance(get_doubles(inst, "values"), get_doubles(inst, "alphas"));
}

BidProfile load_bids(const json& params, std::size_t agents) {
  json holder = params;
  if (!params.contains("bids")) holder = load_instance_json(params);
  std::vector<double> bids = get_doubles(holder, "bids");
  if (bids.size() > agents) fail("config: more bids than agents");
  bids.resize(agents, 0.0);
  return BidProfile(std::move(bids));
}

// ---- CSV formatting ---------------------------------------------------------

void append_double(std::string& out, double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  out.append(buf, ptr);
  (void)ec;
}

std::string rounds_csv(const learning::DeclarationSequence& sequence,
                       const ValueProfile& values, const CtrProfile& ctrs) {
  std::size_t n = sequence.agents();
  std::string out = "round";
  for (std::size_t i = 0; i < n; ++i) out += ",bid_" + std::to_string(i);
  for (std::size_t k = 0; k < n; ++k) out += ",slot_" + std::to_string(k) + "_agent";
  for (std::size_t i = 0; i < n; ++i) out += ",payment_" + std::to_string(i);
  out += ",sw\n";
  for (std::size_t t = 0; t < sequence.rounds(); ++t) {
    out += std::to_string(t);
    for (double b : sequence.round_bids(t)) {
      out += ',';
      append_double(out, b);
    }
    for (std::uint32_t agent : sequence.round_assignment(t)) {
      out += ',';
      out += std::to_string(agent);
    }
    for (double p : sequence.round_payments(t)) {
      out += ',';
      append_double(out, p);
    }
    out += ',';
    append_double(out, sequence.round_welfare(t, values, ctrs));
    out += '\n';
  }
  return out;
}

// ---- report fragments -------------------------------------------------------

ordered_json gamma_json(const equilibria::GammaReport& gamma) {
  ordered_json minima = ordered_json::array();
  for (const auto& cell : gamma.per_slot_minima) {
    minima.push_back(ordered_json{{"agent", cell.agent},
                                  {"slot", cell.slot},
                                  {"value", cell.value},
                                  {"ratio", cell.ratio},
                                  {"half_width", cell.half_width}});
  }
  return ordered_json{{"gamma_hat", gamma.gamma_hat},
                      {"gamma_raw", gamma.gamma_raw},
                      {"half_width", gamma.half_width},
                      {"samples", gamma.samples},
                      {"worst", ordered_json{{"agent", gamma.worst.agent},
                                             {"slot", gamma.worst.slot},
                                             {"value", gamma.worst.value},
                                             {"ratio", gamma.worst.ratio}}},
                      {"per_triple_minima", minima}};
}

ordered_json learn_report(const ValueProfile& values, const CtrProfile& ctrs,
                          const learning::DynamicsResult& run,
                          const std::vector<equilibria::BidGrid>& grids,
                          std::size_t rounds, std::size_t burn_in) {
  std::size_t n = values.agents();
  double opt = optimal_welfare(values, ctrs);
  double avg = run.sequence.average_welfare(values, ctrs, burn_in);

  ordered_json regrets = ordered_json::array();
  ordered_json bounds = ordered_json::array();
  double regret_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    regrets.push_back(run.average_regret[i]);
    double bound = learning::hedge_regret_bound(
        grids[i].size(), rounds, ctrs.alpha(0) * values.value(i));
    bounds.push_back(bound + 1e-9);
    regret_sum += std::max(run.average_regret[i], 0.0);
  }
  double delta = (opt > 0.0) ? regret_sum / (2.0 * opt) : 0.0;

  auto gamma = equilibria::structural_gamma_empirical(run.sequence, values, ctrs);
  bool lemma1 = equilibria::lemma1_consistency(gamma.gamma_hat, avg, opt);
  auto cce = learning::empirical_cce_check(
      run.sequence, values, ctrs, grids,
      *std::max_element(run.average_regret.begin(), run.average_regret.end()));

  ordered_json out;
  out["rounds"] = rounds;
  out["burn_in"] = burn_in;
  out["regrets"] = regrets;
  out["regret_bounds"] = bounds;
  out["average_welfare"] = avg;
  out["optimal_welfare"] = opt;
  out["welfare_ratio"] = (opt > 0.0) ? avg / opt : 0.0;
  out["pota_ratio"] = learning::pota_ratio(run.sequence, values, ctrs, burn_in);
  out["delta_regret"] = delta;
  out["welfare_floor"] = equilibria::kWelfareFloor;
  out["welfare_bound_ok"] =
      avg >= (equilibria::kWelfareFloor - delta) * opt;
  out["gamma"] = gamma_json(gamma);
  out["lemma1_ok"] = lemma1;
  out["cce"] = ordered_json{{"epsilon", cce.max_regret},
                            {"holds", cce.holds},
                            {"per_agent_regret", cce.per_agent_regret}};
  return out;
}

// ---- experiment bodies ------------------------------------------------------

ordered_json run_simulate(const json& params, unsigned) {
  Instance inst = load_instance(params);
  BidProfile bids = load_bids(params, inst.values.agents());
  AuctionOutcome outcome = run_gsp(bids, inst.ctrs);
  double sw = social_welfare(outcome.assignment, inst.values, inst.ctrs);
  double opt = optimal_welfare(inst.values, inst.ctrs);
  ordered_json utilities = ordered_json::array();
  for (std::size_t i = 0; i < inst.values.agents(); ++i) {
    utilities.push_back(utility(i, inst.values, outcome));
  }
  ordered_json out;
  ordered_json outcome_json;
  to_json(outcome_json, outcome);
  out["outcome"] = outcome_json;
  out["utilities"] = utilities;
  out["social_welfare"] = sw;
  out["optimal_welfare"] = opt;
  out["ratio"] = (sw > 0.0) ? opt / sw : 0.0;
  return out;
}

ordered_json run_check_ne(const json& params, unsigned) {
  Instance inst = load_instance(params);
  BidProfile bids = load_bids(params, inst.values.agents());
  std::size_t points = get_uint(params, "grid_points", 64);
  auto grids = equilibria::BidGrid::no_overbid_uniform(inst.values, points);
  double epsilon = get_double(
      params, "epsilon", equilibria::default_ne_epsilon(inst.values, inst.ctrs));
  auto verdict = equilibria::check_pure_ne(bids, inst.values, inst.ctrs, grids,
                                           epsilon);
  ordered_json out;
  out["is_ne"] = verdict.is_ne;
  out["epsilon"] = verdict.epsilon;
  out["grid_points"] = points;
  out["worst_deviation"] =
      ordered_json{{"agent", verdict.worst_deviation.agent},
                   {"bid", verdict.worst_deviation.bid},
                   {"gain", verdict.worst_deviation.gain}};
  return out;
}

ordered_json run_enumerate(const json& params, unsigned threads) {
  Instance inst = load_instance(params);
  std::size_t points = get_uint(params, "grid_points", 64);
  std::uint64_t budget =
      get_uint(params, "budget", equilibria::kDefaultEnumerationBudget);
  std::size_t max_report = get_uint(params, "max_report", 1000);
  auto grids = equilibria::BidGrid::no_overbid_uniform(inst.values, points);
  auto equilibria_list =
      equilibria::enumerate_pure_ne(inst.values, inst.ctrs, grids, budget, threads);

  double opt = optimal_welfare(inst.values, inst.ctrs);
  double worst = 0.0, best = 0.0;
  ordered_json listed = ordered_json::array();
  for (std::size_t e = 0; e < equilibria_list.size(); ++e) {
    AuctionOutcome outcome = run_gsp(equilibria_list[e], inst.ctrs);
    double sw = social_welfare(outcome.assignment, inst.values, inst.ctrs);
    double ratio = (sw > 0.0) ? opt / sw : 0.0;
    if (e == 0 || ratio > worst) worst = ratio;
    if (e == 0 || (ratio < best && ratio > 0.0)) best = ratio;
    if (e < max_report) {
      listed.push_back(ordered_json{{"bids", equilibria_list[e].bids()},
                                    {"ratio", ratio}});
    }
  }
  ordered_json out;
  out["grid_points"] = points;
  out["count"] = equilibria_list.size();
  out["worst_ratio"] = worst;
  out["best_ratio"] = best;
  out["optimal_welfare"] = opt;
  out["equilibria"] = listed;
  return out;
}

ordered_json run_poa3(const json& params, std::uint64_t seed, unsigned threads) {
  std::string which = get_string(params, "case", std::string("i"));
  poa::Case tag;
  if (which == "i") {
    tag = poa::Case::kCaseI;
  } else if (which == "ii") {
    tag = poa::Case::kCaseII;
  } else {
    fail("config: poa3 case must be 'i' or 'ii'");
  }
  std::size_t resolution = get_uint(params, "resolution", 2000);
  std::size_t restarts = get_uint(params, "restarts", 32);
  if (resolution < 1000) {
    fail("config: poa3 certification needs resolution >= 1000");
  }
  auto result = poa::maximize_3slot(tag, resolution, restarts, seed, threads);
  ordered_json out;
  out["case"] = which;
  out["resolution"] = result.resolution;
  out["restarts"] = result.restarts;
  out["value"] = result.best.value;
  out["alphas"] = result.best.alphas;
  out["evaluations"] = result.evaluations;
  return out;
}

ordered_json run_cyclic(const json& params, std::uint64_t seed,
                        unsigned threads) {
  std::size_t n_min = get_uint(params, "n_min", 3);
  std::size_t n_max = get_uint(params, "n_max", 8);
  if (n_min < 3 || n_max < n_min) fail("config: cyclic needs 3 <= n_min <= n_max");
  std::size_t resolution = get_uint(params, "resolution", 48);
  std::size_t restarts = get_uint(params, "restarts", 16);

  auto base = poa::maximize_3slot(poa::Case::kCaseI, 2000, 32, seed, threads);
  CtrProfile argmax3(base.best.alphas);

  ordered_json per_n = ordered_json::array();
  for (std::size_t n = n_min; n <= n_max; ++n) {
    auto result = poa::maximize_cyclic(n, resolution, restarts, seed, threads);
    auto candidates = poa::cyclic_candidates(argmax3, n);
    ordered_json entry;
    entry["n"] = n;
    entry["resolution"] = result.resolution;
    entry["max_value"] = result.best.value;
    entry["argmax"] = result.best.alphas;
    entry["candidate_flat"] =
        ordered_json{{"alphas", candidates.flat_extension.alphas()},
                     {"value", poa::poa_cyclic(candidates.flat_extension)}};
    double sorted_value = 0.0;
    bool sorted_ok = true;
    try {
      sorted_value = poa::poa_cyclic(candidates.sorted_extension);
    } catch (const std::exception&) {
      sorted_ok = false;
    }
    entry["candidate_sorted"] =
        ordered_json{{"alphas", candidates.sorted_extension.alphas()},
                     {"value", sorted_value},
                     {"defined", sorted_ok}};
    per_n.push_back(entry);
  }
  ordered_json out;
  out["base_argmax"] = base.best.alphas;
  out["base_value"] = base.best.value;
  out["per_n"] = per_n;
  return out;
}

ordered_json run_tight_instance(const json&, unsigned) {
  poa::TightInstance inst = poa::tight_instance_3slot();
  ordered_json out;
  out["values"] = inst.values;
  out["alphas"] = inst.alphas;
  out["bids"] = inst.bids;
  out["opt"] = inst.opt;
  out["sw"] = inst.sw;
  out["ratio"] = inst.ratio;
  out["ne_gain"] = inst.ne_gain;
  return out;
}

ordered_json run_learn(const json& params, std::uint64_t seed, ExperimentResult& result) {
  Instance inst = load_instance(params);
  std::size_t rounds = get_uint(params, "rounds");
  if (rounds < 1) fail("config: learn needs rounds >= 1");
  std::size_t points = get_uint(params, "grid_points", 64);
  std::size_t burn_in = get_uint(params, "burn_in", 0);
  if (burn_in >= rounds) fail("config: burn_in must be below rounds");

  std::size_t n = inst.values.agents();
  auto grids = equilibria::BidGrid::no_overbid_uniform(inst.values, points);
  std::vector<learning::AgentPolicy> policies(n);
  for (std::size_t i = 0; i < n; ++i) {
    double bound = inst.ctrs.alpha(0) * inst.values.value(i);
    double eta = learning::hedge_eta(grids[i].size(), rounds, bound);
    policies[i].learner =
        learning::make_hedge_learner(i, grids[i], eta, bound);
  }
  auto run = learning::run_dynamics(inst.values, inst.ctrs, std::move(policies),
                                    rounds, seed);
  if (get_bool(params, "log_csv", false)) {
    result.csv = rounds_csv(run.sequence, inst.values, inst.ctrs);
  }
  return learn_report(inst.values, inst.ctrs, run, grids, rounds, burn_in);
}

ordered_json run_byzantine_experiment(const json& params, std::uint64_t seed,
                                      ExperimentResult& result) {
  Instance inst = load_instance(params);
  std::size_t rounds = get_uint(params, "rounds");
  if (rounds < 1) fail("config: byzantine needs rounds >= 1");
  std::size_t points = get_uint(params, "grid_points", 64);
  json pop_json = params.contains("population") ? params.at("population") : json::object();
  byzantine::PopulationSpec population =
      byzantine::population_from_json(pop_json, inst.values.agents());
  try {
    population.validate(inst.values);
  } catch (const std::invalid_argument& e) {
    fail(std::string("config: ") + e.what());
  }

  auto run = byzantine::run_byzantine(inst.values, inst.ctrs, population,
                                      points, rounds, seed);
  if (get_bool(params, "log_csv", false)) {
    result.csv = rounds_csv(run.run.sequence, inst.values, inst.ctrs);
  }

  ordered_json scripted = ordered_json::array();
  for (const auto& [agent, script] : population.scripted) {
    ordered_json s;
    byzantine::to_json(s, script);
    s["agent"] = agent;
    scripted.push_back(s);
  }

  ordered_json out;
  out["rounds"] = rounds;
  out["grid_points"] = points;
  out["rational"] = population.rational;
  out["byzantine"] = scripted;
  out["average_total_welfare"] = run.report.average_total_welfare;
  out["average_rational_welfare"] = run.report.average_rational_welfare;
  out["opt_rational"] = run.report.opt_rational;
  out["opt_total"] = run.report.opt_total;
  out["rational_regret"] = run.report.rational_regret;
  out["delta_regret"] = run.report.delta_regret;
  out["welfare_ratio"] = run.report.welfare_ratio;
  out["welfare_floor"] = equilibria::kWelfareFloor;
  out["welfare_bound_ok"] = run.report.welfare_bound_ok;
  return out;
}

ordered_json run_bpoa(const json& params, std::uint64_t seed, unsigned threads) {
  const json& dists_json = require_field(params, "dists");
  if (!dists_json.is_array() || dists_json.empty()) {
    fail("config: bpoa needs a nonempty dists array");
  }
  std::vector<bayes::DistributionSpec> dists;
  for (const auto& d : dists_json) {
    try {
      dists.push_back(bayes::distribution_from_json(d));
    } catch (const std::invalid_argument& e) {
      fail(std::string("config: ") + e.what());
    }
  }
  std::vector<double> alphas = get_doubles(params, "alphas");
  if (alphas.size() > dists.size()) fail("config: more slots than agents");
  alphas.resize(dists.size(), 0.0);
  CtrProfile ctrs{alphas};

  std::size_t samples = get_uint(params, "samples", 100000);
  std::size_t value_points = get_uint(params, "value_points", 32);
  std::size_t grid_points = get_uint(params, "grid_points", 64);
  std::string strategy = get_string(params, "strategy", std::string("truthful"));

  bayes::StrategyTable table = bayes::StrategyTable::truthful(dists, value_points);
  ordered_json search_json;
  if (strategy == "search") {
    std::size_t iterations = get_uint(params, "iterations", 20);
    std::size_t search_samples = get_uint(params, "search_samples", 2000);
    auto search = bayes::approx_bne_search(dists, ctrs, grid_points,
                                           value_points, iterations,
                                           search_samples, seed, threads);
    table = std::move(search.table);
    search_json = ordered_json{{"iterations", iterations},
                               {"epsilon_trace", search.epsilon_trace}};
  } else if (strategy != "truthful") {
    fail("config: bpoa strategy must be 'truthful' or 'search'");
  }

  auto bpoa = bayes::bpoa_estimate(table, dists, ctrs, samples, seed, threads);
  ordered_json out;
  out["strategy"] = strategy;
  out["samples"] = bpoa.samples;
  out["e_opt"] = bpoa.e_opt;
  out["e_sw"] = bpoa.e_sw;
  out["ratio"] = bpoa.ratio;
  out["ci_low"] = bpoa.ci_low;
  out["ci_high"] = bpoa.ci_high;
  if (!search_json.is_null()) out["search"] = search_json;

  if (get_bool(params, "check_bne", true)) {
    std::vector<equilibria::BidGrid> grids;
    for (const auto& d : dists) {
      grids.push_back(equilibria::BidGrid::uniform(grid_points, d.support_hi()));
    }
    auto bne = bayes::bne_epsilon(table, dists, ctrs, grids, samples, seed,
                                  threads);
    out["bne"] = ordered_json{{"epsilon", bne.epsilon},
                              {"epsilon_se", bne.epsilon_se},
                              {"epsilon_max", bne.epsilon_max},
                              {"samples", bne.samples}};
  }
  return out;
}

}  // namespace

ordered_json effective_config(const json& config) {
  if (!config.is_object()) fail("config: must be a JSON object");
  std::string experiment = get_string(config, "experiment");
  std::uint64_t seed = get_uint(config, "seed");

  ordered_json effective;
  effective["experiment"] = experiment;
  effective["seed"] = seed;

  // Echo the remaining fields in sorted order so the hash is canonical.
  json rest = config;
  rest.erase("experiment");
  rest.erase("seed");
  for (auto it = rest.begin(); it != rest.end(); ++it) {
    effective[it.key()] = it.value();
  }
  return effective;
}

ExperimentResult run_experiment(const json& config, unsigned threads) {
  ordered_json effective = effective_config(config);
  std::string experiment = effective["experiment"].get<std::string>();
  std::uint64_t seed = effective["seed"].get<std::uint64_t>();

  ExperimentResult result;
  ordered_json results;
  if (experiment == "simulate") {
    results = run_simulate(config, threads);
  } else if (experiment == "check-ne") {
    results = run_check_ne(config, threads);
  } else if (experiment == "enumerate") {
    results = run_enumerate(config, threads);
  } else if (experiment == "learn") {
    results = run_learn(config, seed, result);
  } else if (experiment == "bpoa") {
    results = run_bpoa(config, seed, threads);
  } else if (experiment == "byzantine") {
    results = run_byzantine_experiment(config, seed, result);
  } else if (experiment == "poa3") {
    results = run_poa3(config, seed, threads);
  } else if (experiment == "cyclic") {
    results = run_cyclic(config, seed, threads);
  } else if (experiment == "tight-instance") {
    results = run_tight_instance(config, threads);
  } else {
    fail("config: unknown experiment '" + experiment + "'");
  }

  ordered_json report;
  report["version"] = kVersion;
  report["experiment"] = experiment;
  report["config_hash"] = sha256_hex(json(effective).dump());
  report["config"] = effective;
  report["results"] = results;
  result.report = std::move(report);

  std::ostringstream summary;
  summary << experiment;
  auto echo = [&](const char* key) {
    if (results.contains(key)) summary << "  " << key << "=" << results[key];
  };
  echo("value");
  echo("ratio");
  echo("worst_ratio");
  echo("is_ne");
  echo("count");
  echo("average_welfare");
  echo("average_total_welfare");
  echo("pota_ratio");
  echo("welfare_bound_ok");
  result.summary = summary.str();
  return result;
}

}  // namespace gsp
