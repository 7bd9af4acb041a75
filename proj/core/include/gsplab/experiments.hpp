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

#include <optional>
#include <string>

#include <json.hpp>

namespace gsp {

// A finished experiment: a machine-readable report plus an optional
// per-round CSV log. Identical config (seed included) yields byte-identical
// content at any thread count.
struct ExperimentResult {
  nlohmann::ordered_json report;
  std::optional<std::string> csv;
  std::string csv_filename = "rounds.csv";
  std::string summary;  // one-line human summary for stdout
};

// Validates the config against the experiment's schema, fills defaults,
// dispatches, and wraps the results with the artifact version and the
// SHA-256 of the effective config. Throws ConfigError on schema violations,
// BudgetError on blown enumeration budgets, InvariantError on internal
// check failures.
ExperimentResult run_experiment(const nlohmann::json& config,
                                unsigned threads = 1);

// The defaulted config that run_experiment hashes and echoes.
nlohmann::ordered_json effective_config(const nlohmann::json& config);

}  // namespace gsp
