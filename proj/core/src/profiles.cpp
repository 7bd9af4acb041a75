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

#include "gsplab/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gsp {
namespace {

void require_finite_nonnegative(const std::vector<double>& xs,
                                const char* what) {
  for (double x : xs) {
    if (!std::isfinite(x) || x < 0.0) {
      throw std::invalid_argument(std::string(what) +
                                  " entries must be finite and nonnegative");
    }
  }
}

std::vector<double> doubles_from_json(const nlohmann::json& j,
                                      const char* what) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument(std::string(what) +
                                " must be a nonempty array of numbers");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) {
      throw std::invalid_argument(std::string(what) +
                                  " must be a nonempty array of numbers");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

CtrProfile::CtrProfile(std::vector<double> alphas) : alphas_(std::move(alphas)) {
  if (alphas_.empty()) {
    throw std::invalid_argument("CtrProfile needs at least one slot");
  }
  require_finite_nonnegative(alphas_, "CtrProfile");
  for (std::size_t k = 0; k + 1 < alphas_.size(); ++k) {
    if (alphas_[k] < alphas_[k + 1]) {
      throw std::invalid_argument("CtrProfile must be nonincreasing");
    }
  }
}

ValueProfile::ValueProfile(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("ValueProfile needs at least one agent");
  }
  require_finite_nonnegative(values_, "ValueProfile");
}

double ValueProfile::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

BidProfile::BidProfile(std::vector<double> bids) : bids_(std::move(bids)) {
  if (bids_.empty()) {
    throw std::invalid_argument("BidProfile needs at least one agent");
  }
  require_finite_nonnegative(bids_, "BidProfile");
}

BidProfile BidProfile::zeros(std::size_t agents) {
  return BidProfile(std::vector<double>(agents, 0.0));
}

void BidProfile::set_bid(std::size_t agent, double bid) {
  if (agent >= bids_.size()) throw std::out_of_range("agent index");
  if (!std::isfinite(bid) || bid < 0.0) {
    throw std::invalid_argument("bid must be finite and nonnegative");
  }
  bids_[agent] = bid;
}

Instance pad_instance(std::vector<double> values, std::vector<double> alphas) {
  std::size_t n = std::max(values.size(), alphas.size());
  values.resize(n, 0.0);   // virtual agents bid and value zero
  alphas.resize(n, 0.0);   // virtual slots receive no clicks
  return Instance{ValueProfile(std::move(values)), CtrProfile(std::move(alphas))};
}

void to_json(nlohmann::ordered_json& j, const CtrProfile& c) {
  j = nlohmann::ordered_json{{"alphas", c.alphas()}};
}

void to_json(nlohmann::ordered_json& j, const ValueProfile& v) {
  j = nlohmann::ordered_json{{"values", v.values()}};
}

void to_json(nlohmann::ordered_json& j, const BidProfile& b) {
  j = nlohmann::ordered_json{{"bids", b.bids()}};
}

CtrProfile ctrs_from_json(const nlohmann::json& j) {
  return CtrProfile(doubles_from_json(j, "alphas"));
}

ValueProfile values_from_json(const nlohmann::json& j) {
  return ValueProfile(doubles_from_json(j, "values"));
}

BidProfile bids_from_json(const nlohmann::json& j) {
  return BidProfile(doubles_from_json(j, "bids"));
}

}  // namespace gsp
