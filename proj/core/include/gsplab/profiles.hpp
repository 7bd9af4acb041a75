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

#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

namespace gsp {

// Slot click-through rates alpha_1 >= ... >= alpha_n >= 0, n >= 1.
class CtrProfile {
 public:
  explicit CtrProfile(std::vector<double> alphas);

  std::size_t slots() const { return alphas_.size(); }
  double alpha(std::size_t slot) const { return alphas_[slot]; }
  const std::vector<double>& alphas() const { return alphas_; }

  bool operator==(const CtrProfile&) const = default;

 private:
  std::vector<double> alphas_;
};

// Per-agent values per click, v_i >= 0.
class ValueProfile {
 public:
  explicit ValueProfile(std::vector<double> values);

  std::size_t agents() const { return values_.size(); }
  double value(std::size_t agent) const { return values_[agent]; }
  const std::vector<double>& values() const { return values_; }
  double max_value() const;

  bool operator==(const ValueProfile&) const = default;

 private:
  std::vector<double> values_;
};

// Per-agent declared bids per click, b_i >= 0.
class BidProfile {
 public:
  explicit BidProfile(std::vector<double> bids);
  static BidProfile zeros(std::size_t agents);

  std::size_t agents() const { return bids_.size(); }
  double bid(std::size_t agent) const { return bids_[agent]; }
  const std::vector<double>& bids() const { return bids_; }
  void set_bid(std::size_t agent, double bid);

  bool operator==(const BidProfile&) const = default;

 private:
  std::vector<double> bids_;
};

// Pads ragged inputs to a common length: missing slots get CTR zero,
// missing agents get value (and bid) zero.
struct Instance {
  ValueProfile values;
  CtrProfile ctrs;
};
Instance pad_instance(std::vector<double> values, std::vector<double> alphas);

void to_json(nlohmann::ordered_json& j, const CtrProfile& c);
void to_json(nlohmann::ordered_json& j, const ValueProfile& v);
void to_json(nlohmann::ordered_json& j, const BidProfile& b);
CtrProfile ctrs_from_json(const nlohmann::json& j);
ValueProfile values_from_json(const nlohmann::json& j);
BidProfile bids_from_json(const nlohmann::json& j);

}  // namespace gsp
