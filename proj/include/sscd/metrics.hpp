// Copyright 2026 The SSCD Workbench Authors. All rights reserved.
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

// Fairness and welfare measures, and the optima used as baselines.

#ifndef SSCD_METRICS_HPP_
#define SSCD_METRICS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sscd/core.hpp"
#include "sscd/engine.hpp"

namespace sscd {

class StateLimitExceeded : public Error {
 public:
  explicit StateLimitExceeded(std::uint64_t reached);
  std::uint64_t reached() const { return reached_; }

 private:
  std::uint64_t reached_;
};

// max over ceil(D/n) <= t <= D of f(t) * D / (t * n), clamped to 1.
Rational fair_share(const LengthCdf& f, int players, int deadline);

struct FairnessReport {
  std::vector<Rational> fair_share;
  std::vector<double> achieved;
  std::optional<std::vector<Rational>> achieved_exact;  // exact-mode results only
  // min over players with positive fair share of achieved / fair_share.
  double ratio = 0.0;
  std::optional<Rational> ratio_exact;
  int argmin = -1;
  // Every fair share is zero; ratio is +infinity.
  bool vacuous = false;
};

// Fair shares come from the players' true distributions.
FairnessReport fairness_ratio(const EvalResult& result, const Instance& instance);

// Size of the largest prefix of the sorted lengths that fits in D.
int realized_optimal_welfare(std::span<const int> lengths, int deadline);

struct OptimumLimits {
  std::uint64_t max_states = 4'000'000;
};

// Best expected number of finished jobs over every adaptive preemptive
// policy, by backward induction over (progress per player, time left).
// Players with equal true distributions are interchangeable in the state.
Rational exact_preemptive_optimum(const Instance& instance, const OptimumLimits& limits = {});

// exact_preemptive_optimum / canonical welfare on gen_canonical_gap(k, n, D).
Rational canonical_gap_ratio(int k, int players, int deadline, const OptimumLimits& limits = {});

}  // namespace sscd

#endif  // SSCD_METRICS_HPP_
