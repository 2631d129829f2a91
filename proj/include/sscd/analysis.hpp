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

// Strategic-property checks: payoff curves over report grids, error
// symmetry and monotonicity, best-response gaps, completeness, obliviousness.
// Everything here is exact.

#ifndef SSCD_ANALYSIS_HPP_
#define SSCD_ANALYSIS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sscd/core.hpp"
#include "sscd/engine.hpp"
#include "sscd/schedulers.hpp"

namespace sscd {

EvalResult evaluate_exact(const SchedulerSpec& spec, const Instance& instance,
                          std::uint64_t branch_limit = kDefaultBranchLimit);

// A report of the same kind as `like` that says `value`: the estimate, the
// preference, or a point mass at `value`.
Report report_like(const Report& like, int value);

struct PayoffPoint {
  int value = 0;  // the integer the report says
  Report report;
  Rational payoff;  // exact finish probability of the player
};

struct PayoffCurve {
  int player = 0;
  std::vector<PayoffPoint> points;

  // Throws std::out_of_range if `value` is not on the grid.
  const Rational& at(int value) const;
};

// Replaces the player's report by report_like(current, r) for each r in the
// grid and records the player's exact finish probability.
PayoffCurve payoff_curve(const SchedulerSpec& spec, const Instance& instance, int player,
                         std::span<const int> grid,
                         std::uint64_t branch_limit = kDefaultBranchLimit);

struct ErrorWitness {
  std::string property;  // "symmetric" or "monotone"
  int report_a = 0;
  int report_b = 0;
  Rational payoff_a;
  Rational payoff_b;
};

struct ErrorProperties {
  bool symmetric = true;
  bool monotone = true;
  std::vector<ErrorWitness> witnesses;
};

// symmetric: payoff(l + e) == payoff(l - e) whenever both are on the grid.
// monotone: payoff never increases as |report - l| grows.
ErrorProperties check_error_properties(const PayoffCurve& curve, int true_length);

struct BestResponse {
  Rational gap;  // best payoff on the grid minus the honest payoff
  Rational honest_payoff;
  Rational best_payoff;
  std::size_t best_index = 0;  // into the grid
};

BestResponse best_response_gap(const SchedulerSpec& spec, const Instance& instance, int player,
                               const Report& honest, std::span<const Report> grid,
                               std::uint64_t branch_limit = kDefaultBranchLimit);

struct CompletenessViolation {
  std::vector<int> lengths;
  int deadline = 0;
  Rational weight;  // probability of the offending branch
  std::vector<int> unfinished;
};

struct CompletenessReport {
  std::uint64_t instances = 0;
  std::uint64_t branches = 0;
  std::uint64_t skipped = 0;  // instances the mechanism rejects (e.g. too few players)
  std::uint64_t violation_count = 0;
  std::vector<CompletenessViolation> violations;  // first few witnesses

  bool passed() const { return violation_count == 0; }
};

// Every deterministic instance with 1..max_n players, lengths 1..max_len,
// D in [min_deadline, max_deadline] and total length <= D, truthful reports;
// every randomness branch must finish all jobs.
CompletenessReport completeness_check(const SchedulerSpec& spec, int max_n, int max_len,
                                      int min_deadline, int max_deadline,
                                      std::size_t max_witnesses = 10);

struct ObliviousnessReport {
  bool oblivious = true;
  int witness_profile = -1;  // first profile whose result differs from profile 0
};

// Exact results must be identical under every report profile.
ObliviousnessReport obliviousness_check(const SchedulerSpec& spec, const Instance& instance,
                                        std::span<const std::vector<Report>> profiles,
                                        std::uint64_t branch_limit = kDefaultBranchLimit);

}  // namespace sscd

#endif  // SSCD_ANALYSIS_HPP_
