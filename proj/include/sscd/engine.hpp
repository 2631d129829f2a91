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

#ifndef SSCD_ENGINE_HPP_
#define SSCD_ENGINE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sscd/core.hpp"

namespace sscd {

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};
class PreemptionNotDeclared : public Error {
 public:
  using Error::Error;
};
class InvalidDirective : public Error {
 public:
  using Error::Error;
};
class BranchLimitExceeded : public Error {
 public:
  explicit BranchLimitExceeded(std::uint64_t reached);
  std::uint64_t reached() const { return reached_; }

 private:
  std::uint64_t reached_;
};

inline constexpr std::uint64_t kDefaultBranchLimit = 10'000'000;

// Answers the engine's only question about a job: given `progress` steps
// already run, does it finish within the next `allotment` steps, and after
// how many. Returns 0 if it does not.
class Nature {
 public:
  virtual ~Nature() = default;
  virtual int advance(int player, int progress, int allotment) = 0;
};

// Drives the directive/observation loop until Halt or the deadline.
ExecutionTrace drive(SchedulerSession& session, const Capabilities& caps, int deadline,
                     int players, Nature& nature, RandomSource& rng);

// One execution against fixed realized lengths. Throws BudgetExceeded,
// PreemptionNotDeclared, InvalidDirective.
ExecutionTrace run_once(SchedulerSession& session, const Capabilities& caps,
                        const Instance& instance, std::span<const Length> realized,
                        RandomSource& rng);

enum class EvalMode { kExact, kMonteCarlo };
std::string to_string(EvalMode mode);

struct ExactStats {
  std::vector<Rational> finish_prob;
  std::vector<Rational> start_prob;
  Rational welfare;
  Rational welfare_second_moment;
  Rational total_weight;  // always 1 after a complete enumeration
};

struct EvalResult {
  EvalMode mode = EvalMode::kExact;
  std::string scheduler;
  std::string label;
  std::vector<double> finish_prob;
  std::vector<double> finish_se;  // zero in exact mode
  std::vector<double> start_prob;
  double welfare = 0.0;
  double welfare_se = 0.0;
  std::uint64_t samples = 0;  // trials, or enumerated branches
  std::uint64_t seed = 0;
  std::optional<ExactStats> exact;

  int players() const { return static_cast<int>(finish_prob.size()); }
};

// Trial t uses SeededSource(seed, t) for both lengths and scheduler coins, so
// results do not depend on evaluation order.
EvalResult monte_carlo(const Scheduler& scheduler, const Instance& instance,
                       std::uint64_t trials, std::uint64_t seed);

// How nature's randomness is enumerated. kLazy branches on "finishes within
// this allotment" only when the scheduler runs a job; kEager draws every
// length up front. Both give identical results.
enum class NatureMode { kLazy, kEager };

using BranchVisitor = std::function<void(const Rational& weight, const ExecutionTrace& trace)>;

// Depth-first enumeration of every branch with positive weight. Returns the
// number of leaves. Throws BranchLimitExceeded once more than `branch_limit`
// leaves are reached.
std::uint64_t enumerate_branches(const Scheduler& scheduler, const Instance& instance,
                                 const BranchVisitor& visit,
                                 std::uint64_t branch_limit = kDefaultBranchLimit,
                                 NatureMode nature = NatureMode::kLazy);

EvalResult exact_evaluate(const Scheduler& scheduler, const Instance& instance,
                          std::uint64_t branch_limit = kDefaultBranchLimit,
                          NatureMode nature = NatureMode::kLazy);

}  // namespace sscd

#endif  // SSCD_ENGINE_HPP_
