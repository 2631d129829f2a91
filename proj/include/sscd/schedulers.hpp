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

#ifndef SSCD_SCHEDULERS_HPP_
#define SSCD_SCHEDULERS_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sscd/core.hpp"

namespace sscd {

class NotIdenticalInstance : public Error {
 public:
  using Error::Error;
};
class TimeOverflow : public Error {
 public:
  using Error::Error;
};
class SplitOverflow : public Error {
 public:
  using Error::Error;
};
class TooFewPlayers : public Error {
 public:
  using Error::Error;
};
class TableLimitExceeded : public Error {
 public:
  using Error::Error;
};
class InvalidReport : public Error {
 public:
  using Error::Error;
};

enum class SchedulerKind {
  kShortestFirst,
  kTrivialOblivious,
  kTimeoutOblivious,
  kRandomThresholdOblivious,
  kCanonical,
  kFairShareLottery,
  kAdaptiveFairShare,
  kCompleteLottery,
  kCompleteNashDp,
  kNearDeterministicThreshold,
  kForgivingLottery,
  kForgivingVirtualLength,
};

std::span<const SchedulerKind> all_scheduler_kinds();
std::string to_string(SchedulerKind kind);
// Throws std::invalid_argument for unknown names.
SchedulerKind parse_scheduler_kind(std::string_view name);

enum class FairShareMode { kBoundedM, kGeneralHalfFair };
std::string to_string(FairShareMode mode);
FairShareMode parse_fair_share_mode(std::string_view name);

struct SchedulerParams {
  // timeout_oblivious: per-job timeout, default ceil(D / sqrt(n)).
  std::optional<int> timeout;
  // fair_share_lottery.
  FairShareMode fair_share_mode = FairShareMode::kGeneralHalfFair;
  std::optional<int> max_length;  // M, required by kBoundedM
  // forgiving_lottery: fixed lottery expectation instead of
  // floor(remaining time / remaining players).
  std::optional<int> unit;
  // complete_nash_dp: cap on n * D^3.
  std::uint64_t table_limit = 50'000'000;

  bool operator==(const SchedulerParams&) const = default;
};

struct SchedulerSpec {
  SchedulerKind kind = SchedulerKind::kShortestFirst;
  SchedulerParams params;

  bool operator==(const SchedulerSpec&) const = default;
};

Capabilities capabilities_of(SchedulerKind kind);

// Binds a mechanism to an instance's reports and deadline. Oblivious kinds
// never read reports. Throws on report kinds the mechanism cannot use and on
// the per-kind precondition errors above.
std::unique_ptr<Scheduler> build_scheduler(const SchedulerSpec& spec, const Instance& instance);

// ---------------------------------------------------------------------------
// Building blocks, exposed for tests and analysis
// ---------------------------------------------------------------------------

// True if the mechanism needs quantitative (distribution) reports.
bool reads_distributions(SchedulerKind kind);
// The honest report a mechanism of this kind expects from a player with true
// distribution f: f itself, or its median as a qualitative estimate.
Report truthful_report(SchedulerKind kind, const LengthCdf& f);

// Single-length reading of a report: the estimate, the preference, or the
// median of a reported distribution.
int report_estimate(const Report& report);
// Throws InvalidReport unless the report is quantitative.
const LengthCdf& report_cdf(const Report& report);

// argmax of f(t) * min(1, unit / t) over lo <= t <= hi, smallest t on ties.
int best_lottery_length(const LengthCdf& f, const Rational& unit, int lo, int hi);

// t* = smallest maximizer of f(t)/t over ceil(D/n) <= t <= D.
int canonical_length(const LengthCdf& f, int players, int deadline);
// Expected welfare of the canonical schedule: min(n, floor(D/t*)) * f(t*).
Rational canonical_welfare(const LengthCdf& f, int players, int deadline);

// One cell of the interval lottery: all offsets r in a sub-interval of [0,1)
// select the same players. `bundles` holds the one schedule that runs, or (general
// mode, n >= 2) the selection without its largest grant and that grant alone,
// one of which runs at random.
struct FairShareSegment {
  Rational weight;
  std::vector<int> selected;
  std::vector<std::vector<int>> bundles;
};

struct FairSharePlan {
  Rational unit;
  int max_length = 0;
  std::vector<int> lengths;              // t_i
  std::vector<Rational> probabilities;   // min(1, unit / t_i)
  std::vector<FairShareSegment> segments;
};

FairSharePlan plan_fair_share(const Instance& instance, const SchedulerParams& params);

// Report-driven threshold for near-deterministic jobs (reports t_i promise a
// length in [t_i, 2 t_i]).
int near_deterministic_threshold(std::span<const int> reports, int deadline);

// Continuation probability after `extra` forgiveness steps for a job granted
// t steps with lottery unit u: g(t + 2 extra + 2) / g(t + 2 extra) where
// g(x) = min(1, u / x).
Rational forgiveness_probability(int granted, int extra, const Rational& unit);

// The deterministic preemptive virtual-length mechanism as a concrete session,
// so callers can inspect counters and virtual lengths after a run.
class VirtualLengthSession : public SchedulerSession {
 public:
  VirtualLengthSession(std::vector<int> reports, int deadline);

  Directive next(RandomSource& rng) override;
  void observe(const Observation& observation) override;

  std::span<const int> virtual_lengths() const { return virtual_; }
  std::span<const int> counters() const { return counters_; }

 private:
  std::vector<int> reports_;
  std::vector<int> virtual_;
  std::vector<int> counters_;
  std::vector<bool> finished_;
  int deadline_;
  int used_ = 0;
  int running_ = -1;
};

}  // namespace sscd

#endif  // SSCD_SCHEDULERS_HPP_
