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

#include <array>
#include <stdexcept>

#include "schedulers/session_base.hpp"
#include "sscd/schedulers.hpp"

namespace sscd {
namespace {

constexpr std::array<SchedulerKind, 12> kAllKinds = {
    SchedulerKind::kShortestFirst,
    SchedulerKind::kTrivialOblivious,
    SchedulerKind::kTimeoutOblivious,
    SchedulerKind::kRandomThresholdOblivious,
    SchedulerKind::kCanonical,
    SchedulerKind::kFairShareLottery,
    SchedulerKind::kAdaptiveFairShare,
    SchedulerKind::kCompleteLottery,
    SchedulerKind::kCompleteNashDp,
    SchedulerKind::kNearDeterministicThreshold,
    SchedulerKind::kForgivingLottery,
    SchedulerKind::kForgivingVirtualLength,
};

}  // namespace

std::span<const SchedulerKind> all_scheduler_kinds() { return kAllKinds; }

std::string to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::kShortestFirst:
      return "shortest_first";
    case SchedulerKind::kTrivialOblivious:
      return "trivial_oblivious";
    case SchedulerKind::kTimeoutOblivious:
      return "timeout_oblivious";
    case SchedulerKind::kRandomThresholdOblivious:
      return "random_threshold_oblivious";
    case SchedulerKind::kCanonical:
      return "canonical";
    case SchedulerKind::kFairShareLottery:
      return "fair_share_lottery";
    case SchedulerKind::kAdaptiveFairShare:
      return "adaptive_fair_share";
    case SchedulerKind::kCompleteLottery:
      return "complete_lottery";
    case SchedulerKind::kCompleteNashDp:
      return "complete_nash_dp";
    case SchedulerKind::kNearDeterministicThreshold:
      return "near_deterministic_threshold";
    case SchedulerKind::kForgivingLottery:
      return "forgiving_lottery";
    case SchedulerKind::kForgivingVirtualLength:
      return "forgiving_virtual_length";
  }
  return "unknown";
}

SchedulerKind parse_scheduler_kind(std::string_view name) {
  for (SchedulerKind kind : kAllKinds) {
    if (to_string(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown scheduler kind '" + std::string(name) + "'");
}

std::string to_string(FairShareMode mode) {
  return mode == FairShareMode::kBoundedM ? "bounded_m" : "general_half_fair";
}

FairShareMode parse_fair_share_mode(std::string_view name) {
  if (name == "bounded_m") return FairShareMode::kBoundedM;
  if (name == "general_half_fair") return FairShareMode::kGeneralHalfFair;
  throw std::invalid_argument("unknown fair share mode '" + std::string(name) + "'");
}

Capabilities capabilities_of(SchedulerKind kind) {
  Capabilities c;
  switch (kind) {
    case SchedulerKind::kShortestFirst:
      c.adaptivity = Adaptivity::kAdaptive;
      c.deterministic = true;
      break;
    case SchedulerKind::kTrivialOblivious:
      c.adaptivity = Adaptivity::kAdaptive;
      c.oblivious = true;
      c.complete = true;
      break;
    case SchedulerKind::kTimeoutOblivious:
    case SchedulerKind::kRandomThresholdOblivious:
      c.adaptivity = Adaptivity::kAdaptive;
      c.oblivious = true;
      break;
    case SchedulerKind::kCanonical:
    case SchedulerKind::kFairShareLottery:
      c.adaptivity = Adaptivity::kNonadaptive;
      break;
    case SchedulerKind::kAdaptiveFairShare:
    case SchedulerKind::kNearDeterministicThreshold:
    case SchedulerKind::kForgivingLottery:
      c.adaptivity = Adaptivity::kAdaptive;
      break;
    case SchedulerKind::kCompleteLottery:
      c.adaptivity = Adaptivity::kAdaptive;
      c.complete = true;
      break;
    case SchedulerKind::kCompleteNashDp:
      c.adaptivity = Adaptivity::kPreemptive;
      c.complete = true;
      break;
    case SchedulerKind::kForgivingVirtualLength:
      c.adaptivity = Adaptivity::kPreemptive;
      c.complete = true;
      c.deterministic = true;
      break;
  }
  return c;
}

std::unique_ptr<Scheduler> build_scheduler(const SchedulerSpec& spec, const Instance& instance) {
  instance.validate();
  using namespace internal;
  switch (spec.kind) {
    case SchedulerKind::kShortestFirst:
      return make_shortest_first(instance);
    case SchedulerKind::kTrivialOblivious:
      return make_trivial_oblivious(instance);
    case SchedulerKind::kTimeoutOblivious:
      return make_timeout_oblivious(instance, spec.params);
    case SchedulerKind::kRandomThresholdOblivious:
      return make_random_threshold_oblivious(instance);
    case SchedulerKind::kCanonical:
      return make_canonical(instance);
    case SchedulerKind::kFairShareLottery:
      return make_fair_share_lottery(instance, spec.params);
    case SchedulerKind::kAdaptiveFairShare:
      return make_adaptive_fair_share(instance);
    case SchedulerKind::kCompleteLottery:
      return make_complete_lottery(instance);
    case SchedulerKind::kCompleteNashDp:
      return make_complete_nash_dp(instance, spec.params);
    case SchedulerKind::kNearDeterministicThreshold:
      return make_near_deterministic_threshold(instance);
    case SchedulerKind::kForgivingLottery:
      return make_forgiving_lottery(instance, spec.params);
    case SchedulerKind::kForgivingVirtualLength:
      return make_forgiving_virtual_length(instance);
  }
  throw std::invalid_argument("unhandled scheduler kind");
}

int report_estimate(const Report& report) {
  if (const auto* q = std::get_if<QualitativeReport>(&report)) return q->estimate;
  if (const auto* p = std::get_if<PreferenceReport>(&report)) return p->t;
  return std::get<QuantitativeReport>(report).cdf.median();
}

const LengthCdf& report_cdf(const Report& report) {
  if (const auto* q = std::get_if<QuantitativeReport>(&report)) return q->cdf;
  throw InvalidReport("mechanism needs quantitative (distribution) reports");
}

int best_lottery_length(const LengthCdf& f, const Rational& unit, int lo, int hi) {
  int best_t = lo;
  Rational best = -1;
  for (int t = lo; t <= hi; ++t) {
    Rational win = unit / t;
    if (win > 1) win = 1;
    const Rational value = f.at(t) * win;
    if (value > best) {
      best = value;
      best_t = t;
    }
  }
  return best_t;
}

bool reads_distributions(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::kCanonical:
    case SchedulerKind::kFairShareLottery:
    case SchedulerKind::kAdaptiveFairShare:
    case SchedulerKind::kCompleteLottery:
    case SchedulerKind::kCompleteNashDp:
      return true;
    default:
      return false;
  }
}

Report truthful_report(SchedulerKind kind, const LengthCdf& f) {
  if (reads_distributions(kind)) return QuantitativeReport{f};
  return QualitativeReport{f.median()};
}

int canonical_length(const LengthCdf& f, int players, int deadline) {
  const int lo = (deadline + players - 1) / players;
  int best_t = lo;
  Rational best = -1;
  for (int t = lo; t <= deadline; ++t) {
    const Rational rate = f.at(t) / t;
    if (rate > best) {
      best = rate;
      best_t = t;
    }
  }
  return best_t;
}

Rational canonical_welfare(const LengthCdf& f, int players, int deadline) {
  const int t = canonical_length(f, players, deadline);
  const int jobs = std::min(players, deadline / t);
  return f.at(t) * jobs;
}

namespace internal {

std::vector<LengthCdf> reported_cdfs(const Instance& instance) {
  std::vector<LengthCdf> out;
  out.reserve(instance.players.size());
  for (const Player& p : instance.players) out.push_back(report_cdf(p.report));
  return out;
}

std::vector<int> reported_estimates(const Instance& instance) {
  std::vector<int> out;
  out.reserve(instance.players.size());
  for (const Player& p : instance.players) out.push_back(report_estimate(p.report));
  return out;
}

}  // namespace internal
}  // namespace sscd
