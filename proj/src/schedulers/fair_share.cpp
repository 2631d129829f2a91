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

// Fair-share lotteries: the nonadaptive interval lottery (bounded and general
// modes) and the adaptive round-based variant.

#include <algorithm>
#include <map>
#include <numeric>

#include "schedulers/session_base.hpp"

namespace sscd {
namespace {

int requested_length(const Report& report, const Rational& unit, int max_length) {
  // Over all of 1..M: short of u the grant is certain, and with a fractional
  // u that can beat every t >= u.
  if (const auto* q = std::get_if<QuantitativeReport>(&report)) {
    return best_lottery_length(q->cdf, unit, 1, max_length);
  }
  const int t = std::holds_alternative<PreferenceReport>(report)
                    ? std::get<PreferenceReport>(report).t
                    : std::get<QualitativeReport>(report).estimate;
  if (t > max_length) {
    throw InvalidReport("requested length " + std::to_string(t) + " exceeds the cap " +
                        std::to_string(max_length));
  }
  return t;
}

Rational fractional_part(const Rational& x) { return x - floor_int(x); }

}  // namespace

FairSharePlan plan_fair_share(const Instance& instance, const SchedulerParams& params) {
  const int n = instance.size();
  const int d = instance.deadline;
  FairSharePlan plan;
  if (params.fair_share_mode == FairShareMode::kBoundedM) {
    if (!params.max_length) throw InvalidReport("bounded_m mode needs max_length (M)");
    plan.max_length = *params.max_length;
    if (plan.max_length < 1 || plan.max_length >= d) {
      throw InvalidReport("bounded_m mode needs 1 <= M < D");
    }
    plan.unit = ratio(d - plan.max_length, n);
  } else {
    plan.max_length = d;
    plan.unit = ratio(d, n);
  }

  for (const Player& p : instance.players) {
    const int t = requested_length(p.report, plan.unit, plan.max_length);
    plan.lengths.push_back(t);
    plan.probabilities.push_back(min(Rational(1), plan.unit / t));
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return plan.lengths[static_cast<std::size_t>(a)] < plan.lengths[static_cast<std::size_t>(b)];
  });

  // Consecutive intervals [start_i, start_i + p_i) on the real line.
  std::vector<Rational> starts(static_cast<std::size_t>(n));
  std::vector<Rational> breakpoints{Rational(0)};
  Rational cursor = 0;
  for (int p : order) {
    starts[static_cast<std::size_t>(p)] = cursor;
    cursor += plan.probabilities[static_cast<std::size_t>(p)];
    breakpoints.push_back(fractional_part(cursor));
  }
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

  // Selection is constant between consecutive breakpoints, so each gap is one
  // branch weighted by its length; r is taken at the gap midpoint.
  std::map<std::vector<int>, std::size_t> seen;
  for (std::size_t b = 0; b < breakpoints.size(); ++b) {
    const Rational lo = breakpoints[b];
    const Rational hi = b + 1 < breakpoints.size() ? breakpoints[b + 1] : Rational(1);
    const Rational r = (lo + hi) / 2;
    std::vector<int> selected;
    for (int p : order) {
      const Rational& a = starts[static_cast<std::size_t>(p)];
      const long z = ceil_int(a - r);
      if (z + r < a + plan.probabilities[static_cast<std::size_t>(p)]) selected.push_back(p);
    }
    auto [it, inserted] = seen.emplace(selected, plan.segments.size());
    if (!inserted) {
      plan.segments[it->second].weight += hi - lo;
      continue;
    }
    FairShareSegment seg;
    seg.weight = hi - lo;
    seg.selected = selected;
    long total = 0;
    for (int p : selected) total += plan.lengths[static_cast<std::size_t>(p)];
    if (params.fair_share_mode == FairShareMode::kBoundedM || selected.empty() || n == 1) {
      if (total > d) {
        throw TimeOverflow("interval lottery granted " + std::to_string(total) +
                           " steps against deadline " + std::to_string(d));
      }
      seg.bundles.push_back(selected);
    } else {
      // With two or more players, always split off the largest grant and run
      // one side at random: every selected job then runs with probability
      // exactly 1/2 whatever the others ask for.
      std::vector<int> rest(selected.begin(), selected.end() - 1);
      const long rest_total = total - plan.lengths[static_cast<std::size_t>(selected.back())];
      if (rest_total > d) {
        throw SplitOverflow("selection without its largest grant still needs " +
                            std::to_string(rest_total) + " steps");
      }
      seg.bundles.push_back(std::move(rest));
      seg.bundles.push_back({selected.back()});
    }
    plan.segments.push_back(std::move(seg));
  }
  return plan;
}

namespace internal {
namespace {

struct FairShareRuntime {
  int deadline;
  FairSharePlan plan;
  std::vector<Rational> weights;
};

class FairShareSession : public SessionBase {
 public:
  explicit FairShareSession(std::shared_ptr<const FairShareRuntime> rt)
      : SessionBase(rt->deadline), rt_(std::move(rt)) {}

 protected:
  Directive decide(RandomSource& rng) override {
    if (bundle_ == nullptr) {
      const auto& segs = rt_->plan.segments;
      const std::size_t s = segs.size() == 1 ? 0 : rng.weighted_choice(rt_->weights);
      const auto& bundles = segs[s].bundles;
      bundle_ = &bundles[bundles.size() == 1 ? 0 : rng.uniform_choice(bundles.size())];
    }
    if (pos_ >= bundle_->size()) return Halt{};
    if (used() < slot_start_) return Idle{slot_start_ - used()};
    const int p = (*bundle_)[pos_++];
    const int t = rt_->plan.lengths[static_cast<std::size_t>(p)];
    slot_start_ += t;
    return Run{p, t};
  }

 private:
  std::shared_ptr<const FairShareRuntime> rt_;
  const std::vector<int>* bundle_ = nullptr;
  std::size_t pos_ = 0;
  int slot_start_ = 0;
};

// --- adaptive round variant --------------------------------------------------

struct AdaptivePlan {
  int deadline;
  std::vector<LengthCdf> cdfs;
};

class AdaptiveFairShareSession : public SessionBase {
 public:
  explicit AdaptiveFairShareSession(std::shared_ptr<const AdaptivePlan> plan)
      : SessionBase(plan->deadline),
        plan_(std::move(plan)),
        order_(static_cast<int>(plan_->cdfs.size())) {}

 protected:
  Directive decide(RandomSource& rng) override {
    if (!opened_) {
      opened_ = true;
      if (rng.coin(Rational(1, 2))) return Run{order_.draw(rng), remaining()};
    }
    while (!order_.empty()) {
      const int players_left = static_cast<int>(order_.remaining());
      const int p = order_.draw(rng);
      const Rational expectation = ratio(remaining(), players_left);
      const int t = best_lottery_length(plan_->cdfs[static_cast<std::size_t>(p)], expectation,
                                        1, remaining());
      if (rng.coin(min(Rational(1), expectation / t))) return Run{p, t};
    }
    return Halt{};
  }

 private:
  std::shared_ptr<const AdaptivePlan> plan_;
  LazyOrder order_;
  bool opened_ = false;
};

}  // namespace

std::unique_ptr<Scheduler> make_fair_share_lottery(const Instance& instance,
                                                   const SchedulerParams& params) {
  FairShareRuntime rt{instance.deadline, plan_fair_share(instance, params), {}};
  for (const auto& seg : rt.plan.segments) rt.weights.push_back(seg.weight);
  return make_planned<FairShareSession>(SchedulerKind::kFairShareLottery, std::move(rt));
}

std::unique_ptr<Scheduler> make_adaptive_fair_share(const Instance& instance) {
  return make_planned<AdaptiveFairShareSession>(
      SchedulerKind::kAdaptiveFairShare, AdaptivePlan{instance.deadline, reported_cdfs(instance)});
}

}  // namespace internal
}  // namespace sscd
