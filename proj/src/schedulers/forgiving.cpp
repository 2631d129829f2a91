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

// Forgiving mechanisms: a lottery whose unfinished jobs are extended one step
// at a time with shrinking probability, and the deterministic preemptive
// virtual-length scheduler.

#include <algorithm>

#include "schedulers/session_base.hpp"

namespace sscd {

Rational forgiveness_probability(int granted, int extra, const Rational& unit) {
  auto g = [&unit](int x) { return min(Rational(1), unit / x); };
  return g(granted + 2 * extra + 2) / g(granted + 2 * extra);
}

VirtualLengthSession::VirtualLengthSession(std::vector<int> reports, int deadline)
    : reports_(std::move(reports)),
      virtual_(reports_),
      counters_(reports_.size(), 0),
      finished_(reports_.size(), false),
      deadline_(deadline) {}

Directive VirtualLengthSession::next(RandomSource&) {
  if (used_ >= deadline_) return Halt{};
  running_ = -1;
  for (std::size_t i = 0; i < reports_.size(); ++i) {
    if (finished_[i]) continue;
    if (running_ < 0 || virtual_[i] < virtual_[static_cast<std::size_t>(running_)]) {
      running_ = static_cast<int>(i);
    }
  }
  if (running_ < 0) return Halt{};
  return Run{running_, 1};
}

void VirtualLengthSession::observe(const Observation& observation) {
  const auto i = static_cast<std::size_t>(running_);
  ++used_;
  ++counters_[i];
  if (std::holds_alternative<Finished>(observation)) {
    finished_[i] = true;
  } else if (counters_[i] >= reports_[i]) {
    virtual_[i] += 2;
  }
}

namespace internal {
namespace {

struct ForgivingPlan {
  int deadline;
  std::vector<int> reports;
  std::optional<int> unit;
};

class ForgivingLotterySession : public SessionBase {
 public:
  explicit ForgivingLotterySession(std::shared_ptr<const ForgivingPlan> plan)
      : SessionBase(plan->deadline),
        plan_(std::move(plan)),
        order_(static_cast<int>(plan_->reports.size())) {}

 protected:
  Directive decide(RandomSource& rng) override {
    if (current_ >= 0) {
      // Still unfinished after granted + extra steps.
      if (rng.coin(forgiveness_probability(granted_, extra_, unit_))) {
        ++extra_;
        return Run{current_, 1};
      }
      current_ = -1;
    }
    while (!order_.empty()) {
      const int players_left = static_cast<int>(order_.remaining());
      const int p = order_.draw(rng);
      unit_ = plan_->unit ? Rational(*plan_->unit) : Rational(remaining() / players_left);
      granted_ = plan_->reports[static_cast<std::size_t>(p)];
      if (sgn(unit_) <= 0) continue;
      if (rng.coin(min(Rational(1), unit_ / granted_))) {
        current_ = p;
        extra_ = 0;
        return Run{p, std::min(granted_, remaining())};
      }
    }
    return Halt{};
  }

  void on_finished(int, int) override { current_ = -1; }

 private:
  std::shared_ptr<const ForgivingPlan> plan_;
  LazyOrder order_;
  int current_ = -1;
  int granted_ = 0;
  int extra_ = 0;
  Rational unit_;
};

class VirtualLengthScheduler : public Scheduler {
 public:
  VirtualLengthScheduler(std::vector<int> reports, int deadline)
      : reports_(std::move(reports)), deadline_(deadline) {}

  std::unique_ptr<SchedulerSession> start() const override {
    return std::make_unique<VirtualLengthSession>(reports_, deadline_);
  }
  Capabilities capabilities() const override {
    return capabilities_of(SchedulerKind::kForgivingVirtualLength);
  }
  std::string name() const override { return to_string(SchedulerKind::kForgivingVirtualLength); }

 private:
  std::vector<int> reports_;
  int deadline_;
};

}  // namespace

std::unique_ptr<Scheduler> make_forgiving_lottery(const Instance& instance,
                                                  const SchedulerParams& params) {
  return make_planned<ForgivingLotterySession>(
      SchedulerKind::kForgivingLottery,
      ForgivingPlan{instance.deadline, reported_estimates(instance), params.unit});
}

std::unique_ptr<Scheduler> make_forgiving_virtual_length(const Instance& instance) {
  return std::make_unique<VirtualLengthScheduler>(reported_estimates(instance),
                                                  instance.deadline);
}

}  // namespace internal
}  // namespace sscd
