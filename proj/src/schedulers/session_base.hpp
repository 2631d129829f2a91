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

#ifndef SSCD_SRC_SCHEDULERS_SESSION_BASE_HPP_
#define SSCD_SRC_SCHEDULERS_SESSION_BASE_HPP_

#include <memory>
#include <string>
#include <utility>
#include <variant>

#include "sscd/core.hpp"
#include "sscd/schedulers.hpp"

namespace sscd::internal {

// Tracks elapsed time from the session's own directives and observations.
// Subclasses only decide the next directive.
class SessionBase : public SchedulerSession {
 public:
  explicit SessionBase(int deadline) : deadline_(deadline) {}

  Directive next(RandomSource& rng) final {
    if (remaining() <= 0) return Halt{};
    Directive d = decide(rng);
    if (const auto* run = std::get_if<Run>(&d)) {
      last_allotment_ = run->allotment;
    } else if (const auto* idle = std::get_if<Idle>(&d)) {
      used_ += idle->steps;
    }
    return d;
  }

  void observe(const Observation& observation) final {
    if (const auto* f = std::get_if<Finished>(&observation)) {
      used_ += f->steps;
      on_finished(f->player, f->steps);
    } else {
      const auto& e = std::get<Exhausted>(observation);
      used_ += last_allotment_;
      on_exhausted(e.player, last_allotment_);
    }
  }

 protected:
  virtual Directive decide(RandomSource& rng) = 0;
  virtual void on_finished(int /*player*/, int /*steps*/) {}
  virtual void on_exhausted(int /*player*/, int /*allotment*/) {}

  int deadline() const { return deadline_; }
  int used() const { return used_; }
  int remaining() const { return deadline_ - used_; }

 private:
  int deadline_;
  int used_ = 0;
  int last_allotment_ = 0;
};

// Generic bound scheduler: a name, fixed capabilities, and a session maker
// over shared immutable plan data.
template <typename Plan, typename Session>
class PlannedScheduler : public Scheduler {
 public:
  PlannedScheduler(std::string name, Capabilities caps, std::shared_ptr<const Plan> plan)
      : name_(std::move(name)), caps_(caps), plan_(std::move(plan)) {}

  std::unique_ptr<SchedulerSession> start() const override {
    return std::make_unique<Session>(plan_);
  }
  Capabilities capabilities() const override { return caps_; }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  Capabilities caps_;
  std::shared_ptr<const Plan> plan_;
};

template <typename Session, typename Plan>
std::unique_ptr<Scheduler> make_planned(SchedulerKind kind, Plan plan) {
  return std::make_unique<PlannedScheduler<Plan, Session>>(
      to_string(kind), capabilities_of(kind), std::make_shared<const Plan>(std::move(plan)));
}

std::vector<LengthCdf> reported_cdfs(const Instance& instance);
std::vector<int> reported_estimates(const Instance& instance);

// Factories, one per source file.
std::unique_ptr<Scheduler> make_shortest_first(const Instance& instance);
std::unique_ptr<Scheduler> make_trivial_oblivious(const Instance& instance);
std::unique_ptr<Scheduler> make_timeout_oblivious(const Instance& instance,
                                                  const SchedulerParams& params);
std::unique_ptr<Scheduler> make_random_threshold_oblivious(const Instance& instance);
std::unique_ptr<Scheduler> make_canonical(const Instance& instance);
std::unique_ptr<Scheduler> make_fair_share_lottery(const Instance& instance,
                                                   const SchedulerParams& params);
std::unique_ptr<Scheduler> make_adaptive_fair_share(const Instance& instance);
std::unique_ptr<Scheduler> make_complete_lottery(const Instance& instance);
std::unique_ptr<Scheduler> make_complete_nash_dp(const Instance& instance,
                                                 const SchedulerParams& params);
std::unique_ptr<Scheduler> make_near_deterministic_threshold(const Instance& instance);
std::unique_ptr<Scheduler> make_forgiving_lottery(const Instance& instance,
                                                  const SchedulerParams& params);
std::unique_ptr<Scheduler> make_forgiving_virtual_length(const Instance& instance);

}  // namespace sscd::internal

#endif  // SSCD_SRC_SCHEDULERS_SESSION_BASE_HPP_
