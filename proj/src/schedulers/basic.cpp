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

// Shortest-first, the three oblivious schedulers, the canonical scheduler for
// identical jobs, and the near-deterministic threshold scheduler.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "schedulers/session_base.hpp"

namespace sscd {
namespace internal {
namespace {

// --- shortest first --------------------------------------------------------

struct ShortestFirstPlan {
  int deadline;
  std::vector<int> order;
  std::vector<int> reports;
};

class ShortestFirstSession : public SessionBase {
 public:
  explicit ShortestFirstSession(std::shared_ptr<const ShortestFirstPlan> plan)
      : SessionBase(plan->deadline), plan_(std::move(plan)) {}

 protected:
  Directive decide(RandomSource&) override {
    if (pos_ >= plan_->order.size()) return Halt{};
    const int p = plan_->order[pos_++];
    return Run{p, std::min(plan_->reports[static_cast<std::size_t>(p)], remaining())};
  }

 private:
  std::shared_ptr<const ShortestFirstPlan> plan_;
  std::size_t pos_ = 0;
};

// --- oblivious -------------------------------------------------------------

// Random order; each job runs for min(cap, remaining) steps. cap == 0 means
// no timeout. random_threshold draws the cap lazily on first use.
struct ObliviousPlan {
  int deadline;
  int players;
  int timeout;                  // fixed cap, 0 = none
  std::vector<int> thresholds;  // if non-empty, uniform choice among these
};

class ObliviousSession : public SessionBase {
 public:
  explicit ObliviousSession(std::shared_ptr<const ObliviousPlan> plan)
      : SessionBase(plan->deadline), plan_(std::move(plan)), order_(plan_->players),
        cap_(plan_->timeout) {}

 protected:
  Directive decide(RandomSource& rng) override {
    if (!plan_->thresholds.empty() && cap_ == 0) {
      const auto& th = plan_->thresholds;
      cap_ = th.size() == 1 ? th.front() : th[rng.uniform_choice(th.size())];
    }
    if (order_.empty()) return Halt{};
    const int p = order_.draw(rng);
    const int allot = cap_ == 0 ? remaining() : std::min(cap_, remaining());
    return Run{p, allot};
  }

 private:
  std::shared_ptr<const ObliviousPlan> plan_;
  LazyOrder order_;
  int cap_;
};

int ceil_log2(int n) {
  int k = 0;
  while ((1 << k) < n) ++k;
  return k;
}

// --- canonical -------------------------------------------------------------

struct CanonicalPlan {
  int deadline;
  int players;
  int slot;  // t*
  int jobs;  // min(n, floor(D / t*))
};

class CanonicalSession : public SessionBase {
 public:
  explicit CanonicalSession(std::shared_ptr<const CanonicalPlan> plan)
      : SessionBase(plan->deadline), plan_(std::move(plan)), order_(plan_->players) {}

 protected:
  Directive decide(RandomSource& rng) override {
    if (started_ >= plan_->jobs) return Halt{};
    // Nonadaptive: job j owns steps [j*slot, (j+1)*slot); time freed by an
    // early finish stays idle.
    const int slot_start = started_ * plan_->slot;
    if (used() < slot_start) return Idle{slot_start - used()};
    ++started_;
    return Run{order_.draw(rng), plan_->slot};
  }

 private:
  std::shared_ptr<const CanonicalPlan> plan_;
  LazyOrder order_;
  int started_ = 0;
};

// --- near deterministic threshold -------------------------------------------

struct ThresholdPlan {
  int deadline;
  int players;
  int threshold;
  std::vector<int> eligible;
  std::vector<int> excluded;
};

class ThresholdSession : public SessionBase {
 public:
  explicit ThresholdSession(std::shared_ptr<const ThresholdPlan> plan)
      : SessionBase(plan->deadline), plan_(std::move(plan)), order_(plan_->eligible) {}

 protected:
  Directive decide(RandomSource& rng) override {
    if (!order_.empty()) {
      return Run{order_.draw(rng), std::min(plan_->threshold, remaining())};
    }
    // Excluded players each hold an independent 1/(2n) ticket for the whole
    // horizon, served from whatever budget the eligible jobs left over.
    const Rational ticket(1, 2 * plan_->players);
    while (lottery_pos_ < plan_->excluded.size()) {
      const int p = plan_->excluded[lottery_pos_++];
      if (rng.coin(ticket)) return Run{p, remaining()};
    }
    return Halt{};
  }

 private:
  std::shared_ptr<const ThresholdPlan> plan_;
  LazyOrder order_;
  std::size_t lottery_pos_ = 0;
};

}  // namespace

std::unique_ptr<Scheduler> make_shortest_first(const Instance& instance) {
  ShortestFirstPlan plan{instance.deadline, {}, reported_estimates(instance)};
  plan.order.resize(instance.players.size());
  std::iota(plan.order.begin(), plan.order.end(), 0);
  std::stable_sort(plan.order.begin(), plan.order.end(), [&](int a, int b) {
    return plan.reports[static_cast<std::size_t>(a)] < plan.reports[static_cast<std::size_t>(b)];
  });
  return make_planned<ShortestFirstSession>(SchedulerKind::kShortestFirst, std::move(plan));
}

std::unique_ptr<Scheduler> make_trivial_oblivious(const Instance& instance) {
  return make_planned<ObliviousSession>(SchedulerKind::kTrivialOblivious,
                                        ObliviousPlan{instance.deadline, instance.size(), 0, {}});
}

std::unique_ptr<Scheduler> make_timeout_oblivious(const Instance& instance,
                                                  const SchedulerParams& params) {
  const long n = instance.size();
  const long d = instance.deadline;
  int timeout;
  if (params.timeout) {
    timeout = *params.timeout;
    if (timeout < 1) throw InvalidReport("timeout must be >= 1");
  } else {
    // ceil(D / sqrt(n)): smallest T with T^2 * n >= D^2.
    long t = static_cast<long>(std::ceil(static_cast<double>(d) / std::sqrt(static_cast<double>(n))));
    while (t > 1 && (t - 1) * (t - 1) * n >= d * d) --t;
    while (t * t * n < d * d) ++t;
    timeout = static_cast<int>(std::max(1L, t));
  }
  return make_planned<ObliviousSession>(
      SchedulerKind::kTimeoutOblivious,
      ObliviousPlan{instance.deadline, instance.size(), timeout, {}});
}

std::unique_ptr<Scheduler> make_random_threshold_oblivious(const Instance& instance) {
  const int n = instance.size();
  const int d = instance.deadline;
  const int base = (d + n - 1) / n;
  const int levels = std::max(1, ceil_log2(n));
  ObliviousPlan plan{d, n, 0, {}};
  for (int i = 1; i <= levels; ++i) {
    const long t = static_cast<long>(base) << i;
    plan.thresholds.push_back(static_cast<int>(std::min<long>(t, d)));
  }
  return make_planned<ObliviousSession>(SchedulerKind::kRandomThresholdOblivious,
                                        std::move(plan));
}

std::unique_ptr<Scheduler> make_canonical(const Instance& instance) {
  const std::vector<LengthCdf> cdfs = reported_cdfs(instance);
  for (const LengthCdf& f : cdfs) {
    if (!(f == cdfs.front())) {
      throw NotIdenticalInstance("canonical scheduler needs identical reported distributions");
    }
  }
  const int n = instance.size();
  const int t = canonical_length(cdfs.front(), n, instance.deadline);
  return make_planned<CanonicalSession>(
      SchedulerKind::kCanonical,
      CanonicalPlan{instance.deadline, n, t, std::min(n, instance.deadline / t)});
}

}  // namespace internal

int near_deterministic_threshold(std::span<const int> reports, int deadline) {
  using internal::ceil_log2;
  std::vector<long> sorted(reports.begin(), reports.end());
  std::sort(sorted.begin(), sorted.end());
  const int n = static_cast<int>(sorted.size());

  // Largest prefix of the sorted reports that fits the deadline at its
  // shortest possible lengths.
  long prefix_sum = 0;
  int prefix = 0;
  for (long r : sorted) {
    if (prefix_sum + r > deadline) break;
    prefix_sum += r;
    ++prefix;
  }
  if (prefix == 0) return deadline;

  const long log_n = ceil_log2(n);
  const long slack = 1L << static_cast<long>(std::ceil(std::sqrt(static_cast<double>(log_n))));
  long t = std::min<long>(deadline, std::max(1L, (2 * prefix_sum + prefix - 1) / prefix));
  for (; t <= deadline; t *= 2) {
    long dangerous = 0;
    long good = 0;
    for (long r : sorted) {
      if (2 * r <= t) {
        ++good;
      } else if (r <= t) {
        ++dangerous;
      }
    }
    if (dangerous <= slack * good) return static_cast<int>(t);
  }
  return deadline;
}

namespace internal {

std::unique_ptr<Scheduler> make_near_deterministic_threshold(const Instance& instance) {
  const std::vector<int> reports = reported_estimates(instance);
  ThresholdPlan plan{instance.deadline, instance.size(),
                     near_deterministic_threshold(reports, instance.deadline), {}, {}};
  for (int i = 0; i < instance.size(); ++i) {
    (reports[static_cast<std::size_t>(i)] <= plan.threshold ? plan.eligible : plan.excluded)
        .push_back(i);
  }
  return make_planned<ThresholdSession>(SchedulerKind::kNearDeterministicThreshold,
                                        std::move(plan));
}

}  // namespace internal
}  // namespace sscd
