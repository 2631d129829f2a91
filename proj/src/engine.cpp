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

#include "sscd/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <type_traits>
#include <utility>

namespace sscd {

BranchLimitExceeded::BranchLimitExceeded(std::uint64_t reached)
    : Error("branch limit exceeded after " + std::to_string(reached) + " branches"),
      reached_(reached) {}

std::string to_string(EvalMode mode) {
  return mode == EvalMode::kExact ? "exact" : "monte_carlo";
}

namespace {

struct PlayerState {
  int progress = 0;
  bool finished = false;
  bool exhausted = false;  // ran a full allotment without finishing
};

}  // namespace

ExecutionTrace drive(SchedulerSession& session, const Capabilities& caps, int deadline,
                     int players, Nature& nature, RandomSource& rng) {
  ExecutionTrace trace;
  trace.events.resize(static_cast<std::size_t>(players));
  trace.timeline.reserve(static_cast<std::size_t>(deadline));
  std::vector<PlayerState> state(static_cast<std::size_t>(players));
  int on_machine = kIdleSlot;

  while (trace.total_used < deadline) {
    const Directive directive = session.next(rng);
    if (std::holds_alternative<Halt>(directive)) break;

    if (const auto* idle = std::get_if<Idle>(&directive)) {
      if (idle->steps < 1) throw InvalidDirective("idle needs at least one step");
      if (trace.total_used + idle->steps > deadline) {
        throw BudgetExceeded("idle of " + std::to_string(idle->steps) + " steps at step " +
                             std::to_string(trace.total_used) + " overruns deadline " +
                             std::to_string(deadline));
      }
      trace.timeline.insert(trace.timeline.end(), static_cast<std::size_t>(idle->steps), kIdleSlot);
      trace.total_used += idle->steps;
      on_machine = kIdleSlot;
      continue;
    }

    const Run& run = std::get<Run>(directive);
    if (run.player < 0 || run.player >= players) {
      throw InvalidDirective("run of unknown player " + std::to_string(run.player));
    }
    if (run.allotment < 1) throw InvalidDirective("allotment must be >= 1");
    PlayerState& ps = state[static_cast<std::size_t>(run.player)];
    if (ps.finished) {
      throw InvalidDirective("player " + std::to_string(run.player) + " already finished");
    }
    if (trace.total_used + run.allotment > deadline) {
      throw BudgetExceeded("allotment of " + std::to_string(run.allotment) + " steps at step " +
                           std::to_string(trace.total_used) + " overruns deadline " +
                           std::to_string(deadline));
    }
    if (ps.exhausted && on_machine != run.player && !caps.preemptive()) {
      throw PreemptionNotDeclared("player " + std::to_string(run.player) +
                                  " resumed by a non-preemptive scheduler");
    }

    const int finished_after = nature.advance(run.player, ps.progress, run.allotment);
    const int used = finished_after > 0 ? finished_after : run.allotment;
    PlayerEvents& ev = trace.events[static_cast<std::size_t>(run.player)];
    if (!ev.segments.empty() && on_machine == run.player &&
        ev.segments.back().start + ev.segments.back().steps == trace.total_used + 1) {
      ev.segments.back().steps += used;
    } else {
      ev.segments.push_back({trace.total_used + 1, used});
    }
    trace.timeline.insert(trace.timeline.end(), static_cast<std::size_t>(used), run.player);
    trace.total_used += used;
    ps.progress += used;
    ev.run_steps += used;

    if (finished_after > 0) {
      ps.finished = true;
      ev.finished_at = trace.total_used;
      on_machine = kIdleSlot;
      session.observe(Finished{run.player, finished_after});
    } else {
      ps.exhausted = true;
      on_machine = run.player;
      session.observe(Exhausted{run.player});
    }
  }
  return trace;
}

namespace {

class RealizedNature : public Nature {
 public:
  explicit RealizedNature(std::span<const Length> lengths) : lengths_(lengths) {}
  int advance(int player, int progress, int allotment) override {
    const Length len = lengths_[static_cast<std::size_t>(player)];
    if (len == kNeverFinishes || len > progress + allotment) return 0;
    return len - progress;
  }

 private:
  std::span<const Length> lengths_;
};

// Branches on the conditional law of the remaining length. Deterministic
// outcomes (one positive weight) open no branch.
class LazyNature : public Nature {
 public:
  LazyNature(const Instance& instance, RandomSource& rng) : instance_(instance), rng_(rng) {}
  int advance(int player, int progress, int allotment) override {
    const LengthCdf& cdf = instance_.players[static_cast<std::size_t>(player)].true_cdf;
    const Rational survive = 1 - cdf.at(progress);
    weights_.clear();
    int positive = 0;
    std::size_t last_positive = 0;
    for (int s = 1; s <= allotment; ++s) {
      weights_.push_back(cdf.mass(progress + s) / survive);
      if (sgn(weights_.back()) > 0) {
        ++positive;
        last_positive = weights_.size() - 1;
      }
    }
    weights_.push_back((1 - cdf.at(progress + allotment)) / survive);
    if (sgn(weights_.back()) > 0) {
      ++positive;
      last_positive = weights_.size() - 1;
    }
    const std::size_t pick = positive == 1 ? last_positive : rng_.weighted_choice(weights_);
    return pick == weights_.size() - 1 ? 0 : static_cast<int>(pick) + 1;
  }

 private:
  const Instance& instance_;
  RandomSource& rng_;
  std::vector<Rational> weights_;
};

// Inverse-CDF sampler over doubles, built once per distinct CDF.
class LengthSampler {
 public:
  explicit LengthSampler(const LengthCdf& cdf) {
    for (int t = 1; t <= cdf.max_length(); ++t) cumulative_.push_back(cdf.at(t).get_d());
    exact_one_ = cdf.never_finishes() == 0;
  }
  Length draw(SeededSource& rng) const {
    const double u = rng.next_unit();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) {
      return exact_one_ ? static_cast<Length>(cumulative_.size()) : kNeverFinishes;
    }
    return static_cast<Length>(it - cumulative_.begin()) + 1;
  }

 private:
  std::vector<double> cumulative_;
  bool exact_one_ = false;
};

}  // namespace

ExecutionTrace run_once(SchedulerSession& session, const Capabilities& caps,
                        const Instance& instance, std::span<const Length> realized,
                        RandomSource& rng) {
  if (realized.size() != instance.players.size()) {
    throw InvalidInstance("realized lengths do not match player count");
  }
  RealizedNature nature(realized);
  return drive(session, caps, instance.deadline, instance.size(), nature, rng);
}

EvalResult monte_carlo(const Scheduler& scheduler, const Instance& instance,
                       std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw Error("monte_carlo needs at least one trial");
  const int n = instance.size();
  const Capabilities caps = scheduler.capabilities();

  std::vector<LengthSampler> samplers;
  std::vector<std::size_t> sampler_of(static_cast<std::size_t>(n));
  {
    std::vector<const LengthCdf*> distinct;
    for (int i = 0; i < n; ++i) {
      const LengthCdf& cdf = instance.players[static_cast<std::size_t>(i)].true_cdf;
      auto it = std::find_if(distinct.begin(), distinct.end(),
                             [&](const LengthCdf* d) { return *d == cdf; });
      if (it == distinct.end()) {
        distinct.push_back(&cdf);
        samplers.emplace_back(cdf);
        sampler_of[static_cast<std::size_t>(i)] = samplers.size() - 1;
      } else {
        sampler_of[static_cast<std::size_t>(i)] = static_cast<std::size_t>(it - distinct.begin());
      }
    }
  }

  std::vector<std::uint64_t> finished(static_cast<std::size_t>(n), 0);
  std::vector<std::uint64_t> started(static_cast<std::size_t>(n), 0);
  std::uint64_t welfare_sum = 0;
  std::uint64_t welfare_sq_sum = 0;
  std::vector<Length> lengths(static_cast<std::size_t>(n));
  for (std::uint64_t t = 0; t < trials; ++t) {
    SeededSource rng(seed, t);
    for (int i = 0; i < n; ++i) {
      lengths[static_cast<std::size_t>(i)] =
          samplers[sampler_of[static_cast<std::size_t>(i)]].draw(rng);
    }
    auto session = scheduler.start();
    const ExecutionTrace trace = run_once(*session, caps, instance, lengths, rng);
    std::uint64_t w = 0;
    for (int i = 0; i < n; ++i) {
      const PlayerEvents& ev = trace.events[static_cast<std::size_t>(i)];
      if (ev.finished()) {
        ++finished[static_cast<std::size_t>(i)];
        ++w;
      }
      if (ev.run_steps > 0) ++started[static_cast<std::size_t>(i)];
    }
    welfare_sum += w;
    welfare_sq_sum += w * w;
  }

  EvalResult result;
  result.mode = EvalMode::kMonteCarlo;
  result.scheduler = scheduler.name();
  result.label = instance.label;
  result.samples = trials;
  result.seed = seed;
  const double N = static_cast<double>(trials);
  for (int i = 0; i < n; ++i) {
    const double p = static_cast<double>(finished[static_cast<std::size_t>(i)]) / N;
    result.finish_prob.push_back(p);
    result.finish_se.push_back(std::sqrt(p * (1.0 - p) / N));
    result.start_prob.push_back(static_cast<double>(started[static_cast<std::size_t>(i)]) / N);
  }
  const double mean = static_cast<double>(welfare_sum) / N;
  const double var = std::max(0.0, static_cast<double>(welfare_sq_sum) / N - mean * mean);
  result.welfare = mean;
  result.welfare_se = std::sqrt(var / N);
  return result;
}

namespace {

// Replays the scheduler from scratch once per leaf, following a stack of
// recorded choices and opening the first positive branch at new choice points.
class EnumeratingSource : public RandomSource {
 public:
  std::size_t weighted_choice(std::span<const Rational> weights) override {
    if (depth_ < stack_.size()) {
      Level& level = stack_[depth_++];
      if (level.uniform != 0 || level.weights.size() != weights.size()) {
        throw Error("nondeterministic replay: choice shape changed");
      }
      return level.index;
    }
    Level level;
    level.weights.assign(weights.begin(), weights.end());
    Rational sum = 0;
    for (const Rational& w : level.weights) {
      if (sgn(w) < 0) throw Error("negative branch weight");
      sum += w;
    }
    if (sum != 1) throw Error("branch weights sum to " + to_string(sum) + ", not 1");
    level.index = next_positive(level, 0);
    push(std::move(level));
    return stack_.back().index;
  }

  std::size_t uniform_choice(std::size_t count) override {
    if (depth_ < stack_.size()) {
      Level& level = stack_[depth_++];
      if (level.uniform != count) throw Error("nondeterministic replay: choice shape changed");
      return level.index;
    }
    Level level;
    level.uniform = count;
    level.index = 0;
    push(std::move(level));
    return 0;
  }

  // Moves to the next leaf. False once every branch has been visited.
  bool advance() {
    if (depth_ != stack_.size()) throw Error("nondeterministic replay: leaf ended early");
    while (!stack_.empty()) {
      Level& top = stack_.back();
      const std::size_t next = next_positive(top, top.index + 1);
      if (next < top.size()) {
        top.index = next;
        top.prefix = parent_weight() * weight_of(top);
        depth_ = 0;
        return true;
      }
      stack_.pop_back();
    }
    return false;
  }

  void restart() { depth_ = 0; }
  Rational leaf_weight() const { return stack_.empty() ? Rational(1) : stack_.back().prefix; }

 private:
  struct Level {
    std::vector<Rational> weights;
    std::size_t uniform = 0;
    std::size_t index = 0;
    Rational prefix;
    std::size_t size() const { return uniform != 0 ? uniform : weights.size(); }
  };

  static std::size_t next_positive(const Level& level, std::size_t from) {
    if (level.uniform != 0) return from;
    while (from < level.weights.size() && sgn(level.weights[from]) <= 0) ++from;
    return from;
  }
  static Rational weight_of(const Level& level) {
    if (level.uniform != 0) return Rational(1, static_cast<unsigned long>(level.uniform));
    return level.weights[level.index];
  }
  Rational parent_weight() const {
    return stack_.size() < 2 ? Rational(1) : stack_[stack_.size() - 2].prefix;
  }
  void push(Level level) {
    stack_.push_back(std::move(level));
    stack_.back().prefix = parent_weight() * weight_of(stack_.back());
    ++depth_;
  }

  std::vector<Level> stack_;
  std::size_t depth_ = 0;
};

}  // namespace

std::uint64_t enumerate_branches(const Scheduler& scheduler, const Instance& instance,
                                 const BranchVisitor& visit, std::uint64_t branch_limit,
                                 NatureMode nature_mode) {
  if (branch_limit < 1) throw Error("branch_limit must be >= 1");
  const Capabilities caps = scheduler.capabilities();
  EnumeratingSource source;
  std::uint64_t leaves = 0;
  std::vector<Length> lengths(instance.players.size());
  do {
    if (leaves >= branch_limit) throw BranchLimitExceeded(leaves + 1);
    source.restart();
    auto session = scheduler.start();
    ExecutionTrace trace;
    if (nature_mode == NatureMode::kLazy) {
      LazyNature nature(instance, source);
      trace = drive(*session, caps, instance.deadline, instance.size(), nature, source);
    } else {
      for (std::size_t i = 0; i < lengths.size(); ++i) {
        lengths[i] = sample_length(instance.players[i].true_cdf, source);
      }
      RealizedNature nature(lengths);
      trace = drive(*session, caps, instance.deadline, instance.size(), nature, source);
    }
    ++leaves;
    visit(source.leaf_weight(), trace);
  } while (source.advance());
  return leaves;
}

EvalResult exact_evaluate(const Scheduler& scheduler, const Instance& instance,
                          std::uint64_t branch_limit, NatureMode nature) {
  const auto n = instance.players.size();
  ExactStats stats;
  stats.finish_prob.assign(n, Rational(0));
  stats.start_prob.assign(n, Rational(0));
  stats.welfare = 0;
  stats.welfare_second_moment = 0;
  stats.total_weight = 0;

  const std::uint64_t leaves = enumerate_branches(
      scheduler, instance,
      [&](const Rational& weight, const ExecutionTrace& trace) {
        int w = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (trace.events[i].finished()) {
            stats.finish_prob[i] += weight;
            ++w;
          }
          if (trace.events[i].run_steps > 0) stats.start_prob[i] += weight;
        }
        stats.total_weight += weight;
        stats.welfare += weight * w;
        stats.welfare_second_moment += weight * (w * w);
      },
      branch_limit, nature);
  if (stats.total_weight != 1) {
    throw Error("enumeration weights sum to " + to_string(stats.total_weight));
  }

  EvalResult result;
  result.mode = EvalMode::kExact;
  result.scheduler = scheduler.name();
  result.label = instance.label;
  result.samples = leaves;
  for (std::size_t i = 0; i < n; ++i) {
    result.finish_prob.push_back(stats.finish_prob[i].get_d());
    result.finish_se.push_back(0.0);
    result.start_prob.push_back(stats.start_prob[i].get_d());
  }
  result.welfare = stats.welfare.get_d();
  result.exact = std::move(stats);
  return result;
}

}  // namespace sscd
