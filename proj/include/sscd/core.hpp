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

#ifndef SSCD_CORE_HPP_
#define SSCD_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sscd/rational.hpp"

namespace sscd {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MonotonicityViolation : public Error {
 public:
  using Error::Error;
};
class RangeViolation : public Error {
 public:
  using Error::Error;
};
class InvalidInstance : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Lengths
// ---------------------------------------------------------------------------

// Realized job length. kNeverFinishes compares greater than every budget, so
// "finishes within s steps" is just `length <= progress + s`.
using Length = int;
inline constexpr Length kNeverFinishes = std::numeric_limits<int>::max();

// Cumulative distribution over integer lengths 1..max_length(). Mass above
// max_length() never finishes.
class LengthCdf {
 public:
  // Throws MonotonicityViolation or RangeViolation; an empty sequence is a
  // RangeViolation.
  static LengthCdf validate(std::vector<Rational> raw);
  static LengthCdf point_mass(int length);

  int max_length() const { return static_cast<int>(values_.size()); }

  // Pr[length <= t]; 0 for t <= 0, saturates past max_length().
  const Rational& at(int t) const;
  // Pr[length == t].
  Rational mass(int t) const;
  Rational never_finishes() const { return 1 - values_.back(); }
  std::span<const Rational> values() const { return values_; }

  // Pr[length <= progress + steps | length > progress]. Requires
  // at(progress) < 1.
  Rational conditional_within(int progress, int steps) const;

  // Smallest t with Pr[length <= t] >= 1/2; max_length() + 1 if none.
  int median() const;
  // Largest length with positive mass, or kNeverFinishes if mass escapes.
  Length support_max() const;

  bool operator==(const LengthCdf& other) const { return values_ == other.values_; }

 private:
  explicit LengthCdf(std::vector<Rational> values) : values_(std::move(values)) {}
  std::vector<Rational> values_;
};

// ---------------------------------------------------------------------------
// Reports and instances
// ---------------------------------------------------------------------------

struct QuantitativeReport {
  LengthCdf cdf;
  bool operator==(const QuantitativeReport&) const = default;
};
struct QualitativeReport {
  int estimate = 1;
  bool operator==(const QualitativeReport&) const = default;
};
// A lottery parameter t chosen directly by the player.
struct PreferenceReport {
  int t = 1;
  bool operator==(const PreferenceReport&) const = default;
};
using Report = std::variant<QuantitativeReport, QualitativeReport, PreferenceReport>;

void validate_report(const Report& report);

struct Player {
  LengthCdf true_cdf;
  Report report;
};

struct Instance {
  int deadline = 1;
  std::vector<Player> players;
  std::string label;

  int size() const { return static_cast<int>(players.size()); }
  // Throws InvalidInstance.
  void validate() const;
  std::vector<Report> reports() const;
  Instance with_report(int player, Report report) const;
};

// ---------------------------------------------------------------------------
// Scheduler <-> engine protocol
// ---------------------------------------------------------------------------

// Running a player that is already on the machine continues its job. Running a
// player that was exhausted and then displaced by another directive resumes
// it, which needs the preemptive capability.
struct Run {
  int player = 0;
  int allotment = 1;
};
struct Idle {
  int steps = 1;
};
struct Halt {};
using Directive = std::variant<Run, Idle, Halt>;

struct Finished {
  int player = 0;
  int steps = 0;  // steps of the allotment actually used
};
struct Exhausted {
  int player = 0;
};
using Observation = std::variant<Finished, Exhausted>;

// The only way schedulers (and the engine's nature) draw randomness.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  // weights are nonnegative and sum to 1.
  virtual std::size_t weighted_choice(std::span<const Rational> weights) = 0;
  // Same contract as weighted_choice over `count` equal weights; separate so
  // callers need not materialize n copies of 1/n.
  virtual std::size_t uniform_choice(std::size_t count) = 0;
  bool coin(const Rational& p_true);
};

// Deterministic sampling source (xoshiro256** seeded through splitmix64).
class SeededSource : public RandomSource {
 public:
  explicit SeededSource(std::uint64_t seed);
  SeededSource(std::uint64_t seed, std::uint64_t stream);

  std::size_t weighted_choice(std::span<const Rational> weights) override;
  std::size_t uniform_choice(std::size_t count) override;

  std::uint64_t next_u64();
  double next_unit();  // uniform in [0,1)

 private:
  std::uint64_t state_[4];
};

// Length t w.p. mass(t); kNeverFinishes w.p. never_finishes(). One weighted
// choice so the exact engine enumerates it as a single branch point.
Length sample_length(const LengthCdf& cdf, RandomSource& rng);

enum class Adaptivity { kNonadaptive, kAdaptive, kPreemptive };

struct Capabilities {
  Adaptivity adaptivity = Adaptivity::kAdaptive;
  bool oblivious = false;
  bool complete = false;
  bool deterministic = false;

  bool preemptive() const { return adaptivity == Adaptivity::kPreemptive; }
};

std::string to_string(Adaptivity adaptivity);

class SchedulerSession {
 public:
  virtual ~SchedulerSession() = default;
  virtual Directive next(RandomSource& rng) = 0;
  virtual void observe(const Observation& observation) = 0;
};

// A mechanism bound to one instance's reports and deadline. Pure and
// shareable; every trial or enumeration branch gets a fresh session.
class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual std::unique_ptr<SchedulerSession> start() const = 0;
  virtual Capabilities capabilities() const = 0;
  virtual std::string name() const = 0;
};

// Random permutation drawn one position at a time, so enumeration never opens
// branches for positions the scheduler never reaches.
class LazyOrder {
 public:
  explicit LazyOrder(std::vector<int> pool) : pool_(std::move(pool)) {}
  explicit LazyOrder(int n);

  bool empty() const { return pool_.empty(); }
  std::size_t remaining() const { return pool_.size(); }
  int draw(RandomSource& rng);

 private:
  std::vector<int> pool_;
};

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

inline constexpr int kIdleSlot = -1;

struct Segment {
  int start = 0;  // first step, 1-based
  int steps = 0;
};

struct PlayerEvents {
  int finished_at = 0;  // step index of completion, 0 if unfinished
  int run_steps = 0;
  std::vector<Segment> segments;
  bool finished() const { return finished_at > 0; }
};

struct ExecutionTrace {
  std::vector<int> timeline;  // timeline[s-1] = player running at step s, or kIdleSlot
  std::vector<PlayerEvents> events;
  int total_used = 0;

  int welfare() const;
};

}  // namespace sscd

#endif  // SSCD_CORE_HPP_
