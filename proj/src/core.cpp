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

#include "sscd/core.hpp"

#include <algorithm>
#include <utility>

namespace sscd {

// ---------------------------------------------------------------------------
// LengthCdf
// ---------------------------------------------------------------------------

LengthCdf LengthCdf::validate(std::vector<Rational> raw) {
  if (raw.empty()) throw RangeViolation("CDF must have at least one value");
  for (std::size_t t = 0; t < raw.size(); ++t) {
    raw[t].canonicalize();
    if (raw[t] < 0 || raw[t] > 1) {
      throw RangeViolation("CDF value at length " + std::to_string(t + 1) + " is " +
                           to_string(raw[t]) + ", outside [0,1]");
    }
    if (t > 0 && raw[t] < raw[t - 1]) {
      throw MonotonicityViolation("CDF decreases at length " + std::to_string(t + 1));
    }
  }
  return LengthCdf(std::move(raw));
}

LengthCdf LengthCdf::point_mass(int length) {
  if (length < 1) throw RangeViolation("point mass length must be >= 1");
  std::vector<Rational> values(static_cast<std::size_t>(length), Rational(0));
  values.back() = 1;
  return LengthCdf(std::move(values));
}

const Rational& LengthCdf::at(int t) const {
  static const Rational kZero(0);
  if (t <= 0) return kZero;
  if (t >= max_length()) return values_.back();
  return values_[static_cast<std::size_t>(t - 1)];
}

Rational LengthCdf::mass(int t) const {
  if (t < 1 || t > max_length()) return 0;
  return at(t) - at(t - 1);
}

Rational LengthCdf::conditional_within(int progress, int steps) const {
  const Rational& base = at(progress);
  return (at(progress + steps) - base) / (1 - base);
}

int LengthCdf::median() const {
  const Rational half(1, 2);
  for (int t = 1; t <= max_length(); ++t) {
    if (at(t) >= half) return t;
  }
  return max_length() + 1;
}

Length LengthCdf::support_max() const {
  if (values_.back() < 1) return kNeverFinishes;
  for (int t = max_length(); t >= 1; --t) {
    if (mass(t) > 0) return t;
  }
  return kNeverFinishes;
}

// ---------------------------------------------------------------------------
// Reports and instances
// ---------------------------------------------------------------------------

void validate_report(const Report& report) {
  if (const auto* q = std::get_if<QualitativeReport>(&report); q && q->estimate < 1) {
    throw InvalidInstance("qualitative estimate must be >= 1");
  }
  if (const auto* p = std::get_if<PreferenceReport>(&report); p && p->t < 1) {
    throw InvalidInstance("preference t must be >= 1");
  }
}

void Instance::validate() const {
  if (deadline < 1) throw InvalidInstance("deadline must be >= 1");
  if (players.empty()) throw InvalidInstance("instance needs at least one player");
  for (const Player& p : players) {
    // Re-validation catches CDFs assembled by hand through copies.
    LengthCdf::validate(std::vector<Rational>(p.true_cdf.values().begin(),
                                              p.true_cdf.values().end()));
    validate_report(p.report);
  }
}

std::vector<Report> Instance::reports() const {
  std::vector<Report> out;
  out.reserve(players.size());
  for (const Player& p : players) out.push_back(p.report);
  return out;
}

Instance Instance::with_report(int player, Report report) const {
  Instance copy = *this;
  copy.players.at(static_cast<std::size_t>(player)).report = std::move(report);
  return copy;
}

// ---------------------------------------------------------------------------
// Randomness
// ---------------------------------------------------------------------------

bool RandomSource::coin(const Rational& p_true) {
  if (p_true >= 1) return true;
  if (p_true <= 0) return false;
  const Rational weights[2] = {p_true, 1 - p_true};
  return weighted_choice(weights) == 0;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

SeededSource::SeededSource(std::uint64_t seed) : SeededSource(seed, 0) {}

SeededSource::SeededSource(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t mix = stream;
  std::uint64_t x = seed ^ splitmix64(mix);
  for (auto& s : state_) s = splitmix64(x);
}

std::uint64_t SeededSource::next_u64() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double SeededSource::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t SeededSource::weighted_choice(std::span<const Rational> weights) {
  const double u = next_unit();
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (sgn(weights[i]) <= 0) continue;
    last_positive = i;
    acc += weights[i].get_d();
    if (u < acc) return i;
  }
  return last_positive;
}

std::size_t SeededSource::uniform_choice(std::size_t count) {
  const std::uint64_t n = count;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

Length sample_length(const LengthCdf& cdf, RandomSource& rng) {
  std::vector<Rational> weights;
  weights.reserve(static_cast<std::size_t>(cdf.max_length()) + 1);
  for (int t = 1; t <= cdf.max_length(); ++t) weights.push_back(cdf.mass(t));
  weights.push_back(cdf.never_finishes());
  const std::size_t pick = rng.weighted_choice(weights);
  return pick == weights.size() - 1 ? kNeverFinishes : static_cast<Length>(pick + 1);
}

std::string to_string(Adaptivity adaptivity) {
  switch (adaptivity) {
    case Adaptivity::kNonadaptive:
      return "nonadaptive";
    case Adaptivity::kAdaptive:
      return "adaptive";
    case Adaptivity::kPreemptive:
      return "preemptive";
  }
  return "unknown";
}

LazyOrder::LazyOrder(int n) {
  pool_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool_[static_cast<std::size_t>(i)] = i;
}

int LazyOrder::draw(RandomSource& rng) {
  const std::size_t k = pool_.size() == 1 ? 0 : rng.uniform_choice(pool_.size());
  const int chosen = pool_[k];
  // Keep the remaining pool in index order so branch numbering is stable.
  pool_.erase(pool_.begin() + static_cast<std::ptrdiff_t>(k));
  return chosen;
}

int ExecutionTrace::welfare() const {
  return static_cast<int>(
      std::count_if(events.begin(), events.end(), [](const PlayerEvents& e) { return e.finished(); }));
}

}  // namespace sscd
