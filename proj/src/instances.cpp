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


#include "sscd/instances.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace sscd {
namespace {

bool is_power_of_two(long x) { return x > 0 && (x & (x - 1)) == 0; }

int log2_exact(long x) {
  int k = 0;
  while ((1L << k) < x) ++k;
  return k;
}

Player truthful(LengthCdf f) {
  QuantitativeReport report{f};
  return Player{std::move(f), std::move(report)};
}

// CDF from masses at lengths 1..masses.size().
LengthCdf from_masses(const std::vector<Rational>& masses) {
  std::vector<Rational> values;
  Rational acc = 0;
  for (const Rational& m : masses) {
    acc += m;
    values.push_back(acc);
  }
  return LengthCdf::validate(std::move(values));
}

LengthCdf uniform(int lo, int hi) {
  std::vector<Rational> masses(static_cast<std::size_t>(hi), Rational(0));
  for (int t = lo; t <= hi; ++t) masses[static_cast<std::size_t>(t - 1)] = ratio(1, hi - lo + 1);
  return from_masses(masses);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidInstance(what);
}

int draw_between(RandomSource& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.uniform_choice(static_cast<std::size_t>(hi - lo + 1)));
}

LengthCdf random_cdf(RandomSource& rng, const RandomInstanceParams& p) {
  if (p.deterministic) return LengthCdf::point_mass(draw_between(rng, 1, p.max_length));
  const int support = draw_between(rng, 1, std::min(p.max_support, p.max_length));
  std::vector<int> pool;
  for (int t = 1; t <= p.max_length; ++t) pool.push_back(t);
  std::vector<int> lengths;
  for (int i = 0; i < support; ++i) {
    const std::size_t j = rng.uniform_choice(pool.size());
    lengths.push_back(pool[j]);
    pool.erase(pool.begin() + static_cast<long>(j));
  }
  std::sort(lengths.begin(), lengths.end());
  const int slots = support + (p.escaping_mass ? 1 : 0);
  const int den = draw_between(rng, std::max(2, slots), std::max({2, slots, p.max_denominator}));
  // Every support point gets at least one unit; the rest is spread at random.
  std::vector<int> units(static_cast<std::size_t>(slots), 0);
  for (int i = 0; i < support; ++i) units[static_cast<std::size_t>(i)] = 1;
  for (int u = support; u < den; ++u) ++units[rng.uniform_choice(units.size())];
  std::vector<Rational> masses(static_cast<std::size_t>(lengths.back()), Rational(0));
  for (int i = 0; i < support; ++i) {
    masses[static_cast<std::size_t>(lengths[static_cast<std::size_t>(i)] - 1)] =
        ratio(units[static_cast<std::size_t>(i)], den);
  }
  return from_masses(masses);
}

}  // namespace

Instance gen_posu_groups(int deadline, long group_cap) {
  require(deadline >= 2 && is_power_of_two(deadline), "D must be a power of two >= 2");
  require(group_cap >= 1, "group cap must be >= 1");
  Instance inst;
  inst.deadline = deadline;
  for (int j = 0; j < deadline; ++j) inst.players.push_back(truthful(LengthCdf::point_mass(1)));
  const long k = 2L * deadline;
  const int groups = log2_exact(deadline) + 1;
  for (int i = 1; i <= groups; ++i) {
    // min(D * k^i, cap) without overflow.
    long size = deadline;
    for (int e = 0; e < i && size < group_cap; ++e) size *= k;
    size = std::min(size, group_cap);
    const int short_len = 1 << (i - 1);
    std::vector<Rational> masses(static_cast<std::size_t>(2 * short_len), Rational(0));
    masses[static_cast<std::size_t>(short_len - 1)] = ratio(1, deadline);
    masses.back() = 1 - ratio(1, deadline);
    const LengthCdf f = from_masses(masses);
    for (long j = 0; j < size; ++j) inst.players.push_back(truthful(f));
  }
  inst.label = "posu_groups D=" + std::to_string(deadline) + " cap=" + std::to_string(group_cap);
  return inst;
}

Instance gen_short_long(int players, int t) {
  require(players >= 1 && t >= 1 && players % t == 0, "t must divide n");
  Instance inst;
  inst.deadline = players;
  const int shorts = players / t;
  for (int i = 0; i < players; ++i) {
    inst.players.push_back(truthful(i < shorts ? uniform(1, 2 * t) : uniform(1, players)));
  }
  inst.label = "short_long n=" + std::to_string(players) + " t=" + std::to_string(t);
  return inst;
}

Instance gen_oblivious_lb(int players) {
  require(players >= 2 && is_power_of_two(players), "n must be a power of two >= 2");
  std::vector<Rational> masses(static_cast<std::size_t>(players), Rational(0));
  for (int len = 2; len <= players; len *= 2) {
    masses[static_cast<std::size_t>(len - 1)] = ratio(len, 2L * players);
  }
  masses.back() += ratio(1, players);
  Instance inst = gen_identical(from_masses(masses), players, players);
  inst.label = "oblivious_lb n=" + std::to_string(players) + " residual=1/n@n";
  return inst;
}

Instance gen_complete_lb(int players) {
  require(players >= 2, "n must be >= 2");
  const int d = players * players;
  std::vector<Rational> masses(static_cast<std::size_t>(d), ratio(1, 2L * d));
  masses[static_cast<std::size_t>(players - 1)] += ratio(1, 2);
  Instance inst = gen_identical(from_masses(masses), players, d);
  inst.label = "complete_lb n=" + std::to_string(players);
  return inst;
}

Instance gen_canonical_gap(int k, int players, int deadline) {
  require(k >= 1 && players >= 1 && deadline >= players && deadline % players == 0,
          "need k >= 1 and n | D");
  const int unit = deadline / players;
  std::vector<Rational> values(static_cast<std::size_t>(deadline));
  for (int t = 1; t <= deadline; ++t) {
    Rational v = t <= unit ? ratio(1, k) : min(Rational(1), ratio(t, static_cast<long>(unit) * k));
    values[static_cast<std::size_t>(t - 1)] = v;
  }
  Instance inst = gen_identical(LengthCdf::validate(std::move(values)), players, deadline);
  inst.label = "canonical_gap k=" + std::to_string(k) + " n=" + std::to_string(players) +
               " D=" + std::to_string(deadline) + " linear";
  return inst;
}

Instance gen_identical(const LengthCdf& f, int players, int deadline) {
  require(players >= 1 && deadline >= 1, "need n >= 1 and D >= 1");
  Instance inst;
  inst.deadline = deadline;
  for (int i = 0; i < players; ++i) inst.players.push_back(truthful(f));
  inst.label = "identical n=" + std::to_string(players) + " D=" + std::to_string(deadline);
  return inst;
}

Instance gen_near_deterministic(int players, int deadline, std::uint64_t seed) {
  require(players >= 1 && deadline >= 1, "need n >= 1 and D >= 1");
  SeededSource rng(seed);
  const int max_base = std::max(1, 2 * deadline / players);
  const Rational qs[] = {ratio(1, 4), ratio(1, 2), ratio(3, 4)};
  Instance inst;
  inst.deadline = deadline;
  for (int i = 0; i < players; ++i) {
    const int b = draw_between(rng, 1, max_base);
    const Rational& q = qs[rng.uniform_choice(3)];
    std::vector<Rational> masses(static_cast<std::size_t>(2 * b), Rational(0));
    masses[static_cast<std::size_t>(b - 1)] = q;
    masses.back() += 1 - q;
    inst.players.push_back(Player{from_masses(masses), QualitativeReport{b}});
  }
  inst.label = "near_deterministic n=" + std::to_string(players) + " D=" +
               std::to_string(deadline) + " seed=" + std::to_string(seed);
  return inst;
}

Instance gen_random(std::uint64_t seed, const RandomInstanceParams& params) {
  require(params.min_players >= 1 && params.min_players <= params.max_players,
          "bad player range");
  require(params.min_deadline >= 1 && params.min_deadline <= params.max_deadline,
          "bad deadline range");
  require(params.max_length >= 1 && params.max_support >= 1, "bad length parameters");
  SeededSource rng(seed);
  Instance inst;
  const int n = draw_between(rng, params.min_players, params.max_players);
  inst.deadline = draw_between(rng, params.min_deadline, params.max_deadline);
  if (params.identical) {
    const LengthCdf f = random_cdf(rng, params);
    for (int i = 0; i < n; ++i) inst.players.push_back(truthful(f));
  } else {
    for (int i = 0; i < n; ++i) inst.players.push_back(truthful(random_cdf(rng, params)));
  }
  inst.label = "random seed=" + std::to_string(seed);
  return inst;
}

std::vector<Instance> exact_suite() {
  std::vector<Instance> suite;
  suite.push_back(gen_identical(LengthCdf::point_mass(2), 4, 8));
  suite.push_back(gen_identical(from_masses({0, ratio(1, 2), 0, ratio(1, 2)}), 4, 8));
  suite.push_back(gen_identical(from_masses({ratio(1, 2), 0, ratio(1, 4)}), 3, 5));
  {
    Instance mixed;
    mixed.deadline = 5;
    for (int l : {2, 3, 4}) mixed.players.push_back(truthful(LengthCdf::point_mass(l)));
    mixed.label = "deterministic (2,3,4) D=5";
    suite.push_back(mixed);
  }
  {
    Instance skew;
    skew.deadline = 6;
    skew.players.push_back(truthful(from_masses({ratio(1, 3), 0, 0, ratio(2, 3)})));
    skew.players.push_back(truthful(from_masses({0, ratio(1, 2), 0, 0, ratio(1, 4)})));
    skew.players.push_back(truthful(LengthCdf::point_mass(3)));
    skew.label = "skewed mixtures D=6";
    suite.push_back(skew);
  }
  RandomInstanceParams params;
  params.max_players = 4;
  params.max_deadline = 12;
  params.min_deadline = 2;
  for (std::uint64_t seed = 1; seed <= 11; ++seed) {
    Instance inst = gen_random(seed, params);
    inst.label = "suite seed=" + std::to_string(seed);
    suite.push_back(std::move(inst));
  }
  for (Instance& inst : suite) inst.label = "exact_suite: " + inst.label;
  return suite;
}

std::vector<Instance> identical_suite() {
  std::vector<Instance> suite;
  RandomInstanceParams params;
  params.max_players = 3;
  params.max_deadline = 6;
  params.max_length = 6;
  params.identical = true;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) suite.push_back(gen_random(seed, params));
  // Exhaustive over n, D for a few fixed shapes.
  const std::vector<LengthCdf> shapes{
      LengthCdf::point_mass(2),
      from_masses({ratio(1, 2), ratio(1, 2)}),
      from_masses({ratio(1, 3), 0, ratio(1, 3)}),
      from_masses({ratio(1, 4), 0, 0, 0, ratio(1, 2), ratio(1, 4)}),
      from_masses({0, ratio(1, 2), ratio(1, 4)}),
  };
  for (const LengthCdf& f : shapes) {
    for (int n = 1; n <= 3; ++n) {
      for (int d = 1; d <= 6; ++d) suite.push_back(gen_identical(f, n, d));
    }
  }
  return suite;
}

}  // namespace sscd
