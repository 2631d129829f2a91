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


#include <set>

#include "doctest.h"
#include "sscd/instances.hpp"
#include "support.hpp"

namespace sscd {
namespace {

using testing::q;

TEST_CASE("gen_posu_groups structure") {
  const Instance inst = gen_posu_groups(4, 16);
  inst.validate();
  CHECK(inst.size() == 4 + 3 * 16);
  for (int i = 0; i < 4; ++i) CHECK(inst.players[static_cast<std::size_t>(i)].true_cdf == LengthCdf::point_mass(1));
  const LengthCdf& g1 = inst.players[4].true_cdf;
  CHECK(g1.mass(1) == q("1/4"));
  CHECK(g1.mass(2) == q("3/4"));
  const LengthCdf& g3 = inst.players.back().true_cdf;
  CHECK(g3.mass(4) == q("1/4"));
  CHECK(g3.mass(8) == q("3/4"));
  const Instance small = gen_posu_groups(2, 1000);
  small.validate();
  // D * (2D)^i uncapped: 8, 32 for i = 1, 2.
  CHECK(small.size() == 2 + 8 + 32);
  CHECK_THROWS_AS(gen_posu_groups(6, 10), InvalidInstance);
}

TEST_CASE("gen_short_long structure") {
  const Instance inst = gen_short_long(16, 4);
  inst.validate();
  CHECK(inst.deadline == 16);
  CHECK(inst.players[0].true_cdf.max_length() == 8);
  CHECK(inst.players[3].true_cdf.mass(8) == q("1/8"));
  CHECK(inst.players[4].true_cdf.max_length() == 16);
  const Instance all_short = gen_short_long(4, 4);
  CHECK(all_short.size() == 4);
  CHECK(all_short.players[0].true_cdf.max_length() == 8);
  CHECK_THROWS_AS(gen_short_long(10, 4), InvalidInstance);
}

TEST_CASE("gen_oblivious_lb sums to one with the leftover at n") {
  for (int n : {2, 4, 16}) {
    const Instance inst = gen_oblivious_lb(n);
    inst.validate();
    const LengthCdf& f = inst.players[0].true_cdf;
    CHECK(f.at(n) == 1);
    CHECK(f.mass(n) == ratio(n, 2L * n) + ratio(1, n));
    if (n >= 4) CHECK(f.mass(2) == ratio(2, 2L * n));
  }
  CHECK(gen_oblivious_lb(2).players[0].true_cdf.mass(2) == 1);
}

TEST_CASE("gen_complete_lb CDF") {
  const Instance inst = gen_complete_lb(4);
  CHECK(inst.deadline == 16);
  const LengthCdf& f = inst.players[0].true_cdf;
  for (int t = 1; t <= 16; ++t) {
    CHECK(f.at(t) == (t < 4 ? ratio(t, 32) : ratio(1, 2) + ratio(t, 32)));
  }
  gen_complete_lb(2).validate();
}

TEST_CASE("gen_canonical_gap CDF") {
  const Instance inst = gen_canonical_gap(4, 2, 8);
  inst.validate();
  const LengthCdf& f = inst.players[0].true_cdf;
  CHECK(f.at(1) == q("1/4"));
  CHECK(f.at(4) == q("1/4"));
  CHECK(f.at(5) == q("5/16"));
  CHECK(f.at(8) == q("1/2"));
  CHECK(gen_canonical_gap(2, 4, 8).players[0].true_cdf.at(8) == 1);
  CHECK_THROWS_AS(gen_canonical_gap(3, 3, 8), InvalidInstance);
}

TEST_CASE("gen_near_deterministic: support {b, 2b}, report b, seed-determinism") {
  const Instance a = gen_near_deterministic(16, 64, 9);
  const Instance b = gen_near_deterministic(16, 64, 9);
  a.validate();
  for (std::size_t i = 0; i < a.players.size(); ++i) {
    const int base = std::get<QualitativeReport>(a.players[i].report).estimate;
    const LengthCdf& f = a.players[i].true_cdf;
    CHECK(f.mass(base) > 0);
    CHECK(f.mass(base) + f.mass(2 * base) == 1);
    CHECK(f == b.players[i].true_cdf);
  }
}

TEST_CASE("gen_random and suites validate and are deterministic") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance a = gen_random(seed);
    a.validate();
    const Instance b = gen_random(seed);
    CHECK(a.deadline == b.deadline);
    for (std::size_t i = 0; i < a.players.size(); ++i) CHECK(a.players[i].true_cdf == b.players[i].true_cdf);
  }
  for (const Instance& inst : exact_suite()) {
    inst.validate();
    CHECK(inst.size() <= 4);
    CHECK(inst.deadline <= 12);
    for (const Player& p : inst.players) {
      int support = 0;
      for (int t = 1; t <= p.true_cdf.max_length(); ++t) support += sgn(p.true_cdf.mass(t)) > 0;
      CHECK(support <= 3);
    }
  }
  for (const Instance& inst : identical_suite()) {
    inst.validate();
    CHECK(inst.size() <= 3);
    CHECK(inst.deadline <= 6);
  }
}

}  // namespace
}  // namespace sscd
