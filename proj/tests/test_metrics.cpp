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


#include <algorithm>
#include <functional>
#include <limits>
#include <set>

#include "doctest.h"
#include "sscd/instances.hpp"
#include "sscd/metrics.hpp"
#include "support.hpp"

namespace sscd {
namespace {

using testing::cdf;
using testing::deterministic;
using testing::exact;
using testing::identical;
using testing::q;

// Oracle: best subset by exhaustive search.
int subset_oracle(const std::vector<int>& lengths, int deadline) {
  const int n = static_cast<int>(lengths.size());
  int best = 0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    int sum = 0;
    int count = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) {
        sum += lengths[static_cast<std::size_t>(i)];
        ++count;
      }
    }
    if (sum <= deadline) best = std::max(best, count);
  }
  return best;
}

// Oracle: the set of expected values of every deterministic preemptive policy
// (including idling), built as explicit decision trees. Exponential; tiny
// instances only.
std::set<Rational> policy_values(const std::vector<LengthCdf>& f, std::vector<int> progress,
                                 std::vector<bool> done, int left) {
  if (left == 0) return {Rational(0)};
  std::set<Rational> out = policy_values(f, progress, done, left - 1);  // idle one step
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (done[i]) continue;
    const Rational survive = 1 - f[i].at(progress[i]);
    const Rational h = f[i].mass(progress[i] + 1) / survive;
    auto fin_done = done;
    fin_done[i] = true;
    auto cont = progress;
    ++cont[i];
    const std::set<Rational> a = sgn(h) > 0 ? policy_values(f, progress, fin_done, left - 1)
                                            : std::set<Rational>{Rational(0)};
    const std::set<Rational> b = h < 1 ? policy_values(f, cont, done, left - 1)
                                       : std::set<Rational>{Rational(0)};
    for (const Rational& x : a) {
      for (const Rational& y : b) out.insert(h * (1 + x) + (1 - h) * y);
    }
  }
  return out;
}

Rational policy_search(const Instance& inst) {
  std::vector<LengthCdf> f;
  for (const Player& p : inst.players) f.push_back(p.true_cdf);
  const auto values = policy_values(f, std::vector<int>(f.size(), 0),
                                    std::vector<bool>(f.size(), false), inst.deadline);
  return *values.rbegin();
}

TEST_CASE("fair_share examples") {
  CHECK(fair_share(LengthCdf::point_mass(2), 4, 8) == 1);
  CHECK(fair_share(LengthCdf::point_mass(4), 4, 8) == q("1/2"));
  const Instance lb = gen_complete_lb(4);
  CHECK(fair_share(lb.players[0].true_cdf, 4, 16) == q("5/8"));
  // Approaches 1/2 as n grows.
  const Instance big = gen_complete_lb(12);
  CHECK(fair_share(big.players[0].true_cdf, 12, 144) < q("11/20"));
  CHECK(fair_share(big.players[0].true_cdf, 12, 144) > q("1/2"));
}

TEST_CASE("fair_share is monotone in the distribution and in n") {
  const LengthCdf lo = cdf({"0", "1/4", "1/2"});
  const LengthCdf hi = cdf({"1/8", "1/2", "1/2"});
  for (int n = 1; n <= 4; ++n) {
    for (int d = 1; d <= 8; ++d) {
      CHECK(fair_share(hi, n, d) >= fair_share(lo, n, d));
      CHECK(fair_share(lo, n + 1, d) <= fair_share(lo, n, d));
    }
  }
}

TEST_CASE("fairness_ratio examples") {
  const Instance inst = identical(LengthCdf::point_mass(4), 2, 4);
  const FairnessReport r = fairness_ratio(exact(SchedulerKind::kTrivialOblivious, inst), inst);
  CHECK(r.fair_share[0] == q("1/2"));
  CHECK(*r.ratio_exact == 1);
  CHECK(!r.vacuous);

  const Instance hopeless = identical(cdf({"0", "0", "0"}), 2, 3);
  const FairnessReport v = fairness_ratio(exact(SchedulerKind::kTrivialOblivious, hopeless), hopeless);
  CHECK(v.vacuous);
  CHECK(v.ratio == std::numeric_limits<double>::infinity());
}

TEST_CASE("realized_optimal_welfare matches the subset oracle") {
  const std::vector<int> a{2, 3, 4};
  CHECK(realized_optimal_welfare(a, 5) == 2);
  const std::vector<int> b{6, 7};
  CHECK(realized_optimal_welfare(b, 5) == 0);
  // All multisets n <= 6, lengths <= 6, D <= 12.
  std::function<void(std::vector<int>&, int)> walk = [&](std::vector<int>& cur, int from) {
    for (int d = 1; d <= 12; ++d) {
      REQUIRE(realized_optimal_welfare(cur, d) == subset_oracle(cur, d));
    }
    if (cur.size() == 6) return;
    for (int l = from; l <= 6; ++l) {
      cur.push_back(l);
      walk(cur, l);
      cur.pop_back();
    }
  };
  std::vector<int> cur;
  walk(cur, 1);
}

TEST_CASE("exact_preemptive_optimum: deterministic instances equal the greedy count") {
  for (const auto& [lengths, d] : std::vector<std::pair<std::vector<int>, int>>{
           {{2, 3, 4}, 5}, {{1, 1, 1, 5}, 7}, {{3, 3}, 5}, {{4}, 3}}) {
    CHECK(exact_preemptive_optimum(deterministic(lengths, d)) == realized_optimal_welfare(lengths, d));
  }
}

TEST_CASE("exact_preemptive_optimum: n=2, D=2, f=[1/2,1]") {
  const Instance inst = identical(cdf({"1/2", "1"}), 2, 2);
  const Rational opt = exact_preemptive_optimum(inst);
  CHECK(opt == policy_search(inst));
  CHECK(opt == q("5/4"));
}

TEST_CASE("exact_preemptive_optimum agrees with policy search on tiny instances") {
  RandomInstanceParams p;
  p.max_players = 2;
  p.max_deadline = 4;
  p.max_length = 4;
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    const Instance inst = gen_random(seed, p);
    CAPTURE(seed);
    CHECK(exact_preemptive_optimum(inst) == policy_search(inst));
  }
  // Three players, heterogeneous.
  const Instance three = gen_random(7, {3, 3, 3, 3, 3, 2, 2, true, false, false});
  CHECK(exact_preemptive_optimum(three) == policy_search(three));
}

TEST_CASE("exact_preemptive_optimum bounds every scheduler and the canonical gap") {
  for (const Instance& inst : identical_suite()) {
    CAPTURE(inst.label);
    const Rational opt = exact_preemptive_optimum(inst);
    const LengthCdf& f = inst.players[0].true_cdf;
    const Rational canon = canonical_welfare(f, inst.size(), inst.deadline);
    CHECK(opt >= canon);
    CHECK(opt <= 3 * canon);
    for (SchedulerKind kind : {SchedulerKind::kCanonical, SchedulerKind::kTrivialOblivious,
                               SchedulerKind::kAdaptiveFairShare, SchedulerKind::kFairShareLottery,
                               SchedulerKind::kCompleteNashDp}) {
      CHECK(exact(kind, inst).exact->welfare <= opt);
    }
  }
}

TEST_CASE("exact_preemptive_optimum state limit") {
  OptimumLimits tiny;
  tiny.max_states = 3;
  CHECK_THROWS_AS(exact_preemptive_optimum(gen_complete_lb(3), tiny), StateLimitExceeded);
}

TEST_CASE("canonical_gap_ratio") {
  CHECK(canonical_gap_ratio(1, 4, 8) == 1);
  // Small instances agree with the policy-search oracle.
  for (int k : {2, 3}) {
    const Instance inst = gen_canonical_gap(k, 2, 4);
    const Rational canon = canonical_welfare(inst.players[0].true_cdf, 2, 4);
    CHECK(canonical_gap_ratio(k, 2, 4) == policy_search(inst) / canon);
  }
  // Frozen values at n = 4, D = 16. The ratio peaks near k = n and then falls:
  // with few players the optimum cannot exploit the short-job mass.
  CHECK(canonical_gap_ratio(2, 4, 16) == q("3609/2048"));
  CHECK(canonical_gap_ratio(5, 4, 16) == q("3547/2000"));
  CHECK(canonical_gap_ratio(10, 4, 16) == q("423377/256000"));
  CHECK(canonical_gap_ratio(20, 4, 16) == q("3287227/2048000"));
}

}  // namespace
}  // namespace sscd
