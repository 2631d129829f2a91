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


#include <cmath>
#include <map>

#include "doctest.h"
#include "support.hpp"

namespace sscd {
namespace {

using testing::cdf;
using testing::deterministic;
using testing::exact;
using testing::identical;
using testing::probs;
using testing::quantitative;
using testing::q;

TEST_CASE("registry: twelve kinds, names round-trip, capability flags") {
  CHECK(all_scheduler_kinds().size() == 12);
  for (SchedulerKind k : all_scheduler_kinds()) CHECK(parse_scheduler_kind(to_string(k)) == k);
  CHECK_THROWS(parse_scheduler_kind("fastest_first"));
  const Capabilities v = capabilities_of(SchedulerKind::kForgivingVirtualLength);
  CHECK(v.preemptive());
  CHECK(v.deterministic);
  CHECK(v.complete);
  for (SchedulerKind k : {SchedulerKind::kTrivialOblivious, SchedulerKind::kTimeoutOblivious,
                          SchedulerKind::kRandomThresholdOblivious}) {
    CHECK(capabilities_of(k).oblivious);
  }
  CHECK(capabilities_of(SchedulerKind::kCanonical).adaptivity == Adaptivity::kNonadaptive);
  CHECK(capabilities_of(SchedulerKind::kFairShareLottery).adaptivity == Adaptivity::kNonadaptive);
  CHECK(capabilities_of(SchedulerKind::kCompleteNashDp).preemptive());
  CHECK(!capabilities_of(SchedulerKind::kShortestFirst).oblivious);
}

TEST_CASE("shortest_first examples") {
  CHECK(probs(exact(SchedulerKind::kShortestFirst, deterministic({2, 3, 4}, 5))) ==
        std::vector<Rational>{1, 1, 0});
  const Instance swapped = deterministic({3, 2}, 5);
  auto s = build_scheduler({SchedulerKind::kShortestFirst, {}}, swapped);
  auto session = s->start();
  SeededSource rng(0);
  const std::vector<Length> lengths{3, 2};
  const ExecutionTrace t = run_once(*session, s->capabilities(), swapped, lengths, rng);
  CHECK(t.events[1].finished_at == 2);
  CHECK(t.events[0].finished_at == 5);
  CHECK(probs(exact(SchedulerKind::kShortestFirst, deterministic({3}, 10, {2})))[0] == 0);
}

TEST_CASE("trivial_oblivious examples") {
  const EvalResult r = exact(SchedulerKind::kTrivialOblivious, deterministic({2, 4}, 4));
  CHECK(probs(r)[0] == q("1/2"));
  CHECK(probs(r)[1] == q("1/2"));
  CHECK(r.exact->welfare == 1);
  CHECK(exact(SchedulerKind::kTrivialOblivious, identical(LengthCdf::point_mass(2), 4, 8))
            .exact->welfare == 4);
  // Half the jobs at 2D/n, half at D: fewer than two finish on average.
  for (int n : {8}) {
    const int d = 2 * n;
    std::vector<int> lengths;
    for (int i = 0; i < n; ++i) lengths.push_back(i < n / 2 ? 2 * d / n : d);
    CHECK(exact(SchedulerKind::kTrivialOblivious, deterministic(lengths, d)).exact->welfare < 2);
  }
}

TEST_CASE("timeout_oblivious examples") {
  // Every job starts with probability at least 1/sqrt(n).
  const Instance inst = identical(cdf({"0", "0", "0", "1/2", "1/2", "1"}), 4, 4);
  const EvalResult r = exact(SchedulerKind::kTimeoutOblivious, inst);
  for (const Rational& p : r.exact->start_prob) CHECK(p >= q("1/2"));
  SchedulerParams params;
  params.timeout = 4;
  auto s = build_scheduler({SchedulerKind::kTimeoutOblivious, params},
                           deterministic({4, 4, 4, 4}, 8));
  std::map<int, Rational> welfare;
  enumerate_branches(*s, deterministic({4, 4, 4, 4}, 8),
                     [&](const Rational& w, const ExecutionTrace& t) { welfare[t.welfare()] += w; });
  CHECK(welfare.size() == 1);
  CHECK(welfare.begin()->first == 2);
  // n = 1 with a cap: same as trivial_oblivious cut at T.
  params.timeout = 3;
  CHECK(probs(exact(SchedulerKind::kTimeoutOblivious, deterministic({4}, 8), params))[0] == 0);
  CHECK(probs(exact(SchedulerKind::kTimeoutOblivious, deterministic({3}, 8), params))[0] == 1);
}

TEST_CASE("random_threshold_oblivious with n=2, D=4 matches trivial_oblivious") {
  const Instance inst = identical(cdf({"1/4", "1/2", "1/2", "3/4"}), 2, 4);
  CHECK(probs(exact(SchedulerKind::kRandomThresholdOblivious, inst)) ==
        probs(exact(SchedulerKind::kTrivialOblivious, inst)));
}

TEST_CASE("canonical examples") {
  CHECK(exact(SchedulerKind::kCanonical, identical(LengthCdf::point_mass(2), 4, 8))
            .exact->welfare == 4);
  const LengthCdf f = cdf({"0", "1/2", "1/2", "1"});
  CHECK(canonical_length(f, 4, 8) == 2);
  CHECK(exact(SchedulerKind::kCanonical, identical(f, 4, 8)).exact->welfare == 2);
  CHECK(canonical_welfare(f, 4, 8) == 2);
  Instance mixed = identical(f, 2, 4);
  mixed.players[1].report = QuantitativeReport{LengthCdf::point_mass(2)};
  CHECK_THROWS_AS(build_scheduler({SchedulerKind::kCanonical, {}}, mixed), NotIdenticalInstance);
}

TEST_CASE("fair_share_lottery: selection probabilities and split") {
  SchedulerParams bounded;
  bounded.fair_share_mode = FairShareMode::kBoundedM;
  bounded.max_length = 4;
  const FairSharePlan plan = plan_fair_share(identical(LengthCdf::point_mass(4), 2, 8), bounded);
  CHECK(plan.unit == 2);
  CHECK(plan.probabilities == std::vector<Rational>{q("1/2"), q("1/2")});
  Rational total = 0;
  for (const auto& seg : plan.segments) {
    total += seg.weight;
    int granted = 0;
    for (int p : seg.selected) granted += plan.lengths[static_cast<std::size_t>(p)];
    CHECK(granted <= 8);
  }
  CHECK(total == 1);

  // General mode, single player with t = D: always runs (no split for n = 1).
  const LengthCdf f = cdf({"0", "1/3", "1/3", "2/3"});
  CHECK(probs(exact(SchedulerKind::kFairShareLottery, identical(f, 1, 4)))[0] == q("2/3"));

  // Selection probability per player is min(1, u / t) before the split.
  const Instance mixed = deterministic({3, 2, 5, 1}, 6);
  Instance prefs = mixed;
  for (int i = 0; i < prefs.size(); ++i) {
    const int t = std::get<QualitativeReport>(prefs.players[static_cast<std::size_t>(i)].report).estimate;
    prefs.players[static_cast<std::size_t>(i)].report = PreferenceReport{t};
  }
  const FairSharePlan general = plan_fair_share(prefs, {});
  std::vector<Rational> selected(4, 0);
  for (const auto& seg : general.segments) {
    for (int p : seg.selected) selected[static_cast<std::size_t>(p)] += seg.weight;
    CHECK(seg.bundles.size() <= 2);
  }
  CHECK(selected == general.probabilities);
  const EvalResult r = exact(SchedulerKind::kFairShareLottery, prefs);
  for (int i = 0; i < 4; ++i) {
    CHECK(probs(r)[static_cast<std::size_t>(i)] * 2 >= general.probabilities[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("fair_share_lottery: bounded mode rejects lengths above M") {
  SchedulerParams bounded;
  bounded.fair_share_mode = FairShareMode::kBoundedM;
  bounded.max_length = 3;
  Instance inst = deterministic({4}, 8);
  inst.players[0].report = PreferenceReport{4};
  CHECK_THROWS_AS(build_scheduler({SchedulerKind::kFairShareLottery, bounded}, inst),
                  InvalidReport);
}

TEST_CASE("adaptive_fair_share examples") {
  CHECK(probs(exact(SchedulerKind::kAdaptiveFairShare, identical(LengthCdf::point_mass(5), 1, 5)))[0] >=
        q("1/2"));
  const EvalResult r =
      exact(SchedulerKind::kAdaptiveFairShare, identical(LengthCdf::point_mass(2), 3, 6));
  for (const Rational& p : probs(r)) CHECK(p == 1);
}

TEST_CASE("complete_lottery examples") {
  CHECK_THROWS_AS(build_scheduler({SchedulerKind::kCompleteLottery, {}},
                                  identical(LengthCdf::point_mass(1), 2, 3)),
                  TooFewPlayers);
  CHECK(exact(SchedulerKind::kCompleteLottery, identical(LengthCdf::point_mass(1), 3, 3))
            .exact->welfare == 3);
  // Lengths summing to exactly D always all finish.
  const Instance inst = quantitative({1, 2, 3}, 6);
  std::uint64_t leaves = 0;
  auto s = build_scheduler({SchedulerKind::kCompleteLottery, {}}, inst);
  enumerate_branches(*s, inst, [&](const Rational&, const ExecutionTrace& t) {
    ++leaves;
    CHECK(t.welfare() == 3);
  });
  CHECK(leaves > 1);
}

TEST_CASE("complete_nash_dp examples") {
  CHECK(probs(exact(SchedulerKind::kCompleteNashDp, identical(LengthCdf::point_mass(4), 1, 4)))[0] ==
        1);
  const Instance inst = quantitative({2, 1, 2}, 5);
  auto s = build_scheduler({SchedulerKind::kCompleteNashDp, {}}, inst);
  enumerate_branches(*s, inst,
                     [&](const Rational&, const ExecutionTrace& t) { CHECK(t.welfare() == 3); });
  SchedulerParams tight;
  tight.table_limit = 100;
  CHECK_THROWS_AS(build_scheduler({SchedulerKind::kCompleteNashDp, tight},
                                  identical(LengthCdf::point_mass(1), 2, 5)),
                  TableLimitExceeded);
}

TEST_CASE("near_deterministic_threshold") {
  // Equal truthful reports, lengths b or 2b: every job eligible.
  const int b = 2;
  const LengthCdf f = cdf({"0", "1/2", "1/2", "1"});
  Instance inst = identical(f, 4, 16);
  for (auto& p : inst.players) p.report = QualitativeReport{b};
  const std::vector<int> reports{b, b, b, b};
  CHECK(near_deterministic_threshold(reports, 16) >= 2 * b);
  CHECK(exact(SchedulerKind::kNearDeterministicThreshold, inst).exact->welfare >= 2);

  // All deterministic jobs short enough: same welfare as shortest-first.
  const Instance det = deterministic({1, 1, 2, 1}, 5);
  CHECK(exact(SchedulerKind::kNearDeterministicThreshold, det).exact->welfare ==
        exact(SchedulerKind::kShortestFirst, det).exact->welfare);
}

TEST_CASE("forgiving_lottery closed form on a small grid") {
  SchedulerParams params;
  params.unit = 2;
  const int l = 4;
  for (int r = 2; r <= 7; ++r) {
    CAPTURE(r);
    const Instance inst = deterministic({l}, 40, {r});
    CHECK(probs(exact(SchedulerKind::kForgivingLottery, inst, params))[0] ==
          ratio(2, l + std::abs(r - l)));
  }
  CHECK(forgiveness_probability(4, 0, 2) == q("4/6"));
  CHECK(forgiveness_probability(4, 1, 2) == q("6/8"));
  // With u > t the first extensions are free.
  CHECK(forgiveness_probability(2, 0, 5) == 1);
}

TEST_CASE("forgiving_virtual_length: virtual lengths at completion") {
  for (auto [r, l] : {std::pair{5, 8}, std::pair{8, 5}}) {
    VirtualLengthSession session({r}, 30);
    const Instance inst = deterministic({l}, 30, {r});
    SeededSource rng(0);
    const std::vector<Length> lengths{l};
    Capabilities caps = capabilities_of(SchedulerKind::kForgivingVirtualLength);
    const ExecutionTrace t = run_once(session, caps, inst, lengths, rng);
    CHECK(t.events[0].finished());
    CHECK(session.virtual_lengths()[0] == l + std::abs(r - l));
  }
  // Solo player, D >= 2l: always finishes.
  for (int r = 1; r <= 8; ++r) {
    CHECK(probs(exact(SchedulerKind::kForgivingVirtualLength, deterministic({4}, 8, {r})))[0] == 1);
  }
}

}  // namespace
}  // namespace sscd
