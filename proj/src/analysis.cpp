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


#include "sscd/analysis.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <stdexcept>

namespace sscd {

EvalResult evaluate_exact(const SchedulerSpec& spec, const Instance& instance,
                          std::uint64_t branch_limit) {
  auto scheduler = build_scheduler(spec, instance);
  EvalResult r = exact_evaluate(*scheduler, instance, branch_limit);
  r.label = instance.label;
  return r;
}

Report report_like(const Report& like, int value) {
  if (std::holds_alternative<QualitativeReport>(like)) return QualitativeReport{value};
  if (std::holds_alternative<PreferenceReport>(like)) return PreferenceReport{value};
  return QuantitativeReport{LengthCdf::point_mass(value)};
}

const Rational& PayoffCurve::at(int value) const {
  for (const PayoffPoint& p : points) {
    if (p.value == value) return p.payoff;
  }
  throw std::out_of_range("report " + std::to_string(value) + " not on the grid");
}

PayoffCurve payoff_curve(const SchedulerSpec& spec, const Instance& instance, int player,
                         std::span<const int> grid, std::uint64_t branch_limit) {
  PayoffCurve curve;
  curve.player = player;
  const Report& current = instance.players.at(static_cast<std::size_t>(player)).report;
  for (int r : grid) {
    Report report = report_like(current, r);
    const Instance variant = instance.with_report(player, report);
    const EvalResult result = evaluate_exact(spec, variant, branch_limit);
    curve.points.push_back(
        {r, std::move(report), result.exact->finish_prob[static_cast<std::size_t>(player)]});
  }
  return curve;
}

ErrorProperties check_error_properties(const PayoffCurve& curve, int true_length) {
  ErrorProperties out;
  const auto& pts = curve.points;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = 0; b < pts.size(); ++b) {
      const int ea = pts[a].value - true_length;
      const int eb = pts[b].value - true_length;
      if (ea > 0 && eb == -ea && pts[a].payoff != pts[b].payoff) {
        out.symmetric = false;
        out.witnesses.push_back(
            {"symmetric", pts[a].value, pts[b].value, pts[a].payoff, pts[b].payoff});
      }
      if (std::abs(ea) < std::abs(eb) && pts[a].payoff < pts[b].payoff) {
        out.monotone = false;
        out.witnesses.push_back(
            {"monotone", pts[a].value, pts[b].value, pts[a].payoff, pts[b].payoff});
      }
    }
  }
  return out;
}

BestResponse best_response_gap(const SchedulerSpec& spec, const Instance& instance, int player,
                               const Report& honest, std::span<const Report> grid,
                               std::uint64_t branch_limit) {
  const auto k = static_cast<std::size_t>(player);
  auto payoff = [&](const Report& r) {
    return evaluate_exact(spec, instance.with_report(player, r), branch_limit).exact->finish_prob[k];
  };
  BestResponse out;
  out.honest_payoff = payoff(honest);
  out.best_payoff = out.honest_payoff;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Rational p = grid[i] == honest ? out.honest_payoff : payoff(grid[i]);
    if (p > out.best_payoff || (grid[i] == honest && p == out.best_payoff)) {
      out.best_payoff = p;
      out.best_index = i;
    }
  }
  out.gap = out.best_payoff - out.honest_payoff;
  return out;
}

CompletenessReport completeness_check(const SchedulerSpec& spec, int max_n, int max_len,
                                      int min_deadline, int max_deadline,
                                      std::size_t max_witnesses) {
  CompletenessReport report;
  std::vector<int> lengths;
  std::function<void()> walk = [&]() {
    if (!lengths.empty()) {
      int total = 0;
      for (int l : lengths) total += l;
      for (int d = std::max(min_deadline, total); d <= max_deadline; ++d) {
        Instance inst;
        inst.deadline = d;
        for (int l : lengths) {
          const LengthCdf f = LengthCdf::point_mass(l);
          inst.players.push_back({f, truthful_report(spec.kind, f)});
        }
        std::unique_ptr<Scheduler> scheduler;
        try {
          scheduler = build_scheduler(spec, inst);
        } catch (const TooFewPlayers&) {
          ++report.skipped;
          continue;
        }
        ++report.instances;
        report.branches += enumerate_branches(
            *scheduler, inst, [&](const Rational& weight, const ExecutionTrace& trace) {
              std::vector<int> unfinished;
              for (std::size_t i = 0; i < trace.events.size(); ++i) {
                if (!trace.events[i].finished()) unfinished.push_back(static_cast<int>(i));
              }
              if (unfinished.empty()) return;
              ++report.violation_count;
              if (report.violations.size() < max_witnesses) {
                report.violations.push_back({lengths, d, weight, std::move(unfinished)});
              }
            });
      }
    }
    if (static_cast<int>(lengths.size()) == max_n) return;
    for (int l = 1; l <= max_len; ++l) {
      lengths.push_back(l);
      walk();
      lengths.pop_back();
    }
  };
  walk();
  return report;
}

ObliviousnessReport obliviousness_check(const SchedulerSpec& spec, const Instance& instance,
                                        std::span<const std::vector<Report>> profiles,
                                        std::uint64_t branch_limit) {
  ObliviousnessReport out;
  std::optional<ExactStats> first;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    Instance variant = instance;
    for (std::size_t p = 0; p < variant.players.size(); ++p) {
      variant.players[p].report = profiles[i].at(p);
    }
    const EvalResult r = evaluate_exact(spec, variant, branch_limit);
    if (!first) {
      first = r.exact;
      continue;
    }
    if (r.exact->finish_prob != first->finish_prob ||
        r.exact->start_prob != first->start_prob ||
        r.exact->welfare_second_moment != first->welfare_second_moment) {
      out.oblivious = false;
      out.witness_profile = static_cast<int>(i);
      return out;
    }
  }
  return out;
}

}  // namespace sscd
