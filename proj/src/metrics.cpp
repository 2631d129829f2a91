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


#include "sscd/metrics.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <unordered_map>

#include "sscd/instances.hpp"
#include "sscd/schedulers.hpp"

namespace sscd {

StateLimitExceeded::StateLimitExceeded(std::uint64_t reached)
    : Error("exact optimum needs more than " + std::to_string(reached) + " states"),
      reached_(reached) {}

Rational fair_share(const LengthCdf& f, int players, int deadline) {
  const int lo = (deadline + players - 1) / players;
  Rational best = 0;
  for (int t = std::max(1, lo); t <= deadline; ++t) {
    const Rational v = f.at(t) * deadline / (Rational(t) * players);
    if (v > best) best = v;
  }
  return min(best, Rational(1));
}

FairnessReport fairness_ratio(const EvalResult& result, const Instance& instance) {
  FairnessReport out;
  const int n = instance.size();
  out.achieved = result.finish_prob;
  if (result.exact) out.achieved_exact = result.exact->finish_prob;
  for (const Player& p : instance.players) {
    out.fair_share.push_back(fair_share(p.true_cdf, n, instance.deadline));
  }
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (sgn(out.fair_share[k]) == 0) continue;
    if (out.achieved_exact) {
      const Rational r = (*out.achieved_exact)[k] / out.fair_share[k];
      if (!out.ratio_exact || r < *out.ratio_exact) {
        out.ratio_exact = r;
        out.argmin = i;
      }
    } else {
      const double r = out.achieved[k] / to_double(out.fair_share[k]);
      if (out.argmin < 0 || r < out.ratio) {
        out.ratio = r;
        out.argmin = i;
      }
    }
  }
  if (out.argmin < 0) {
    out.vacuous = true;
    out.ratio = std::numeric_limits<double>::infinity();
  } else if (out.ratio_exact) {
    out.ratio = to_double(*out.ratio_exact);
  }
  return out;
}

int realized_optimal_welfare(std::span<const int> lengths, int deadline) {
  std::vector<int> sorted(lengths.begin(), lengths.end());
  std::sort(sorted.begin(), sorted.end());
  long used = 0;
  int count = 0;
  for (int l : sorted) {
    if (used + l > deadline) break;
    used += l;
    ++count;
  }
  return count;
}

namespace {

constexpr int kDone = -1;

class PreemptiveOptimum {
 public:
  PreemptiveOptimum(const Instance& instance, const OptimumLimits& limits)
      : limits_(limits) {
    // Group players by true distribution.
    for (const Player& p : instance.players) {
      auto it = std::find(cdfs_.begin(), cdfs_.end(), p.true_cdf);
      if (it == cdfs_.end()) {
        cdfs_.push_back(p.true_cdf);
        it = cdfs_.end() - 1;
      }
      group_of_.push_back(static_cast<int>(it - cdfs_.begin()));
    }
    // Order players so each group is contiguous.
    for (std::size_t g = 0; g < cdfs_.size(); ++g) {
      for (std::size_t i = 0; i < group_of_.size(); ++i) {
        if (group_of_[i] == static_cast<int>(g)) order_.push_back(static_cast<int>(i));
      }
    }
    start_.assign(order_.size(), 0);
    deadline_ = instance.deadline;
  }

  Rational solve() { return value(start_, deadline_); }

 private:
  const LengthCdf& cdf_at(std::size_t slot) const {
    return cdfs_[static_cast<std::size_t>(group_of_[static_cast<std::size_t>(order_[slot])])];
  }

  void canonicalize(std::vector<int>& state) const {
    std::size_t begin = 0;
    while (begin < state.size()) {
      std::size_t end = begin;
      const int g = group_of_[static_cast<std::size_t>(order_[begin])];
      while (end < state.size() && group_of_[static_cast<std::size_t>(order_[end])] == g) ++end;
      std::sort(state.begin() + static_cast<long>(begin), state.begin() + static_cast<long>(end));
      begin = end;
    }
  }

  std::string key(const std::vector<int>& state, int left) const {
    std::string k(reinterpret_cast<const char*>(state.data()), state.size() * sizeof(int));
    k.append(reinterpret_cast<const char*>(&left), sizeof(int));
    return k;
  }

  Rational value(const std::vector<int>& state, int left) {
    if (left == 0) return 0;
    const std::string k = key(state, left);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    if (memo_.size() >= limits_.max_states) throw StateLimitExceeded(memo_.size());

    Rational best = 0;
    for (std::size_t s = 0; s < state.size(); ++s) {
      const int c = state[s];
      if (c == kDone) continue;
      // Interchangeable players at equal progress give the same value.
      if (s > 0 && state[s - 1] == c &&
          group_of_[static_cast<std::size_t>(order_[s - 1])] ==
              group_of_[static_cast<std::size_t>(order_[s])]) {
        continue;
      }
      const LengthCdf& f = cdf_at(s);
      const Rational survive = 1 - f.at(c);
      // Cannot finish in the time left: running it is dominated.
      if (f.at(c + left) == f.at(c)) continue;
      const Rational hazard = f.mass(c + 1) / survive;
      Rational v = 0;
      if (sgn(hazard) > 0) {
        std::vector<int> next = state;
        next[s] = kDone;
        canonicalize(next);
        v += hazard * (1 + value(next, left - 1));
      }
      if (hazard < 1) {
        std::vector<int> next = state;
        next[s] = c + 1;
        canonicalize(next);
        v += (1 - hazard) * value(next, left - 1);
      }
      if (v > best) best = v;
    }
    memo_.emplace(k, best);
    return best;
  }

  OptimumLimits limits_;
  std::vector<LengthCdf> cdfs_;
  std::vector<int> group_of_;
  std::vector<int> order_;
  std::vector<int> start_;
  int deadline_ = 0;
  std::unordered_map<std::string, Rational> memo_;
};

}  // namespace

Rational exact_preemptive_optimum(const Instance& instance, const OptimumLimits& limits) {
  instance.validate();
  return PreemptiveOptimum(instance, limits).solve();
}

Rational canonical_gap_ratio(int k, int players, int deadline, const OptimumLimits& limits) {
  const Instance inst = gen_canonical_gap(k, players, deadline);
  const LengthCdf& f = inst.players.front().true_cdf;
  return exact_preemptive_optimum(inst, limits) / canonical_welfare(f, players, deadline);
}

}  // namespace sscd
