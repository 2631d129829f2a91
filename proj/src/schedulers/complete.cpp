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

// Complete schedulers: the round-based lottery with expectation one, and the
// two-phase preemptive scheduler whose phase-one lotteries come from backward
// induction under truthful reports.

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "schedulers/session_base.hpp"

namespace sscd::internal {
namespace {

// --- complete lottery --------------------------------------------------------

struct CompleteLotteryPlan {
  int deadline;
  std::vector<LengthCdf> cdfs;
};

// argmax over 1 <= t <= budget of (F(c + t) - F(c)) / t, smallest t on ties.
int best_rate_length(const LengthCdf& f, int progress, int budget) {
  int best_t = 1;
  Rational best = -1;
  const Rational& base = f.at(progress);
  for (int t = 1; t <= budget; ++t) {
    const Rational rate = (f.at(progress + t) - base) / t;
    if (rate > best) {
      best = rate;
      best_t = t;
    }
  }
  return best_t;
}

class CompleteLotterySession : public SessionBase {
 public:
  explicit CompleteLotterySession(std::shared_ptr<const CompleteLotteryPlan> plan)
      : SessionBase(plan->deadline),
        plan_(std::move(plan)),
        order_(static_cast<int>(plan_->cdfs.size())) {}

 protected:
  Directive decide(RandomSource& rng) override {
    for (;;) {
      if (stage_ == Stage::kPick) {
        if (order_.empty()) return Halt{};
        const int players_left = static_cast<int>(order_.remaining());
        current_ = order_.draw(rng);
        progress_ = 0;
        // Abort only once the others could still use every remaining step.
        if (remaining() >= players_left) {
          stage_ = Stage::kPreliminary;
          return Run{current_, remaining() - (players_left - 1)};
        }
        stage_ = Stage::kLottery;
      }
      if (stage_ == Stage::kLottery) {
        const LengthCdf& f = plan_->cdfs[static_cast<std::size_t>(current_)];
        const int t = best_rate_length(f, progress_, remaining());
        if (rng.coin(Rational(1, t))) {
          stage_ = Stage::kLotteryRun;
          return Run{current_, t};
        }
        stage_ = Stage::kPick;
        continue;
      }
      // kPreliminary / kLotteryRun are resolved by observe().
      return Halt{};
    }
  }

  void on_finished(int, int) override { stage_ = Stage::kPick; }

  void on_exhausted(int, int allotment) override {
    progress_ += allotment;
    stage_ = stage_ == Stage::kPreliminary ? Stage::kLottery : Stage::kPick;
  }

 private:
  enum class Stage { kPick, kPreliminary, kLottery, kLotteryRun };
  std::shared_ptr<const CompleteLotteryPlan> plan_;
  LazyOrder order_;
  Stage stage_ = Stage::kPick;
  int current_ = -1;
  int progress_ = 0;
};

// --- two-phase backward-induction scheduler -----------------------------------

// Backward induction for one phase-one order. Entry (i, j, k) holds the
// lottery length chosen for the i-th player of the order when j steps have
// elapsed and k steps are committed to phase two by earlier unfinished players,
// plus the resulting distribution of steps left when phase one ends.
//
// A player that leaves phase one unfinished commits its worst-case remaining
// need under its reported distribution (capped at D); in phase two it finishes
// iff its actual need fits in L - k.
class InductionTable {
 public:
  InductionTable(std::vector<int> order, const std::vector<LengthCdf>& cdfs, int deadline)
      : order_(std::move(order)), cdfs_(cdfs), deadline_(deadline) {}

  int choice(int i, int elapsed, int committed) { return entry(i, elapsed, committed).choice; }

  int need_bound(int player, int progress) const {
    const Length top = cdfs_[static_cast<std::size_t>(player)].support_max();
    if (top == kNeverFinishes || top <= progress) return deadline_;
    return std::min(deadline_, top - progress);
  }

  int commit(int committed, int player, int progress) const {
    return std::min(deadline_, committed + need_bound(player, progress));
  }

  int lottery_expectation(int i, int elapsed) const {
    const int players_left = static_cast<int>(order_.size()) - i;
    return (deadline_ - elapsed) / players_left;
  }

 private:
  struct Entry {
    int choice = 0;
    std::vector<Rational> left;  // left[L] = Pr[L steps remain after phase one]
  };

  // Pr[remaining need <= L - k | progress], summed against a distribution of L.
  Rational phase_two(int player, int progress, int committed,
                     const std::vector<Rational>& left) const {
    const LengthCdf& f = cdfs_[static_cast<std::size_t>(player)];
    const Rational survive = 1 - f.at(progress);
    if (sgn(survive) <= 0) return 0;
    Rational total = 0;
    for (int l = committed + 1; l <= deadline_; ++l) {
      if (sgn(left[static_cast<std::size_t>(l)]) == 0) continue;
      total += left[static_cast<std::size_t>(l)] *
               ((f.at(progress + l - committed) - f.at(progress)) / survive);
    }
    return total;
  }

  const Entry& entry(int i, int elapsed, int committed) {
    const auto key = std::make_tuple(i, elapsed, committed);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    Entry e;
    e.left.assign(static_cast<std::size_t>(deadline_) + 1, Rational(0));
    const int m = static_cast<int>(order_.size());
    if (i == m) {
      e.left[static_cast<std::size_t>(deadline_ - elapsed)] = 1;
      return memo_.emplace(key, std::move(e)).first->second;
    }

    const int p = order_[static_cast<std::size_t>(i)];
    const LengthCdf& f = cdfs_[static_cast<std::size_t>(p)];
    const int budget = deadline_ - elapsed;
    const int expectation = lottery_expectation(i, elapsed);
    // Copies: recursive calls may rehash memo_.
    const std::vector<Rational> lose_left = entry(i + 1, elapsed, commit(committed, p, 0)).left;
    const Rational lose_value = phase_two(p, 0, committed, lose_left);

    if (expectation == 0) {
      e.left = lose_left;
      return memo_.emplace(key, std::move(e)).first->second;
    }

    int best_t = 1;
    Rational best = -1;
    for (int t = 1; t <= budget; ++t) {
      const Rational win = min(Rational(1), ratio(expectation, t));
      Rational win_value = f.at(t);
      const Rational miss = 1 - f.at(t);
      if (sgn(miss) > 0) {
        const std::vector<Rational> after =
            entry(i + 1, elapsed + t, commit(committed, p, t)).left;
        win_value += miss * phase_two(p, t, committed, after);
      }
      const Rational value = win * win_value + (1 - win) * lose_value;
      if (value > best) {
        best = value;
        best_t = t;
      }
    }

    e.choice = best_t;
    const Rational win = min(Rational(1), ratio(expectation, best_t));
    for (int s = 1; s <= best_t; ++s) {
      const Rational mass = f.mass(s);
      if (sgn(mass) == 0) continue;
      const std::vector<Rational> next = entry(i + 1, elapsed + s, committed).left;
      for (std::size_t l = 0; l < next.size(); ++l) e.left[l] += win * mass * next[l];
    }
    const Rational miss = 1 - f.at(best_t);
    if (sgn(miss) > 0) {
      const std::vector<Rational> next =
          entry(i + 1, elapsed + best_t, commit(committed, p, best_t)).left;
      for (std::size_t l = 0; l < next.size(); ++l) e.left[l] += win * miss * next[l];
    }
    if (win < 1) {
      for (std::size_t l = 0; l < lose_left.size(); ++l) e.left[l] += (1 - win) * lose_left[l];
    }
    return memo_.emplace(key, std::move(e)).first->second;
  }

  std::vector<int> order_;
  const std::vector<LengthCdf>& cdfs_;
  int deadline_;
  std::map<std::tuple<int, int, int>, Entry> memo_;
};

struct NashDpPlan {
  int deadline;
  std::vector<LengthCdf> cdfs;
  // Tables are filled lazily and shared by every session of this scheduler.
  mutable std::mutex mutex;
  mutable std::map<std::vector<int>, std::unique_ptr<InductionTable>> tables;

  NashDpPlan(int d, std::vector<LengthCdf> c) : deadline(d), cdfs(std::move(c)) {}
  NashDpPlan(NashDpPlan&& other) noexcept : deadline(other.deadline), cdfs(std::move(other.cdfs)) {}

  InductionTable& table(const std::vector<int>& order) const {
    auto& slot = tables[order];
    if (!slot) slot = std::make_unique<InductionTable>(order, cdfs, deadline);
    return *slot;
  }
};

class NashDpSession : public SessionBase {
 public:
  explicit NashDpSession(std::shared_ptr<const NashDpPlan> plan)
      : SessionBase(plan->deadline),
        plan_(std::move(plan)),
        pool_(static_cast<int>(plan_->cdfs.size())),
        finished_(plan_->cdfs.size(), false) {}

 protected:
  Directive decide(RandomSource& rng) override {
    if (stage_ == Stage::kOpening) {
      stage_ = Stage::kPhaseOne;
      if (rng.coin(Rational(1, 2))) {
        running_ = pool_.draw(rng);
        return Run{running_, remaining()};
      }
    }
    if (order_.empty() && !pool_.empty()) {
      while (!pool_.empty()) order_.push_back(pool_.draw(rng));
    }
    if (stage_ == Stage::kPhaseOne) {
      std::lock_guard<std::mutex> lock(plan_->mutex);
      InductionTable& table = plan_->table(order_);
      while (pos_ < order_.size()) {
        const int i = static_cast<int>(pos_++);
        const int p = order_[static_cast<std::size_t>(i)];
        const int t = table.choice(i, used(), committed_);
        const int expectation = table.lottery_expectation(i, used());
        if (expectation > 0 && rng.coin(min(Rational(1), ratio(expectation, t)))) {
          running_ = p;
          pending_commit_ = table.commit(committed_, p, t);
          return Run{p, t};
        }
        committed_ = table.commit(committed_, p, 0);
      }
      stage_ = Stage::kPhaseTwo;
      pos_ = 0;
    }
    while (pos_ < order_.size()) {
      const int p = order_[pos_++];
      if (!finished_[static_cast<std::size_t>(p)]) return Run{p, remaining()};
    }
    return Halt{};
  }

  void on_finished(int player, int) override { finished_[static_cast<std::size_t>(player)] = true; }
  void on_exhausted(int, int) override {
    if (stage_ == Stage::kPhaseOne) committed_ = pending_commit_;
  }

 private:
  enum class Stage { kOpening, kPhaseOne, kPhaseTwo };
  std::shared_ptr<const NashDpPlan> plan_;
  LazyOrder pool_;
  std::vector<int> order_;
  std::vector<bool> finished_;
  Stage stage_ = Stage::kOpening;
  std::size_t pos_ = 0;
  int committed_ = 0;
  int pending_commit_ = 0;
  int running_ = -1;
};

}  // namespace

std::unique_ptr<Scheduler> make_complete_lottery(const Instance& instance) {
  if (instance.size() < 3) throw TooFewPlayers("complete_lottery needs at least 3 players");
  return make_planned<CompleteLotterySession>(
      SchedulerKind::kCompleteLottery,
      CompleteLotteryPlan{instance.deadline, reported_cdfs(instance)});
}

std::unique_ptr<Scheduler> make_complete_nash_dp(const Instance& instance,
                                                 const SchedulerParams& params) {
  const std::uint64_t d = static_cast<std::uint64_t>(instance.deadline);
  const std::uint64_t cells = static_cast<std::uint64_t>(instance.size()) * d * d * d;
  if (cells > params.table_limit) {
    throw TableLimitExceeded("induction table needs " + std::to_string(cells) +
                             " cells, limit " + std::to_string(params.table_limit));
  }
  return make_planned<NashDpSession>(SchedulerKind::kCompleteNashDp,
                                     NashDpPlan(instance.deadline, reported_cdfs(instance)));
}

}  // namespace sscd::internal
