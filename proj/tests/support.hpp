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


#ifndef SSCD_TESTS_SUPPORT_HPP_
#define SSCD_TESTS_SUPPORT_HPP_

#include <initializer_list>
#include <string>
#include <vector>

#include "sscd/core.hpp"
#include "sscd/engine.hpp"
#include "sscd/rational.hpp"
#include "sscd/schedulers.hpp"

namespace sscd::testing {

inline Rational q(const char* text) { return parse_rational(text); }

inline LengthCdf cdf(std::initializer_list<const char*> values) {
  std::vector<Rational> raw;
  for (const char* v : values) raw.push_back(parse_rational(v));
  return LengthCdf::validate(std::move(raw));
}

// Deterministic jobs with qualitative reports (truthful unless given).
inline Instance deterministic(std::vector<int> lengths, int deadline,
                              std::vector<int> reports = {}) {
  Instance inst;
  inst.deadline = deadline;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const int r = reports.empty() ? lengths[i] : reports[i];
    inst.players.push_back({LengthCdf::point_mass(lengths[i]), QualitativeReport{r}});
  }
  return inst;
}

// Deterministic jobs with truthful point-mass distribution reports.
inline Instance quantitative(std::vector<int> lengths, int deadline) {
  Instance inst;
  inst.deadline = deadline;
  for (int l : lengths) {
    inst.players.push_back({LengthCdf::point_mass(l), QuantitativeReport{LengthCdf::point_mass(l)}});
  }
  return inst;
}

// Identical truthful quantitative players.
inline Instance identical(const LengthCdf& f, int n, int deadline) {
  Instance inst;
  inst.deadline = deadline;
  for (int i = 0; i < n; ++i) inst.players.push_back({f, QuantitativeReport{f}});
  return inst;
}

inline EvalResult exact(SchedulerKind kind, const Instance& inst,
                        const SchedulerParams& params = {}) {
  auto s = build_scheduler(SchedulerSpec{kind, params}, inst);
  return exact_evaluate(*s, inst);
}

inline const std::vector<Rational>& probs(const EvalResult& r) { return r.exact->finish_prob; }

}  // namespace sscd::testing

#endif  // SSCD_TESTS_SUPPORT_HPP_
