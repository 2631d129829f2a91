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

// Instance generators: the hard constructions plus seeded random suites.

#ifndef SSCD_INSTANCES_HPP_
#define SSCD_INSTANCES_HPP_

#include <cstdint>
#include <vector>

#include "sscd/core.hpp"

namespace sscd {

// Groups of jobs whose lengths double from group to group. Group 0 holds D
// unit jobs; group i (1 <= i <= log2(D) + 1) holds min(D * (2D)^i, group_cap)
// jobs of length 2^(i-1) w.p. 1/D, else 2^i. D must be a power of two.
// Truthful quantitative reports.
Instance gen_posu_groups(int deadline, long group_cap);

// n/t short jobs uniform on 1..2t and n - n/t long jobs uniform on 1..n; D = n.
Instance gen_short_long(int players, int t);

// D = n; length 2^i w.p. 2^i/(2n) for i = 1..log2(n), the leftover 1/n at
// length n. n must be a power of two >= 2.
Instance gen_oblivious_lb(int players);

// D = n^2; each job is n w.p. 1/2, else uniform on 1..n^2.
Instance gen_complete_lb(int players);

// Identical jobs with f(t) = 1/k up to D/n, then min(1, t n / (D k)) up to
// min(kD/n, D). k >= 2 (k = 1 allowed as the degenerate case), n | D.
Instance gen_canonical_gap(int k, int players, int deadline);

Instance gen_identical(const LengthCdf& f, int players, int deadline);

// Each job: base b uniform on 1..max(1, 2D/n), length b w.p. q (q drawn from
// {1/4, 1/2, 3/4}) else 2b; qualitative report b.
Instance gen_near_deterministic(int players, int deadline, std::uint64_t seed);

struct RandomInstanceParams {
  int min_players = 1;
  int max_players = 4;
  int min_deadline = 1;
  int max_deadline = 12;
  int max_length = 6;
  int max_support = 3;     // support points per distribution
  int max_denominator = 4;  // masses are multiples of 1/den, den in 2..max
  bool escaping_mass = true;  // allow mass that never finishes
  bool identical = false;
  bool deterministic = false;
};

// Truthful quantitative reports.
Instance gen_random(std::uint64_t seed, const RandomInstanceParams& params = {});

// The small-instance suite used by exact checks: n <= 4, D <= 12, at most
// three support points per distribution.
std::vector<Instance> exact_suite();

// Identical-distribution instances with n <= 3, D <= 6, support <= 3.
std::vector<Instance> identical_suite();

}  // namespace sscd

#endif  // SSCD_INSTANCES_HPP_
