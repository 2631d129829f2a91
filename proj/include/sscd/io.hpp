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

// JSON and CSV encodings of instances, scheduler specs, results and reports,
// plus instance generation from a JSON description.

#ifndef SSCD_IO_HPP_
#define SSCD_IO_HPP_

#include <string>
#include <vector>

#include "json.hpp"
#include "sscd/analysis.hpp"
#include "sscd/core.hpp"
#include "sscd/engine.hpp"
#include "sscd/metrics.hpp"
#include "sscd/schedulers.hpp"

namespace sscd {

using Json = nlohmann::ordered_json;

// A malformed document. The message starts with the offending field path.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what);
};

inline constexpr int kCsvSchemaVersion = 1;

// Rationals travel as "p/q" strings (integers as "p/1").
Json rational_to_json(const Rational& value);
Rational rational_from_json(const Json& j, const std::string& field);

// A CDF is an array of "p/q" strings, or {"point_mass": l}.
Json cdf_to_json(const LengthCdf& f);
LengthCdf cdf_from_json(const Json& j, const std::string& field);

// {"type": "quantitative", "cdf": [...]}, {"type": "qualitative", "estimate": k},
// {"type": "preference", "t": k}.
Json report_to_json(const Report& report);
Report report_from_json(const Json& j, const std::string& field);

// {"deadline": D, "label": "...", "players": [{"true_cdf": ..., "report": ...}]}.
// A player without "report" reports its true distribution.
Json instance_to_json(const Instance& instance);
Instance instance_from_json(const Json& j, const std::string& field);

// {"kind": "...", "params": {"timeout", "fair_share_mode", "max_length",
// "unit", "table_limit"}}; absent params take their defaults.
Json spec_to_json(const SchedulerSpec& spec);
SchedulerSpec spec_from_json(const Json& j, const std::string& field);

// Generator kinds and their parameters, in listing order.
struct GeneratorInfo {
  std::string kind;
  std::vector<std::string> params;
};
const std::vector<GeneratorInfo>& generator_kinds();

// {"generator": kind, "params": {...}}.
Instance generate_instance(const std::string& kind, const Json& params, const std::string& field);

Json result_to_json(const EvalResult& result);
Json fairness_to_json(const FairnessReport& report);
Json payoff_curve_to_json(const PayoffCurve& curve);
Json error_properties_to_json(const ErrorProperties& props);
Json best_response_to_json(const BestResponse& br);
Json completeness_to_json(const CompletenessReport& report);
Json obliviousness_to_json(const ObliviousnessReport& report);

// Result rows: schema_version,<extra keys>,label,scheduler,mode,trials,branches,
// seed,welfare,welfare_se,welfare_exact,p_finish_1..p_finish_n. `players`
// sets how many p_finish columns the header has; shorter rows leave blanks.
struct CsvExtra {
  std::string key;
  std::string value;
};
std::string result_csv_header(const std::vector<std::string>& extra_keys, int players);
std::string result_csv_row(const EvalResult& result, const std::vector<CsvExtra>& extras,
                           int players);

// Fairness rows: schema_version,label,scheduler,player,fair_share,achieved,ratio.
std::string fairness_csv_header();
std::vector<std::string> fairness_csv_rows(const EvalResult& result, const FairnessReport& report);

// Quotes a CSV field when needed.
std::string csv_escape(const std::string& field);
// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace sscd

#endif  // SSCD_IO_HPP_
