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


#include "sscd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "sscd/instances.hpp"

namespace sscd {
namespace {

std::string join(const std::string& field, const std::string& key) {
  return field.empty() ? key : field + "." + key;
}
std::string index(const std::string& field, std::size_t i) {
  return field + "[" + std::to_string(i) + "]";
}

const Json& require_key(const Json& j, const std::string& key, const std::string& field) {
  if (!j.is_object()) throw ConfigError(field, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(join(field, key), "missing");
  return *it;
}

long get_int(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ConfigError(field, "expected an integer, got " + j.dump());
  return j.get<long>();
}

int get_int32(const Json& j, const std::string& field) {
  const long v = get_int(j, field);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(field, "integer out of range");
  }
  return static_cast<int>(v);
}

int int_param(const Json& params, const std::string& key, const std::string& field) {
  return get_int32(require_key(params, key, field), join(field, key));
}

std::uint64_t get_u64(const Json& j, const std::string& field) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<long>() < 0)) {
    throw ConfigError(field, "expected a nonnegative integer, got " + j.dump());
  }
  return j.get<std::uint64_t>();
}

std::string get_string(const Json& j, const std::string& field) {
  if (!j.is_string()) throw ConfigError(field, "expected a string, got " + j.dump());
  return j.get<std::string>();
}

// Library validation errors become config errors at `field`.
template <typename F>
auto at_field(const std::string& field, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(field, e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
}

}  // namespace

ConfigError::ConfigError(const std::string& field, const std::string& what)
    : Error((field.empty() ? std::string("config") : field) + ": " + what) {}

Json rational_to_json(const Rational& value) { return to_string(value); }

Rational rational_from_json(const Json& j, const std::string& field) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw ConfigError(field, "expected a rational \"p/q\", got " + j.dump());
  const std::string text = j.get<std::string>();
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw ConfigError(field, "malformed rational \"" + text + "\" (expected p/q)");
  }
}

Json cdf_to_json(const LengthCdf& f) {
  Json out = Json::array();
  for (const Rational& v : f.values()) out.push_back(rational_to_json(v));
  return out;
}

LengthCdf cdf_from_json(const Json& j, const std::string& field) {
  if (j.is_object()) {
    const int l = int_param(j, "point_mass", field);
    return at_field(join(field, "point_mass"), [&] { return LengthCdf::point_mass(l); });
  }
  if (!j.is_array()) throw ConfigError(field, "expected an array of \"p/q\" or {\"point_mass\": l}");
  std::vector<Rational> raw;
  for (std::size_t i = 0; i < j.size(); ++i) raw.push_back(rational_from_json(j[i], index(field, i)));
  return at_field(field, [&] { return LengthCdf::validate(std::move(raw)); });
}

Json report_to_json(const Report& report) {
  return std::visit(
      [](const auto& r) -> Json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, QuantitativeReport>) {
          return Json{{"type", "quantitative"}, {"cdf", cdf_to_json(r.cdf)}};
        } else if constexpr (std::is_same_v<T, QualitativeReport>) {
          return Json{{"type", "qualitative"}, {"estimate", r.estimate}};
        } else {
          return Json{{"type", "preference"}, {"t", r.t}};
        }
      },
      report);
}

Report report_from_json(const Json& j, const std::string& field) {
  const std::string type = get_string(require_key(j, "type", field), join(field, "type"));
  Report out = QualitativeReport{};
  if (type == "quantitative") {
    out = QuantitativeReport{cdf_from_json(require_key(j, "cdf", field), join(field, "cdf"))};
  } else if (type == "qualitative") {
    out = QualitativeReport{int_param(j, "estimate", field)};
  } else if (type == "preference") {
    out = PreferenceReport{int_param(j, "t", field)};
  } else {
    throw ConfigError(join(field, "type"), "unknown report type \"" + type + "\"");
  }
  at_field(field, [&] { validate_report(out); });
  return out;
}

Json instance_to_json(const Instance& instance) {
  Json players = Json::array();
  for (const Player& p : instance.players) {
    players.push_back(Json{{"true_cdf", cdf_to_json(p.true_cdf)}, {"report", report_to_json(p.report)}});
  }
  return Json{{"deadline", instance.deadline}, {"label", instance.label}, {"players", players}};
}

Instance instance_from_json(const Json& j, const std::string& field) {
  Instance inst;
  inst.deadline = int_param(j, "deadline", field);
  if (auto it = j.find("label"); it != j.end()) inst.label = get_string(*it, join(field, "label"));
  const Json& players = require_key(j, "players", field);
  const std::string pf = join(field, "players");
  if (!players.is_array()) throw ConfigError(pf, "expected an array");
  for (std::size_t i = 0; i < players.size(); ++i) {
    const std::string f = index(pf, i);
    const LengthCdf cdf = cdf_from_json(require_key(players[i], "true_cdf", f), join(f, "true_cdf"));
    Report report = QuantitativeReport{cdf};
    if (auto it = players[i].find("report"); it != players[i].end()) {
      report = report_from_json(*it, join(f, "report"));
    }
    inst.players.push_back({cdf, std::move(report)});
  }
  at_field(field, [&] { inst.validate(); });
  return inst;
}

Json spec_to_json(const SchedulerSpec& spec) {
  Json params = Json::object();
  if (spec.params.timeout) params["timeout"] = *spec.params.timeout;
  params["fair_share_mode"] = to_string(spec.params.fair_share_mode);
  if (spec.params.max_length) params["max_length"] = *spec.params.max_length;
  if (spec.params.unit) params["unit"] = *spec.params.unit;
  params["table_limit"] = spec.params.table_limit;
  return Json{{"kind", to_string(spec.kind)}, {"params", params}};
}

SchedulerSpec spec_from_json(const Json& j, const std::string& field) {
  SchedulerSpec spec;
  const std::string kf = join(field, "kind");
  const std::string kind = get_string(require_key(j, "kind", field), kf);
  spec.kind = at_field(kf, [&] { return parse_scheduler_kind(kind); });
  auto it = j.find("params");
  if (it == j.end()) return spec;
  const std::string pf = join(field, "params");
  if (!it->is_object()) throw ConfigError(pf, "expected an object");
  for (const auto& [key, value] : it->items()) {
    const std::string f = join(pf, key);
    if (key == "timeout") {
      spec.params.timeout = get_int32(value, f);
    } else if (key == "fair_share_mode") {
      const std::string mode = get_string(value, f);
      spec.params.fair_share_mode = at_field(f, [&] { return parse_fair_share_mode(mode); });
    } else if (key == "max_length") {
      spec.params.max_length = get_int32(value, f);
    } else if (key == "unit") {
      spec.params.unit = get_int32(value, f);
    } else if (key == "table_limit") {
      spec.params.table_limit = get_u64(value, f);
    } else {
      throw ConfigError(f, "unknown scheduler parameter");
    }
  }
  return spec;
}

const std::vector<GeneratorInfo>& generator_kinds() {
  static const std::vector<GeneratorInfo> kinds{
      {"posu_groups", {"deadline", "group_cap"}},
      {"short_long", {"n", "t"}},
      {"oblivious_lb", {"n"}},
      {"complete_lb", {"n"}},
      {"canonical_gap", {"k", "n", "deadline"}},
      {"identical", {"cdf", "n", "deadline"}},
      {"near_deterministic", {"n", "deadline", "seed"}},
      {"random",
       {"seed", "min_players", "max_players", "min_deadline", "max_deadline", "max_length",
        "max_support", "max_denominator", "escaping_mass", "identical", "deterministic"}},
  };
  return kinds;
}

Instance generate_instance(const std::string& kind, const Json& params, const std::string& field) {
  const std::string pf = join(field, "params");
  if (!params.is_object()) throw ConfigError(pf, "expected an object");
  const GeneratorInfo* info = nullptr;
  for (const GeneratorInfo& g : generator_kinds()) {
    if (g.kind == kind) info = &g;
  }
  if (info == nullptr) throw ConfigError(join(field, "generator"), "unknown generator \"" + kind + "\"");
  for (const auto& [key, value] : params.items()) {
    if (std::find(info->params.begin(), info->params.end(), key) == info->params.end()) {
      throw ConfigError(join(pf, key), "unknown parameter for generator " + kind);
    }
  }
  auto p = [&](const char* key) { return int_param(params, key, pf); };
  return at_field(pf, [&]() -> Instance {
    if (kind == "posu_groups") {
      return gen_posu_groups(p("deadline"), get_int(require_key(params, "group_cap", pf), join(pf, "group_cap")));
    }
    if (kind == "short_long") return gen_short_long(p("n"), p("t"));
    if (kind == "oblivious_lb") return gen_oblivious_lb(p("n"));
    if (kind == "complete_lb") return gen_complete_lb(p("n"));
    if (kind == "canonical_gap") return gen_canonical_gap(p("k"), p("n"), p("deadline"));
    if (kind == "identical") {
      return gen_identical(cdf_from_json(require_key(params, "cdf", pf), join(pf, "cdf")), p("n"),
                           p("deadline"));
    }
    if (kind == "near_deterministic") {
      return gen_near_deterministic(p("n"), p("deadline"),
                                    get_u64(require_key(params, "seed", pf), join(pf, "seed")));
    }
    RandomInstanceParams rp;
    auto opt_int = [&](const char* key, int& target) {
      if (auto it = params.find(key); it != params.end()) target = get_int32(*it, join(pf, key));
    };
    auto opt_bool = [&](const char* key, bool& target) {
      if (auto it = params.find(key); it != params.end()) {
        if (!it->is_boolean()) throw ConfigError(join(pf, key), "expected true or false");
        target = it->get<bool>();
      }
    };
    opt_int("min_players", rp.min_players);
    opt_int("max_players", rp.max_players);
    opt_int("min_deadline", rp.min_deadline);
    opt_int("max_deadline", rp.max_deadline);
    opt_int("max_length", rp.max_length);
    opt_int("max_support", rp.max_support);
    opt_int("max_denominator", rp.max_denominator);
    opt_bool("escaping_mass", rp.escaping_mass);
    opt_bool("identical", rp.identical);
    opt_bool("deterministic", rp.deterministic);
    return gen_random(get_u64(require_key(params, "seed", pf), join(pf, "seed")), rp);
  });
}

namespace {

Json doubles(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

Json rationals(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const Rational& x : v) out.push_back(rational_to_json(x));
  return out;
}

}  // namespace

Json result_to_json(const EvalResult& r) {
  Json out{{"mode", to_string(r.mode)},
           {"scheduler", r.scheduler},
           {"label", r.label},
           {r.mode == EvalMode::kExact ? "branches" : "trials", r.samples}};
  if (r.mode == EvalMode::kMonteCarlo) out["seed"] = r.seed;
  out["welfare"] = r.welfare;
  out["welfare_se"] = r.welfare_se;
  out["finish_prob"] = doubles(r.finish_prob);
  out["finish_se"] = doubles(r.finish_se);
  out["start_prob"] = doubles(r.start_prob);
  if (r.exact) {
    out["exact"] = Json{{"welfare", rational_to_json(r.exact->welfare)},
                        {"welfare_second_moment", rational_to_json(r.exact->welfare_second_moment)},
                        {"finish_prob", rationals(r.exact->finish_prob)},
                        {"start_prob", rationals(r.exact->start_prob)},
                        {"total_weight", rational_to_json(r.exact->total_weight)}};
  }
  return out;
}

Json fairness_to_json(const FairnessReport& f) {
  Json out{{"fair_share", rationals(f.fair_share)}, {"achieved", doubles(f.achieved)}};
  if (f.achieved_exact) out["achieved_exact"] = rationals(*f.achieved_exact);
  if (f.vacuous) {
    out["ratio"] = "inf";
  } else {
    out["ratio"] = f.ratio;
  }
  if (f.ratio_exact) out["ratio_exact"] = rational_to_json(*f.ratio_exact);
  out["argmin"] = f.argmin;
  out["vacuous"] = f.vacuous;
  return out;
}

Json payoff_curve_to_json(const PayoffCurve& curve) {
  Json points = Json::array();
  for (const PayoffPoint& p : curve.points) {
    points.push_back(Json{{"report", p.value}, {"payoff", rational_to_json(p.payoff)}});
  }
  return Json{{"player", curve.player}, {"points", points}};
}

Json error_properties_to_json(const ErrorProperties& props) {
  Json witnesses = Json::array();
  for (const ErrorWitness& w : props.witnesses) {
    witnesses.push_back(Json{{"property", w.property},
                             {"report_a", w.report_a},
                             {"report_b", w.report_b},
                             {"payoff_a", rational_to_json(w.payoff_a)},
                             {"payoff_b", rational_to_json(w.payoff_b)}});
  }
  return Json{{"symmetric", props.symmetric}, {"monotone", props.monotone}, {"witnesses", witnesses}};
}

Json best_response_to_json(const BestResponse& br) {
  return Json{{"gap", rational_to_json(br.gap)},
              {"honest_payoff", rational_to_json(br.honest_payoff)},
              {"best_payoff", rational_to_json(br.best_payoff)},
              {"best_index", br.best_index}};
}

Json completeness_to_json(const CompletenessReport& report) {
  Json witnesses = Json::array();
  for (const CompletenessViolation& v : report.violations) {
    witnesses.push_back(Json{{"lengths", v.lengths},
                             {"deadline", v.deadline},
                             {"weight", rational_to_json(v.weight)},
                             {"unfinished", v.unfinished}});
  }
  return Json{{"passed", report.passed()},
              {"instances", report.instances},
              {"branches", report.branches},
              {"skipped", report.skipped},
              {"violation_count", report.violation_count},
              {"violations", witnesses}};
}

Json obliviousness_to_json(const ObliviousnessReport& report) {
  return Json{{"oblivious", report.oblivious}, {"witness_profile", report.witness_profile}};
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string result_csv_header(const std::vector<std::string>& extra_keys, int players) {
  std::string out = "schema_version";
  for (const std::string& k : extra_keys) out += "," + csv_escape(k);
  out += ",label,scheduler,mode,trials,branches,seed,welfare,welfare_se,welfare_exact";
  for (int i = 1; i <= players; ++i) out += ",p_finish_" + std::to_string(i);
  return out;
}

std::string result_csv_row(const EvalResult& r, const std::vector<CsvExtra>& extras, int players) {
  const bool mc = r.mode == EvalMode::kMonteCarlo;
  std::string out = std::to_string(kCsvSchemaVersion);
  for (const CsvExtra& e : extras) out += "," + csv_escape(e.value);
  out += "," + csv_escape(r.label) + "," + r.scheduler + "," + to_string(r.mode);
  out += "," + (mc ? std::to_string(r.samples) : std::string());
  out += "," + (mc ? std::string() : std::to_string(r.samples));
  out += "," + (mc ? std::to_string(r.seed) : std::string());
  out += "," + format_double(r.welfare) + "," + format_double(r.welfare_se);
  out += "," + (r.exact ? to_string(r.exact->welfare) : std::string());
  for (int i = 0; i < players; ++i) {
    out += ",";
    if (i < r.players()) out += format_double(r.finish_prob[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::string fairness_csv_header() {
  return "schema_version,label,scheduler,player,fair_share,achieved,ratio";
}

std::vector<std::string> fairness_csv_rows(const EvalResult& r, const FairnessReport& f) {
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < f.fair_share.size(); ++i) {
    std::string achieved = f.achieved_exact ? to_string((*f.achieved_exact)[i]) : format_double(f.achieved[i]);
    std::string ratio;
    if (sgn(f.fair_share[i]) > 0) {
      ratio = f.achieved_exact ? to_string((*f.achieved_exact)[i] / f.fair_share[i])
                               : format_double(f.achieved[i] / to_double(f.fair_share[i]));
    }
    rows.push_back(std::to_string(kCsvSchemaVersion) + "," + csv_escape(r.label) + "," +
                   r.scheduler + "," + std::to_string(i + 1) + "," + to_string(f.fair_share[i]) +
                   "," + achieved + "," + ratio);
  }
  return rows;
}

}  // namespace sscd
