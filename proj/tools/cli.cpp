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


#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sscd/analysis.hpp"
#include "sscd/engine.hpp"
#include "sscd/io.hpp"
#include "sscd/metrics.hpp"
#include "sscd/schedulers.hpp"

namespace sscd::cli {
namespace {

namespace fs = std::filesystem;

struct Overrides {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  bool exact = false;
  std::optional<std::uint64_t> branch_limit;
  bool no_timestamp = false;
};

struct EngineConfig {
  EvalMode mode = EvalMode::kMonteCarlo;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  std::uint64_t branch_limit = kDefaultBranchLimit;
};

struct Experiment {
  SchedulerSpec spec;
  Instance instance;
  EngineConfig engine;
  Json analyses = Json::array();
  std::string out;
  std::string format = "both";
};

std::uint64_t default_branch_limit() {
  if (const char* env = std::getenv("SSCD_BRANCH_LIMIT")) {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(env, &pos);
      if (pos == std::string(env).size() && v > 0) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("SSCD_BRANCH_LIMIT", "expected a positive integer");
  }
  return kDefaultBranchLimit;
}

Json read_json_file(const std::string& path, const std::string& field) {
  std::ifstream in(path);
  if (!in) throw ConfigError(field, "cannot open \"" + path + "\"");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(field, std::string("JSON parse error: ") + e.what());
  }
}

std::uint64_t u64_field(const Json& j, const std::string& field) {
  if (!j.is_number_unsigned()) throw ConfigError(field, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

Instance load_instance(const Json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("instance", "expected an object");
  if (j.contains("file")) {
    if (!j["file"].is_string()) throw ConfigError("instance.file", "expected a path");
    fs::path p = j["file"].get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    return instance_from_json(read_json_file(p.string(), "instance.file"), "instance.file");
  }
  if (j.contains("generator")) {
    if (!j["generator"].is_string()) throw ConfigError("instance.generator", "expected a string");
    const Json params = j.contains("params") ? j["params"] : Json::object();
    return generate_instance(j["generator"].get<std::string>(), params, "instance");
  }
  return instance_from_json(j, "instance");
}

Experiment parse_experiment(const Json& doc, const Overrides& o, const fs::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("", "expected a JSON object");
  Experiment ex;
  if (!doc.contains("scheduler")) throw ConfigError("scheduler", "missing");
  ex.spec = spec_from_json(doc["scheduler"], "scheduler");
  if (!doc.contains("instance")) throw ConfigError("instance", "missing");
  ex.instance = load_instance(doc["instance"], base_dir);

  ex.engine.branch_limit = default_branch_limit();
  if (doc.contains("engine")) {
    const Json& e = doc["engine"];
    if (!e.is_object()) throw ConfigError("engine", "expected an object");
    for (const auto& [key, value] : e.items()) {
      const std::string f = "engine." + key;
      if (key == "mode") {
        if (value == "exact") {
          ex.engine.mode = EvalMode::kExact;
        } else if (value == "monte_carlo") {
          ex.engine.mode = EvalMode::kMonteCarlo;
        } else {
          throw ConfigError(f, "expected \"exact\" or \"monte_carlo\"");
        }
      } else if (key == "trials") {
        ex.engine.trials = u64_field(value, f);
      } else if (key == "seed") {
        ex.engine.seed = u64_field(value, f);
      } else if (key == "branch_limit") {
        ex.engine.branch_limit = u64_field(value, f);
      } else {
        throw ConfigError(f, "unknown engine field");
      }
    }
  }
  if (o.exact) ex.engine.mode = EvalMode::kExact;
  if (o.seed) ex.engine.seed = *o.seed;
  if (o.trials) ex.engine.trials = *o.trials;
  if (o.branch_limit) ex.engine.branch_limit = *o.branch_limit;
  if (ex.engine.mode == EvalMode::kMonteCarlo && ex.engine.trials == 0) {
    throw ConfigError("engine.trials", "must be >= 1");
  }
  if (ex.engine.branch_limit == 0) throw ConfigError("engine.branch_limit", "must be >= 1");

  if (doc.contains("analyses")) {
    ex.analyses = doc["analyses"];
    if (!ex.analyses.is_array()) throw ConfigError("analyses", "expected an array");
  }
  if (doc.contains("output")) {
    const Json& out = doc["output"];
    if (!out.is_object()) throw ConfigError("output", "expected an object");
    if (out.contains("path")) {
      if (!out["path"].is_string()) throw ConfigError("output.path", "expected a string");
      ex.out = out["path"].get<std::string>();
    }
    if (out.contains("format")) {
      ex.format = out["format"].is_string() ? out["format"].get<std::string>() : "";
      if (ex.format != "csv" && ex.format != "json" && ex.format != "both") {
        throw ConfigError("output.format", "expected \"csv\", \"json\" or \"both\"");
      }
    }
  }
  if (!o.out.empty()) ex.out = o.out;
  return ex;
}

EvalResult evaluate(const Experiment& ex) {
  auto scheduler = build_scheduler(ex.spec, ex.instance);
  EvalResult r = ex.engine.mode == EvalMode::kExact
                     ? exact_evaluate(*scheduler, ex.instance, ex.engine.branch_limit)
                     : monte_carlo(*scheduler, ex.instance, ex.engine.trials, ex.engine.seed);
  r.label = ex.instance.label;
  return r;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

int int_field(const Json& a, const char* key, const std::string& field) {
  if (!a.contains(key) || !a[key].is_number_integer()) {
    throw ConfigError(field + "." + key, "expected an integer");
  }
  return a[key].get<int>();
}

std::vector<int> int_list(const Json& a, const char* key, const std::string& field) {
  const std::string f = field + "." + key;
  if (!a.contains(key) || !a[key].is_array()) throw ConfigError(f, "expected an array of integers");
  std::vector<int> out;
  for (const Json& v : a[key]) {
    if (!v.is_number_integer()) throw ConfigError(f, "expected an array of integers");
    out.push_back(v.get<int>());
  }
  return out;
}

int checked_player(const Json& a, const std::string& field, const Instance& inst) {
  const int p = int_field(a, "player", field);
  if (p < 0 || p >= inst.size()) throw ConfigError(field + ".player", "out of range");
  return p;
}

// Runs one analysis; returns its JSON and appends analysis CSV rows.
Json run_analysis(const Json& a, std::size_t idx, const Experiment& ex, const EvalResult& result,
                  std::vector<std::string>& rows, std::vector<std::string>& fairness_rows) {
  const std::string field = "analyses[" + std::to_string(idx) + "]";
  if (!a.is_object() || !a.contains("op") || !a["op"].is_string()) {
    throw ConfigError(field + ".op", "expected an operation name");
  }
  const std::string op = a["op"].get<std::string>();
  const std::string prefix = std::to_string(kCsvSchemaVersion) + "," + csv_escape(result.label) +
                             "," + result.scheduler + "," + op + ",";
  const std::uint64_t limit = ex.engine.branch_limit;
  Json out{{"op", op}};
  if (op == "fairness_ratio") {
    const FairnessReport f = fairness_ratio(result, ex.instance);
    out["result"] = fairness_to_json(f);
    for (std::string& row : fairness_csv_rows(result, f)) fairness_rows.push_back(std::move(row));
    rows.push_back(prefix + ",,rho," + (f.vacuous ? "inf" : format_double(f.ratio)));
  } else if (op == "payoff_curve" || op == "check_error_properties") {
    const int player = checked_player(a, field, ex.instance);
    const std::vector<int> grid = int_list(a, "grid", field);
    const PayoffCurve curve = payoff_curve(ex.spec, ex.instance, player, grid, limit);
    out["result"] = payoff_curve_to_json(curve);
    for (const PayoffPoint& p : curve.points) {
      rows.push_back(prefix + std::to_string(player + 1) + "," + std::to_string(p.value) + ",payoff," +
                     to_string(p.payoff));
    }
    if (op == "check_error_properties") {
      const ErrorProperties props =
          check_error_properties(curve, int_field(a, "true_length", field));
      out["properties"] = error_properties_to_json(props);
      rows.push_back(prefix + std::to_string(player + 1) + ",,symmetric," + (props.symmetric ? "1" : "0"));
      rows.push_back(prefix + std::to_string(player + 1) + ",,monotone," + (props.monotone ? "1" : "0"));
      for (const ErrorWitness& w : props.witnesses) {
        rows.push_back(prefix + std::to_string(player + 1) + "," + std::to_string(w.report_a) + ":" +
                       std::to_string(w.report_b) + ",witness_" + w.property + "," +
                       to_string(w.payoff_a) + ":" + to_string(w.payoff_b));
      }
    }
  } else if (op == "best_response_gap") {
    const int player = checked_player(a, field, ex.instance);
    const Report& current = ex.instance.players[static_cast<std::size_t>(player)].report;
    std::vector<Report> grid;
    for (int v : int_list(a, "grid", field)) grid.push_back(report_like(current, v));
    const BestResponse br = best_response_gap(ex.spec, ex.instance, player, current, grid, limit);
    out["result"] = best_response_to_json(br);
    rows.push_back(prefix + std::to_string(player + 1) + ",,gap," + to_string(br.gap));
  } else if (op == "completeness_check") {
    const CompletenessReport c = completeness_check(
        ex.spec, int_field(a, "max_n", field), int_field(a, "max_len", field),
        int_field(a, "min_deadline", field), int_field(a, "max_deadline", field));
    out["result"] = completeness_to_json(c);
    rows.push_back(prefix + ",,violations," + std::to_string(c.violation_count));
  } else if (op == "obliviousness_check") {
    if (!a.contains("profiles") || !a["profiles"].is_array()) {
      throw ConfigError(field + ".profiles", "expected an array of report arrays");
    }
    std::vector<std::vector<Report>> profiles;
    for (std::size_t i = 0; i < a["profiles"].size(); ++i) {
      const std::string pf = field + ".profiles[" + std::to_string(i) + "]";
      const Json& prof = a["profiles"][i];
      if (!prof.is_array() || static_cast<int>(prof.size()) != ex.instance.size()) {
        throw ConfigError(pf, "expected one report per player");
      }
      std::vector<Report> reports;
      for (std::size_t k = 0; k < prof.size(); ++k) {
        reports.push_back(report_from_json(prof[k], pf + "[" + std::to_string(k) + "]"));
      }
      profiles.push_back(std::move(reports));
    }
    if (profiles.size() < 2) throw ConfigError(field + ".profiles", "need at least two profiles");
    const ObliviousnessReport r = obliviousness_check(ex.spec, ex.instance, profiles, limit);
    out["result"] = obliviousness_to_json(r);
    rows.push_back(prefix + ",,oblivious," + (r.oblivious ? "1" : "0"));
  } else if (op == "exact_preemptive_optimum") {
    const Rational opt = exact_preemptive_optimum(ex.instance);
    out["result"] = rational_to_json(opt);
    rows.push_back(prefix + ",,optimum," + to_string(opt));
  } else {
    throw ConfigError(field + ".op", "unknown analysis \"" + op + "\"");
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("output.path", "cannot write \"" + path + "\"");
  f << text;
}

std::string csv_block(const std::string& header, const std::vector<std::string>& rows,
                      const std::string& stamp) {
  std::string out;
  if (!stamp.empty()) out += "# generated_at=" + stamp + "\n";
  out += header + "\n";
  for (const std::string& r : rows) out += r + "\n";
  return out;
}

Json load_config(const Overrides& o) {
  if (o.config.empty()) throw ConfigError("--config", "required");
  return read_json_file(o.config, "--config");
}

fs::path config_dir(const Overrides& o) { return fs::path(o.config).parent_path(); }

int cmd_run(const Overrides& o, std::ostream& out) {
  const Json doc = load_config(o);
  const Experiment ex = parse_experiment(doc, o, config_dir(o));
  const EvalResult result = evaluate(ex);
  std::vector<std::string> analysis_rows;
  std::vector<std::string> fairness_rows;
  Json analyses = Json::array();
  for (std::size_t i = 0; i < ex.analyses.size(); ++i) {
    analyses.push_back(run_analysis(ex.analyses[i], i, ex, result, analysis_rows, fairness_rows));
  }
  const std::string stamp = o.no_timestamp ? "" : timestamp();
  const int n = result.players();
  const std::string results_csv =
      csv_block(result_csv_header({}, n), {result_csv_row(result, {}, n)}, stamp);

  Json report{{"schema_version", kCsvSchemaVersion}};
  if (!stamp.empty()) report["generated_at"] = stamp;
  report["scheduler"] = spec_to_json(ex.spec);
  report["instance"] = instance_to_json(ex.instance);
  report["result"] = result_to_json(result);
  report["analyses"] = analyses;

  if (ex.out.empty()) {
    out << results_csv;
    if (!fairness_rows.empty()) out << "\n" << csv_block(fairness_csv_header(), fairness_rows, "");
    return kExitOk;
  }
  if (ex.format != "json") {
    write_text(ex.out + ".csv", results_csv);
    if (!fairness_rows.empty()) {
      write_text(ex.out + ".fairness.csv", csv_block(fairness_csv_header(), fairness_rows, stamp));
    }
    if (!analysis_rows.empty()) {
      write_text(ex.out + ".analysis.csv",
                 csv_block("schema_version,label,scheduler,analysis,player,report,key,value",
                           analysis_rows, stamp));
    }
  }
  if (ex.format != "csv") write_text(ex.out + ".json", report.dump(2) + "\n");
  return kExitOk;
}

// "sweep": [{"path": "/instance/params/n", "values": [4, 8, 16]}, ...]; the
// grid is the cartesian product, first axis slowest.
int cmd_sweep(const Overrides& o, std::ostream& out) {
  const Json doc = load_config(o);
  if (!doc.is_object() || !doc.contains("sweep") || !doc["sweep"].is_array() || doc["sweep"].empty()) {
    throw ConfigError("sweep", "expected a non-empty array of {path, values}");
  }
  struct Axis {
    Json::json_pointer path;
    std::string name;
    std::vector<Json> values;
  };
  std::vector<Axis> axes;
  for (std::size_t i = 0; i < doc["sweep"].size(); ++i) {
    const Json& s = doc["sweep"][i];
    const std::string f = "sweep[" + std::to_string(i) + "]";
    if (!s.is_object() || !s.contains("path") || !s["path"].is_string()) {
      throw ConfigError(f + ".path", "expected a JSON pointer string");
    }
    if (!s.contains("values") || !s["values"].is_array() || s["values"].empty()) {
      throw ConfigError(f + ".values", "expected a non-empty array");
    }
    Axis axis;
    try {
      axis.path = Json::json_pointer(s["path"].get<std::string>());
    } catch (const Json::exception& e) {
      throw ConfigError(f + ".path", e.what());
    }
    axis.name = s["path"].get<std::string>();
    for (const Json& v : s["values"]) axis.values.push_back(v);
    axes.push_back(std::move(axis));
  }
  Json base = doc;
  base.erase("sweep");

  std::vector<std::string> keys;
  for (const Axis& a : axes) keys.push_back(a.name);
  struct Point {
    EvalResult result;
    std::vector<CsvExtra> extras;
  };
  std::vector<Point> points;
  std::vector<std::size_t> idx(axes.size(), 0);
  int max_players = 0;
  std::string out_path;
  std::string format = "both";
  for (;;) {
    Json cfg = base;
    std::vector<CsvExtra> extras;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const Json& v = axes[a].values[idx[a]];
      cfg[axes[a].path] = v;
      extras.push_back({axes[a].name, v.is_string() ? v.get<std::string>() : v.dump()});
    }
    const Experiment ex = parse_experiment(cfg, o, config_dir(o));
    out_path = ex.out;
    format = ex.format;
    EvalResult r = evaluate(ex);
    bool wants_rho = false;
    for (const Json& a : ex.analyses) wants_rho |= a.is_object() && a.value("op", "") == "fairness_ratio";
    if (wants_rho) {
      const FairnessReport f = fairness_ratio(r, ex.instance);
      extras.push_back({"rho", f.vacuous ? "inf" : format_double(f.ratio)});
    }
    max_players = std::max(max_players, r.players());
    points.push_back({std::move(r), std::move(extras)});
    // Advance the odometer, last axis fastest.
    std::size_t a = axes.size();
    while (a > 0 && ++idx[a - 1] == axes[a - 1].values.size()) {
      idx[a - 1] = 0;
      --a;
    }
    if (a == 0) break;
  }
  bool any_rho = false;
  for (const Point& p : points) any_rho |= p.extras.size() > axes.size();
  if (any_rho) keys.push_back("rho");
  std::vector<std::string> rows;
  Json results = Json::array();
  for (Point& p : points) {
    if (any_rho && p.extras.size() == axes.size()) p.extras.push_back({"rho", ""});
    rows.push_back(result_csv_row(p.result, p.extras, max_players));
    Json entry = Json::object();
    for (const CsvExtra& e : p.extras) entry[e.key] = e.value;
    entry["result"] = result_to_json(p.result);
    results.push_back(entry);
  }
  const std::string stamp = o.no_timestamp ? "" : timestamp();
  const std::string csv = csv_block(result_csv_header(keys, max_players), rows, stamp);
  if (out_path.empty()) {
    out << csv;
    return kExitOk;
  }
  if (format != "json") write_text(out_path + ".csv", csv);
  if (format != "csv") {
    Json report{{"schema_version", kCsvSchemaVersion}};
    if (!stamp.empty()) report["generated_at"] = stamp;
    report["points"] = results;
    write_text(out_path + ".json", report.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_generate(const std::string& kind, const std::vector<std::string>& params,
                 const std::string& out_path, std::ostream& out) {
  Json p = Json::object();
  for (const std::string& kv : params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--param", "expected key=value, got \"" + kv + "\"");
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    try {
      p[key] = Json::parse(value);
    } catch (const Json::parse_error&) {
      p[key] = value;
    }
  }
  const Instance inst = generate_instance(kind, p, "generate");
  const std::string text = instance_to_json(inst).dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    write_text(out_path, text);
  }
  return kExitOk;
}

std::string params_of(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::kTimeoutOblivious: return "timeout";
    case SchedulerKind::kFairShareLottery: return "fair_share_mode,max_length";
    case SchedulerKind::kForgivingLottery: return "unit";
    case SchedulerKind::kCompleteNashDp: return "table_limit";
    default: return "";
  }
}

int cmd_list(std::ostream& out) {
  out << "kind,adaptivity,oblivious,complete,deterministic,reports,params\n";
  for (SchedulerKind k : all_scheduler_kinds()) {
    const Capabilities c = capabilities_of(k);
    out << to_string(k) << "," << to_string(c.adaptivity) << "," << c.oblivious << ","
        << c.complete << "," << c.deterministic << ","
        << (reads_distributions(k) ? "quantitative" : "qualitative") << ","
        << csv_escape(params_of(k)) << "\n";
  }
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scheduling-mechanism workbench: exact and Monte Carlo evaluation"};
  app.require_subcommand(1);
  Overrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "experiment JSON")->required();
    sub->add_option("--out", o.out, "output path prefix (default: CSV to stdout)");
    sub->add_option("--seed", o.seed, "Monte Carlo seed");
    sub->add_option("--trials", o.trials, "Monte Carlo trials");
    sub->add_flag("--exact", o.exact, "exact enumeration instead of Monte Carlo");
    sub->add_option("--branch-limit", o.branch_limit, "exact-mode branch limit");
    sub->add_flag("--no-header-timestamp", o.no_timestamp, "omit the generated_at line");
  };
  CLI::App* run = app.add_subcommand("run", "evaluate one experiment");
  add_common(run);
  CLI::App* sweep = app.add_subcommand("sweep", "evaluate a parameter grid, one row per point");
  add_common(sweep);
  CLI::App* gen = app.add_subcommand("generate", "write a generated instance as JSON");
  std::string kind;
  std::vector<std::string> params;
  std::string gen_out;
  gen->add_option("kind", kind, "generator kind")->required();
  gen->add_option("--param", params, "generator parameter key=value (repeatable)");
  gen->add_option("--out", gen_out, "output file (default: stdout)");
  CLI::App* list = app.add_subcommand("list-schedulers", "print scheduler kinds and capabilities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
    if (gen->parsed()) return cmd_generate(kind, params, gen_out, out);
    if (list->parsed()) return cmd_list(out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BranchLimitExceeded& e) {
    err << "engine error: BranchLimitExceeded: " << e.what() << "\n";
    return kExitEngine;
  } catch (const StateLimitExceeded& e) {
    err << "engine error: StateLimitExceeded: " << e.what() << "\n";
    return kExitEngine;
  } catch (const TableLimitExceeded& e) {
    err << "engine error: TableLimitExceeded: " << e.what() << "\n";
    return kExitEngine;
  } catch (const BudgetExceeded& e) {
    err << "engine error: BudgetExceeded: " << e.what() << "\n";
    return kExitEngine;
  } catch (const PreemptionNotDeclared& e) {
    err << "engine error: PreemptionNotDeclared: " << e.what() << "\n";
    return kExitEngine;
  } catch (const InvalidDirective& e) {
    err << "engine error: InvalidDirective: " << e.what() << "\n";
    return kExitEngine;
  } catch (const TimeOverflow& e) {
    err << "engine error: TimeOverflow: " << e.what() << "\n";
    return kExitEngine;
  } catch (const SplitOverflow& e) {
    err << "engine error: SplitOverflow: " << e.what() << "\n";
    return kExitEngine;
  } catch (const Error& e) {
    // Remaining library errors reject the configured instance or scheduler.
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace sscd::cli
