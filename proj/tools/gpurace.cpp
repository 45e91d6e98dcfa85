/*
 * Copyright 2026 The gpurace Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// gpurace: command-line front end.
//
// Exit codes: 0 no race, 1 race found, 2 usage or parse error,
// 3 trace fails validation.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gpurace/batch.hpp"
#include "gpurace/detect.hpp"
#include "gpurace/oracle.hpp"
#include "gpurace/stats.hpp"
#include "gpurace/workloads.hpp"
#include "json.hpp"

namespace {

using namespace gpurace;
using json = nlohmann::ordered_json;

constexpr int kNoRace = 0;
constexpr int kRace = 1;
constexpr int kUsage = 2;
constexpr int kInvalid = 3;

struct Failure {
  int code;
  std::string message;
};

std::string loc_text(const Location& l) {
  std::ostringstream os;
  os << (l.space == Space::Global ? "g:" : "s" + std::to_string(l.block) + ":") << "0x" << std::hex << l.addr;
  return os.str();
}

// Parses, validates and lock-infers a trace file ("-" reads stdin).
Trace load(const std::string& path) {
  Trace raw;
  try {
    if (path == "-") {
      raw = parse_trace(std::cin);
    } else {
      std::ifstream in(path);
      if (!in) throw Failure{kUsage, "cannot open '" + path + "'"};
      raw = parse_trace(in);
    }
  } catch (const TraceError& e) {
    throw Failure{kUsage, path + ": " + e.what()};
  }
  std::string problems;
  for (const Diagnostic& d : validate_trace(raw)) problems += path + ": " + to_string(d) + "\n";
  if (!problems.empty()) throw Failure{kInvalid, problems.substr(0, problems.size() - 1)};
  LockInference inf = analysis_trace(raw);
  for (const Diagnostic& d : inf.diagnostics) std::cerr << path << ": warning: " << to_string(d) << "\n";
  return std::move(inf.trace);
}

void print_report(const RaceReport& r, bool asJson) {
  if (asJson) {
    std::cout << to_json_line(r) << "\n";
    return;
  }
  std::cout << r.detector << ": " << to_string(r.kind) << " race on " << loc_text(r.loc) << " between #"
            << r.prior.event << " (" << to_string(r.prior.tid) << ", instr " << r.prior.instr << ") and #"
            << r.current.event << " (" << to_string(r.current.tid) << ", instr " << r.current.instr << "), "
            << to_string(r.cls) << ", " << r.confidence << "\n";
}

void print_order(const OrderMatrix& m, bool asJson) {
  if (asJson) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < m.size(); ++j) row.push_back(static_cast<int>(m.at(i, j)));
      rows.push_back(std::move(row));
    }
    json j;
    j["order_matrix"] = std::move(rows);
    std::cout << j.dump() << "\n";
    return;
  }
  std::cout << "order (i before j: 1 ordered, 0 unordered, . untracked)\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::cout << i << ":";
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      auto c = m.at(i, j);
      std::cout << ' ' << (c == OrderMatrix::NotTracked ? '.' : c == OrderMatrix::Ordered ? '1' : '0');
    }
    std::cout << "\n";
  }
}

struct CheckArgs {
  std::string file;
  std::string detector = "gwcp";
  bool noCompress = false;
  bool noInactive = false;
  bool warpGranularity = false;
  bool orderMatrix = false;
  bool json = false;
};

DetectorOptions options(const CheckArgs& a) {
  DetectorOptions opt;
  opt.compress = !a.noCompress;
  opt.inactiveOpt = !a.noInactive;
  opt.warpGranularity = a.warpGranularity;
  opt.orderMatrix = a.orderMatrix;
  return opt;
}

int cmd_check(const CheckArgs& a) {
  auto kind = detector_from_string(a.detector);
  if (!kind) throw Failure{kUsage, "unknown detector '" + a.detector + "'"};
  const Trace t = load(a.file);
  if (a.orderMatrix && (*kind == DetectorKind::Lockset || t.events.size() > kOrderMatrixMaxEvents))
    throw Failure{kUsage, "--order-matrix needs gwcp or hb and at most " + std::to_string(kOrderMatrixMaxEvents) +
                              " events"};
  DetectionResult r = run_detector(*kind, t, options(a));
  for (const Diagnostic& d : r.diagnostics) std::cerr << a.file << ": warning: " << to_string(d) << "\n";
  for (const RaceReport& rep : r.reports) print_report(rep, a.json);
  if (r.order) print_order(*r.order, a.json);
  if (!a.json && r.reports.empty()) std::cout << "no races\n";
  return r.reports.empty() ? kNoRace : kRace;
}

int cmd_compare(const std::string& file, std::size_t limit, std::size_t budget, bool asJson) {
  const Trace t = load(file);
  json j;
  j["events"] = t.events.size();
  bool any = false;
  for (DetectorKind k : {DetectorKind::Gwcp, DetectorKind::Hb, DetectorKind::Lockset}) {
    std::size_t n = run_detector(k, t).reports.size();
    j[std::string(to_string(k))] = n;
    any = any || n > 0;
  }
  if (t.events.size() <= limit) {
    OracleResult o = predictable_races(t, limit, budget);
    j["oracle"] = o.pairs.size();
    if (o.incomplete) j["oracle_incomplete"] = true;
    any = any || o.racy();
  } else {
    j["oracle"] = nullptr;
  }
  if (asJson) {
    std::cout << j.dump() << "\n";
  } else {
    for (const auto& [k, v] : j.items()) std::cout << k << ": " << (v.is_null() ? "skipped" : v.dump()) << "\n";
  }
  return any ? kRace : kNoRace;
}

int cmd_oracle(const std::string& file, std::size_t limit, std::size_t budget, bool asJson) {
  const Trace t = load(file);
  OracleResult o;
  try {
    o = predictable_races(t, limit, budget);
  } catch (const std::length_error& e) {
    throw Failure{kUsage, e.what()};
  }
  if (asJson) {
    json pairs = json::array();
    for (const auto& [a, b] : o.pairs) pairs.push_back(json::array({a, b}));
    json j;
    j["pairs"] = std::move(pairs);
    j["incomplete"] = o.incomplete;
    j["states"] = o.states;
    std::cout << j.dump() << "\n";
  } else {
    for (const auto& [a, b] : o.pairs) std::cout << a << " " << b << "\n";
    std::cout << o.pairs.size() << " predictable race pair(s), " << o.states << " states"
              << (o.incomplete ? ", budget exhausted" : "") << "\n";
  }
  return o.racy() ? kRace : kNoRace;
}

int cmd_gen(const std::string& what, std::optional<std::uint64_t> seed, const std::string& out, bool list) {
  if (list) {
    for (const CorpusEntry& c : corpus()) {
      auto v = [](bool b) { return b ? "race" : "no-race"; };
      std::cout << c.name << "  gwcp=" << v(c.expected.gwcp) << " hb=" << v(c.expected.hb)
                << " lockset=" << v(c.expected.lockset) << " oracle=" << v(c.expected.oracle) << "  # "
                << c.summary << "\n";
    }
    return kNoRace;
  }
  if (what.empty()) throw Failure{kUsage, "gen needs a corpus name, 'random' or --list"};
  std::string text;
  if (what == "random") {
    text = write_trace(gen_random(seed.value_or(0)));
  } else {
    try {
      text = corpus_entry(what).text;
    } catch (const UnknownWorkload& e) {
      throw Failure{kUsage, e.what()};
    }
  }
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!(f << text)) throw Failure{kUsage, "cannot write '" + out + "'"};
  }
  return kNoRace;
}

int cmd_stats(const CheckArgs& a, bool perEvent) {
  auto kind = detector_from_string(a.detector);
  if (!kind || *kind == DetectorKind::Lockset) throw Failure{kUsage, "stats needs --detector gwcp or hb"};
  const Trace t = load(a.file);
  std::cout << stats_to_json(collect_stats(t, *kind, options(a)), perEvent) << "\n";
  return kNoRace;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace-driven race detection for GPU kernels"};
  app.require_subcommand(1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Run one detector and print its race reports");
  c->add_option("trace", check.file, "Trace file, or - for stdin")->required();
  c->add_option("--detector", check.detector, "gwcp, hb or lockset")->capture_default_str();
  c->add_flag("--no-compress", check.noCompress, "Use dense vector clocks");
  c->add_flag("--no-inactive-opt", check.noInactive, "Give every thread its own lock queues");
  c->add_flag("--warp-granularity", check.warpGranularity, "Lockset: treat a warp as one thread");
  c->add_flag("--order-matrix", check.orderMatrix, "Print the pairwise event order");
  c->add_flag("--json", check.json, "Newline-delimited JSON output");

  std::string cmpFile;
  std::size_t limit = kOracleDefaultLimit;
  std::size_t budget = kOracleDefaultBudget;
  bool cmpJson = false;
  auto* cmp = app.add_subcommand("compare", "Verdicts of every detector and the oracle");
  cmp->add_option("trace", cmpFile, "Trace file")->required();
  cmp->add_option("--limit", limit, "Oracle event cap")->capture_default_str();
  cmp->add_option("--budget", budget, "Oracle state cap")->capture_default_str();
  cmp->add_flag("--json", cmpJson, "JSON output");

  std::string oraFile;
  bool oraJson = false;
  auto* ora = app.add_subcommand("oracle", "Enumerate predictable races of a small trace");
  ora->add_option("trace", oraFile, "Trace file")->required();
  ora->add_option("--limit", limit, "Event cap")->capture_default_str();
  ora->add_option("--budget", budget, "State cap")->capture_default_str();
  ora->add_flag("--json", oraJson, "JSON output");

  std::string genWhat, genOut;
  std::optional<std::uint64_t> seed;
  bool genList = false;
  auto* gen = app.add_subcommand("gen", "Write a corpus trace or a random trace");
  gen->add_option("name", genWhat, "Corpus name or 'random'");
  gen->add_option("--seed", seed, "Seed for random traces");
  gen->add_option("-o,--output", genOut, "Output file (default stdout)");
  gen->add_flag("--list", genList, "List corpus traces with expected verdicts");

  CheckArgs stats;
  bool perEvent = false;
  auto* st = app.add_subcommand("stats", "Clock compression counters as JSON");
  st->add_option("trace", stats.file, "Trace file")->required();
  st->add_option("--detector", stats.detector, "gwcp or hb")->capture_default_str();
  st->add_flag("--no-compress", stats.noCompress, "Use dense vector clocks");
  st->add_flag("--no-inactive-opt", stats.noInactive, "Give every thread its own lock queues");
  st->add_flag("--per-event", perEvent, "Include the counters after every event");
  st->add_flag("--json", "Accepted for symmetry; output is always JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (c->parsed()) return cmd_check(check);
    if (cmp->parsed()) return cmd_compare(cmpFile, limit, budget, cmpJson);
    if (ora->parsed()) return cmd_oracle(oraFile, limit, budget, oraJson);
    if (gen->parsed()) return cmd_gen(genWhat, seed, genOut, genList);
    if (st->parsed()) return cmd_stats(stats, perEvent);
  } catch (const Failure& f) {
    std::cerr << "gpurace: " << f.message << "\n";
    return f.code;
  }
  return kUsage;
}
