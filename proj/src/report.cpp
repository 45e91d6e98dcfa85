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

#include "gpurace/report.hpp"

#include <sstream>

#include "json.hpp"

namespace gpurace {

std::string_view to_string(RaceKind k) {
  switch (k) {
    case RaceKind::WW: return "ww";
    case RaceKind::WR: return "wr";
    case RaceKind::RW: return "rw";
  }
  return "?";
}

std::string_view to_string(RaceClass c) {
  switch (c) {
    case RaceClass::Intrawarp: return "intrawarp";
    case RaceClass::Interwarp: return "interwarp";
    case RaceClass::Interblock: return "interblock";
  }
  return "?";
}

RaceClass classify(const ThreadId& a, const ThreadId& b) {
  if (a.same_warp(b)) return RaceClass::Intrawarp;
  if (a.block == b.block) return RaceClass::Interwarp;
  return RaceClass::Interblock;
}

namespace {

nlohmann::ordered_json access_json(const AccessRef& a) {
  nlohmann::ordered_json j;
  j["event"] = a.event;
  j["tid"] = to_string(a.tid);
  j["instr"] = a.instr;
  return j;
}

}  // namespace

std::string to_json_line(const RaceReport& r) {
  nlohmann::ordered_json j;
  j["detector"] = r.detector;
  j["kind"] = std::string(to_string(r.kind));
  nlohmann::ordered_json loc;
  loc["space"] = r.loc.space == Space::Global ? "global" : "shared";
  if (r.loc.space == Space::Shared) loc["block"] = r.loc.block;
  std::ostringstream addr;
  addr << "0x" << std::hex << r.loc.addr;
  loc["addr"] = addr.str();
  j["location"] = loc;
  j["prior"] = access_json(r.prior);
  j["current"] = access_json(r.current);
  j["class"] = std::string(to_string(r.cls));
  j["confidence"] = r.confidence;
  return j.dump();
}

void RaceLog::report(RaceKind kind, const Location& loc, const AccessRef& prior,
                     const AccessRef& current) {
  if (!seen_.emplace(loc, prior.instr, current.instr).second) return;
  std::string confidence = approximate_ ? "approximate" : reports_.empty() ? "first-race" : "post-race";
  reports_.push_back(RaceReport{detector_, kind, loc, prior, current, classify(prior.tid, current.tid),
                                std::move(confidence)});
}

}  // namespace gpurace
