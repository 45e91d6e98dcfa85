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

#include "gpurace/trace.hpp"

#include <bit>
#include <charconv>
#include <optional>
#include <sstream>

namespace gpurace {

std::string to_string(const ThreadId& t) {
  return std::to_string(t.block) + "." + std::to_string(t.warp) + "." + std::to_string(t.lane);
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Read: return "rd";
    case EventKind::Write: return "wr";
    case EventKind::Acquire: return "acq";
    case EventKind::Release: return "rel";
    case EventKind::Barrier: return "bar";
    case EventKind::Fence: return "fence";
    case EventKind::End: return "end";
  }
  return "?";
}

std::string to_string(const Diagnostic& d) {
  return "event " + std::to_string(d.event) + ": " + d.message;
}

Event Event::read(ThreadId t, Location l, std::uint64_t instr) {
  Event e;
  e.kind = EventKind::Read;
  e.tid = t;
  e.loc = l;
  e.instr = instr;
  return e;
}

Event Event::write(ThreadId t, Location l, std::uint64_t instr) {
  Event e = read(t, l, instr);
  e.kind = EventKind::Write;
  return e;
}

Event Event::atomic_read(ThreadId t, Location l, Scope s, std::uint64_t instr) {
  Event e = read(t, l, instr);
  e.atomic = true;
  e.scope = s;
  return e;
}

Event Event::atomic_write(ThreadId t, Location l, Scope s, std::uint64_t instr) {
  Event e = write(t, l, instr);
  e.atomic = true;
  e.scope = s;
  return e;
}

Event Event::acquire(ThreadId t, LockId l, Scope s) {
  Event e;
  e.kind = EventKind::Acquire;
  e.tid = t;
  e.lock = l;
  e.scope = s;
  return e;
}

Event Event::release(ThreadId t, LockId l, Scope s) {
  Event e = acquire(t, l, s);
  e.kind = EventKind::Release;
  return e;
}

Event Event::fence(ThreadId t, Scope s) {
  Event e;
  e.kind = EventKind::Fence;
  e.tid = t;
  e.scope = s;
  return e;
}

Event Event::end(ThreadId t) {
  Event e;
  e.kind = EventKind::End;
  e.tid = t;
  return e;
}

Event Event::block_barrier(std::uint32_t block) {
  Event e;
  e.kind = EventKind::Barrier;
  e.barrier = BarrierKind::Block;
  e.barBlock = block;
  return e;
}

Event Event::warp_barrier(std::uint32_t block, std::uint32_t warp, LaneMask mask) {
  Event e = block_barrier(block);
  e.barrier = BarrierKind::Warp;
  e.barWarp = warp;
  e.mask = mask;
  return e;
}

bool has_lock_events(const Trace& t) {
  for (const auto& e : t.events)
    if (e.kind == EventKind::Acquire || e.kind == EventKind::Release) return true;
  return false;
}

std::vector<std::vector<std::uint32_t>> barrier_participants(const Trace& t) {
  const GridShape& g = t.config;
  std::vector<bool> ended(g.thread_count(), false);
  std::vector<std::vector<std::uint32_t>> out(t.events.size());
  for (std::size_t i = 0; i < t.events.size(); ++i) {
    const Event& e = t.events[i];
    if (e.kind == EventKind::End) {
      if (g.contains(e.tid)) ended[g.flat(e.tid)] = true;
      continue;
    }
    if (e.kind != EventKind::Barrier || e.barBlock >= g.blocks) continue;
    auto& parts = out[i];
    if (e.barrier == BarrierKind::Warp) {
      if (e.barWarp >= g.warpsPerBlock) continue;
      for (std::uint32_t lane = 0; lane < g.warpSize; ++lane)
        if (e.mask >> lane & 1) parts.push_back(g.flat(ThreadId{e.barBlock, e.barWarp, lane}));
    } else if (!e.warpMasks.empty()) {
      for (std::uint32_t w = 0; w < g.warpsPerBlock && w < e.warpMasks.size(); ++w)
        for (std::uint32_t lane = 0; lane < g.warpSize; ++lane)
          if (e.warpMasks[w] >> lane & 1) parts.push_back(g.flat(ThreadId{e.barBlock, w, lane}));
    } else {
      for (std::uint32_t w = 0; w < g.warpsPerBlock; ++w)
        for (std::uint32_t lane = 0; lane < g.warpSize; ++lane) {
          std::uint32_t f = g.flat(ThreadId{e.barBlock, w, lane});
          if (!ended[f]) parts.push_back(f);
        }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

class LineParser {
 public:
  explicit LineParser(std::size_t line) : line_(line) {}

  [[noreturn]] void fail(const std::string& what) const { throw TraceError(line_, what); }

  std::uint64_t dec(std::string_view s, const char* what) const {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 10);
    if (ec != std::errc() || p != s.data() + s.size())
      fail(std::string("bad ") + what + " '" + std::string(s) + "'");
    return v;
  }

  std::uint32_t dec32(std::string_view s, const char* what) const {
    std::uint64_t v = dec(s, what);
    if (v > std::numeric_limits<std::uint32_t>::max()) fail(std::string(what) + " out of range");
    return static_cast<std::uint32_t>(v);
  }

  // Accepts 0x-prefixed or bare hex, and 0b-prefixed binary.
  std::uint64_t hex(std::string_view s, const char* what) const {
    int base = 16;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
      s.remove_prefix(2);
    } else if (s.size() > 2 && s[0] == '0' && (s[1] == 'b' || s[1] == 'B')) {
      s.remove_prefix(2);
      base = 2;
    }
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size())
      fail(std::string("bad ") + what + " '" + std::string(s) + "'");
    return v;
  }

  Scope scope(std::string_view s, std::uint32_t block) const {
    if (s == "block") return Scope::of_block(block);
    if (s == "device" || s == "system") return Scope::device();
    fail("bad scope '" + std::string(s) + "'");
  }

  Location location(std::string_view s, std::uint32_t block) const {
    auto colon = s.find(':');
    if (colon == std::string_view::npos || colon == 0) fail("bad location '" + std::string(s) + "'");
    std::string_view sp = s.substr(0, colon);
    std::uint64_t addr = hex(s.substr(colon + 1), "address");
    if (sp == "g") return Location::global(addr);
    if (sp[0] == 's') {
      if (sp.size() > 1) {
        std::uint32_t owner = dec32(sp.substr(1), "shared block");
        if (owner != block)
          fail("shared location of block " + std::to_string(owner) + " used by block " +
               std::to_string(block));
      }
      return Location::shared(block, addr);
    }
    fail("bad memory space '" + std::string(sp) + "'");
  }

  ThreadId thread(std::string_view s, const GridShape& g) const {
    auto d1 = s.find('.');
    auto d2 = d1 == std::string_view::npos ? d1 : s.find('.', d1 + 1);
    if (d2 == std::string_view::npos) fail("bad thread id '" + std::string(s) + "'");
    ThreadId t{dec32(s.substr(0, d1), "block"), dec32(s.substr(d1 + 1, d2 - d1 - 1), "warp"),
               dec32(s.substr(d2 + 1), "lane")};
    check_thread(t, g);
    return t;
  }

  void check_thread(const ThreadId& t, const GridShape& g) const {
    if (t.lane >= g.warpSize)
      fail("lane " + std::to_string(t.lane) + " >= warp size " + std::to_string(g.warpSize));
    if (t.block >= g.blocks) fail("block " + std::to_string(t.block) + " out of range");
    if (t.warp >= g.warpsPerBlock) fail("warp " + std::to_string(t.warp) + " out of range");
  }

  void check_mask(LaneMask m, const GridShape& g) const {
    if (m & ~g.full_mask()) fail("lane >= warp size in mask");
  }

 private:
  std::size_t line_;
};

struct AccessSuffix {
  bool atomic = false;
  Scope scope{};
  std::uint64_t instr = 0;
};

AccessSuffix parse_suffix(const LineParser& p, const std::vector<std::string_view>& tok,
                          std::size_t i, std::uint32_t block) {
  AccessSuffix s;
  while (i < tok.size()) {
    if (tok[i] == "atomic") {
      if (i + 1 >= tok.size()) p.fail("atomic needs a scope");
      s.atomic = true;
      s.scope = p.scope(tok[i + 1], block);
      i += 2;
    } else if (tok[i] == "instr") {
      if (i + 1 >= tok.size()) p.fail("instr needs a value");
      s.instr = p.dec(tok[i + 1], "instr");
      i += 2;
    } else {
      p.fail("unexpected token '" + std::string(tok[i]) + "'");
    }
  }
  return s;
}

GridShape parse_config(const LineParser& p, const std::vector<std::string_view>& tok) {
  GridShape g;
  bool seen[3] = {false, false, false};
  for (std::size_t i = 1; i < tok.size(); ++i) {
    auto eq = tok[i].find('=');
    if (eq == std::string_view::npos) p.fail("bad config entry '" + std::string(tok[i]) + "'");
    std::string_view k = tok[i].substr(0, eq);
    std::uint32_t v = p.dec32(tok[i].substr(eq + 1), "config value");
    if (v == 0) p.fail("config value must be positive");
    if (k == "blocks") {
      g.blocks = v;
      seen[0] = true;
    } else if (k == "warps") {
      g.warpsPerBlock = v;
      seen[1] = true;
    } else if (k == "lanes") {
      if (v > kMaxWarpSize) p.fail("lanes must be <= 64");
      g.warpSize = v;
      seen[2] = true;
    } else {
      p.fail("unknown config key '" + std::string(k) + "'");
    }
  }
  if (!(seen[0] && seen[1] && seen[2])) p.fail("config needs blocks, warps and lanes");
  return g;
}

}  // namespace

Trace parse_trace(std::istream& in) {
  Trace t;
  bool haveConfig = false;
  std::uint32_t nextRecord = 0;
  std::string raw;
  std::size_t lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    std::string_view line(raw);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    LineParser p(lineNo);
    const GridShape& g = t.config;

    if (!haveConfig) {
      if (tok[0] != "config") p.fail("first line must be a config line");
      t.config = parse_config(p, tok);
      haveConfig = true;
      continue;
    }
    if (tok[0] == "config") p.fail("duplicate config line");

    if (tok[0] == "bar") {
      if (tok.size() >= 3 && tok[1] == "block") {
        Event e = Event::block_barrier(p.dec32(tok[2], "block"));
        if (e.barBlock >= g.blocks) p.fail("block out of range");
        for (std::size_t i = 3; i < tok.size(); ++i) {
          LaneMask m = p.hex(tok[i], "mask");
          p.check_mask(m, g);
          e.warpMasks.push_back(m);
        }
        if (e.warpMasks.size() > g.warpsPerBlock) p.fail("too many warp masks");
        t.events.push_back(std::move(e));
      } else if (tok.size() == 5 && tok[1] == "warp") {
        Event e = Event::warp_barrier(p.dec32(tok[2], "block"), p.dec32(tok[3], "warp"),
                                      p.hex(tok[4], "mask"));
        p.check_thread(ThreadId{e.barBlock, e.barWarp, 0}, g);
        p.check_mask(e.mask, g);
        t.events.push_back(std::move(e));
      } else {
        p.fail("bad barrier line");
      }
      continue;
    }

    if (tok[0] == "wacc") {
      if (tok.size() < 6) p.fail("bad wacc line");
      std::uint32_t b = p.dec32(tok[1], "block");
      std::uint32_t w = p.dec32(tok[2], "warp");
      p.check_thread(ThreadId{b, w, 0}, g);
      LaneMask mask = p.hex(tok[3], "mask");
      p.check_mask(mask, g);
      EventKind kind;
      if (tok[4] == "rd")
        kind = EventKind::Read;
      else if (tok[4] == "wr")
        kind = EventKind::Write;
      else
        p.fail("wacc needs rd or wr");
      std::vector<Location> locs;
      std::size_t i = 5;
      for (; i < tok.size() && tok[i] != "atomic" && tok[i] != "instr"; ++i) {
        std::string_view list = tok[i];
        while (!list.empty()) {
          auto comma = list.find(',');
          std::string_view one = list.substr(0, comma);
          if (!one.empty()) locs.push_back(p.location(one, b));
          if (comma == std::string_view::npos) break;
          list.remove_prefix(comma + 1);
        }
      }
      if (locs.size() != static_cast<std::size_t>(std::popcount(mask)))
        p.fail("wacc needs one address per active lane");
      AccessSuffix s = parse_suffix(p, tok, i, b);
      std::size_t k = 0;
      for (std::uint32_t lane = 0; lane < g.warpSize; ++lane) {
        if (!(mask >> lane & 1)) continue;
        Event e = Event::read(ThreadId{b, w, lane}, locs[k++], s.instr);
        e.kind = kind;
        e.atomic = s.atomic;
        if (s.atomic) e.scope = s.scope;
        e.record = nextRecord;
        t.events.push_back(std::move(e));
      }
      ++nextRecord;
      continue;
    }

    if (tok.size() < 2) p.fail("bad event line");
    ThreadId tid = p.thread(tok[0], g);
    std::string_view op = tok[1];
    if (op == "rd" || op == "wr") {
      if (tok.size() < 3) p.fail("access needs a location");
      Location loc = p.location(tok[2], tid.block);
      AccessSuffix s = parse_suffix(p, tok, 3, tid.block);
      Event e = op == "rd" ? Event::read(tid, loc, s.instr) : Event::write(tid, loc, s.instr);
      e.atomic = s.atomic;
      if (s.atomic) e.scope = s.scope;
      t.events.push_back(std::move(e));
    } else if (op == "acq" || op == "rel") {
      if (tok.size() != 4) p.fail("lock operation needs a lock and a scope");
      LockId l = p.hex(tok[2], "lock");
      Scope s = p.scope(tok[3], tid.block);
      t.events.push_back(op == "acq" ? Event::acquire(tid, l, s) : Event::release(tid, l, s));
    } else if (op == "fence") {
      if (tok.size() != 3) p.fail("fence needs a scope");
      t.events.push_back(Event::fence(tid, p.scope(tok[2], tid.block)));
    } else if (op == "end") {
      if (tok.size() != 2) p.fail("end takes no arguments");
      t.events.push_back(Event::end(tid));
    } else {
      p.fail("unknown operation '" + std::string(op) + "'");
    }
  }
  if (!haveConfig) throw TraceError(lineNo, "missing config line");
  return t;
}

Trace parse_trace(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_trace(in);
}

// ---------------------------------------------------------------------------
// Writing

namespace {

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}

std::string loc_text(const Location& l) {
  return (l.space == Space::Global ? "g:" : "s:") + hex(l.addr);
}

std::string scope_text(const Scope& s) { return s.is_device() ? "device" : "block"; }

std::string access_suffix(const Event& e) {
  std::string s;
  if (e.atomic) s += " atomic " + scope_text(e.scope);
  if (e.instr != 0) s += " instr " + std::to_string(e.instr);
  return s;
}

}  // namespace

std::string write_trace(const Trace& t) {
  std::ostringstream os;
  os << "config blocks=" << t.config.blocks << " warps=" << t.config.warpsPerBlock
     << " lanes=" << t.config.warpSize << "\n";
  for (std::size_t i = 0; i < t.events.size(); ++i) {
    const Event& e = t.events[i];
    switch (e.kind) {
      case EventKind::Read:
      case EventKind::Write: {
        if (e.record == kNoRecord) {
          os << to_string(e.tid) << ' ' << to_string(e.kind) << ' ' << loc_text(e.loc)
             << access_suffix(e) << "\n";
          break;
        }
        std::size_t j = i;
        LaneMask mask = 0;
        std::string addrs;
        while (j < t.events.size() && t.events[j].record == e.record) {
          const Event& f = t.events[j];
          mask |= LaneMask{1} << f.tid.lane;
          if (!addrs.empty()) addrs += ',';
          addrs += loc_text(f.loc);
          ++j;
        }
        os << "wacc " << e.tid.block << ' ' << e.tid.warp << ' ' << hex(mask) << ' '
           << to_string(e.kind) << ' ' << addrs << access_suffix(e) << "\n";
        i = j - 1;
        break;
      }
      case EventKind::Acquire:
      case EventKind::Release:
        os << to_string(e.tid) << ' ' << to_string(e.kind) << ' ' << hex(e.lock) << ' '
           << scope_text(e.scope) << "\n";
        break;
      case EventKind::Fence:
        os << to_string(e.tid) << " fence " << scope_text(e.scope) << "\n";
        break;
      case EventKind::End:
        os << to_string(e.tid) << " end\n";
        break;
      case EventKind::Barrier:
        if (e.barrier == BarrierKind::Warp) {
          os << "bar warp " << e.barBlock << ' ' << e.barWarp << ' ' << hex(e.mask) << "\n";
        } else {
          os << "bar block " << e.barBlock;
          for (LaneMask m : e.warpMasks) os << ' ' << hex(m);
          os << "\n";
        }
        break;
    }
  }
  return os.str();
}

}  // namespace gpurace
