#pragma once

// Static execution-path analysis. A path is a sequence of instructions
// starting at address 1; it is terminated when it ends in Stop and open
// otherwise. A line is a maximal forced chain of type-A instructions ending
// in a branch or Stop. Enumerating paths line by line and forking only at
// branches bounds the count: at budget m there are at most 2^m paths in
// total (terminated with <= m branches plus open with exactly m+1).

#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "postlb/machine.hpp"

namespace postlb {

struct Path {
  std::vector<InstrAddress> addresses;
  bool terminated = false;
  std::uint64_t branch_count = 0;

  friend bool operator==(const Path& a, const Path& b) {
    return a.terminated == b.terminated && a.addresses == b.addresses;
  }
};

// Divergent marks a type-A chain that cycles without reaching a branch or
// Stop; such a chain begins no line.
struct Line {
  bool divergent = false;
  std::vector<InstrAddress> addresses;
};

struct PathSet {
  std::uint64_t budget = 0;       // m
  std::vector<Path> terminated;   // branch_count <= m
  std::vector<Path> open;         // branch_count == m+1, each ending in a branch
};

// Follows fixed type-A successors from start until a branch or Stop is
// appended. Returns Divergent if the chain revisits an instruction.
inline Line line_from(const Program& program, InstrAddress start) {
  Line line;
  std::set<InstrAddress> visited;
  InstrAddress at = start;
  for (;;) {
    if (!visited.insert(at).second) {
      line.divergent = true;
      line.addresses.clear();
      return line;
    }
    const Instruction& ins = program.at(at);
    line.addresses.push_back(at);
    if (!ins.is_type_a()) return line;  // Branch or Stop closes the line
    at = ins.next;
  }
}

namespace detail {

inline std::uint64_t count_branches(const Program& program,
                                    const std::vector<InstrAddress>& addresses) {
  std::uint64_t n = 0;
  for (InstrAddress a : addresses)
    if (program.at(a).kind == Instruction::Kind::Branch) ++n;
  return n;
}

}  // namespace detail

// Breadth-first path construction: start with the line beginning at address 1,
// then repeatedly extend every open path by the lines beginning at its
// branch's two alternative successors. Divergent extensions are dropped. Tape
// feasibility is deliberately ignored; the enumeration over-approximates what
// any run can execute.
inline PathSet enumerate_paths(const Program& program, std::uint64_t m) {
  if (m > 30) throw std::invalid_argument("branch budget too large to enumerate");
  PathSet out;
  out.budget = m;

  std::set<std::vector<InstrAddress>> terminated;
  std::set<std::vector<InstrAddress>> frontier;  // open paths, k branches each

  Line first = line_from(program, 1);
  if (first.divergent) return out;
  if (program.at(first.addresses.back()).kind == Instruction::Kind::Stop)
    terminated.insert(first.addresses);
  else
    frontier.insert(first.addresses);

  for (std::uint64_t k = 1; k <= m && !frontier.empty(); ++k) {
    std::set<std::vector<InstrAddress>> next_frontier;
    for (const auto& path : frontier) {
      const Instruction& branch = program.at(path.back());
      for (InstrAddress target : {branch.on_marked, branch.on_blank}) {
        Line line = line_from(program, target);
        if (line.divergent) continue;
        std::vector<InstrAddress> extended = path;
        extended.insert(extended.end(), line.addresses.begin(), line.addresses.end());
        if (program.at(extended.back()).kind == Instruction::Kind::Stop)
          terminated.insert(std::move(extended));
        else
          next_frontier.insert(std::move(extended));
      }
    }
    frontier = std::move(next_frontier);
  }

  for (const auto& addresses : terminated)
    out.terminated.push_back(
        Path{addresses, true, detail::count_branches(program, addresses)});
  for (const auto& addresses : frontier)
    out.open.push_back(Path{addresses, false, detail::count_branches(program, addresses)});
  return out;
}

// Classifies an executed trace as a Path. The trace must respect the
// program's successor relation; a violation signals a simulator bug.
inline Path path_of(const std::vector<InstrAddress>& trace, const Program& program) {
  Path path;
  path.addresses = trace;
  if (trace.empty()) return path;
  if (trace.front() != 1)
    throw std::logic_error("trace does not begin at address 1");
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    const Instruction& ins = program.at(trace[i]);
    InstrAddress next = trace[i + 1];
    bool ok = false;
    switch (ins.kind) {
      case Instruction::Kind::Branch:
        ok = next == ins.on_marked || next == ins.on_blank;
        break;
      case Instruction::Kind::Stop:
        ok = false;  // nothing follows Stop
        break;
      default:
        ok = next == ins.next;
        break;
    }
    if (!ok)
      throw std::logic_error("trace violates the successor relation at step " +
                             std::to_string(i + 1));
  }
  path.terminated = program.at(trace.back()).kind == Instruction::Kind::Stop;
  path.branch_count = detail::count_branches(program, trace);
  return path;
}

struct Lemma1Row {
  std::uint64_t m = 0;
  std::uint64_t terminated_count = 0;
  std::uint64_t open_count = 0;
  std::uint64_t bound = 0;  // 2^m
  bool holds = false;
};

// Checks |terminated(<=m)| + |open(m+1)| <= 2^m for every m in 0..m_max.
inline std::vector<Lemma1Row> verify_lemma1(const Program& program, std::uint64_t m_max) {
  std::vector<Lemma1Row> rows;
  for (std::uint64_t m = 0; m <= m_max; ++m) {
    PathSet paths = enumerate_paths(program, m);
    Lemma1Row row;
    row.m = m;
    row.terminated_count = paths.terminated.size();
    row.open_count = paths.open.size();
    row.bound = std::uint64_t{1} << m;
    row.holds = row.terminated_count + row.open_count <= row.bound;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace postlb
