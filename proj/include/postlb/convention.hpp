#pragma once

// Symbol-space conventions for bipartite inputs: how the tape is split into
// two partitions, where each part of an input is placed, where the head
// starts, and how the yes/no answer is read back after a halt.

#include <cstdint>
#include <string>

#include "postlb/machine.hpp"

namespace postlb {

enum class PartitionId { First, Second };
enum class Verdict { Accept, Reject };

inline const char* to_string(Verdict v) {
  return v == Verdict::Accept ? "accept" : "reject";
}

// Two box-state strings over {b, m}; 'b' is a blank box, 'm' a marked one.
struct BipartiteInput {
  std::string first;
  std::string second;
};

inline void validate_part(const std::string& part, const char* which) {
  if (part.empty())
    throw std::invalid_argument(std::string(which) + " part must be non-empty");
  for (char c : part)
    if (c != 'b' && c != 'm')
      throw std::invalid_argument(std::string(which) + " part contains '" +
                                  std::string(1, c) + "' (expected 'b' or 'm')");
}

inline void validate(const BipartiteInput& input) {
  validate_part(input.first, "first");
  validate_part(input.second, "second");
}

// The first partition is every address < split, the second every address
// >= split. The first part of an input is laid right-aligned at first_anchor,
// the second left-aligned at second_anchor, so parts of any length stay
// inside their partitions. The answer is the state of answer_box after a
// halt; answer_marked_means says which verdict a mark encodes.
struct Convention {
  Address initial_head = 0;
  Address split = 0;
  Address first_anchor = -1;
  Address second_anchor = 0;
  Address answer_box = 0;
  Verdict answer_marked_means = Verdict::Accept;
};

inline void validate(const Convention& conv) {
  if (conv.first_anchor >= conv.split)
    throw std::invalid_argument("first_anchor must lie in the first partition (< split)");
  if (conv.second_anchor < conv.split)
    throw std::invalid_argument("second_anchor must lie in the second partition (>= split)");
}

inline PartitionId partition_of(const Convention& conv, Address address) {
  return address < conv.split ? PartitionId::First : PartitionId::Second;
}

// Places a bipartite input on an otherwise blank tape. The first part ends at
// first_anchor and grows leftward; the second starts at second_anchor and
// grows rightward.
inline SymbolSpace layout(const BipartiteInput& input, const Convention& conv) {
  validate(input);
  validate(conv);
  SymbolSpace space;
  Address first_start = conv.first_anchor - static_cast<Address>(input.first.size()) + 1;
  for (std::size_t i = 0; i < input.first.size(); ++i)
    if (input.first[i] == 'm') space.mark(first_start + static_cast<Address>(i));
  for (std::size_t i = 0; i < input.second.size(); ++i)
    if (input.second[i] == 'm') space.mark(conv.second_anchor + static_cast<Address>(i));
  return space;
}

inline Verdict read_verdict(const Convention& conv, const SymbolSpace& space) {
  bool marked = space.is_marked(conv.answer_box);
  if (marked) return conv.answer_marked_means;
  return conv.answer_marked_means == Verdict::Accept ? Verdict::Reject : Verdict::Accept;
}

// --- file formats ---------------------------------------------------------
//
// Bipartite input: two lines, "first: <b/m string>" and "second: <...>".
// Convention: key=value lines for the six fields.

inline BipartiteInput parse_bipartite_input(const std::string& text) {
  BipartiteInput input;
  bool have_first = false, have_second = false;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string raw = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string line = detail::trim(raw);
    if (line.empty()) continue;
    std::size_t colon = line.find(':');
    if (colon == std::string::npos) throw ParseError(line_no, "expected 'first:' or 'second:'");
    std::string key = detail::trim(line.substr(0, colon));
    std::string value = detail::trim(line.substr(colon + 1));
    if (key == "first" && !have_first) {
      input.first = value;
      have_first = true;
    } else if (key == "second" && !have_second) {
      input.second = value;
      have_second = true;
    } else {
      throw ParseError(line_no, "unexpected or duplicate key '" + key + "'");
    }
  }
  if (!have_first || !have_second)
    throw ParseError(line_no ? line_no : 1, "input needs both 'first:' and 'second:' lines");
  validate(input);
  return input;
}

inline std::string bipartite_input_to_text(const BipartiteInput& input) {
  return "first: " + input.first + "\nsecond: " + input.second + "\n";
}

inline Convention parse_convention(const std::string& text) {
  Convention conv;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string raw = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string line = detail::trim(raw);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key=value'");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));

    auto as_address = [&]() -> Address {
      try {
        std::size_t used = 0;
        long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return static_cast<Address>(v);
      } catch (const std::exception&) {
        throw ParseError(line_no, "invalid address '" + value + "'");
      }
    };

    if (key == "initial_head") conv.initial_head = as_address();
    else if (key == "split") conv.split = as_address();
    else if (key == "first_anchor") conv.first_anchor = as_address();
    else if (key == "second_anchor") conv.second_anchor = as_address();
    else if (key == "answer_box") conv.answer_box = as_address();
    else if (key == "answer_marked_means") {
      if (value == "accept" || value == "Accept") conv.answer_marked_means = Verdict::Accept;
      else if (value == "reject" || value == "Reject") conv.answer_marked_means = Verdict::Reject;
      else throw ParseError(line_no, "answer_marked_means must be accept or reject");
    } else {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
  }
  validate(conv);
  return conv;
}

inline std::string convention_to_text(const Convention& conv) {
  std::string out;
  out += "initial_head=" + std::to_string(conv.initial_head) + "\n";
  out += "split=" + std::to_string(conv.split) + "\n";
  out += "first_anchor=" + std::to_string(conv.first_anchor) + "\n";
  out += "second_anchor=" + std::to_string(conv.second_anchor) + "\n";
  out += "answer_box=" + std::to_string(conv.answer_box) + "\n";
  out += std::string("answer_marked_means=") +
         (conv.answer_marked_means == Verdict::Accept ? "accept" : "reject") + "\n";
  return out;
}

}  // namespace postlb
