#pragma once

// Deterministic random generators for programs, formulas, conventions, and
// inputs. Bounded draws go through Rng::below rather than
// std::uniform_int_distribution so that a seed reproduces the same stream on
// every platform.

#include <cstdint>
#include <random>
#include <string>

#include "postlb/boolean.hpp"
#include "postlb/convention.hpp"
#include "postlb/machine.hpp"

namespace postlb {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform-ish draw in [0, n); the modulo bias is irrelevant at our scales.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool chance(unsigned numerator, unsigned denominator) {
    return below(denominator) < numerator;
  }

 private:
  std::mt19937_64 engine_;
};

// Any target-valid program is a valid program; the kind weights just bias
// the mix toward branching and movement so runs do something interesting.
inline Program random_program(Rng& rng, unsigned max_instructions) {
  unsigned n = static_cast<unsigned>(rng.range(1, max_instructions));
  std::vector<Instruction> instructions;
  instructions.reserve(n);
  auto target = [&]() { return static_cast<InstrAddress>(rng.range(1, n)); };
  for (unsigned i = 0; i < n; ++i) {
    switch (rng.below(10)) {
      case 0: instructions.push_back(Instruction::stop()); break;
      case 1: instructions.push_back(Instruction::mark(target())); break;
      case 2: instructions.push_back(Instruction::unmark(target())); break;
      case 3:
      case 4: instructions.push_back(Instruction::move_right(target())); break;
      case 5:
      case 6: instructions.push_back(Instruction::move_left(target())); break;
      default: instructions.push_back(Instruction::branch(target(), target())); break;
    }
  }
  return Program(std::move(instructions));
}

inline Formula random_formula(Rng& rng, unsigned arity, unsigned max_depth) {
  if (max_depth == 0 || rng.chance(1, 5)) {
    if (rng.chance(1, 6)) return Formula::constant(rng.chance(1, 2));
    return Formula::var(static_cast<unsigned>(rng.range(1, arity)));
  }
  switch (rng.below(3)) {
    case 0: return Formula::negation(random_formula(rng, arity, max_depth - 1));
    case 1:
      return Formula::conjunction(random_formula(rng, arity, max_depth - 1),
                                  random_formula(rng, arity, max_depth - 1));
    default:
      return Formula::disjunction(random_formula(rng, arity, max_depth - 1),
                                  random_formula(rng, arity, max_depth - 1));
  }
}

inline std::string random_part(Rng& rng, unsigned max_len) {
  unsigned len = static_cast<unsigned>(rng.range(1, max_len));
  std::string part(len, 'b');
  for (char& c : part)
    if (rng.chance(1, 2)) c = 'm';
  return part;
}

inline Convention random_convention(Rng& rng) {
  Convention conv;
  conv.split = rng.range(-5, 5);
  conv.first_anchor = conv.split - 1 - rng.range(0, 3);
  conv.second_anchor = conv.split + rng.range(0, 3);
  conv.initial_head = rng.range(-8, 8);
  conv.answer_box = rng.range(-8, 8);
  conv.answer_marked_means = rng.chance(1, 2) ? Verdict::Accept : Verdict::Reject;
  return conv;
}

inline SymbolSpace random_space(Rng& rng, std::int64_t radius, unsigned max_marks) {
  SymbolSpace space;
  unsigned marks = static_cast<unsigned>(rng.range(0, max_marks));
  for (unsigned i = 0; i < marks; ++i) space.mark(rng.range(-radius, radius));
  return space;
}

}  // namespace postlb
