#pragma once

// Fixed-width box encoding of formula text. Every surface symbol of the
// formula syntax maps to a 5-box pattern over {b, m}; no pattern is all
// blank, so symbol boundaries survive inside otherwise-blank tape. The table
// is a frozen wire format (see the README); changing it breaks goldens.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "postlb/boolean.hpp"

namespace postlb {

class EncodingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SymbolCode {
 public:
  static constexpr std::size_t kWidth = 5;

  // Symbols in code order; symbol k gets the 5-bit pattern of k+1, most
  // significant box first, 'm' = 1.
  static constexpr std::array<char, 18> kSymbols = {
      'x', '0', '1', '2', '3', '4', '5', '6', '7', '8', '9',
      '!', '&', '|', '(', ')', 'T', 'F'};

  static const SymbolCode& standard() {
    static const SymbolCode instance;
    return instance;
  }

  std::string pattern_for(char symbol) const {
    for (std::size_t i = 0; i < kSymbols.size(); ++i)
      if (kSymbols[i] == symbol) return pattern_of_code(i + 1);
    throw EncodingError(std::string("symbol '") + symbol + "' is not in the alphabet");
  }

  std::optional<char> symbol_for(std::string_view chunk) const {
    if (chunk.size() != kWidth) return std::nullopt;
    std::size_t code = 0;
    for (char c : chunk) {
      if (c != 'b' && c != 'm') return std::nullopt;
      code = (code << 1) | (c == 'm' ? 1 : 0);
    }
    if (code < 1 || code > kSymbols.size()) return std::nullopt;
    return kSymbols[code - 1];
  }

 private:
  SymbolCode() = default;

  static std::string pattern_of_code(std::size_t code) {
    std::string p(kWidth, 'b');
    for (std::size_t i = 0; i < kWidth; ++i)
      if ((code >> (kWidth - 1 - i)) & 1) p[i] = 'm';
    return p;
  }
};

// Serializes the formula's compact text symbol by symbol; 5 boxes per symbol.
inline std::string encode_formula(const Formula& formula) {
  const SymbolCode& code = SymbolCode::standard();
  std::string boxes;
  for (char c : to_text(formula)) boxes += code.pattern_for(c);
  return boxes;
}

inline std::string decode_text(std::string_view boxes) {
  if (boxes.size() % SymbolCode::kWidth != 0)
    throw EncodingError("box string length " + std::to_string(boxes.size()) +
                        " is not a multiple of the symbol width");
  const SymbolCode& code = SymbolCode::standard();
  std::string text;
  for (std::size_t i = 0; i < boxes.size(); i += SymbolCode::kWidth) {
    std::string_view chunk = boxes.substr(i, SymbolCode::kWidth);
    std::optional<char> symbol = code.symbol_for(chunk);
    if (!symbol)
      throw EncodingError("unknown pattern '" + std::string(chunk) + "' at box " +
                          std::to_string(i));
    text += *symbol;
  }
  return text;
}

// Exact inverse of encode_formula.
inline Formula decode_formula(std::string_view boxes) {
  return parse_formula(decode_text(boxes));
}

}  // namespace postlb
