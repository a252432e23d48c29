#pragma once

#include <htva/fock.hpp>

#include <string>

namespace htva {

class ParseError : public InputError {
 public:
  ParseError(const std::string& msg, size_t pos)
      : InputError(msg + " at position " + std::to_string(pos)), position(pos) {}
  size_t position;
};

// Parses the element grammar.  A product of factors acts right to left on the
// vacuum: modes through apply_mode, parenthesized elements through the (-1)-product.
FockState parse_element(const std::string& text, const VertexContext& ctx);
// Inverse of parse_element on canonical states.
std::string to_expression(const FockState& s);

}  // namespace htva
