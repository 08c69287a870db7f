#pragma once

#include <stdexcept>
#include <string>

#include "stablekit/polynomial.hpp"

namespace stablekit {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// Parses expressions over z1..z4 with + - * / ^, parentheses, rational literals,
// decimal literals and the imaginary unit i. Division is only allowed by constants.
// The result has max(min_vars, highest variable index used) variables.
Poly parse_poly(const std::string& text, int min_vars = 2);

// Canonical text form, terms in descending graded-lex order.
std::string to_string(const Poly& p);

}  // namespace stablekit
