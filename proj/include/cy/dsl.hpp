// Text form of affine torus maps: "r: (z2, -z1, z3 + 1/4)", "(z1 + tau/2, z2 + (tau+1)/2, -z3)".
// Periods are written τ, τ', τ1 ... or in ASCII tau, tau', tau1 ...; a period may only
// appear in the component of its own factor.
#pragma once

#include "cy/torus.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace cy {

struct ParseError : std::invalid_argument {
  std::size_t column;  // 1-based offset into the parsed text
  ParseError(const std::string& msg, std::size_t col) : std::invalid_argument(msg), column(col) {}
};

struct NamedMap {
  std::string name;  // empty when the text has no "name:" prefix
  AffineTorusMap map;
};

AffineTorusMap parse_map(const TorusShape& shape, const std::string& text);
NamedMap parse_named_map(const TorusShape& shape, const std::string& text);
// Maps separated by ';'.
std::vector<NamedMap> parse_map_list(const TorusShape& shape, const std::string& text);
// Constant a + b*tau for the factor with the given period tag.
FactorValue parse_factor_value(const std::string& text, const std::string& tag);

}  // namespace cy
