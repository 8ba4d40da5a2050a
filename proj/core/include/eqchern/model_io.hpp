#pragma once

// Plain-text model files.
//
//   name = c-plane
//
//   [coordinates]          # name = kind role weight
//   z  = complex base 1
//   xi = complex fiber 1
//
//   [bundle E]
//   weights  = 0 1
//   parities = even odd
//
//   [bundle W]
//   weights  = 0 1
//   parities = even odd
//
//   [symbol]               # one row per line, entries separated by ','
//   row = 0, conj(z + i*xi)
//   row = z + i*xi, 0
//
//   [superconnection]      # optional: `odd = homotopy` or rows over E ⊗ W
//   odd = homotopy
//
//   [options]
//   tangent_weights = 1
//   symbol_order = 1
//   orientation = auto
//
// Entries use complex literals (2, 0.5, 3i, i), symbol names, generator
// names (dz, dtheta), + - * ^, parentheses and conj(...). '#' starts a comment.

#include <string>
#include <string_view>

#include "eqchern/geometry.hpp"

namespace eqchern {

/// Parses an expression over the algebra's symbols and generators.
/// Errors report columns relative to the start of `text`.
SymbolicForm parse_form(std::string_view text, const AlgebraPtr& algebra);

/// parse_form restricted to form degree 0.
Poly parse_polynomial(std::string_view text, const AlgebraPtr& algebra);

ActionModel parse_model(std::string_view text);

/// Reads and parses a file; I/O failures raise InvalidArgument.
ActionModel load_model(const std::string& path);

}  // namespace eqchern
