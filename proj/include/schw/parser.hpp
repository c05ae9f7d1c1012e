#pragma once

#include <string_view>

#include "schw/expr.hpp"

namespace schw {

// Grammar:
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := atom ('^' ['-'] integer)? | '-' factor
//   atom    := 'z' | number | number'i' | 'i' | 'pi' | '(' literal ')' | '(' expr ')'
//            | func '(' expr ')' | 'compose' '(' expr ',' expr ')' | builtin
//   func    := exp | log | sin | cos | tan | sqrt | integral
//   builtin := koebe | identity | mobius '(' c ',' c ',' c ',' c ')' | tan_scaled '(' c ')'
//   literal := ['-'] number [('+'|'-') number 'i'] | ['-'] number 'i'
// Builtin arguments `c` are expressions free of z. A parenthesised literal
// is a single constant node, so printed complex constants reparse exactly.

/// Throws ParseError (with byte offset) on malformed text, unknown
/// identifiers, non-constant builtin arguments, or a degenerate mobius.
AnalyticExpr parse(std::string_view text);

/// Parses a constant expression such as "0.3+0.1i" or "-pi/4" to its value.
Complex parse_complex(std::string_view text);

} // namespace schw
