#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "apeq/sums.hpp"

namespace apeq {

/// Source-position-carrying parse failure (1-based line and column).
struct ParseError : std::runtime_error {
  int line, column;
  ParseError(const std::string& what, int line_, int column_)
      : std::runtime_error(what + " at line " + std::to_string(line_) +
                           ", column " + std::to_string(column_)),
        line(line_),
        column(column_) {}
};

struct ParseWarning {
  int line = 0;
  std::string message;
};

/// Parsed source: one symbol table shared by all sums, sums in declaration
/// order with unique names.
struct Workspace {
  SymbolTablePtr table;
  std::vector<ExponentialSum> sums;
  std::vector<ParseWarning> warnings;

  const ExponentialSum* find(const std::string& name) const;
};

/// Grammar ('#' starts a line comment, whitespace is insignificant):
///   file    := stmt*
///   stmt    := "symbol" NAME "=" DECIMAL ";"
///            | "sum" NAME "=" term ("+" term)* ";"
///   term    := coeff "*" "exp" "(" lin "*" "s" ")"
///   coeff   := "(" RAT "," RAT ")"          exact (modulus, phase in turns)
///            | "<" DECIMAL "," DECIMAL ">"  numeric (re, im)
///   lin     := part (("+"|"-") part)*
///   part    := RAT ("*" NAME)?
/// Phases are entered in turns (angle = 2*pi*turns), keeping the language
/// entirely rational. Term declaration order is preserved.
Workspace parse(const std::string& source);

/// Syntactic normal form; parse(pretty_print(ws)) reproduces ws.
std::string pretty_print(const Workspace& ws);

}  // namespace apeq
