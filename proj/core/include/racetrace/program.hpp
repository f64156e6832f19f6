#pragma once

// A small actor language: spawn, asynchronous send and selective receive.
//
//   program { main proc1
//     def proc1() { P2 = spawn proc2(); send {val,1} to P2 }
//     def proc2() { receive { {val,M} when M > 0 -> {ok,M}; error -> error } } }
//
// Statements are separated by `;`, statements inside a receive clause by `,`.
// An empty clause body is written `.`. Expressions are ground terms, bound
// variables, tuples and lists of expressions, and `self()`.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "racetrace/terms.hpp"

namespace racetrace {

struct Expr {
  enum class Kind { literal, variable, tuple, list, self };

  Kind kind = Kind::literal;
  std::optional<Term> literal;
  std::string variable;
  std::vector<Expr> items;

  friend bool operator==(const Expr&, const Expr&) = default;
};

struct Stmt;
using Body = std::vector<Stmt>;

struct ReceiveClause {
  Clause head;
  Body body;

  friend bool operator==(const ReceiveClause&, const ReceiveClause&) = default;
};

struct Stmt {
  enum class Kind { value, spawn, send, receive };

  Kind kind = Kind::value;
  std::optional<std::string> bind;  ///< `X = ...`
  Expr value;                       ///< value statement, or the message of a send
  Expr target;                      ///< send target
  std::string function;             ///< spawn
  std::vector<Expr> args;           ///< spawn
  std::string constraint;           ///< receive: constraint id, assigned in source order
  std::vector<ReceiveClause> clauses;

  friend bool operator==(const Stmt&, const Stmt&) = default;
};

struct FunctionDef {
  std::string name;
  std::vector<std::string> params;
  Body body;

  friend bool operator==(const FunctionDef&, const FunctionDef&) = default;
};

struct Program {
  std::string main;
  std::vector<FunctionDef> defs;  ///< source order
  /// One constraint per receive statement, `cs1`, `cs2`, ... in source order.
  ConstraintTable constraints;

  const FunctionDef* find(std::string_view name) const;

  friend bool operator==(const Program&, const Program&) = default;
};

/// Throws ParseError on syntax errors and ProgramError on static errors
/// (unknown function, arity mismatch, duplicate definitions, unbound or
/// rebound variables, non-linear patterns, `main` taking parameters).
Program parse_program(std::string_view text);

/// Canonical text; parse_program(serialize_program(p)) == p.
std::string serialize_program(const Program& p);

std::string to_string(const Expr& e);

}  // namespace racetrace
