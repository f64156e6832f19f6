#pragma once

// Shared tokenizer and recursive-descent helpers for every textual format
// (terms, constraints, traces, interleavings, programs).

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "racetrace/errors.hpp"
#include "racetrace/terms.hpp"

namespace racetrace::text {

enum class Tok {
  lbrace, rbrace, lparen, rparen, lbracket, rbracket,
  comma, semicolon, colon, dot, arrow,
  lt, gt, le, ge, eqeq, ne, assign, hash,
  integer, lower, upper, wildcard, epsilon,
  end,
};

struct Token {
  Tok kind;
  std::string text;
  std::int64_t value = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

std::vector<Token> tokenize(std::string_view input);

const char* describe(Tok t);

class Cursor {
 public:
  explicit Cursor(std::string_view input) : tokens_(tokenize(input)) {}

  const Token& peek(std::size_t ahead = 0) const;
  bool at(Tok t, std::size_t ahead = 0) const { return peek(ahead).kind == t; }
  bool at_word(std::string_view word) const {
    return peek().kind == Tok::lower && peek().text == word;
  }
  const Token& next();
  bool accept(Tok t);
  bool accept_word(std::string_view word);
  const Token& expect(Tok t, std::string_view what);
  void expect_word(std::string_view word);
  void expect_end();

  [[noreturn]] void fail(const Token& at, const std::string& message) const;
  [[noreturn]] void fail(const std::string& message) const { fail(peek(), message); }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/// Ground term. Atoms must be plain (dot-free) lowercase names.
Term parse_term(Cursor& c);
Pattern parse_pattern(Cursor& c);
Guard parse_guard(Cursor& c);
/// `pattern [when guard] ->`, with linearity and guard-scope checks.
Clause parse_clause_head(Cursor& c);
/// Clause list `p [when g] -> .; ...` for constraint blocks.
std::vector<Clause> parse_constraint_clauses(Cursor& c);
/// `id: clauses`.
Constraint parse_constraint(Cursor& c);

}  // namespace racetrace::text
