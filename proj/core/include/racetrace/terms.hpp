#pragma once

// Message values, receive patterns, guards and constraints.
//
// This is one concrete instantiation of the value/constraint domain: terms
// are finite trees of integers, atoms, tuples, lists, pid literals and tag
// literals; a constraint is an ordered list of (pattern, guard) clauses in the
// style of an Erlang receive. `match` is total and decidable.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace racetrace {

class Term {
 public:
  enum class Kind { integer, atom, tuple, list, pid, tag };

  static Term integer(std::int64_t v);
  static Term atom(std::string name);
  static Term tuple(std::vector<Term> items);
  static Term list(std::vector<Term> items);
  static Term pid(std::string name);
  static Term tag(std::string name);

  Kind kind() const { return kind_; }
  std::int64_t as_integer() const { return int_; }
  /// Atom, pid or tag name.
  const std::string& name() const { return text_; }
  const std::vector<Term>& items() const { return items_; }

  /// Structural equality; kinds never compare equal across each other.
  friend bool operator==(const Term&, const Term&) = default;
  /// Arbitrary but total structural order, used for containers only.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  Term() = default;

  Kind kind_ = Kind::atom;
  std::int64_t int_ = 0;
  std::string text_;
  std::vector<Term> items_;
};

class Pattern {
 public:
  enum class Kind { variable, wildcard, integer, atom, pid, tag, tuple, list };

  static Pattern variable(std::string name);
  static Pattern wildcard();
  static Pattern literal(const Term& t);
  static Pattern tuple(std::vector<Pattern> items);
  static Pattern list(std::vector<Pattern> items);

  Kind kind() const { return kind_; }
  std::int64_t as_integer() const { return int_; }
  const std::string& name() const { return text_; }
  const std::vector<Pattern>& items() const { return items_; }

  /// Variables in left-to-right order; duplicates are kept so callers can
  /// detect non-linear patterns.
  std::vector<std::string> variables() const;
  bool is_linear() const;

  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  Pattern() = default;

  Kind kind_ = Kind::wildcard;
  std::int64_t int_ = 0;
  std::string text_;
  std::vector<Pattern> items_;
};

/// Operand of a guard comparison: a pattern variable or a ground term.
struct GuardOperand {
  std::optional<std::string> variable;
  std::optional<Term> value;

  static GuardOperand var(std::string name) { return {std::move(name), std::nullopt}; }
  static GuardOperand constant(Term t) { return {std::nullopt, std::move(t)}; }

  friend bool operator==(const GuardOperand&, const GuardOperand&) = default;
};

enum class CompareOp { eq, ne, lt, gt, le, ge };

class Guard {
 public:
  enum class Kind { truth, compare, conj, disj };

  static Guard truth();
  static Guard compare(CompareOp op, GuardOperand lhs, GuardOperand rhs);
  static Guard conj(Guard a, Guard b);
  static Guard disj(Guard a, Guard b);

  Kind kind() const { return kind_; }
  CompareOp op() const { return op_; }
  const GuardOperand& lhs() const { return operands_.at(0); }
  const GuardOperand& rhs() const { return operands_.at(1); }
  const std::vector<Guard>& children() const { return children_; }

  std::vector<std::string> variables() const;

  friend bool operator==(const Guard&, const Guard&) = default;

 private:
  Guard() = default;

  Kind kind_ = Kind::truth;
  CompareOp op_ = CompareOp::eq;
  std::vector<GuardOperand> operands_;
  std::vector<Guard> children_;
};

struct Clause {
  Pattern pattern;
  Guard guard = Guard::truth();

  friend bool operator==(const Clause&, const Clause&) = default;
};

struct Constraint {
  std::string id;
  std::vector<Clause> clauses;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

using Substitution = std::map<std::string, Term>;
using ConstraintTable = std::map<std::string, Constraint>;

/// The unique substitution s with pattern·s == value, if any.
std::optional<Substitution> match_pattern(const Pattern& p, const Term& value);

/// Total: unbound variables and ordering on mixed kinds evaluate to false.
bool eval_guard(const Guard& g, const Substitution& s);

/// Index of the first clause whose pattern matches and whose guard holds.
std::optional<std::size_t> matching_clause(const Term& value, const Constraint& cs);

bool match(const Term& value, const Constraint& cs);

// Canonical text forms. See docs/grammar.md for the syntax.
std::string to_string(const Term& t);
std::string to_string(const Pattern& p);
std::string to_string(const Guard& g);
/// `pattern [when guard] -> .` clauses joined by "; ", without the id.
std::string clauses_to_string(const Constraint& cs);
/// `id: clauses`.
std::string to_string(const Constraint& cs);

Term parse_term(std::string_view text);
Pattern parse_pattern(std::string_view text);
Constraint parse_constraint(std::string_view text);

}  // namespace racetrace
