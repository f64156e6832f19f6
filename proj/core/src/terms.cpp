#include "racetrace/terms.hpp"

#include <algorithm>
#include <set>

#include "text.hpp"

namespace racetrace {

Term Term::integer(std::int64_t v) {
  Term t;
  t.kind_ = Kind::integer;
  t.int_ = v;
  return t;
}

Term Term::atom(std::string name) {
  Term t;
  t.kind_ = Kind::atom;
  t.text_ = std::move(name);
  return t;
}

Term Term::tuple(std::vector<Term> items) {
  Term t;
  t.kind_ = Kind::tuple;
  t.items_ = std::move(items);
  return t;
}

Term Term::list(std::vector<Term> items) {
  Term t;
  t.kind_ = Kind::list;
  t.items_ = std::move(items);
  return t;
}

Term Term::pid(std::string name) {
  Term t;
  t.kind_ = Kind::pid;
  t.text_ = std::move(name);
  return t;
}

Term Term::tag(std::string name) {
  Term t;
  t.kind_ = Kind::tag;
  t.text_ = std::move(name);
  return t;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  if (auto c = a.int_ <=> b.int_; c != 0) return c;
  if (auto c = a.text_.compare(b.text_); c != 0) return c <=> 0;
  return std::lexicographical_compare_three_way(a.items_.begin(), a.items_.end(),
                                                b.items_.begin(), b.items_.end());
}

Pattern Pattern::variable(std::string name) {
  Pattern p;
  p.kind_ = Kind::variable;
  p.text_ = std::move(name);
  return p;
}

Pattern Pattern::wildcard() { return Pattern(); }

Pattern Pattern::literal(const Term& t) {
  Pattern p;
  switch (t.kind()) {
    case Term::Kind::integer:
      p.kind_ = Kind::integer;
      p.int_ = t.as_integer();
      return p;
    case Term::Kind::atom:
      p.kind_ = Kind::atom;
      p.text_ = t.name();
      return p;
    case Term::Kind::pid:
      p.kind_ = Kind::pid;
      p.text_ = t.name();
      return p;
    case Term::Kind::tag:
      p.kind_ = Kind::tag;
      p.text_ = t.name();
      return p;
    case Term::Kind::tuple:
    case Term::Kind::list: {
      p.kind_ = t.kind() == Term::Kind::tuple ? Kind::tuple : Kind::list;
      for (const auto& item : t.items()) p.items_.push_back(literal(item));
      return p;
    }
  }
  return p;
}

Pattern Pattern::tuple(std::vector<Pattern> items) {
  Pattern p;
  p.kind_ = Kind::tuple;
  p.items_ = std::move(items);
  return p;
}

Pattern Pattern::list(std::vector<Pattern> items) {
  Pattern p;
  p.kind_ = Kind::list;
  p.items_ = std::move(items);
  return p;
}

std::vector<std::string> Pattern::variables() const {
  std::vector<std::string> out;
  if (kind_ == Kind::variable) out.push_back(text_);
  for (const auto& item : items_) {
    auto inner = item.variables();
    out.insert(out.end(), inner.begin(), inner.end());
  }
  return out;
}

bool Pattern::is_linear() const {
  auto vars = variables();
  std::set<std::string> seen(vars.begin(), vars.end());
  return seen.size() == vars.size();
}

Guard Guard::truth() { return Guard(); }

Guard Guard::compare(CompareOp op, GuardOperand lhs, GuardOperand rhs) {
  Guard g;
  g.kind_ = Kind::compare;
  g.op_ = op;
  g.operands_ = {std::move(lhs), std::move(rhs)};
  return g;
}

Guard Guard::conj(Guard a, Guard b) {
  Guard g;
  g.kind_ = Kind::conj;
  g.children_ = {std::move(a), std::move(b)};
  return g;
}

Guard Guard::disj(Guard a, Guard b) {
  Guard g;
  g.kind_ = Kind::disj;
  g.children_ = {std::move(a), std::move(b)};
  return g;
}

std::vector<std::string> Guard::variables() const {
  std::vector<std::string> out;
  for (const auto& o : operands_) {
    if (o.variable) out.push_back(*o.variable);
  }
  for (const auto& c : children_) {
    auto inner = c.variables();
    out.insert(out.end(), inner.begin(), inner.end());
  }
  return out;
}

namespace {

bool bind(const Pattern& p, const Term& v, Substitution& s) {
  switch (p.kind()) {
    case Pattern::Kind::wildcard:
      return true;
    case Pattern::Kind::variable:
      // Linear patterns: each variable is bound at most once.
      return s.emplace(p.name(), v).second || s.at(p.name()) == v;
    case Pattern::Kind::integer:
      return v.kind() == Term::Kind::integer && v.as_integer() == p.as_integer();
    case Pattern::Kind::atom:
      return v.kind() == Term::Kind::atom && v.name() == p.name();
    case Pattern::Kind::pid:
      return v.kind() == Term::Kind::pid && v.name() == p.name();
    case Pattern::Kind::tag:
      return v.kind() == Term::Kind::tag && v.name() == p.name();
    case Pattern::Kind::tuple:
    case Pattern::Kind::list: {
      auto want = p.kind() == Pattern::Kind::tuple ? Term::Kind::tuple : Term::Kind::list;
      if (v.kind() != want || v.items().size() != p.items().size()) return false;
      for (std::size_t i = 0; i < p.items().size(); ++i) {
        if (!bind(p.items()[i], v.items()[i], s)) return false;
      }
      return true;
    }
  }
  return false;
}

const Term* resolve(const GuardOperand& o, const Substitution& s) {
  if (o.value) return &*o.value;
  auto it = s.find(*o.variable);
  return it == s.end() ? nullptr : &it->second;
}

bool ordered(CompareOp op, const Term& a, const Term& b) {
  int c = 0;
  if (a.kind() == Term::Kind::integer && b.kind() == Term::Kind::integer) {
    c = a.as_integer() < b.as_integer() ? -1 : (a.as_integer() > b.as_integer() ? 1 : 0);
  } else if (a.kind() == Term::Kind::atom && b.kind() == Term::Kind::atom) {
    c = a.name().compare(b.name());
  } else {
    return false;  // mixed kinds and compound terms are unordered
  }
  switch (op) {
    case CompareOp::lt: return c < 0;
    case CompareOp::gt: return c > 0;
    case CompareOp::le: return c <= 0;
    case CompareOp::ge: return c >= 0;
    default: return false;
  }
}

}  // namespace

std::optional<Substitution> match_pattern(const Pattern& p, const Term& value) {
  Substitution s;
  if (!bind(p, value, s)) return std::nullopt;
  return s;
}

bool eval_guard(const Guard& g, const Substitution& s) {
  switch (g.kind()) {
    case Guard::Kind::truth:
      return true;
    case Guard::Kind::conj:
      return eval_guard(g.children()[0], s) && eval_guard(g.children()[1], s);
    case Guard::Kind::disj:
      return eval_guard(g.children()[0], s) || eval_guard(g.children()[1], s);
    case Guard::Kind::compare: {
      const Term* a = resolve(g.lhs(), s);
      const Term* b = resolve(g.rhs(), s);
      if (!a || !b) return false;
      switch (g.op()) {
        case CompareOp::eq: return *a == *b;
        case CompareOp::ne: return !(*a == *b);
        default: return ordered(g.op(), *a, *b);
      }
    }
  }
  return false;
}

std::optional<std::size_t> matching_clause(const Term& value, const Constraint& cs) {
  for (std::size_t i = 0; i < cs.clauses.size(); ++i) {
    auto s = match_pattern(cs.clauses[i].pattern, value);
    if (s && eval_guard(cs.clauses[i].guard, *s)) return i;
  }
  return std::nullopt;
}

bool match(const Term& value, const Constraint& cs) {
  return matching_clause(value, cs).has_value();
}

namespace {

template <class T, class F>
std::string join(const std::vector<T>& items, F&& show) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += show(items[i]);
  }
  return out;
}

const char* op_text(CompareOp op) {
  switch (op) {
    case CompareOp::eq: return "==";
    case CompareOp::ne: return "/=";
    case CompareOp::lt: return "<";
    case CompareOp::gt: return ">";
    case CompareOp::le: return "=<";
    case CompareOp::ge: return ">=";
  }
  return "?";
}

std::string operand_text(const GuardOperand& o) {
  return o.variable ? *o.variable : to_string(*o.value);
}

}  // namespace

std::string to_string(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::integer: return std::to_string(t.as_integer());
    case Term::Kind::atom: return t.name();
    case Term::Kind::pid: return "<" + t.name() + ">";
    case Term::Kind::tag: return "#" + t.name();
    case Term::Kind::tuple:
      return "{" + join(t.items(), [](const Term& x) { return to_string(x); }) + "}";
    case Term::Kind::list:
      return "[" + join(t.items(), [](const Term& x) { return to_string(x); }) + "]";
  }
  return {};
}

std::string to_string(const Pattern& p) {
  switch (p.kind()) {
    case Pattern::Kind::variable: return p.name();
    case Pattern::Kind::wildcard: return "_";
    case Pattern::Kind::integer: return std::to_string(p.as_integer());
    case Pattern::Kind::atom: return p.name();
    case Pattern::Kind::pid: return "<" + p.name() + ">";
    case Pattern::Kind::tag: return "#" + p.name();
    case Pattern::Kind::tuple:
      return "{" + join(p.items(), [](const Pattern& x) { return to_string(x); }) + "}";
    case Pattern::Kind::list:
      return "[" + join(p.items(), [](const Pattern& x) { return to_string(x); }) + "]";
  }
  return {};
}

std::string to_string(const Guard& g) {
  switch (g.kind()) {
    case Guard::Kind::truth:
      return "true";
    case Guard::Kind::compare:
      return operand_text(g.lhs()) + " " + op_text(g.op()) + " " + operand_text(g.rhs());
    case Guard::Kind::conj: {
      auto side = [](const Guard& c) {
        return c.kind() == Guard::Kind::disj ? "(" + to_string(c) + ")" : to_string(c);
      };
      return side(g.children()[0]) + " and " + side(g.children()[1]);
    }
    case Guard::Kind::disj: {
      // `or` is left-associative; parenthesize a right-nested disjunction.
      const Guard& r = g.children()[1];
      auto rhs = r.kind() == Guard::Kind::disj ? "(" + to_string(r) + ")" : to_string(r);
      return to_string(g.children()[0]) + " or " + rhs;
    }
  }
  return {};
}

std::string clauses_to_string(const Constraint& cs) {
  std::string out;
  for (std::size_t i = 0; i < cs.clauses.size(); ++i) {
    if (i) out += "; ";
    out += to_string(cs.clauses[i].pattern);
    if (cs.clauses[i].guard.kind() != Guard::Kind::truth) {
      out += " when " + to_string(cs.clauses[i].guard);
    }
    out += " -> .";
  }
  return out;
}

std::string to_string(const Constraint& cs) { return cs.id + ": " + clauses_to_string(cs); }

Term parse_term(std::string_view input) {
  text::Cursor c(input);
  Term t = text::parse_term(c);
  c.expect_end();
  return t;
}

Pattern parse_pattern(std::string_view input) {
  text::Cursor c(input);
  const auto& start = c.peek();
  Pattern p = text::parse_pattern(c);
  if (!p.is_linear()) c.fail(start, "non-linear pattern: a variable occurs twice");
  c.expect_end();
  return p;
}

Constraint parse_constraint(std::string_view input) {
  text::Cursor c(input);
  Constraint cs = text::parse_constraint(c);
  c.expect_end();
  return cs;
}

}  // namespace racetrace
