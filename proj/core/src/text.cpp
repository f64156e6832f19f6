#include "text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace racetrace::text {
namespace {

bool ident_char(char ch) {
  auto c = static_cast<unsigned char>(ch);
  return std::isalnum(c) || c == '_';
}

}  // namespace

const char* describe(Tok t) {
  switch (t) {
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::lbracket: return "'['";
    case Tok::rbracket: return "']'";
    case Tok::comma: return "','";
    case Tok::semicolon: return "';'";
    case Tok::colon: return "':'";
    case Tok::dot: return "'.'";
    case Tok::arrow: return "'->'";
    case Tok::lt: return "'<'";
    case Tok::gt: return "'>'";
    case Tok::le: return "'=<'";
    case Tok::ge: return "'>='";
    case Tok::eqeq: return "'=='";
    case Tok::ne: return "'/='";
    case Tok::assign: return "'='";
    case Tok::hash: return "'#'";
    case Tok::integer: return "integer";
    case Tok::lower: return "name";
    case Tok::upper: return "variable";
    case Tok::wildcard: return "'_'";
    case Tok::epsilon: return "'ε'";
    case Tok::end: return "end of input";
  }
  return "token";
}

std::vector<Token> tokenize(std::string_view in) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < in.size(); ++k, ++i) {
      if (in[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(in[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
  };
  auto push = [&](Tok kind, std::size_t len) {
    out.push_back(Token{kind, std::string(in.substr(i, len)), 0, line, col});
    advance(len);
  };

  while (i < in.size()) {
    char ch = in[i];
    auto uc = static_cast<unsigned char>(ch);
    if (std::isspace(uc)) {
      advance(1);
      continue;
    }
    if (ch == '%') {
      while (i < in.size() && in[i] != '\n') advance(1);
      continue;
    }
    if (in.substr(i, 2) == "\xCE\xB5") {  // ε
      push(Tok::epsilon, 2);
      continue;
    }
    if (std::isdigit(uc) || (ch == '-' && i + 1 < in.size() &&
                             std::isdigit(static_cast<unsigned char>(in[i + 1])))) {
      std::size_t j = i + 1;
      while (j < in.size() && std::isdigit(static_cast<unsigned char>(in[j]))) ++j;
      Token t{Tok::integer, std::string(in.substr(i, j - i)), 0, line, col};
      auto [ptr, ec] = std::from_chars(in.data() + i, in.data() + j, t.value);
      if (ec != std::errc()) throw ParseError(line, col, "integer out of range '" + t.text + "'");
      out.push_back(std::move(t));
      advance(j - i);
      continue;
    }
    if (std::islower(uc)) {
      std::size_t j = i + 1;
      while (j < in.size()) {
        if (ident_char(in[j])) {
          ++j;
        } else if (in[j] == '.' && j + 1 < in.size() && ident_char(in[j + 1])) {
          j += 2;
        } else {
          break;
        }
      }
      push(Tok::lower, j - i);
      continue;
    }
    if (std::isupper(uc) || (ch == '_' && i + 1 < in.size() && ident_char(in[i + 1]))) {
      std::size_t j = i + 1;
      while (j < in.size() && ident_char(in[j])) ++j;
      push(Tok::upper, j - i);
      continue;
    }
    auto two = in.substr(i, 2);
    if (two == "->") { push(Tok::arrow, 2); continue; }
    if (two == "=<") { push(Tok::le, 2); continue; }
    if (two == ">=") { push(Tok::ge, 2); continue; }
    if (two == "==") { push(Tok::eqeq, 2); continue; }
    if (two == "/=") { push(Tok::ne, 2); continue; }
    switch (ch) {
      case '{': push(Tok::lbrace, 1); continue;
      case '}': push(Tok::rbrace, 1); continue;
      case '(': push(Tok::lparen, 1); continue;
      case ')': push(Tok::rparen, 1); continue;
      case '[': push(Tok::lbracket, 1); continue;
      case ']': push(Tok::rbracket, 1); continue;
      case ',': push(Tok::comma, 1); continue;
      case ';': push(Tok::semicolon, 1); continue;
      case ':': push(Tok::colon, 1); continue;
      case '.': push(Tok::dot, 1); continue;
      case '<': push(Tok::lt, 1); continue;
      case '>': push(Tok::gt, 1); continue;
      case '=': push(Tok::assign, 1); continue;
      case '#': push(Tok::hash, 1); continue;
      case '_': push(Tok::wildcard, 1); continue;
      default: break;
    }
    throw ParseError(line, col, "unexpected character '" + std::string(1, ch) + "'");
  }
  out.push_back(Token{Tok::end, "", 0, line, col});
  return out;
}

const Token& Cursor::peek(std::size_t ahead) const {
  auto idx = std::min(pos_ + ahead, tokens_.size() - 1);
  return tokens_[idx];
}

const Token& Cursor::next() {
  const Token& t = tokens_[pos_];
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool Cursor::accept(Tok t) {
  if (!at(t)) return false;
  next();
  return true;
}

bool Cursor::accept_word(std::string_view word) {
  if (!at_word(word)) return false;
  next();
  return true;
}

const Token& Cursor::expect(Tok t, std::string_view what) {
  if (!at(t)) {
    fail("expected " + std::string(what) + ", found " +
         (peek().kind == Tok::end ? std::string("end of input") : "'" + peek().text + "'"));
  }
  return next();
}

void Cursor::expect_word(std::string_view word) {
  if (!at_word(word)) {
    fail("expected '" + std::string(word) + "', found " +
         (peek().kind == Tok::end ? std::string("end of input") : "'" + peek().text + "'"));
  }
  next();
}

void Cursor::expect_end() {
  if (!at(Tok::end)) fail("unexpected trailing input '" + peek().text + "'");
}

void Cursor::fail(const Token& at, const std::string& message) const {
  throw ParseError(at.line, at.column, message);
}

namespace {

std::string plain_atom(Cursor& c) {
  const Token& t = c.expect(Tok::lower, "atom");
  if (t.text.find('.') != std::string::npos) c.fail(t, "malformed atom '" + t.text + "'");
  return t.text;
}

template <class Item, class Parse>
std::vector<Item> sequence(Cursor& c, Tok close, std::string_view what, Parse parse) {
  std::vector<Item> items;
  if (c.accept(close)) return items;
  do {
    items.push_back(parse(c));
  } while (c.accept(Tok::comma));
  c.expect(close, what);
  return items;
}

}  // namespace

Term parse_term(Cursor& c) {
  const Token& t = c.peek();
  switch (t.kind) {
    case Tok::integer:
      c.next();
      return Term::integer(t.value);
    case Tok::lower:
      return Term::atom(plain_atom(c));
    case Tok::lbrace:
      c.next();
      return Term::tuple(sequence<Term>(c, Tok::rbrace, "'}'", [](Cursor& k) { return parse_term(k); }));
    case Tok::lbracket:
      c.next();
      return Term::list(sequence<Term>(c, Tok::rbracket, "']'", [](Cursor& k) { return parse_term(k); }));
    case Tok::lt: {
      c.next();
      std::string name = c.expect(Tok::lower, "pid name").text;
      c.expect(Tok::gt, "'>'");
      return Term::pid(std::move(name));
    }
    case Tok::hash:
      c.next();
      return Term::tag(c.expect(Tok::lower, "tag name").text);
    case Tok::upper:
      c.fail(t, "unbound variable '" + t.text + "' in ground term");
    default:
      c.fail(t, "expected a term, found " +
                    (t.kind == Tok::end ? std::string("end of input") : "'" + t.text + "'"));
  }
}

Pattern parse_pattern(Cursor& c) {
  const Token& t = c.peek();
  switch (t.kind) {
    case Tok::upper:
      c.next();
      return Pattern::variable(t.text);
    case Tok::wildcard:
      c.next();
      return Pattern::wildcard();
    case Tok::lbrace:
      c.next();
      return Pattern::tuple(
          sequence<Pattern>(c, Tok::rbrace, "'}'", [](Cursor& k) { return parse_pattern(k); }));
    case Tok::lbracket:
      c.next();
      return Pattern::list(
          sequence<Pattern>(c, Tok::rbracket, "']'", [](Cursor& k) { return parse_pattern(k); }));
    default:
      return Pattern::literal(parse_term(c));
  }
}

namespace {

GuardOperand parse_operand(Cursor& c) {
  if (c.at(Tok::upper)) return GuardOperand::var(c.next().text);
  return GuardOperand::constant(parse_term(c));
}

std::optional<CompareOp> compare_op(Tok t) {
  switch (t) {
    case Tok::eqeq: return CompareOp::eq;
    case Tok::ne: return CompareOp::ne;
    case Tok::lt: return CompareOp::lt;
    case Tok::gt: return CompareOp::gt;
    case Tok::le: return CompareOp::le;
    case Tok::ge: return CompareOp::ge;
    default: return std::nullopt;
  }
}

Guard parse_guard_primary(Cursor& c) {
  if (c.at_word("true") && !compare_op(c.peek(1).kind)) {
    c.next();
    return Guard::truth();
  }
  if (c.accept(Tok::lparen)) {
    Guard g = parse_guard(c);
    c.expect(Tok::rparen, "')'");
    return g;
  }
  GuardOperand lhs = parse_operand(c);
  auto op = compare_op(c.peek().kind);
  if (!op) c.fail("expected comparison operator in guard");
  c.next();
  GuardOperand rhs = parse_operand(c);
  return Guard::compare(*op, std::move(lhs), std::move(rhs));
}

Guard parse_guard_conj(Cursor& c) {
  Guard g = parse_guard_primary(c);
  while (c.accept_word("and")) g = Guard::conj(std::move(g), parse_guard_primary(c));
  return g;
}

}  // namespace

Guard parse_guard(Cursor& c) {
  Guard g = parse_guard_conj(c);
  while (c.accept_word("or")) g = Guard::disj(std::move(g), parse_guard_conj(c));
  return g;
}

Clause parse_clause_head(Cursor& c) {
  const Token& start = c.peek();
  Clause cl{parse_pattern(c), Guard::truth()};
  if (!cl.pattern.is_linear()) c.fail(start, "non-linear pattern: a variable occurs twice");
  if (c.accept_word("when")) {
    cl.guard = parse_guard(c);
    auto pv = cl.pattern.variables();
    for (const auto& v : cl.guard.variables()) {
      if (std::find(pv.begin(), pv.end(), v) == pv.end()) {
        c.fail(start, "guard variable '" + v + "' does not occur in the pattern");
      }
    }
  }
  c.expect(Tok::arrow, "'->'");
  return cl;
}

std::vector<Clause> parse_constraint_clauses(Cursor& c) {
  std::vector<Clause> clauses;
  do {
    clauses.push_back(parse_clause_head(c));
    c.expect(Tok::dot, "'.'");
  } while (c.accept(Tok::semicolon));
  return clauses;
}

Constraint parse_constraint(Cursor& c) {
  Constraint cs;
  cs.id = c.expect(Tok::lower, "constraint id").text;
  c.expect(Tok::colon, "':'");
  cs.clauses = parse_constraint_clauses(c);
  return cs;
}

}  // namespace racetrace::text
