#include "racetrace/program.hpp"

#include <algorithm>
#include <set>

#include "racetrace/errors.hpp"
#include "text.hpp"

namespace racetrace {

using text::Cursor;
using text::Tok;
using text::Token;

const FunctionDef* Program::find(std::string_view name) const {
  for (const auto& d : defs) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

namespace {

std::string where(const Token& t) {
  return std::to_string(t.line) + ":" + std::to_string(t.column) + ": ";
}

bool is_keyword(std::string_view w) {
  return w == "spawn" || w == "send" || w == "receive" || w == "to" || w == "when" ||
         w == "def" || w == "main" || w == "program";
}

// Deferred static check for a spawn call, resolved once every def is known.
struct CallSite {
  Token at;
  std::string function;
  std::size_t arity;
};

class ProgramParser {
 public:
  explicit ProgramParser(std::string_view text) : c_(text) {}

  Program parse() {
    c_.expect_word("program");
    c_.expect(Tok::lbrace, "'{'");
    c_.expect_word("main");
    const Token main_tok = c_.expect(Tok::lower, "main function name");
    p_.main = main_tok.text;
    while (c_.at_word("def")) parse_def();
    c_.expect(Tok::rbrace, "'}'");
    c_.expect_end();

    const FunctionDef* main = p_.find(p_.main);
    if (!main) throw ProgramError(where(main_tok) + "unknown function '" + p_.main + "'");
    if (!main->params.empty()) {
      throw ProgramError(where(main_tok) + "main function '" + p_.main + "' must take no parameters");
    }
    for (const auto& call : calls_) {
      const FunctionDef* f = p_.find(call.function);
      if (!f) throw ProgramError(where(call.at) + "unknown function '" + call.function + "'");
      if (f->params.size() != call.arity) {
        throw ProgramError(where(call.at) + "function '" + call.function + "' takes " +
                           std::to_string(f->params.size()) + " arguments, " +
                           std::to_string(call.arity) + " given");
      }
    }
    return std::move(p_);
  }

 private:
  void parse_def() {
    c_.expect_word("def");
    const Token name = c_.expect(Tok::lower, "function name");
    if (p_.find(name.text)) throw ProgramError(where(name) + "duplicate definition of '" + name.text + "'");
    FunctionDef def{name.text, {}, {}};
    scope_.clear();
    c_.expect(Tok::lparen, "'('");
    if (!c_.accept(Tok::rparen)) {
      do {
        const Token param = c_.expect(Tok::upper, "parameter name");
        bind(param);
        def.params.push_back(param.text);
      } while (c_.accept(Tok::comma));
      c_.expect(Tok::rparen, "')'");
    }
    c_.expect(Tok::lbrace, "'{'");
    // Register before the body so a function may spawn itself.
    p_.defs.push_back(def);
    if (!c_.at(Tok::rbrace)) {
      do {
        p_.defs.back().body.push_back(parse_stmt());
      } while (c_.accept(Tok::semicolon));
    }
    c_.expect(Tok::rbrace, "'}'");
  }

  void bind(const Token& var) {
    if (!scope_.insert(var.text).second) {
      throw ProgramError(where(var) + "variable '" + var.text + "' is already bound");
    }
  }

  Stmt parse_stmt() {
    Stmt s;
    std::optional<Token> target;
    if (c_.at(Tok::upper) && c_.at(Tok::assign, 1)) {
      target = c_.next();
      c_.next();
      s.bind = target->text;
    }
    if (c_.accept_word("spawn")) {
      s.kind = Stmt::Kind::spawn;
      const Token fn = c_.expect(Tok::lower, "function name");
      s.function = fn.text;
      c_.expect(Tok::lparen, "'('");
      if (!c_.accept(Tok::rparen)) {
        do {
          s.args.push_back(parse_expr());
        } while (c_.accept(Tok::comma));
        c_.expect(Tok::rparen, "')'");
      }
      calls_.push_back({fn, fn.text, s.args.size()});
    } else if (c_.accept_word("send")) {
      s.kind = Stmt::Kind::send;
      s.value = parse_expr();
      c_.expect_word("to");
      s.target = parse_expr();
    } else if (c_.at_word("receive") && c_.at(Tok::lbrace, 1)) {
      c_.next();
      c_.next();
      s.kind = Stmt::Kind::receive;
      s.constraint = "cs" + std::to_string(p_.constraints.size() + 1);
      Constraint cs{s.constraint, {}};
      p_.constraints.emplace(s.constraint, cs);
      do {
        s.clauses.push_back(parse_clause());
        p_.constraints[s.constraint].clauses.push_back(s.clauses.back().head);
      } while (c_.accept(Tok::semicolon));
      c_.expect(Tok::rbrace, "'}'");
    } else {
      s.kind = Stmt::Kind::value;
      s.value = parse_expr();
    }
    if (target) bind(*target);
    return s;
  }

  ReceiveClause parse_clause() {
    const Token start = c_.peek();
    ReceiveClause rc{text::parse_clause_head(c_), {}};
    // Pattern variables are local to the clause.
    const auto vars = rc.head.pattern.variables();
    for (const auto& v : vars) {
      if (scope_.contains(v)) {
        throw ProgramError(where(start) + "pattern variable '" + v + "' is already bound");
      }
    }
    scope_.insert(vars.begin(), vars.end());
    auto before = scope_;
    if (!c_.accept(Tok::dot)) {
      do {
        rc.body.push_back(parse_stmt());
      } while (c_.accept(Tok::comma));
    }
    // Variables bound in the clause do not outlive it.
    for (const auto& v : vars) before.erase(v);
    scope_ = std::move(before);
    return rc;
  }

  Expr parse_expr() {
    const Token& t = c_.peek();
    Expr e;
    switch (t.kind) {
      case Tok::upper:
        if (!scope_.contains(t.text)) {
          throw ProgramError(where(t) + "unbound variable '" + t.text + "'");
        }
        e.kind = Expr::Kind::variable;
        e.variable = c_.next().text;
        return e;
      case Tok::lbrace:
      case Tok::lbracket: {
        const bool tuple = t.kind == Tok::lbrace;
        const Tok close = tuple ? Tok::rbrace : Tok::rbracket;
        c_.next();
        e.kind = tuple ? Expr::Kind::tuple : Expr::Kind::list;
        if (!c_.accept(close)) {
          do {
            e.items.push_back(parse_expr());
          } while (c_.accept(Tok::comma));
          c_.expect(close, tuple ? "'}'" : "']'");
        }
        return e;
      }
      case Tok::lower:
        if (t.text == "self" && c_.at(Tok::lparen, 1)) {
          c_.next();
          c_.next();
          c_.expect(Tok::rparen, "')'");
          e.kind = Expr::Kind::self;
          return e;
        }
        if (is_keyword(t.text)) c_.fail(t, "unexpected keyword '" + t.text + "'");
        [[fallthrough]];
      default:
        e.kind = Expr::Kind::literal;
        e.literal = text::parse_term(c_);
        return e;
    }
  }

  Cursor c_;
  Program p_;
  std::set<std::string> scope_;
  std::vector<CallSite> calls_;
};

std::string join_exprs(const std::vector<Expr>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += to_string(items[i]);
  }
  return out;
}

std::string stmt_to_string(const Stmt& s);

std::string clause_to_string(const ReceiveClause& rc) {
  std::string out = to_string(rc.head.pattern);
  if (rc.head.guard.kind() != Guard::Kind::truth) out += " when " + to_string(rc.head.guard);
  out += " -> ";
  if (rc.body.empty()) return out + ".";
  for (std::size_t i = 0; i < rc.body.size(); ++i) {
    if (i) out += ", ";
    out += stmt_to_string(rc.body[i]);
  }
  return out;
}

std::string stmt_to_string(const Stmt& s) {
  std::string out = s.bind ? *s.bind + " = " : "";
  switch (s.kind) {
    case Stmt::Kind::value:
      return out + to_string(s.value);
    case Stmt::Kind::spawn:
      return out + "spawn " + s.function + "(" + join_exprs(s.args, ", ") + ")";
    case Stmt::Kind::send:
      return out + "send " + to_string(s.value) + " to " + to_string(s.target);
    case Stmt::Kind::receive: {
      out += "receive { ";
      for (std::size_t i = 0; i < s.clauses.size(); ++i) {
        if (i) out += "; ";
        out += clause_to_string(s.clauses[i]);
      }
      return out + " }";
    }
  }
  return out;
}

}  // namespace

Program parse_program(std::string_view text) { return ProgramParser(text).parse(); }

std::string to_string(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::literal: return to_string(*e.literal);
    case Expr::Kind::variable: return e.variable;
    case Expr::Kind::tuple: return "{" + join_exprs(e.items, ",") + "}";
    case Expr::Kind::list: return "[" + join_exprs(e.items, ",") + "]";
    case Expr::Kind::self: return "self()";
  }
  return {};
}

std::string serialize_program(const Program& p) {
  std::string out = "program { main " + p.main;
  for (const auto& d : p.defs) {
    out += "\n  def " + d.name + "(";
    for (std::size_t i = 0; i < d.params.size(); ++i) {
      if (i) out += ", ";
      out += d.params[i];
    }
    out += ") {";
    for (std::size_t i = 0; i < d.body.size(); ++i) {
      out += i ? "; " : " ";
      out += stmt_to_string(d.body[i]);
    }
    out += " }";
  }
  return out + " }\n";
}

}  // namespace racetrace
