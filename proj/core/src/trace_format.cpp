#include "racetrace/trace_format.hpp"

#include <set>

#include "text.hpp"

namespace racetrace {
namespace {

using text::Cursor;
using text::Tok;

template <class N>
N parse_name(Cursor& c, const char* what) {
  const auto& t = c.peek();
  if (t.kind != Tok::lower) {
    c.fail(t, std::string("malformed ") + what + " '" + t.text + "'");
  }
  c.next();
  return N(t.text);
}

struct PendingRef {
  std::string constraint;
  text::Token at;
};

Action parse_action(Cursor& c, std::vector<PendingRef>& refs) {
  const auto& head = c.peek();
  if (c.accept_word("spawn")) {
    c.expect(Tok::lparen, "'('");
    Pid child = parse_name<Pid>(c, "pid");
    c.expect(Tok::rparen, "')'");
    return Spawn{std::move(child)};
  }
  if (c.accept_word("send")) {
    c.expect(Tok::lparen, "'('");
    Tag tag = parse_name<Tag>(c, "tag");
    c.expect(Tok::comma, "','");
    Term value = text::parse_term(c);
    c.expect(Tok::comma, "','");
    Pid target = parse_name<Pid>(c, "pid");
    c.expect(Tok::rparen, "')'");
    return Send{std::move(tag), std::move(value), std::move(target)};
  }
  if (c.accept_word("rec")) {
    c.expect(Tok::lparen, "'('");
    Tag tag = parse_name<Tag>(c, "tag");
    c.expect(Tok::comma, "','");
    const auto& cs_tok = c.expect(Tok::lower, "constraint id");
    refs.push_back(PendingRef{cs_tok.text, cs_tok});
    c.expect(Tok::rparen, "')'");
    return Receive{std::move(tag), cs_tok.text};
  }
  c.fail(head, "expected spawn, send or rec, found '" + head.text + "'");
}

ConstraintTable parse_constraint_block(Cursor& c) {
  ConstraintTable table;
  if (!c.accept_word("constraints")) return table;
  c.expect(Tok::lbrace, "'{'");
  while (!c.at(Tok::rbrace)) {
    const auto& start = c.peek();
    Constraint cs = text::parse_constraint(c);
    if (table.contains(cs.id)) c.fail(start, "constraint " + cs.id + " is defined twice");
    table.emplace(cs.id, std::move(cs));
  }
  c.expect(Tok::rbrace, "'}'");
  return table;
}

void check_refs(const Cursor& c, const std::vector<PendingRef>& refs, const ConstraintTable& table) {
  for (const auto& r : refs) {
    if (!table.contains(r.constraint)) c.fail(r.at, "undefined constraint " + r.constraint);
  }
}

Pid parse_header(Cursor& c, std::string_view keyword) {
  c.expect_word(keyword);
  c.expect(Tok::lbrace, "'{'");
  c.expect_word("initial");
  c.expect(Tok::colon, "':'");
  return parse_name<Pid>(c, "pid");
}

template <class Seq>
std::set<std::string> referenced(const Seq& actions) {
  std::set<std::string> ids;
  for (const auto& a : actions) {
    if (const auto* r = std::get_if<Receive>(&a)) ids.insert(r->constraint);
  }
  return ids;
}

std::string constraint_block(const ConstraintTable& table, const std::set<std::string>& ids) {
  std::string out = "constraints {";
  bool first = true;
  for (const auto& id : ids) {
    auto it = table.find(id);
    if (it == table.end()) continue;
    out += first ? " " : "\n  ";
    out += to_string(it->second);
    first = false;
  }
  out += " }\n";
  return out;
}

}  // namespace

Trace parse_trace(std::string_view input) {
  Cursor c(input);
  Trace t;
  t.initial = parse_header(c, "trace");
  std::vector<PendingRef> refs;
  while (!c.at(Tok::rbrace)) {
    const auto& start = c.peek();
    Pid pid = parse_name<Pid>(c, "pid");
    c.expect(Tok::colon, "':'");
    if (t.processes.contains(pid)) c.fail(start, "process " + pid.str() + " is listed twice");
    auto& seq = t.processes[pid];
    if (!c.accept(Tok::epsilon) && !c.accept_word("eps")) {
      do {
        seq.push_back(parse_action(c, refs));
      } while (c.accept(Tok::comma));
    }
  }
  c.expect(Tok::rbrace, "'}'");
  t.constraints = parse_constraint_block(c);
  c.expect_end();
  check_refs(c, refs, t.constraints);
  t.normalize();
  return t;
}

std::string serialize_trace(const Trace& t) {
  std::string out = "trace { initial: " + t.initial.str();
  std::set<std::string> ids;
  for (const auto& [pid, seq] : t.processes) {
    out += "\n  " + pid.str() + ": ";
    if (seq.empty()) out += "\xCE\xB5";
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (i) out += ", ";
      out += to_string(seq[i]);
    }
    ids.merge(referenced(seq));
  }
  out += " }\n";
  return out + constraint_block(t.constraints, ids);
}

Interleaving parse_interleaving(std::string_view input) {
  Cursor c(input);
  Interleaving s;
  s.initial = parse_header(c, "interleaving");
  std::vector<PendingRef> refs;
  while (!c.at(Tok::rbrace)) {
    Pid pid = parse_name<Pid>(c, "pid");
    c.expect(Tok::colon, "':'");
    s.events.push_back(Event{std::move(pid), parse_action(c, refs)});
    if (c.at(Tok::comma)) c.fail("interleaving entries hold exactly one action");
  }
  c.expect(Tok::rbrace, "'}'");
  s.constraints = parse_constraint_block(c);
  c.expect_end();
  check_refs(c, refs, s.constraints);
  return s;
}

std::string serialize_interleaving(const Interleaving& s) {
  std::string out = "interleaving { initial: " + s.initial.str();
  std::set<std::string> ids;
  for (const auto& e : s.events) {
    out += "\n  " + e.pid.str() + ": " + to_string(e.action);
    if (const auto* r = std::get_if<Receive>(&e.action)) ids.insert(r->constraint);
  }
  out += " }\n";
  return out + constraint_block(s.constraints, ids);
}

}  // namespace racetrace
