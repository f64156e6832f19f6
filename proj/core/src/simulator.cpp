#include "racetrace/simulator.hpp"

#include <random>
#include <set>

#include "racetrace/causality.hpp"
#include "racetrace/errors.hpp"
#include "racetrace/trace_format.hpp"

namespace racetrace {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::completed: return "completed";
    case Outcome::deadlock: return "deadlock";
    case Outcome::step_limit: return "step-limit";
  }
  return {};
}

namespace {

Term eval(const Expr& e, const Env& env, const Pid& self) {
  switch (e.kind) {
    case Expr::Kind::literal:
      return *e.literal;
    case Expr::Kind::variable: {
      auto it = env.find(e.variable);
      if (it == env.end()) throw SimulationError("unbound variable '" + e.variable + "'");
      return it->second;
    }
    case Expr::Kind::tuple:
    case Expr::Kind::list: {
      std::vector<Term> items;
      for (const auto& i : e.items) items.push_back(eval(i, env, self));
      return e.kind == Expr::Kind::tuple ? Term::tuple(std::move(items))
                                         : Term::list(std::move(items));
    }
    case Expr::Kind::self:
      return Term::pid(self.str());
  }
  return Term::atom("ok");
}

}  // namespace

SysState::SysState(std::shared_ptr<const Program> program) : program_(std::move(program)) {
  const FunctionDef* main = program_->find(program_->main);
  if (!main) throw ProgramError("unknown main function '" + program_->main + "'");
  Pid root("p1");
  trace_.initial = root;
  create(root, *main, {});
}

void SysState::create(const Pid& pid, const FunctionDef& def, std::vector<Term> args) {
  ProcState p;
  p.pid = pid;
  for (std::size_t i = 0; i < def.params.size(); ++i) p.env.insert_or_assign(def.params[i], args.at(i));
  p.frames.push_back(Frame{&def.body, 0, {}, std::nullopt, Term::atom("ok"), false});
  trace_.processes[pid];
  auto& stored = procs_.insert_or_assign(pid, std::move(p)).first->second;
  settle(stored);
}

const Stmt* SysState::current(const ProcState& p) const {
  if (p.frames.empty()) return nullptr;
  const Frame& f = p.frames.back();
  return f.pc < f.body->size() ? &(*f.body)[f.pc] : nullptr;
}

void SysState::settle(ProcState& p) {
  while (!p.frames.empty()) {
    Frame& f = p.frames.back();
    if (f.pc == f.body->size()) {
      Frame done = std::move(f);
      p.frames.pop_back();
      if (!done.clause) continue;
      p.env = std::move(done.saved);
      if (done.bind) p.env.insert_or_assign(*done.bind, done.last);
      Frame& parent = p.frames.back();
      parent.last = done.last;
      ++parent.pc;
      continue;
    }
    const Stmt& s = (*f.body)[f.pc];
    if (s.kind != Stmt::Kind::value) return;
    Term v = eval(s.value, p.env, p.pid);
    if (s.bind) p.env.insert_or_assign(*s.bind, v);
    f.last = std::move(v);
    ++f.pc;
  }
}

std::optional<std::size_t> SysState::receivable(const ProcState& p, const Stmt& s) const {
  const Constraint& cs = program_->constraints.at(s.constraint);
  for (std::size_t i = 0; i < p.mailbox.size(); ++i) {
    if (match(p.mailbox[i].second, cs)) return i;
  }
  return std::nullopt;
}

std::optional<Action> SysState::next_action(const Pid& pid) const {
  auto it = procs_.find(pid);
  if (it == procs_.end()) return std::nullopt;
  const ProcState& p = it->second;
  const Stmt* s = current(p);
  if (!s) return std::nullopt;
  switch (s->kind) {
    case Stmt::Kind::spawn:
      return Spawn{child_pid(pid, p.spawned + 1)};
    case Stmt::Kind::send: {
      Term target = eval(s->target, p.env, pid);
      if (target.kind() != Term::Kind::pid || !procs_.contains(Pid(target.name()))) {
        throw SimulationError(pid.str() + " sends to " + to_string(target) + ", which is not a process");
      }
      return Send{message_tag(pid, p.sent + 1), eval(s->value, p.env, pid), Pid(target.name())};
    }
    case Stmt::Kind::receive: {
      auto i = receivable(p, *s);
      if (!i) return std::nullopt;
      return Receive{p.mailbox[*i].first, s->constraint};
    }
    case Stmt::Kind::value:
      break;
  }
  return std::nullopt;
}

std::vector<Enabled> SysState::enabled() const {
  std::vector<Enabled> out;
  for (const auto& [pid, p] : procs_) {
    if (auto a = next_action(pid)) out.push_back(Enabled{pid, std::move(*a)});
  }
  return out;
}

std::vector<Pid> SysState::blocked() const {
  std::vector<Pid> out;
  for (const auto& [pid, p] : procs_) {
    if (!p.finished() && !next_action(pid)) out.push_back(pid);
  }
  return out;
}

void SysState::step(const Pid& pid) {
  auto action = next_action(pid);
  if (!action) throw SimulationError(pid.str() + " is not enabled");
  ProcState& p = procs_.at(pid);
  Frame& f = p.frames.back();
  const Stmt& s = (*f.body)[f.pc];
  trace_.processes[pid].push_back(*action);
  ++steps_;

  if (const auto* sp = std::get_if<Spawn>(&*action)) {
    ++p.spawned;
    std::vector<Term> args;
    for (const auto& a : s.args) args.push_back(eval(a, p.env, pid));
    Term v = Term::pid(sp->child.str());
    if (s.bind) p.env.insert_or_assign(*s.bind, v);
    f.last = std::move(v);
    ++f.pc;
    settle(p);
    create(sp->child, *program_->find(s.function), std::move(args));
  } else if (const auto* snd = std::get_if<Send>(&*action)) {
    ++p.sent;
    procs_.at(snd->target).mailbox.emplace_back(snd->tag, snd->value);
    if (s.bind) p.env.insert_or_assign(*s.bind, snd->value);
    f.last = snd->value;
    ++f.pc;
    settle(p);
  } else {
    const auto& rec = std::get<Receive>(*action);
    auto i = *receivable(p, s);
    Term value = p.mailbox[i].second;
    p.mailbox.erase(p.mailbox.begin() + static_cast<std::ptrdiff_t>(i));
    const Constraint& cs = program_->constraints.at(s.constraint);
    trace_.constraints.emplace(cs.id, cs);
    std::size_t k = *matching_clause(value, cs);
    const ReceiveClause& clause = s.clauses[k];
    Frame inner{&clause.body, 0, p.env, s.bind, Term::atom("ok"), true};
    auto bound = match_pattern(clause.head.pattern, value);
    for (auto& [var, term] : *bound) p.env.insert_or_assign(var, term);
    (void)rec;
    p.frames.push_back(std::move(inner));
    settle(p);
  }
}

std::string SysState::key() const {
  std::string out = serialize_trace(trace_);
  for (const auto& [pid, p] : procs_) {
    out += pid.str() + ":";
    for (const auto& [tag, v] : p.mailbox) out += " " + tag.str();
    out += "\n";
  }
  return out;
}

namespace {

Run finish(const SysState& s, Outcome outcome) {
  Run r{s.trace(), outcome, {}, s.steps()};
  if (outcome == Outcome::deadlock) r.blocked = s.blocked();
  return r;
}

std::optional<Outcome> quiescent(const SysState& s, const std::vector<Enabled>& en,
                                 std::size_t max_steps) {
  if (en.empty()) return s.blocked().empty() ? Outcome::completed : Outcome::deadlock;
  if (s.steps() >= max_steps) return Outcome::step_limit;
  return std::nullopt;
}

}  // namespace

Run run_to_completion(SysState state, std::size_t max_steps) {
  while (true) {
    auto en = state.enabled();
    if (auto o = quiescent(state, en, max_steps)) return finish(state, *o);
    state.step(en.front().pid);
  }
}

Run run_random(std::shared_ptr<const Program> program, std::uint64_t seed, std::size_t max_steps) {
  SysState state(std::move(program));
  std::mt19937_64 rng(seed);
  while (true) {
    auto en = state.enabled();
    if (auto o = quiescent(state, en, max_steps)) return finish(state, *o);
    state.step(en[rng() % en.size()].pid);
  }
}

namespace {

// Renames pids and tags of a prefix value into simulator names.
std::optional<Term> align(const Term& t, const std::map<Pid, Pid>& pids,
                          const std::map<Tag, Tag>& tags) {
  switch (t.kind()) {
    case Term::Kind::pid: {
      auto it = pids.find(Pid(t.name()));
      if (it == pids.end()) return std::nullopt;
      return Term::pid(it->second.str());
    }
    case Term::Kind::tag: {
      auto it = tags.find(Tag(t.name()));
      if (it == tags.end()) return std::nullopt;
      return Term::tag(it->second.str());
    }
    case Term::Kind::tuple:
    case Term::Kind::list: {
      std::vector<Term> items;
      for (const auto& i : t.items()) {
        auto a = align(i, pids, tags);
        if (!a) return std::nullopt;
        items.push_back(std::move(*a));
      }
      return t.kind() == Term::Kind::tuple ? Term::tuple(std::move(items))
                                           : Term::list(std::move(items));
    }
    default:
      return t;
  }
}

}  // namespace

Replay replay_prefix(std::shared_ptr<const Program> program, const Trace& prefix) {
  if (auto v = validate_trace(prefix); !v) {
    throw PreconditionError("invalid prefix: " + to_string(*v.violation));
  }
  Interleaving order;
  try {
    order = linearize(prefix, Delivery::mailbox_order);
  } catch (const PreconditionError&) {
    throw Divergence(std::nullopt, "no schedule delivers the prefix's messages in send order");
  }

  Replay r{SysState(std::move(program)), {}, {}};
  r.pids.emplace(prefix.initial, r.state.trace().initial);
  std::map<Pid, std::size_t> position;
  for (const auto& e : order.events) {
    EventId at{e.pid, position[e.pid]++};
    const Pid& sim = r.pids.at(e.pid);
    auto predicted = r.state.next_action(sim);
    auto expected = to_string(e.action);
    if (!predicted) {
      throw Divergence(at, "expected " + expected + " but " + sim.str() + " cannot act");
    }
    auto mismatch = [&] {
      return Divergence(at, "expected " + expected + " but the program performs " +
                                to_string(*predicted));
    };
    if (predicted->index() != e.action.index()) throw mismatch();
    if (const auto* sp = std::get_if<Spawn>(&e.action)) {
      r.pids.insert_or_assign(sp->child, std::get<Spawn>(*predicted).child);
    } else if (const auto* snd = std::get_if<Send>(&e.action)) {
      const auto& got = std::get<Send>(*predicted);
      auto target = r.pids.find(snd->target);
      auto value = align(snd->value, r.pids, r.tags);
      if (target == r.pids.end() || target->second != got.target || !value || *value != got.value) {
        throw mismatch();
      }
      r.tags.insert_or_assign(snd->tag, got.tag);
    } else {
      const auto& rec = std::get<Receive>(e.action);
      const auto& got = std::get<Receive>(*predicted);
      auto tag = r.tags.find(rec.tag);
      const auto& want = prefix.constraints.at(rec.constraint);
      const auto& have = r.state.program().constraints.at(got.constraint);
      if (tag == r.tags.end() || tag->second != got.tag || want.clauses != have.clauses) {
        throw mismatch();
      }
    }
    r.state.step(sim);
  }
  return r;
}

Executions enumerate_executions(std::shared_ptr<const Program> program, std::size_t max_steps) {
  Executions out;
  std::map<std::string, Run> found;
  std::set<std::string> seen;
  std::vector<SysState> stack{SysState(std::move(program))};
  while (!stack.empty()) {
    SysState s = std::move(stack.back());
    stack.pop_back();
    if (!seen.insert(s.key()).second) continue;
    ++out.states;
    auto en = s.enabled();
    if (auto o = quiescent(s, en, max_steps)) {
      if (*o == Outcome::step_limit) {
        ++out.step_limit_branches;
      } else {
        found.try_emplace(serialize_trace(s.trace()), finish(s, *o));
      }
      continue;
    }
    for (auto it = en.rbegin(); it != en.rend(); ++it) {
      SysState next = s;
      next.step(it->pid);
      stack.push_back(std::move(next));
    }
  }
  for (auto& [key, run] : found) out.runs.push_back(std::move(run));
  return out;
}

}  // namespace racetrace
