#include <gtest/gtest.h>

#include "racetrace/errors.hpp"
#include "racetrace/races.hpp"
#include "racetrace/trace_format.hpp"
#include "support.hpp"

using namespace racetrace;
using namespace racetrace::testing;

namespace {

std::set<Tag> tags(std::initializer_list<const char*> names) {
  std::set<Tag> out;
  for (const char* n : names) out.insert(Tag(n));
  return out;
}

std::set<Tag> received(const Trace& t) {
  std::set<Tag> out;
  for (const auto& [pid, seq] : t.processes) {
    for (const auto& a : seq) {
      if (const auto* r = std::get_if<Receive>(&a)) out.insert(r->tag);
    }
  }
  return out;
}

std::set<Tag> sent(const Trace& t) {
  std::set<Tag> out;
  for (const auto& [pid, seq] : t.processes) {
    for (const auto& a : seq) {
      if (const auto* s = std::get_if<Send>(&a)) out.insert(s->tag);
    }
  }
  return out;
}

void expect_oracle_agrees(const Trace& t) {
  const std::set<Tag> all = sent(t);
  for (const Tag& subject : received(t)) {
    std::set<Tag> expected;
    for (const Tag& other : all) {
      if (declarative_race(t, subject, other)) expected.insert(other);
    }
    EXPECT_EQ(race_set(t, subject).racers, expected) << "subject " << subject << "\n" << serialize_trace(t);
  }
}

void expect_variants_well_formed(const Trace& t) {
  for (const auto& report : all_races(t)) {
    for (const Tag& racer : report.racers) {
      Variant v = make_variant(t, report.subject, racer);
      ASSERT_TRUE(validate_trace(v.trace)) << serialize_trace(v.trace);
      EXPECT_EQ(v.replaced, report.receive);
      EXPECT_EQ(v.old_tag, report.subject);
      EXPECT_EQ(v.new_tag, racer);

      const auto& seq = v.trace.of(v.replaced.pid);
      ASSERT_EQ(seq.size(), v.replaced.index + 1);
      const auto& old_rec = std::get<Receive>(t.at(report.receive));
      EXPECT_EQ(seq.back(), (Action{Receive{racer, old_rec.constraint}}));
      const auto& original = t.of(v.replaced.pid);
      EXPECT_TRUE(std::equal(seq.begin(), seq.end() - 1, original.begin()));

      Trace without = v.trace;
      without.processes[v.replaced.pid].pop_back();
      EXPECT_TRUE(is_subtrace(without, t));
      EXPECT_TRUE(sent(v.trace).count(racer)) << racer;
    }
  }
}

}  // namespace

TEST(RaceSet, RunningExampleReceiveOfL2) {
  RaceReport r = race_set(fixture_trace("run.trace"), Tag("l2"));
  EXPECT_EQ(r.receive, (EventId{Pid("p3"), 2}));
  EXPECT_EQ(r.racers, tags({"l6", "l8"}));
  ASSERT_EQ(r.candidates.size(), 5u);

  const auto& l1 = r.candidates.at(Tag("l1"));
  EXPECT_TRUE(l1.matches);
  EXPECT_TRUE(l1.received_before);
  EXPECT_FALSE(l1.races());

  const auto& l4 = r.candidates.at(Tag("l4"));
  EXPECT_FALSE(l4.matches);
  EXPECT_FALSE(l4.races());

  const auto& l7 = r.candidates.at(Tag("l7"));
  EXPECT_TRUE(l7.matches);
  EXPECT_TRUE(l7.after_receive);
  EXPECT_FALSE(l7.races());

  for (const char* in : {"l6", "l8"}) {
    const auto& c = r.candidates.at(Tag(in));
    EXPECT_TRUE(c.races()) << in << ": " << c.reason();
  }
  // l8 is not blocked: the only earlier send from p5 that is still pending is
  // l4, which does not match.
  EXPECT_FALSE(r.candidates.at(Tag("l8")).blocked_by);
}

TEST(RaceSet, ReasonsNameTheFailedCondition) {
  RaceReport r = race_set(fixture_trace("run.trace"), Tag("l2"));
  EXPECT_NE(r.candidates.at(Tag("l4")).reason().find("match"), std::string::npos);
  EXPECT_NE(r.candidates.at(Tag("l7")).reason().find("happens after"), std::string::npos)
      << r.candidates.at(Tag("l7")).reason();
  EXPECT_NE(r.candidates.at(Tag("l1")).reason().find("received"), std::string::npos);
}

TEST(RaceSet, MotivatingTrace) {
  RaceReport r = race_set(fixture_trace("tau_a.trace"), Tag("l1"));
  EXPECT_EQ(r.racers, tags({"l3"}));
  EXPECT_FALSE(r.candidates.at(Tag("l2")).matches);
}

TEST(RaceSet, MatchingFourthMessageBlocksEighth) {
  Trace t = fixture_trace("run_v4.trace");
  RaceReport r = race_set(t, Tag("l2"));
  EXPECT_EQ(r.racers, tags({"l4", "l6"}));
  EXPECT_EQ(r.candidates.at(Tag("l8")).blocked_by, Tag("l4"));
  EXPECT_TRUE(declarative_race(t, Tag("l2"), Tag("l4")));
  EXPECT_FALSE(declarative_race(t, Tag("l2"), Tag("l8")));
}

TEST(RaceSet, OnlyIncomingMessageHasNoRacers) {
  Trace t = parse_trace(
      "trace { initial: p1\n  p1: spawn(p2), send(l1, ok, p2)\n  p2: rec(l1, c) }\n"
      "constraints { c: ok -> . }\n");
  RaceReport r = race_set(t, Tag("l1"));
  EXPECT_TRUE(r.racers.empty());
  EXPECT_TRUE(r.candidates.empty());
}

TEST(RaceSet, UnreceivedTagThrows) {
  EXPECT_THROW(race_set(fixture_trace("run.trace"), Tag("l7")), PreconditionError);
  EXPECT_THROW(race_set(fixture_trace("run.trace"), Tag("l99")), PreconditionError);
}

TEST(RaceSet, AllRacesOnFixtures) {
  auto tau = all_races(fixture_trace("tau_a.trace"));
  ASSERT_EQ(tau.size(), 1u);
  EXPECT_EQ(tau[0].subject, Tag("l1"));
  EXPECT_EQ(tau[0].racers, tags({"l3"}));

  Trace run = fixture_trace("run.trace");
  auto reports = all_races(run);
  ASSERT_EQ(reports.size(), 6u);
  std::vector<std::string> subjects;
  for (const auto& r : reports) subjects.push_back(r.subject.str());
  EXPECT_EQ(subjects, (std::vector<std::string>{"l5", "l1", "l2", "l4", "l6", "l3"}));
  for (const auto& r : reports) {
    std::set<Tag> expected;
    for (const Tag& other : sent(run)) {
      if (declarative_race(run, r.subject, other)) expected.insert(other);
    }
    EXPECT_EQ(r.racers, expected) << r.subject;
  }

  Trace quiet = parse_trace("trace { initial: p1\n  p1: spawn(p2)\n  p2: ε }\n");
  EXPECT_TRUE(all_races(quiet).empty());
}

TEST(Declarative, Examples) {
  Trace run = fixture_trace("run.trace");
  EXPECT_FALSE(declarative_race(run, Tag("l2"), Tag("l7")));
  EXPECT_FALSE(declarative_race(run, Tag("l2"), Tag("l2")));
  EXPECT_TRUE(declarative_race(run, Tag("l2"), Tag("l6")));
  EXPECT_TRUE(declarative_race(run, Tag("l2"), Tag("l8")));
}

TEST(Declarative, AgreesWithRaceSetOnFixtures) {
  for (const char* name : {"tau_a.trace", "run.trace", "run_v4.trace", "golden/run_variant_l2_l6.trace",
                           "golden/tau_a_variant_l1_l3.trace", "golden/run_subtrace.trace"}) {
    SCOPED_TRACE(name);
    expect_oracle_agrees(fixture_trace(name));
  }
}

TEST(Declarative, AgreesWithRaceSetOnRandomTraces) {
  for (const Trace& t : random_traces(606, 150, 14)) expect_oracle_agrees(t);
}

TEST(Variant, RunningExampleMatchesGolden) {
  Variant v = make_variant(fixture_trace("run.trace"), Tag("l2"), Tag("l6"));
  EXPECT_EQ(serialize_trace(v.trace), read_fixture("golden/run_variant_l2_l6.trace"));
  EXPECT_EQ(v.replaced, (EventId{Pid("p3"), 2}));
}

TEST(Variant, MotivatingTraceOnlyChangesTheReceive) {
  Variant v = make_variant(fixture_trace("tau_a.trace"), Tag("l1"), Tag("l3"));
  EXPECT_EQ(serialize_trace(v.trace), read_fixture("golden/tau_a_variant_l1_l3.trace"));
}

TEST(Variant, PairOutsideRaceSetIsRefused) {
  Trace run = fixture_trace("run.trace");
  try {
    make_variant(run, Tag("l2"), Tag("l7"));
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("happens after"), std::string::npos) << e.what();
  }
  EXPECT_THROW(make_variant(run, Tag("l2"), Tag("l4")), PreconditionError);
  EXPECT_THROW(make_variant(run, Tag("l2"), Tag("l2")), PreconditionError);
}

TEST(Variant, WellFormedOnFixtures) {
  for (const char* name : {"tau_a.trace", "run.trace", "run_v4.trace"}) {
    SCOPED_TRACE(name);
    expect_variants_well_formed(fixture_trace(name));
  }
}

TEST(Variant, WellFormedOnRandomTraces) {
  for (const Trace& t : random_traces(707, 200, 40)) expect_variants_well_formed(t);
}

TEST(RaceSetProperty, RacersAreOnePerSenderAndTargetTheReceiver) {
  std::vector<Trace> traces = random_traces(808, 200, 40);
  traces.push_back(fixture_trace("run.trace"));
  traces.push_back(fixture_trace("run_v4.trace"));
  for (const Trace& t : traces) {
    for (const auto& r : all_races(t)) {
      EXPECT_FALSE(r.racers.count(r.subject));
      std::set<Pid> senders;
      for (const Tag& racer : r.racers) {
        const auto& c = r.candidates.at(racer);
        EXPECT_TRUE(senders.insert(c.send.pid).second) << racer;
        EXPECT_EQ(std::get<Send>(t.at(c.send)).target, r.receive.pid);
      }
    }
  }
}

TEST(RemoveDependents, CascadesThroughSpawnsAndMessages) {
  Trace run = fixture_trace("run.trace");
  // Dropping p3's send(l5) cuts p1 before rec(l5); that takes s7 with it.
  Trace cut = remove_dependents({run.of(Pid("p3"))[4]}, run);
  EXPECT_EQ(cut.of(Pid("p1")).size(), 4u);
  EXPECT_EQ(cut.of(Pid("p3")), run.of(Pid("p3")));

  // Dropping a spawn erases the child and what it caused.
  Trace t = fixture_trace("tau_a.trace");
  std::vector<Action> tail(t.of(Pid("p1")).begin() + 1, t.of(Pid("p1")).end());
  t.processes[Pid("p1")].resize(1);
  Trace cut2 = remove_dependents(tail, t);
  EXPECT_EQ(cut2.processes.count(Pid("p3")), 0u);
  EXPECT_TRUE(cut2.of(Pid("p2")).empty());
  EXPECT_TRUE(cut2.processes.count(Pid("p2")));
  EXPECT_TRUE(validate_trace(cut2));
}

TEST(Orphans, Examples) {
  EXPECT_EQ(orphans(fixture_trace("run.trace")), tags({"l7", "l8"}));
  EXPECT_EQ(orphans(fixture_trace("tau_a.trace")), tags({"l2", "l3"}));
  EXPECT_TRUE(orphans(parse_trace("trace { initial: p1\n  p1: spawn(p2)\n  p2: ε }\n")).empty());
}
