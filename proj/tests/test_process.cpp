// Copyright 2026 The cmpl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
#include <gtest/gtest.h>

#include "helpers.hpp"
#include "oracle.hpp"
#include "random_inputs.hpp"

namespace {

using namespace cmpl;
using testing_util::load_example;
using testing_util::parse;

const char* kPupils = R"(
  rel pupil/3. rel livesIn/2.
  query Q(n) :- pupil(n, c, s), livesIn(n, "Bolzano").
  query Qlow(n) :- pupil(n, c, s), livesIn(n, "Bolzano"), c < 4.
  query Qcity(n) :- livesIn(n, "Bolzano").
  state s0 init.
  action r1 rw pupil(n, c, s) <~ c = 4.
  action rall rw pupil(n, c, s) <~ true.
  action call copy pupil(n, c, s) -> pupil(n, c, s).
  action cbig copy pupil(n, c, s), c > 3 -> pupil(n, c, s).
)";

const RealWorldEffect& rw(const Workspace& ws, const char* a) {
  return ws.qats->action(a).real_world.at(0);
}
const std::vector<CopyEffect>& copies(const Workspace& ws, const char* a) {
  return ws.qats->action(a).copies;
}

TEST(Process, Risky) {
  auto ws = parse(kPupils);
  Verdict v = risky(rw(ws, "r1"), ws.query("Q"));
  EXPECT_TRUE(v.holds);
  ASSERT_TRUE(v.counterexample);
  // The witness pair differs by one new pupil fact that changes the answer.
  const auto& [d2, d1] = std::pair{v.counterexample->ideal, v.counterexample->available};
  EXPECT_TRUE(conforms(d1, d2, {rw(ws, "r1")}));
  EXPECT_NE(evaluate_set(ws.query("Q"), d1), evaluate_set(ws.query("Q"), d2));
  EXPECT_FALSE(risky(rw(ws, "r1"), ws.query("Qcity")).holds);
  EXPECT_FALSE(risky(rw(ws, "r1"), ws.query("Qlow")).holds);
}

TEST(Process, Repaired) {
  auto ws = parse(kPupils);
  EXPECT_TRUE(repaired(rw(ws, "rall"), copies(ws, "call"), ws.query("Q")).holds);
  EXPECT_FALSE(repaired(rw(ws, "rall"), {}, ws.query("Q")).holds);
  Verdict narrow = repaired(rw(ws, "rall"), copies(ws, "cbig"), ws.query("Q"));
  EXPECT_FALSE(narrow.holds);
  ASSERT_TRUE(narrow.test_db);
  EXPECT_TRUE(repaired(rw(ws, "r1"), copies(ws, "cbig"), ws.query("Q")).holds);

  auto school = load_example("school.cmpl");
  EXPECT_TRUE(repaired(rw(school, "pH"), copies(school, "rH"), school.query("QHofer")).holds);
}

void expect_sound_trace(const Qats& t, const Verdict& v, const Query& q) {
  ASSERT_TRUE(v.trace);
  const Trace& tr = *v.trace;
  ASSERT_EQ(tr.ideal.size(), tr.actions.size());
  for (std::size_t j = 0; j < tr.ideal.size(); ++j) {
    for (const auto& f : tr.available[j]) EXPECT_TRUE(tr.ideal[j].count(f));
    if (j == 0) continue;
    const Action& a = t.action(tr.actions[j]);
    EXPECT_TRUE(conforms(tr.ideal[j - 1], tr.ideal[j], a.real_world));
    Instance expect = tr.available[j - 1];
    for (const auto& f : copy_facts(a.copies, tr.ideal[j])) expect.insert(f);
    EXPECT_EQ(tr.available[j], expect);
  }
  IncompleteDatabase last{tr.ideal.back(), tr.available.back(), Regime::kNoNulls};
  EXPECT_FALSE(satisfies_qc(last, q, Semantics::kSet));
}

TEST(Process, SequenceCompleteness) {
  auto ws = load_example("school.cmpl");
  const Qats& t = *ws.qats;
  const Query& q = ws.query("QHofer");
  EXPECT_TRUE(sequence_complete({"pH", "rH"}, q, t).holds);
  Verdict bad = sequence_complete({"rH", "pH"}, q, t);
  EXPECT_FALSE(bad.holds);
  expect_sound_trace(t, bad, q);
  EXPECT_TRUE(sequence_complete({}, q, t).holds);
  EXPECT_TRUE(sequence_complete({"pD", "tD"}, q, t).holds);
  EXPECT_FALSE(sequence_complete({"pH", "rH", "pD"}, ws.query("QBoth"), t).holds);
  EXPECT_THROW(sequence_complete({"zz"}, q, t), std::invalid_argument);
}

TEST(Process, Normalize) {
  using V = std::vector<std::string>;
  EXPECT_EQ(normalize(V{"a", "b", "a"}), (V{"b", "a"}));
  EXPECT_EQ(normalize(V{"a", "b", "c"}), (V{"a", "b", "c"}));
  EXPECT_EQ(normalize(V{"a", "a", "a"}), V{"a"});
  EXPECT_EQ(normalize(V{}), V{});
}

TEST(Process, DesignTimeSchool) {
  auto ws = load_example("school.cmpl");
  const Qats& t = *ws.qats;
  EXPECT_TRUE(design_time_verify(t, "s8", ws.query("QBoth")).holds);
  for (const char* s : {"s2", "s5", "s8"}) EXPECT_TRUE(design_time_verify(t, s, ws.query("QHofer")).holds) << s;
  for (const char* s : {"s6", "s7", "s8"}) EXPECT_TRUE(design_time_verify(t, s, ws.query("QDaVinci")).holds) << s;
  Verdict s1 = design_time_verify(t, "s1", ws.query("QHofer"));
  EXPECT_FALSE(s1.holds);
  expect_sound_trace(t, s1, ws.query("QHofer"));
  EXPECT_FALSE(design_time_verify(t, "s5", ws.query("QBoth")).holds);
  for (const auto& q : {"QHofer", "QDaVinci", "QBoth"})
    EXPECT_TRUE(design_time_verify(t, "s0", ws.query(q)).holds);
  EXPECT_THROW(design_time_verify(t, "nowhere", ws.query("QHofer")), std::invalid_argument);
}

TEST(Process, Runtime) {
  auto ws = load_example("school.cmpl");
  const Qats& t = *ws.qats;
  EXPECT_TRUE(runtime_verify(t, {"pH", "rH"}, ws.query("QHofer")).holds);
  EXPECT_FALSE(runtime_verify(t, {"pH"}, ws.query("QHofer")).holds);
  EXPECT_TRUE(runtime_verify(t, {}, ws.query("QHofer")).holds);
  EXPECT_THROW(runtime_verify(t, {"rH", "pH"}, ws.query("QHofer")), std::invalid_argument);
}

TEST(Process, UnreachableStateIsVacuous) {
  auto ws = parse(R"(
    rel R/1.
    query Q(x) :- R(x).
    state s0 init. state s1. state lost.
    action a rw R(x) <~ true.
    edge s0 a s1.
  )");
  Verdict v = design_time_verify(*ws.qats, "lost", ws.query("Q"));
  EXPECT_TRUE(v.holds);
  EXPECT_FALSE(design_time_verify(*ws.qats, "s1", ws.query("Q")).holds);
}

// The effect only fires when S is nonempty, so the boolean answer never
// changes even though the effect's facts are never copied.
TEST(Process, EffectsThatCannotChangeTheAnswer) {
  auto ws = parse(R"(
    rel S/2.
    query Q() :- S(x, y).
    query P(x) :- S(x, y).
    state s0 init. state s1.
    action grow rw S(z, z) <~ S(x, y).
    edge s0 grow s1.
  )");
  const RealWorldEffect& r = ws.qats->action("grow").real_world.at(0);
  EXPECT_FALSE(repaired(r, {}, ws.query("Q")).holds);
  EXPECT_FALSE(unrepaired_witness(r, {}, ws.query("Q")));
  EXPECT_TRUE(sequence_complete({"grow"}, ws.query("Q"), *ws.qats).holds);
  EXPECT_TRUE(design_time_verify(*ws.qats, "s1", ws.query("Q")).holds);
  Verdict p = sequence_complete({"grow"}, ws.query("P"), *ws.qats);
  EXPECT_FALSE(p.holds);
  expect_sound_trace(*ws.qats, p, ws.query("P"));
}

TEST(Process, DuplicateRemovalInvariance) {
  gen::Rng rng(71);
  for (int i = 0; i < 300; ++i) {
    auto pc = gen::process_case(rng);
    std::vector<std::string> seq;
    int n = gen::uniform(rng, 0, 6);
    for (int k = 0; k < n; ++k) seq.push_back(gen::pick(rng, pc.qats.actions).name);
    EXPECT_EQ(sequence_complete(seq, pc.q, pc.qats).holds,
              sequence_complete(normalize(seq), pc.q, pc.qats).holds);
  }
}

TEST(Process, FailingSequencesHaveSoundTraces) {
  gen::Rng rng(72);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    auto pc = gen::process_case(rng);
    std::vector<std::string> seq;
    for (const auto& a : pc.qats.actions) seq.push_back(a.name);
    Verdict v = sequence_complete(seq, pc.q, pc.qats);
    if (v.holds || !v.trace) continue;
    ++checked;
    expect_sound_trace(pc.qats, v, pc.q);
  }
  EXPECT_GT(checked, 20);
}

TEST(Process, RealizabilityAgreesWithPaths) {
  gen::Rng rng(73);
  for (int i = 0; i < 200; ++i) {
    auto pc = gen::process_case(rng);
    const Qats& t = pc.qats;
    std::size_t na = t.actions.size(), ns = t.states.size();
    auto paths = oracle::normal_paths(t, na + (na + 1) * (ns - 1));
    std::vector<std::string> names;
    for (const auto& a : t.actions) names.push_back(a.name);
    std::vector<std::string> seq;
    std::function<void()> go = [&] {
      for (const auto& s : t.states)
        ASSERT_EQ(realizable(t, seq, s), paths.count({seq, s}) > 0);
      for (const auto& a : names) {
        if (std::find(seq.begin(), seq.end(), a) != seq.end()) continue;
        seq.push_back(a);
        go();
        seq.pop_back();
      }
    };
    go();
  }
}

TEST(Process, ContainmentReductionRoundTrip) {
  gen::Rng rng(74);
  int yes = 0;
  for (int i = 0; i < 200; ++i) {
    auto cc = gen::containment_case(rng);
    auto red = gen::reduce_containment(cc.q, cc.us);
    bool c = contained(cc.q, cc.us).holds;
    EXPECT_EQ(sequence_complete({"a1", "a2"}, red.goal, red.qats).holds, c) << cc.q.repr();
    yes += c;
  }
  EXPECT_GT(yes, 20);
}

}  // namespace
