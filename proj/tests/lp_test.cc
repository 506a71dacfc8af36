//
// Copyright 2026 The nestql Authors
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

#include "nestql/detree.h"
#include "nestql/error.h"
#include "nestql/gen.h"
#include "nestql/lp.h"

namespace nestql {
namespace {

const char* kUnionProgram = R"(% goal: p6
p0(eps, dummy).
p1(X, 0) :- p0(X, v).
p2(X, s.v) :- p1(X, v).
p3(X, 1) :- p0(X, v).
p4(X, s.v) :- p3(X, v).
p5(X, 1.v) :- p2(X, v).
p5(X, 2.v) :- p4(X, v).
p6(X, (1.i).v) :- p5(X, 1.i.v).
p6(X, (2.i).v) :- p5(X, 2.i.v).
)";

// The map closes by moving the member index back from the prefix.
const char* kMapProgram = R"(% goal: p6
p1(X.i, v) :- p_input(X, i.v).
p2(X, v) :- p1(X, A.v).
p3(X, v) :- p1(X, B.v).
p4(X, s.v) :- p3(X, v).
p5(X, C.v) :- p2(X, v).
p5(X, D.v) :- p4(X, v).
p6(X, i.v) :- p5(X.i, v).
)";

PathSet PS(std::initializer_list<const char*> lines) {
  std::string text;
  for (const char* l : lines) text += std::string(l) + "\n";
  return ParsePathSet(text);
}

TEST(CompileLP, UnionOfSingletons) {
  LogicProgram p = CompileLP(ParseMA("tup[1 = '0' ; sng, 2 = '1' ; sng] ; union"));
  EXPECT_EQ(p.rules.size(), 9u);
  EXPECT_TRUE(RuleIsomorphic(p, ParseLP(kUnionProgram)));
  EXPECT_EQ(EvalLP(p), PS({"(1.s).0", "(2.s).1"}));
}

TEST(CompileLP, MapWithInputPredicate) {
  LPOptions o;
  o.input_pred = "p_input";
  o.input = ParseType("{<A: Dom, B: Dom>}");
  o.input_may_be_empty = false;
  LogicProgram p = CompileLP(ParseMA("map(tup[C = pi[A], D = pi[B] ; sng])"), o);
  EXPECT_EQ(p.rules.size(), 7u);
  EXPECT_TRUE(RuleIsomorphic(p, ParseLP(kMapProgram)));
}

TEST(CompileLP, IdentityIsOneCopyRule) {
  LogicProgram p = CompileLP(ma::Id());
  ASSERT_EQ(p.rules.size(), 2u);  // base fact plus copy
  EXPECT_EQ(PrintRule(p.rules[1]), "p1(X, v) :- p0(X, v).");
}

TEST(CompileLP, RejectsSugarAndDeepEquality) {
  EXPECT_THROW(CompileLP(ParseMA("cart(id, id)")), Error);
  EXPECT_THROW(CompileLP(ParseMA("not")), Error);
}

TEST(RuleIsomorphic, DetectsDifferences) {
  LogicProgram a = ParseLP(kUnionProgram);
  LogicProgram b = ParseLP(std::string(kUnionProgram).replace(std::string(kUnionProgram).find("p3(X, 1)"), 8, "p3(X, 7)"));
  EXPECT_FALSE(RuleIsomorphic(a, b));
  EXPECT_FALSE(RuleIsomorphic(a, ParseLP(kMapProgram)));
}

TEST(EvalLP, ProgramText) { EXPECT_EQ(EvalLP(ParseLP(kUnionProgram)), PS({"(1.s).0", "(2.s).1"})); }

TEST(EvalLP, UnsatisfiedGoalIsEmpty) {
  EXPECT_TRUE(EvalLP(ParseLP("% goal: p2\np0(eps, dummy).\np1(X, a) :- p0(X, b).\np2(X, v) :- p1(X, v).\n")).empty());
}

TEST(EvalLP, SelfProduct) {
  ExprP q = ParseMA(
      "tup[1 = '0' ; sng, 2 = '1' ; sng] ; union ; tup[A = id, B = id] ; pairwith[A] ; map(pairwith[B]) ; flatten");
  PathSet want = PS({"((1.s).1.s).A.0", "((1.s).1.s).B.0", "((1.s).2.s).A.0", "((1.s).2.s).B.1",
                     "((2.s).1.s).A.1", "((2.s).1.s).B.0", "((2.s).2.s).A.1", "((2.s).2.s).B.1"});
  EXPECT_EQ(EvalLP(CompileLP(q)), want);
  EXPECT_EQ(EvalLP(CompileLP(q)), EvalDet(q, EncodeDet(Value::Atom("dummy"))));
}

TEST(GoalTrue, AtomicEquality) {
  EXPECT_TRUE(GoalTrue(CompileLP(ParseMA("tup[A = 'a', B = 'a'] ; eqatom[A, B]"))));
  EXPECT_FALSE(GoalTrue(CompileLP(ParseMA("tup[A = 'a', B = 'b'] ; eqatom[A, B]"))));
}

TEST(GoalTrue, DoubleNegation) {
  LPOptions o;
  o.with_negation = true;
  EXPECT_TRUE(GoalTrue(CompileLP(ParseMA("unit ; sng ; not ; not"), o)));
  EXPECT_FALSE(GoalTrue(CompileLP(ParseMA("unit ; sng ; not"), o)));
  EXPECT_TRUE(GoalTrue(CompileLP(ParseMA("empty ; not"), o)));
}

TEST(LPText, RoundTrips) {
  for (const char* r : {"p6(X, (1.i).v) :- p5(X, 1.i.v).", "p7(X, s.<>) :- set_p3(X), not ne_p3(X)."}) {
    LogicProgram p = ParseLP(std::string("% goal: p6\n") + r + "\n");
    ASSERT_EQ(p.rules.size(), 1u);
    EXPECT_EQ(PrintRule(p.rules[0]), r);
  }
  LogicProgram empty = ParseLP("% goal: p1\n");
  EXPECT_TRUE(empty.rules.empty());
  EXPECT_EQ(PrintLP(empty), "% goal: p1\n");
  LogicProgram ex = ParseLP(kUnionProgram);
  EXPECT_EQ(PrintLP(ex), kUnionProgram);
}

TEST(LPText, RejectsMissingGoal) { EXPECT_THROW(ParseLP("p0(eps, dummy).\n"), Error); }

TEST(LPProperty, ProgramsAreNonrecursiveAndRoundTrip) {
  gen::Rng rng(31);
  gen::QueryOptions qo;
  qo.sem = CollKind::kList;
  qo.allow_not = true;
  qo.max_depth = 3;
  LPOptions o;
  o.with_negation = true;
  for (int i = 0; i < 150; ++i) {
    ExprP q = gen::RandomClosedQuery(rng, qo).q;
    LogicProgram p = CompileLP(q, o);
    EXPECT_TRUE(IsNonrecursive(p)) << PrintMA(q);
    LogicProgram back = ParseLP(PrintLP(p));
    EXPECT_EQ(PrintLP(back), PrintLP(p));
    EXPECT_TRUE(RuleIsomorphic(back, p));
  }
}

TEST(LPProperty, ThreeEvaluatorsAgree) {
  gen::SuiteResult r = gen::SuiteOracles(32, 100, 60);
  EXPECT_TRUE(r.ok()) << (r.notes.empty() ? "" : r.notes[0]);
}

}  // namespace
}  // namespace nestql
