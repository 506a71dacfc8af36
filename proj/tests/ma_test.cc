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

#include <functional>

#include "nestql/error.h"
#include "nestql/ma.h"

namespace nestql {
namespace {

Value Eval(const char* q, const char* v, CollKind sem = CollKind::kSet) {
  EvalOptions o;
  o.sem = sem;
  return EvalMA(ParseMA(q), ParseValue(v), o);
}

int CountOps(const ExprP& e, Op op) {
  int n = e->op == op;
  for (const auto& k : e->kids) n += CountOps(k, op);
  return n;
}

TEST(MAParse, Examples) {
  EXPECT_TRUE(ExprEqual(ParseMA("id ; sng"), ma::Compose(ma::Id(), ma::Sng())));
  EXPECT_TRUE(ExprEqual(ParseMA("tup[1 = 'a', 2 = 'b']"), ma::Tuple({{"1", ma::Const("a")}, {"2", ma::Const("b")}})));
  EXPECT_TRUE(ExprEqual(ParseMA("map(pi[A]) ; flatten"), ma::Compose(ma::Map(ma::P("A")), ma::Flatten())));
}

TEST(MAParse, RoundTrip) {
  for (const char* s : {"tup[1 = '0' ; sng, 2 = '1' ; sng] ; union", "pairwith[A] ; map(pi[A.B])",
                        "select[A = 'x' && !(B =mon C)] ; nest[C = (B)]", "cart(id, id) ; eq[1, 2]",
                        "flatmap(pi[R]) ; unique ; monus"}) {
    ExprP q = ParseMA(s);
    EXPECT_TRUE(ExprEqual(ParseMA(PrintMA(q)), q)) << s;
  }
}

TEST(MAParse, ErrorsCarryPosition) {
  try {
    ParseMA("map(pi[A]");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_GT(e.pos(), 0u);
  }
}

TEST(MATyping, Examples) {
  EXPECT_EQ(InferType(ma::Sng(), Type::Dom(), CollKind::kSet), ParseType("{Dom}"));
  EXPECT_EQ(InferType(ma::Flatten(), ParseType("{{Dom}}"), CollKind::kSet), ParseType("{Dom}"));
  EXPECT_THROW(InferType(ma::P("A"), Type::Dom(), CollKind::kSet), TypeError);
  EXPECT_EQ(InferType(ParseMA("cart(id, id)"), ParseType("{Dom}"), CollKind::kSet), ParseType("{<1: Dom, 2: Dom>}"));
}

TEST(MAEval, DoublyExponentialStepOne) {
  EXPECT_EQ(Eval("union('0' ; sng, '1' ; sng) ; cart(id, id)", "<>"),
            ParseValue("{<1: 0, 2: 0>, <1: 0, 2: 1>, <1: 1, 2: 0>, <1: 1, 2: 1>}"));
}

TEST(MAEval, Identity) {
  for (const char* v : {"a", "<>", "{a, b}", "<A: {b}>"}) EXPECT_EQ(Eval("id", v), ParseValue(v));
  EXPECT_EQ(Eval("id", "[a, a]", CollKind::kList), ParseValue("[a, a]"));
}

TEST(MAEval, DifferenceBySelection) {
  const char* q =
      "pairwith[R] ; map(tup[R = pi[R], SR = tup[R = pi[R], S = pi[S]] ; pairwith[S] ; select[R = S]]) ; "
      "select[!pred(pi[SR])] ; map(pi[R])";
  EXPECT_EQ(Eval(q, "<R: {a, b}, S: {b}>"), ParseValue("{a}"));
  EXPECT_EQ(Eval(q, "<R: {a, b}, S: {b}>"), Eval("tup[1 = pi[R], 2 = pi[S]] ; diff", "<R: {a, b}, S: {b}>"));
}

TEST(MAEval, TrueOnLists) {
  EXPECT_EQ(Eval("true", "[<>, <>]", CollKind::kList), ParseValue("[<>]"));
  EXPECT_EQ(Eval("true", "[]", CollKind::kList), ParseValue("[]"));
  EXPECT_EQ(Eval("not", "[]", CollKind::kList), ParseValue("[<>]"));
}

TEST(MAEval, PairWith) {
  EXPECT_EQ(Eval("pairwith[B]", "<A: a, B: {b, c}>"), ParseValue("{<A: a, B: b>, <A: a, B: c>}"));
}

TEST(MAEval, BagSemantics) {
  EXPECT_EQ(Eval("union(id, id)", "{|a|}", CollKind::kBag), ParseValue("{|a, a|}"));
  EXPECT_EQ(Eval("union(id, id) ; unique", "{|a|}", CollKind::kBag), ParseValue("{|a|}"));
  EXPECT_EQ(Eval("tup[1 = union(id, id), 2 = id] ; monus", "{|a|}", CollKind::kBag), ParseValue("{|a|}"));
}

TEST(MAEval, EqualityPredicates) {
  EXPECT_EQ(Eval("eqatom[A, B]", "<A: a, B: a>"), ParseValue("{<>}"));
  EXPECT_EQ(Eval("eqatom[A, B]", "<A: a, B: b>"), ParseValue("{}"));
  EXPECT_EQ(Eval("eq[A, B]", "<A: {a, b}, B: {b, a}>"), ParseValue("{<>}"));
  EXPECT_EQ(Eval("eqmon[A, B]", "<A: <C: a>, B: <C: a>>"), ParseValue("{<>}"));
}

TEST(MAEval, NodeGuard) {
  EvalOptions o;
  o.max_nodes = 1000;
  ExprP q = ParseMA("union('0' ; sng, '1' ; sng) ; cart(id, id) ; cart(id, id) ; cart(id, id) ; cart(id, id)");
  EXPECT_THROW(EvalMA(q, Value::Unit(), o), LimitError);
}

TEST(MADesugar, CartesianProductIsExampleForm) {
  ExprP d = Desugar(ParseMA("cart(id, id)"), ParseType("{Dom}"), CollKind::kSet);
  EXPECT_TRUE(IsCore(d));
  EXPECT_EQ(PrintMA(d), "tup[1 = id, 2 = id] ; pairwith[1] ; map(pairwith[2]) ; flatten");
}

TEST(MADesugar, TrivialSelectionIsIdentity) {
  ExprP q = ParseMA("select[true]");
  for (const char* v : {"{}", "{a}", "{a, b, c}"}) EXPECT_EQ(Eval("select[true]", v), ParseValue(v));
  EXPECT_TRUE(IsCore(Desugar(q, ParseType("{Dom}"), CollKind::kSet)));
}

TEST(ExpandMonEq, FourAtomicTests) {
  Type t = ParseType("<C: <D: Dom, E: <F: Dom, G: Dom>>, H: Dom>");
  ExprP q = ExpandMonEq(t);
  EXPECT_EQ(CountOps(q, Op::kEqAtomic), 4);
  std::vector<std::string> seen;
  std::function<void(const ExprP&)> walk = [&](const ExprP& e) {
    if (e->op == Op::kEqAtomic) seen.push_back(PrintPath(e->path) + "=" + PrintPath(e->path2));
    for (const auto& k : e->kids) walk(k);
  };
  walk(q);
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(seen, (std::vector<std::string>{"A.C.D=B.C.D", "A.C.E.F=B.C.E.F", "A.C.E.G=B.C.E.G", "A.H=B.H"}));
}

TEST(ExpandMonEq, DomAndUnit) {
  EXPECT_TRUE(ExprEqual(ExpandMonEq(Type::Dom()), ma::EqAtomic({"A"}, {"B"})));
  EXPECT_EQ(EvalMA(ExpandMonEq(Type::Unit()), ParseValue("<A: <>, B: <>>")), ParseValue("{<>}"));
}

TEST(SizeBound, Examples) {
  EXPECT_EQ(SizeBound(ma::Id(), 5), BigNat(5));
  EXPECT_EQ(SizeBound(ma::PairWith("A"), 3), BigNat(10));
  EXPECT_EQ(SizeBound(ma::Compose(ma::PairWith("A"), ma::PairWith("B")), 2), BigNat(26));
}

}  // namespace
}  // namespace nestql
