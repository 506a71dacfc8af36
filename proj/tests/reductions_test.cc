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

#include "nestql/error.h"
#include "nestql/gen.h"
#include "nestql/reductions.h"

namespace nestql {
namespace {

const char* kFirst1 = R"(states: q0 q1 acc
alphabet: 0 1 #
start: q0
final: acc
delta: q0 < -> q1 < +1
delta: q1 1 -> acc 1 0
delta: acc < -> acc < 0
delta: acc 0 -> acc 0 0
delta: acc 1 -> acc 1 0
delta: acc # -> acc # 0
)";

const char* kGuesser = R"(states: q0 q1 q2 acc
alphabet: #
start: q0
final: acc
delta: q0 < -> q1 < 0
delta: q0 < -> q2 < 0
delta: q1 < -> acc < 0
delta: acc < -> acc < 0
delta: acc # -> acc # 0
)";

// Walks right to the first blank and checks the parity of the 1s on the way.
const char* kParity = R"(states: q0 even odd acc
alphabet: 1 #
start: q0
final: acc
delta: q0 < -> even < +1
delta: even 1 -> odd 1 +1
delta: odd 1 -> even 1 +1
delta: even # -> acc # 0
delta: acc < -> acc < 0
delta: acc 1 -> acc 1 0
delta: acc # -> acc # 0
)";

bool Truth(const ExprP& q) { return !EvalMA(q, Value::Unit()).elems().empty(); }

TEST(DoublyExp, Cardinalities) {
  EXPECT_EQ(EvalMA(GenDoublyExp(0), Value::Unit()), ParseValue("{0, 1}"));
  EXPECT_EQ(EvalMA(GenDoublyExp(1), Value::Unit()).elems().size(), 4u);
  EXPECT_EQ(EvalMA(GenDoublyExp(3), Value::Unit()).elems().size(), 256u);
}

TEST(TMText, ParsePrintRoundTrip) {
  TMSpec tm = ParseTM(kFirst1);
  EXPECT_EQ(tm.start, "q0");
  EXPECT_EQ(tm.Symbols().front(), kTapeStart);
  TMSpec back = ParseTM(PrintTM(tm));
  EXPECT_EQ(back.delta, tm.delta);
  EXPECT_EQ(back.states, tm.states);
}

TEST(TMText, Validation) {
  // final state without its idle loops
  EXPECT_THROW(ParseTM("states: q0 f\nalphabet: #\nstart: q0\nfinal: f\n"), Error);
  EXPECT_THROW(ParseTM("states: q0\nalphabet: a\nstart: q0\nfinal:\n"), Error);  // no blank
  EXPECT_THROW(ParseTM("states: q0\nalphabet: #\nstart: q9\nfinal:\n"), Error);
  EXPECT_THROW(ParseTM("states: q0\nalphabet: #\nstart: q0\nfinal:\ndelta: q0 # -> q0 # +2\n"), Error);
  EXPECT_THROW(ParseTM("bogus line\n"), Error);
}

TEST(SimulateNTM, Examples) {
  TMSpec f = ParseTM(kFirst1);
  EXPECT_TRUE(SimulateNTM(f, {"1"}, 1, 2));
  EXPECT_FALSE(SimulateNTM(f, {"0"}, 1, 2));
  EXPECT_FALSE(SimulateNTM(f, {"1"}, 1, 1));  // not yet accepted after one step
  EXPECT_TRUE(SimulateNTM(ParseTM(kGuesser), {}, 1, 2));
  TMSpec p = ParseTM(kParity);
  EXPECT_TRUE(SimulateNTM(p, {"1", "1"}, 2, 4));   // < 1 1 #: three moves then accept
  EXPECT_FALSE(SimulateNTM(p, {"1"}, 2, 4));
  EXPECT_FALSE(SimulateNTM(p, {"1", "1"}, 2, 3));
  EXPECT_THROW(SimulateNTM(p, {"1", "1", "1", "1"}, 2, 4), Error);  // does not fit 2^K cells
}

TEST(SimulateNTM, LeftOfStartIsAnError) {
  TMSpec tm = ParseTM("states: q0\nalphabet: #\nstart: q0\nfinal:\ndelta: q0 < -> q0 < -1\n");
  EXPECT_THROW(SimulateNTM(tm, {}, 1, 1), Error);
}

TEST(TMQuery, StartTapeLayout) {
  TMSpec tm = ParseTM(kFirst1);
  EXPECT_EQ(EvalMA(tmq::StartTape(tm, {"1"}, 1), Value::Unit()), ParseValue("<1: \"[<]\", 2: 1>"));
  EXPECT_EQ(EvalMA(tmq::StartTape(tm, {"1"}, 2), Value::Unit()),
            ParseValue("<1: <1: \"[<]\", 2: 1>, 2: <1: #, 2: #>>"));
  EXPECT_EQ(EvalMA(tmq::StartTape(tm, {}, 3), Value::Unit()),
            ParseValue("<1: <1: <1: \"[<]\", 2: #>, 2: <1: #, 2: #>>, 2: <1: <1: #, 2: #>, 2: <1: #, 2: #>>>"));
}

TEST(TMQuery, ConfigurationCount) {
  TMSpec tm = ParseTM(kGuesser);
  // symbols <, # and their marked forms; 4 states
  EXPECT_EQ(EvalMA(tmq::Configs(tm, 1), Value::Unit()).elems().size(), 16u * 4u);
}

TEST(TMQuery, MonEqualityExpansion) {
  Type t = tmq::TapeType(2);
  ExprP q = tmq::MonEq({"A"}, {"B"}, t);
  Value a = ParseValue("<1: <1: a, 2: b>, 2: <1: c, 2: d>>");
  Value b = ParseValue("<1: <1: a, 2: b>, 2: <1: c, 2: e>>");
  EXPECT_FALSE(EvalMA(q, Value::Tuple({{"A", a}, {"B", a}})).elems().empty());
  EXPECT_TRUE(EvalMA(q, Value::Tuple({{"A", a}, {"B", b}})).elems().empty());
}

// Successor relation from hand-built configuration triples at K = 3.
TEST(TMQuery, ZoomMatchesSimulatorSteps) {
  TMSpec tm = ParseTM(kParity);
  auto tape = [](std::vector<std::string> c) {
    auto leaf = [](const std::string& s) { return Value::Atom(s); };
    auto pair = [](Value a, Value b) { return Value::Tuple({{"1", a}, {"2", b}}); };
    return pair(pair(pair(leaf(c[0]), leaf(c[1])), pair(leaf(c[2]), leaf(c[3]))),
                pair(pair(leaf(c[4]), leaf(c[5])), pair(leaf(c[6]), leaf(c[7]))));
  };
  auto conf = [&](std::vector<std::string> c, const std::string& q) {
    return Value::Tuple({{"t", tape(std::move(c))}, {"q", Value::Atom(q)}});
  };
  auto triple = [](const Value& c, const Value& d) {
    return Value::Tuple({{"s", Value::Tuple({{"C", c}, {"D", d}})}, {"w", *c.field("t")}, {"w2", *d.field("t")}});
  };
  Value c0 = conf({"<", "1", "[1]", "#", "#", "#", "#", "#"}, "odd");
  Value good = conf({"<", "1", "1", "[#]", "#", "#", "#", "#"}, "even");       // head moves across a half
  Value bad_sym = conf({"<", "1", "#", "[#]", "#", "#", "#", "#"}, "even");    // wrong symbol written
  Value bad_far = conf({"<", "1", "1", "#", "[#]", "#", "#", "#"}, "even");    // moved two cells
  Value bad_other = conf({"<", "1", "1", "[#]", "#", "#", "#", "1"}, "even");  // stray change
  Value c1 = conf({"<", "1", "1", "[#]", "#", "#", "#", "#"}, "even");
  Value c2 = conf({"<", "1", "1", "[#]", "#", "#", "#", "#"}, "acc");
  for (bool builtin : {true, false}) {
    ExprP succ = tmq::SuccFromTriples(tm, 3, builtin);
    Value in = Value::Set({triple(c0, good), triple(c0, bad_sym), triple(c0, bad_far), triple(c0, bad_other),
                           triple(c1, c2), triple(c2, c2), triple(c2, c1)});
    Value want = Value::Set({Value::Tuple({{"C", c0}, {"D", good}}), Value::Tuple({{"C", c1}, {"D", c2}}),
                             Value::Tuple({{"C", c2}, {"D", c2}})});
    EXPECT_EQ(EvalMA(succ, in), want) << (builtin ? "builtin" : "expanded");
  }
}

TEST(TMQuery, AgreesWithSimulatorAtKOne) {
  struct C {
    const char* tm;
    std::vector<std::string> in;
  } cases[] = {{kFirst1, {"1"}}, {kFirst1, {"0"}}, {kGuesser, {}}, {kParity, {}}, {kParity, {"1"}}};
  for (const auto& c : cases) {
    TMSpec tm = ParseTM(c.tm);
    bool want = SimulateNTM(tm, c.in, 1, 2);
    EXPECT_EQ(Truth(GenTMQuery(tm, c.in, 1)), want);
  }
  EXPECT_EQ(Truth(GenTMQuery(ParseTM(kGuesser), {}, 1, {false})), true);
}

TEST(TMQuery, SizeGrowth) {
  TMSpec tm = ParseTM(kFirst1);
  uint64_t prev_b = 0, prev_e = 0;
  for (int K = 1; K <= 6; ++K) {
    uint64_t b = ExprSize(GenTMQuery(tm, {"1"}, K, {true}));
    uint64_t e = ExprSize(GenTMQuery(tm, {"1"}, K, {false}));
    EXPECT_GT(b, prev_b);
    EXPECT_GT(e, prev_e);
    if (K >= 2) EXPECT_EQ(b - prev_b, ExprSize(GenTMQuery(tm, {"1"}, 2, {true})) - ExprSize(GenTMQuery(tm, {"1"}, 1, {true})));
    prev_b = b;
    prev_e = e;
  }
}

// ---- flat encoding ----

TEST(FlatEncode, KnownPositions) {
  Value v = ParseValue("{<A: a, B: b>, <A: c, B: d>}");
  EXPECT_EQ(FlatSerialize(v), "{⟨a,b⟩,⟨c,d⟩}");
  FlatDB db = FlatEncode(v);
  EXPECT_EQ(db.atomic, (std::vector<std::pair<int, std::string>>{{3, "a"}, {5, "b"}, {9, "c"}, {11, "d"}}));
  EXPECT_EQ(db.set, (std::vector<std::pair<int, int>>{{1, 2}, {1, 8}}));
  EXPECT_EQ(db.pair, (std::vector<std::tuple<int, int, int>>{{2, 3, 5}, {8, 9, 11}}));
}

TEST(FlatEncode, Degenerate) {
  FlatDB a = FlatEncode(Value::Atom("a"));
  EXPECT_EQ(a.atomic, (std::vector<std::pair<int, std::string>>{{1, "a"}}));
  EXPECT_TRUE(a.set.empty() && a.pair.empty());
  FlatDB e = FlatEncode(ParseValue("{}"));
  EXPECT_TRUE(e.atomic.empty() && e.set.empty() && e.pair.empty());
  EXPECT_THROW(FlatEncode(ParseValue("[a]")), Error);
  EXPECT_THROW(FlatEncode(ParseValue("<A: a>")), Error);
}

TEST(FlatEncode, MultiCharacterAtomsShiftPositions) {
  FlatDB db = FlatEncode(ParseValue("{<A: ab, B: c>}"));
  EXPECT_EQ(db.atomic, (std::vector<std::pair<int, std::string>>{{3, "ab"}, {6, "c"}}));
}

TEST(VTau, PairSet) {
  Value db = FlatDBValue(FlatEncode(ParseValue("{<A: a, B: b>, <A: c, B: d>}")));
  EXPECT_EQ(EvalMA(GenVTau(ParseType("{<A: Dom, B: Dom>}")), db),
            ParseValue("{<1: 1, 2: {{<A: a, B: b>, <A: c, B: d>}}>}"));
}

TEST(VTau, AtomAndPrime) {
  EXPECT_EQ(EvalMA(GenVTau(Type::Dom()), FlatDBValue(FlatEncode(Value::Atom("a")))), ParseValue("{<1: 1, 2: {a}>}"));
  Value v = ParseValue("{<A: a, B: b>, <A: c, B: d>}");
  EXPECT_EQ(EvalMA(GenVPrime(ParseType("{<A: Dom, B: Dom>}")), FlatDBValue(FlatEncode(v))), Value::Set({v}));
}

TEST(VTau, RandomNestedValues) {
  gen::Rng rng(61);
  gen::TypeOptions to;
  to.max_depth = 3;
  gen::ValueOptions vo;
  vo.nonempty_colls = true;  // empty sets leave no trace in the Set relation
  vo.max_nodes = 12;
  int tried = 0;
  for (int i = 0; i < 300 && tried < 100; ++i) {
    Type t = gen::RandomType(rng, to);
    // two-field tuples only
    std::function<bool(const Type&)> ok = [&](const Type& x) {
      if (x.is_coll()) return ok(x.elem());
      if (x.is_tuple()) return x.fields().size() == 2 && ok(x.fields()[0].second) && ok(x.fields()[1].second);
      return true;
    };
    if (!ok(t)) continue;
    Value v;
    try {
      v = gen::RandomValue(rng, t, vo);
    } catch (const Error&) {
      continue;
    }
    ++tried;
    EXPECT_EQ(EvalMA(GenVPrime(t), FlatDBValue(FlatEncode(v))), Value::Set({v})) << PrintValue(v);
  }
  EXPECT_GE(tried, 50);
}

}  // namespace
}  // namespace nestql
