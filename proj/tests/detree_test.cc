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

namespace nestql {
namespace {

PathSet PS(std::initializer_list<const char*> lines) {
  std::string text;
  for (const char* l : lines) text += std::string(l) + "\n";
  return ParsePathSet(text);
}

const char* kProduct = "tup[1 = '0' ; sng, 2 = '1' ; sng] ; union ; tup[A = id, B = id] ; pairwith[A] ; "
                    "map(pairwith[B]) ; flatten";

TEST(DetPath, PrintParseRoundTrip) {
  for (const char* s : {"a", "(1.s).0", "((1.s).2.s).B.1", "s.<>", "[]"}) {
    EXPECT_EQ(PrintDetPath(ParseDetPath(s)), s);
  }
}

TEST(EncodeDet, Examples) {
  EXPECT_EQ(EncodeDet(Value::Atom("a")), PS({"a"}));
  EXPECT_EQ(EvalDet(ParseMA("'a' ; sng"), EncodeDet(Value::Unit())), PS({"s.a"}));
  EXPECT_EQ(EncodeDet(ParseValue("[0, 1]")), PS({"1.0", "2.1"}));
  EXPECT_TRUE(IsPrefixFree(EncodeDet(ParseValue("{<A: a, B: {}>, <A: b, B: {c}>}"))));
}

TEST(EvalDet, UnionOfSingletons) {
  EXPECT_EQ(EvalDet(ParseMA("tup[1 = '0' ; sng, 2 = '1' ; sng] ; union"), EncodeDet(Value::Unit())),
            PS({"(1.s).0", "(2.s).1"}));
}

TEST(EvalDet, SelfProduct) {
  PathSet want = PS({"((1.s).1.s).A.0", "((1.s).1.s).B.0", "((1.s).2.s).A.0", "((1.s).2.s).B.1",
                     "((2.s).1.s).A.1", "((2.s).1.s).B.0", "((2.s).2.s).A.1", "((2.s).2.s).B.1"});
  EXPECT_EQ(EvalDet(ParseMA(kProduct), EncodeDet(Value::Unit())), want);
}

TEST(EvalDet, Identity) {
  PathSet v = EncodeDet(ParseValue("[<A: a>, <A: b>]"));
  EXPECT_EQ(EvalDet(ma::Id(), v), v);
}

TEST(EvalDet, AtomicEqualityOnLabels) {
  EXPECT_EQ(EvalDet(ma::EqAtomic({"A"}, {"B"}), PS({"A.c", "B.c"})), PS({"s.<>"}));
  EXPECT_EQ(EvalDet(ma::EqAtomic({"A"}, {"B"}), PS({"A.c", "B.d"})), PS({"[]"}));
}

TEST(EvalDet, RejectsSugar) { EXPECT_THROW(EvalDet(ParseMA("cart(id, id)"), PS({"[]"})), EvalError); }

TEST(DecodeDet, Examples) {
  EXPECT_EQ(DecodeDet(PS({"(1.s).0", "(2.s).1"})), ParseValue("[0, 1]"));
  EXPECT_EQ(DecodeDet(PS({"a"})), Value::Atom("a"));
  Value pairs = DecodeDet(EvalDet(ParseMA(kProduct), EncodeDet(Value::Unit())));
  EvalOptions o;
  o.sem = CollKind::kList;
  EXPECT_EQ(pairs, EvalMA(ParseMA(kProduct), Value::Unit(), o));
  EXPECT_EQ(pairs.elems().size(), 4u);
}

TEST(DecodeDet, TypeHintKeepsEmptyAndUnit) {
  Type t = ParseType("[<A: [Dom], B: <>>]");
  Value v = ParseValue("[<A: [], B: <>>, <A: [a], B: <>>]");
  EXPECT_EQ(DecodeDet(EncodeDet(v), t), v);
}

TEST(DetProperty, EncodeDecodeRoundTrip) {
  gen::Rng rng(21);
  gen::TypeOptions to;
  to.kind = CollKind::kList;
  for (int i = 0; i < 200; ++i) {
    Type t = gen::RandomType(rng, to);
    Value v = gen::RandomValue(rng, t, gen::ValueOptions{});
    PathSet p = EncodeDet(v);
    EXPECT_TRUE(IsPrefixFree(p)) << PrintValue(v);
    EXPECT_EQ(DecodeDet(p, t), v) << PrintValue(v);
    EXPECT_EQ(ParsePathSet(PrintPathSet(p)), p);
  }
}

TEST(DetProperty, AgreesWithListEvaluation) {
  gen::Rng rng(22);
  gen::QueryOptions qo;
  qo.sem = CollKind::kList;
  qo.max_depth = 3;
  EvalOptions o;
  o.sem = CollKind::kList;
  for (int i = 0; i < 150; ++i) {
    gen::TypedQuery q = gen::RandomClosedQuery(rng, qo);
    PathSet r = EvalDet(q.q, EncodeDet(Value::Unit()));
    EXPECT_TRUE(IsPrefixFree(r)) << PrintMA(q.q);
    EXPECT_EQ(DecodeDet(r, q.out), EvalMA(q.q, Value::Unit(), o)) << PrintMA(q.q);
  }
}

}  // namespace
}  // namespace nestql
