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
#include "nestql/type.h"
#include "nestql/value.h"

namespace nestql {
namespace {

TEST(ValueParse, UnitTuple) {
  Value v = ParseValue("<>");
  ASSERT_TRUE(v.is_tuple());
  EXPECT_TRUE(v.fields().empty());
  EXPECT_EQ(v, Value::Unit());
}

TEST(ValueParse, SetOfPairs) {
  Value v = ParseValue("{<A: a, B: b>, <A: c, B: d>}");
  ASSERT_TRUE(v.is_coll());
  EXPECT_EQ(v.kind(), CollKind::kSet);
  ASSERT_EQ(v.elems().size(), 2u);
  EXPECT_EQ(v.elems()[0].field("B")->label(), "b");
}

TEST(ValueParse, SetsDeduplicate) { EXPECT_EQ(ParseValue("{a, a}").elems().size(), 1u); }

TEST(ValueParse, BagsKeepMultiplicity) { EXPECT_EQ(ParseValue("{|a, a|}").elems().size(), 2u); }

TEST(ValueParse, RejectsGarbage) {
  EXPECT_THROW(ParseValue("{a,"), SyntaxError);
  EXPECT_THROW(ParseValue("<A: a, A: b>"), Error);
}

TEST(ValuePrint, Canonical) {
  EXPECT_EQ(PrintValue(Value::Unit()), "<>");
  EXPECT_EQ(PrintValue(Value::List({Value::Atom("a"), Value::Atom("a")})), "[a, a]");
  EXPECT_EQ(PrintValue(Value::Set({Value::Atom("b"), Value::Atom("a")})), "{a, b}");
}

TEST(ValuePrint, RoundTrip) {
  for (const char* s : {"<>", "a", "[a, [b, c], <>]", "{<A: a, B: {b}>}", "{|a, a, b|}", "<A: \"x y\", B: []>"}) {
    Value v = ParseValue(s);
    EXPECT_EQ(ParseValue(PrintValue(v)), v) << s;
  }
}

TEST(ValueOrder, AtomBeforeTupleBeforeCollection) {
  EXPECT_LT(Compare(Value::Atom("z"), Value::Unit()), 0);
  EXPECT_LT(Compare(Value::Unit(), Value::Set({})), 0);
}

TEST(ValueSize, CountsEveryNode) {
  EXPECT_EQ(ParseValue("a").node_count(), 1u);
  EXPECT_EQ(ParseValue("{<A: a, B: b>}").node_count(), 4u);
}

TEST(CheckType, Examples) {
  EXPECT_TRUE(CheckType(Value::Atom("a"), Type::Dom()));
  EXPECT_TRUE(CheckType(ParseValue("{<A: a, B: b>}"), ParseType("{<A: Dom, B: Dom>}")));
  EXPECT_FALSE(CheckType(ParseValue("[a]"), ParseType("{Dom}")));
  EXPECT_TRUE(CheckType(ParseValue("{}"), ParseType("{<A: Dom>}")));
}

TEST(TypeOf, JoinsMemberTypes) {
  EXPECT_EQ(TypeOf(ParseValue("[{}, {a}]")), ParseType("[{Dom}]"));
  EXPECT_FALSE(Join(Type::Dom(), Type::Unit()).has_value());
}

TEST(ValueEqual, Modes) {
  EXPECT_TRUE(ValueEqual(Value::Atom("a"), Value::Atom("a"), EqMode::kAtomic));
  EXPECT_TRUE(ValueEqual(ParseValue("{a, b}"), ParseValue("{b, a}"), EqMode::kDeep));
  EXPECT_FALSE(ValueEqual(ParseValue("[a, b]"), ParseValue("[b, a]"), EqMode::kDeep));
  EXPECT_TRUE(ValueEqual(ParseValue("{|a, b|}"), ParseValue("{|b, a|}"), EqMode::kDeep));
  EXPECT_TRUE(ValueEqual(ParseValue("<A: a, B: <C: b>>"), ParseValue("<A: a, B: <C: b>>"), EqMode::kMon));
}

TEST(ValueEqual, ModeErrors) {
  EXPECT_THROW(ValueEqual(Value::Unit(), Value::Unit(), EqMode::kAtomic), EqualityModeError);
  EXPECT_THROW(ValueEqual(ParseValue("<A: {a}>"), ParseValue("<A: {a}>"), EqMode::kMon), EqualityModeError);
}

}  // namespace
}  // namespace nestql
