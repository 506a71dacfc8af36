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
#include "nestql/ma.h"

namespace nestql {
namespace {

struct Case {
  gen::TypedQuery q;
  Type in;
  Value v;
  CollKind sem;
};

// Core operators, plus deep equality, which stays primitive on collections.
bool CoreOrDeepEq(const ExprP& e) {
  if (!IsCoreOp(e->op) && e->op != Op::kEqDeep) return false;
  if (e->cond) return false;
  for (const auto& k : e->kids)
    if (!CoreOrDeepEq(k)) return false;
  return true;
}

Case RandomCase(gen::Rng& rng, int i, bool sugar) {
  const CollKind kinds[] = {CollKind::kSet, CollKind::kBag, CollKind::kList};
  CollKind sem = kinds[i % 3];
  gen::TypeOptions to;
  to.kind = sem;
  Type t = gen::RandomType(rng, to);
  Value v = gen::RandomValue(rng, t, gen::ValueOptions{});
  gen::QueryOptions qo;
  qo.sem = sem;
  qo.allow_not = true;
  qo.allow_sugar = sugar;
  qo.max_depth = 3;
  return {gen::RandomQuery(rng, t, qo), t, v, sem};
}

TEST(MAProperty, DesugarPreservesSemantics) {
  gen::Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    Case c = RandomCase(rng, i, true);
    EvalOptions o;
    o.sem = c.sem;
    ExprP core = Desugar(c.q.q, c.in, c.sem);
    ASSERT_TRUE(CoreOrDeepEq(core)) << PrintMA(c.q.q);
    EXPECT_EQ(EvalMA(c.q.q, c.v, o), EvalMA(core, c.v, o)) << PrintMA(c.q.q) << " on " << PrintValue(c.v);
  }
}

TEST(MAProperty, PrintParseRoundTrip) {
  gen::Rng rng(12);
  for (int i = 0; i < 300; ++i) {
    Case c = RandomCase(rng, i, true);
    EXPECT_TRUE(ExprEqual(ParseMA(PrintMA(c.q.q)), c.q.q)) << PrintMA(c.q.q);
  }
}

TEST(MAProperty, ResultsHaveInferredType) {
  gen::Rng rng(13);
  for (int i = 0; i < 300; ++i) {
    Case c = RandomCase(rng, i, true);
    EvalOptions o;
    o.sem = c.sem;
    Type t = InferType(c.q.q, c.in, c.sem);
    std::string diag;
    EXPECT_TRUE(CheckType(EvalMA(c.q.q, c.v, o), t, &diag)) << PrintMA(c.q.q) << ": " << diag;
  }
}

TEST(MAProperty, SizeBoundHolds) {
  gen::SuiteResult r = gen::SuiteSizeBound(14, 150);
  EXPECT_TRUE(r.ok()) << (r.notes.empty() ? "" : r.notes[0]);
}

TEST(MAProperty, ExpandedMonEqualityIsDeepEquality) {
  gen::SuiteResult r = gen::SuiteMonEq(15, 10, 15);
  EXPECT_TRUE(r.ok()) << (r.notes.empty() ? "" : r.notes[0]);
}

TEST(MAProperty, SetResultsAreDuplicateFree) {
  gen::Rng rng(16);
  for (int i = 0; i < 300; i += 3) {
    Case c = RandomCase(rng, i, true);
    Value r = EvalMA(c.q.q, c.v);
    if (!r.is_coll()) continue;
    for (size_t k = 1; k < r.elems().size(); ++k) EXPECT_LT(Compare(r.elems()[k - 1], r.elems()[k]), 0);
  }
}

}  // namespace
}  // namespace nestql
