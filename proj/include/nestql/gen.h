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

#ifndef NESTQL_GEN_H_
#define NESTQL_GEN_H_

#include <random>

#include "nestql/ma.h"
#include "nestql/type.h"
#include "nestql/value.h"
#include "nestql/xml.h"
#include "nestql/xq.h"

// Seeded random generators for the property suites.
namespace nestql::gen {

using Rng = std::mt19937_64;

struct TypeOptions {
  CollKind kind = CollKind::kSet;
  int max_depth = 3;
  int max_fields = 2;
  bool allow_coll = true;
};
Type RandomType(Rng& rng, const TypeOptions& o);

struct ValueOptions {
  int max_nodes = 20;
  int max_coll = 3;
  bool nonempty_colls = false;
  int atoms = 3;  // atoms drawn from a, b, c, ...
};
// Retries until the value fits max_nodes; throws Error if the type cannot.
Value RandomValue(Rng& rng, const Type& t, const ValueOptions& o);

struct QueryOptions {
  CollKind sem = CollKind::kSet;
  int max_depth = 4;
  bool allow_not = false;    // not, and true under bag/list semantics
  bool allow_sugar = false;  // cart, select, flatmap, eq/deep, eq/mon
  bool allow_empty = true;
};
struct TypedQuery {
  ExprP q;
  Type out;
};
// Well-typed query on input type `in`.
TypedQuery RandomQuery(Rng& rng, const Type& in, const QueryOptions& o);
// unit ; q: ignores its input.
TypedQuery RandomClosedQuery(Rng& rng, const QueryOptions& o);
// Closed query of type {<>}, ending in a map to the unit tuple and
// possibly a negation.
ExprP RandomBooleanQuery(Rng& rng, const QueryOptions& o);

struct XQOptions {
  int max_depth = 5;
  EqMode mode = EqMode::kDeep;
  int labels = 3;
};
// Core XQ over the free variable $root with child steps, element
// construction, for, let, if, not and variable equality.
XQP RandomXQ(Rng& rng, const XQOptions& o);
TreeP RandomTree(Rng& rng, int max_nodes, int labels = 3);

// ---- property suites shared by the CLI and the acceptance binary ----

struct SuiteResult {
  int cases = 0;
  int failures = 0;
  int discarded = 0;              // cases skipped by the suite's own rule
  std::vector<std::string> notes;  // first few failures
  bool ok() const { return failures == 0 && cases > 0; }
};

// [C(Q(T))] = MA(Q)([<N: root, V: C(T)>]) on `cases` query/document pairs
// per equality mode. Atomic comparisons of inner nodes are runtime errors
// in XQ; such cases are discarded and replaced.
SuiteResult SuiteXQToMA(uint64_t seed, int cases);
// [T(Q(v))] = XQ(Q)(T(v)) on list queries over pair/list values.
SuiteResult SuiteMAToXQ(uint64_t seed, int cases);
// Direct list evaluation, the path-set evaluator and the logic program agree
// on closed core queries; then direct evaluation and the program's goal
// agree on Boolean queries with negation.
SuiteResult SuiteOracles(uint64_t seed, int cases, int negation_cases);
// |q(v)| <= SizeBound(q, |v|) under all three semantics.
SuiteResult SuiteSizeBound(uint64_t seed, int cases);
// ExpandMonEq agrees with deep equality on collection-free values.
SuiteResult SuiteMonEq(uint64_t seed, int types, int pairs_per_type);

}  // namespace nestql::gen

#endif  // NESTQL_GEN_H_
