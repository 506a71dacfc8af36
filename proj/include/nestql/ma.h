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

#ifndef NESTQL_MA_H_
#define NESTQL_MA_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nestql/type.h"
#include "nestql/value.h"

namespace nestql {

// Monad algebra query AST. The first block of operators is the core
// language; the second block is sugar with a desugaring into the core.
enum class Op {
  kId,
  kConst,
  kEmpty,
  kUnit,
  kSng,
  kMap,
  kFlatten,
  kPairWith,
  kTuple,
  kProj,
  kCompose,  // Compose(f, g): first f, then g
  kUnion,
  kEqAtomic,
  kNot,
  kTrue,
  kMonus,
  kUnique,

  kEqMon,
  kEqDeep,
  kSelect,
  kDiff,
  kIntersect,
  kSubsetEq,
  kMemberOf,
  kNest,
  kCart,
  kFlatMap,
};

bool IsCoreOp(Op op);
const char* OpName(Op op);

using Path = std::vector<std::string>;
std::string PrintPath(const Path& p);

struct Expr;
struct Cond;
using ExprP = std::shared_ptr<const Expr>;
using CondP = std::shared_ptr<const Cond>;

struct Expr {
  Op op = Op::kId;
  std::string name;                 // Const atom, PairWith label, Nest label
  Path path;                        // Proj path, first comparison operand
  Path path2;                       // second comparison operand
  std::vector<std::string> labels;  // Tuple field labels, Nest grouped labels
  std::vector<ExprP> kids;
  CondP cond;  // Select
};

// Selection conditions.
struct Cond {
  enum class Kind { kTrue, kAnd, kOr, kNot, kIff, kPathEq, kConstEq, kIn, kPred };
  Kind kind = Kind::kTrue;
  std::vector<CondP> kids;
  Path p, q;
  EqMode mode = EqMode::kAtomic;
  std::vector<std::string> atoms;  // kConstEq: one atom; kIn: the set
  ExprP pred;                      // kPred: a Boolean query on the element
};

namespace ma {

ExprP Id();
ExprP Const(std::string atom);
ExprP Empty();
ExprP Unit();
ExprP Sng();
ExprP Map(ExprP f);
ExprP Flatten();
ExprP PairWith(std::string label);
ExprP Tuple(std::vector<std::pair<std::string, ExprP>> fields);
ExprP Proj(Path path);
ExprP Compose(ExprP f, ExprP g);
// Left-nested composition of a pipeline; a single stage is returned as is.
ExprP Seq(std::vector<ExprP> stages);
ExprP Union(ExprP f, ExprP g);
ExprP EqAtomic(Path p, Path q);
ExprP Not();
ExprP True();
ExprP Monus();
ExprP Unique();
ExprP EqMon(Path p, Path q);
ExprP EqDeep(Path p, Path q);
ExprP Select(CondP c);
ExprP Diff();
ExprP Intersect();
ExprP SubsetEq(Path p, Path q);
ExprP MemberOf(Path p, Path q);
ExprP Nest(std::string new_label, std::vector<std::string> grouped);
ExprP Cart(ExprP f, ExprP g);
ExprP FlatMap(ExprP f);

// Convenience: Proj on a dotted path string such as "1.C.q".
ExprP P(std::string_view dotted);
Path SplitPath(std::string_view dotted);

CondP CTrue();
CondP CAnd(CondP a, CondP b);
CondP COr(CondP a, CondP b);
CondP CNot(CondP a);
CondP CIff(CondP a, CondP b);
CondP CEq(Path p, Path q, EqMode mode = EqMode::kAtomic);
CondP CConst(Path p, std::string atom);
CondP CIn(Path p, std::vector<std::string> atoms);
CondP CPred(ExprP pred);

}  // namespace ma

ExprP ParseMA(std::string_view text);
std::string PrintMA(const ExprP& e);
std::string PrintCond(const CondP& c);
bool ExprEqual(const ExprP& a, const ExprP& b);

// AST node count; conditions count one per node plus embedded predicates.
uint64_t ExprSize(const ExprP& e);
bool IsCore(const ExprP& e);

// ---- typing and evaluation ----

// Output type of q on input type `in` under the ambient collection kind.
// Throws TypeError naming the offending sub-expression.
Type InferType(const ExprP& q, const Type& in, CollKind sem);

struct EvalOptions {
  CollKind sem = CollKind::kSet;
  // Node guard on every intermediate value; see NESTQL_MAX_VALUE_NODES.
  uint64_t max_nodes = 10'000'000;
  bool check_types = true;
  // When false, sugar is desugared first and only core operators run.
  bool native_extended = true;
};

Value EvalMA(const ExprP& q, const Value& v, const EvalOptions& opt = {});

// Rewrites sugar into the core. Deep equality on collection-valued operands
// is kept as EqDeep (the equality primitive); on collection-free operands it
// becomes a conjunction of atomic equalities.
ExprP Desugar(const ExprP& q, const Type& in, CollKind sem);

// Conjunction of atomic equalities over every root-to-leaf path of t,
// comparing field A against field B of the input tuple.
ExprP ExpandMonEq(const Type& t);
// Same, comparing the values found at paths p and q of the input.
ExprP ExpandMonEqAt(const Path& p, const Path& q, const Type& t);

using BigNat = unsigned __int128;
std::string BigNatToString(BigNat n);
// Upper bound on the output node count for an input of n nodes.
BigNat SizeBound(const ExprP& q, BigNat n);

}  // namespace nestql

#endif  // NESTQL_MA_H_
