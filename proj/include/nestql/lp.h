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

#ifndef NESTQL_LP_H_
#define NESTQL_LP_H_

#include <string>
#include <string_view>
#include <vector>

#include "nestql/detree.h"
#include "nestql/ma.h"

namespace nestql {

// Path pattern item. Step variables (i, j, k, ...) match one non-marker
// step; a sequence variable (u, v, w, ...) may only come last and matches a
// nonempty remainder.
struct LPItem {
  enum class Kind { kLab, kStep, kSeq, kPair };
  Kind kind = Kind::kLab;
  std::string name;
  std::vector<LPItem> pair;  // kPair: exactly two items (no kSeq)
};

struct LPPrefix {
  enum class Kind { kEps, kVar, kVarStep };  // eps | X | X.i
  Kind kind = Kind::kVar;
  std::string var = "X";
  std::string step;
};

struct LPAtom {
  std::string pred;
  bool negated = false;
  bool unary = false;  // set_p(X), ne_p(X)
  LPPrefix prefix;
  std::vector<LPItem> path;
};

struct Rule {
  LPAtom head;
  std::vector<LPAtom> body;  // empty: a fact
};

struct LogicProgram {
  std::vector<Rule> rules;
  std::string goal;
};

struct LPOptions {
  bool with_negation = false;
  // Type of the value held by the input predicate.
  Type input = Type::Dom();
  // Empty: use the base fact p0(eps, dummy). Otherwise the name of an
  // externally supplied input predicate.
  std::string input_pred;
  // Whether the input may hold an empty collection somewhere; governs which
  // empty-marker rules are needed.
  bool input_may_be_empty = true;
};

// Throws Error for non-core operators, deep equality, or "not" without
// with_negation.
LogicProgram CompileLP(const ExprP& q, const LPOptions& opt = {});

std::string PrintLP(const LogicProgram& p);
LogicProgram ParseLP(std::string_view text);
std::string PrintRule(const Rule& r);

// Bottom-up evaluation in dependency order. extra_facts supplies an
// external input predicate as (prefix, path) pairs.
struct LPFacts {
  std::string pred;
  std::vector<std::pair<DPath, DPath>> facts;
};
PathSet EvalLP(const LogicProgram& p, const std::vector<LPFacts>& extra = {});

// True iff the goal holds some i.<> at eps with i a member index.
bool GoalTrue(const LogicProgram& p);

// Predicate dependency graph has no cycle.
bool IsNonrecursive(const LogicProgram& p);

// Equal up to a renaming of predicates and of variables within each rule.
bool RuleIsomorphic(const LogicProgram& a, const LogicProgram& b);

}  // namespace nestql

#endif  // NESTQL_LP_H_
