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

#ifndef NESTQL_XQ_H_
#define NESTQL_XQ_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "nestql/value.h"
#include "nestql/xml.h"

namespace nestql {

enum class XQKind {
  // core
  kEmptyElem,  // <a/>
  kElem,       // <a>{body}</a>
  kSeq,        // (q1, q2)
  kVar,        // $x
  kStep,       // $x/axis::test
  kFor,        // for $x in src return body
  kLet,        // let $x := bound return body
  kIf,         // if (cond) then body
  kVarEq,      // $x = $y  /  $x eq $y
  // extensions
  kQueryEq,    // (q1) = (q2): pointwise comparison of result sequences
  kNot,
  kAnd,
  kOr,
  kSome,
  kEvery,
};

enum class Axis { kChild, kDescendant };

// Variables are resolved statically. level is the environment position
// (free variables first, then one per enclosing binder); id is unique per
// binder in the query and gives the printed name $x<id>.
struct XQVar {
  int level = 0;
  int id = 0;
  std::string name;
};

struct XQExpr;
using XQP = std::shared_ptr<const XQExpr>;

struct XQExpr {
  XQKind kind = XQKind::kEmptyElem;
  std::string label;  // element tag or step test ("*" matches all)
  Axis axis = Axis::kChild;
  XQVar var, var2;    // bound/base variable; second operand of kVarEq
  EqMode mode = EqMode::kDeep;
  std::vector<XQP> kids;
};

namespace xq {
XQP EmptyElem(std::string a);
XQP Elem(std::string a, XQP body);
XQP Seq(XQP a, XQP b);
XQP Var(XQVar v);
XQP Step(XQVar v, Axis axis, std::string test);
XQP For(XQVar v, XQP src, XQP body);
XQP Let(XQVar v, XQP bound, XQP body);
XQP If(XQP cond, XQP body);
XQP VarEq(XQVar a, XQVar b, EqMode mode);
XQP QueryEq(XQP a, XQP b, EqMode mode);
XQP Not(XQP a);
XQP And(XQP a, XQP b);
XQP Or(XQP a, XQP b);
XQP Some(XQVar v, XQP src, XQP cond);
XQP Every(XQVar v, XQP src, XQP cond);
}  // namespace xq

// Free variables get levels 0..n-1 in the given order.
XQP ParseXQ(std::string_view text, const std::vector<std::string>& free_vars = {"root"});
std::string PrintXQ(const XQP& q);

// Let bodies must be bound to a statically singleton form: an element
// constructor, a variable, or a let wrapping one.
bool IsSingletonForm(const XQP& q);

// Rewrites and/or/some/every/not (with keep_not, not is left alone) so
// that only core constructs remain. Linear size. free_vars is the size of
// the initial environment.
XQP DesugarXQ(const XQP& q, bool keep_not = false, int free_vars = 1);
bool IsCoreXQ(const XQP& q, bool allow_not = false);

// Structural equality ignoring binder ids and names.
bool XQEqual(const XQP& a, const XQP& b);
size_t XQSize(const XQP& q);
int MaxVarId(const XQP& q);

using Env = std::vector<TreeP>;
std::vector<TreeP> EvalXQ(const XQP& q, const Env& env);

// Requires a single result tree; true iff its serialization is longer than
// one empty element (the root has children).
bool DecideXQ(const XQP& q, const TreeP& doc);

}  // namespace nestql

#endif  // NESTQL_XQ_H_
