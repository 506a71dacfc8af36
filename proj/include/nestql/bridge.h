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

#ifndef NESTQL_BRIDGE_H_
#define NESTQL_BRIDGE_H_

#include "nestql/ma.h"
#include "nestql/type.h"
#include "nestql/value.h"
#include "nestql/xml.h"
#include "nestql/xq.h"

namespace nestql {

// Tree to value: <label: a, children: [C(v1), ..., C(vn)]>.
Value EncodeC(const TreeP& t);
TreeP DecodeC(const Value& v);

// Value to tree: atoms become leaves, a tuple becomes <tup> with one wrapper
// element per field (tagged with the field label), a list becomes <list>.
// Throws Error on sets and bags.
TreeP EncodeT(const Value& v);

// Core XQ with child steps, variable equality and "not" (no descendant axis,
// no QueryEq) to a list-semantics query over binding lists
// [<N: name, V: C(node)>]. Each variable is looked up by name.
ExprP XQToMA(const XQP& q);

// Binding list holding $root bound to C(doc).
Value RootBindings(const TreeP& doc);

// Core list-monad query (plus flatmap and select on a path equality) to XQ
// over the T encoding of its input; the input type supplies tuple labels for
// pairwith. The result is desugared XQ with only variable or query
// equality conditions.
XQP MAToXQ(const ExprP& q, const Type& input);

// [C(Q(T))] = MA(Q)([<N: root, V: C(T)>])
bool CheckXQToMA(const XQP& q, const TreeP& doc);
// [T(Q(v))] = XQ(Q)(T(v))
bool CheckMAToXQ(const ExprP& q, const Value& v, const Type& t);

}  // namespace nestql

#endif  // NESTQL_BRIDGE_H_
