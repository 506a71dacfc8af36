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

#ifndef NESTQL_DETREE_H_
#define NESTQL_DETREE_H_

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nestql/ma.h"
#include "nestql/type.h"
#include "nestql/value.h"

namespace nestql {

// One step of a root-to-leaf path: a label or a binary pair of steps.
// (x.y) pairs are built by union and flatten when they tag member indexes.
class Term {
 public:
  static Term Lab(std::string s);
  static Term Pair(Term l, Term r);

  bool is_pair() const { return rep_->left != nullptr; }
  const std::string& lab() const { return rep_->lab; }
  const Term& left() const { return *rep_->left; }
  const Term& right() const { return *rep_->right; }
  bool is_marker() const;  // "[]" or "<>"

 private:
  struct Rep {
    std::string lab;
    std::shared_ptr<const Term> left, right;
  };
  explicit Term(std::shared_ptr<const Rep> r) : rep_(std::move(r)) {}
  std::shared_ptr<const Rep> rep_;
};

// Lab < Pair; numerals numerically and before other labels, which compare
// bytewise; pairs left then right. Also the member order used by decoding.
int CompareTerm(const Term& a, const Term& b);
inline bool operator<(const Term& a, const Term& b) { return CompareTerm(a, b) < 0; }
inline bool operator==(const Term& a, const Term& b) { return CompareTerm(a, b) == 0; }

inline constexpr const char* kEmptyMarker = "[]";
inline constexpr const char* kUnitMarker = "<>";

using DPath = std::vector<Term>;
using PathSet = std::set<DPath>;

std::string PrintDetPath(const DPath& p);
DPath ParseDetPath(std::string_view text);
std::string PrintTerm(const Term& t);
// One path per line, in path order.
std::string PrintPathSet(const PathSet& s);
PathSet ParsePathSet(std::string_view text);

// Members are numbered 1..n; empty collections and the unit tuple become
// marker leaves. Sets and bags are read as lists in canonical order.
PathSet EncodeDet(const Value& v);

// Drops "[]" leaves under nodes that also have member children. An empty
// marker only means "this node is a collection"; it is the whole story only
// when it is the sole child.
PathSet NormalizeMarkers(const PathSet& s);

// Path-set semantics of core M[=atomic] queries plus not/true. Collections
// are treated as lists. Throws EvalError on other operators.
PathSet EvalDet(const ExprP& q, const PathSet& v);

// Inverse of EncodeDet. Without a type hint, steps that are pairs, numerals
// or "s" are read as member indexes and anything else as tuple labels.
Value DecodeDet(const PathSet& s, const std::optional<Type>& hint = std::nullopt);

// No path is a proper prefix of another.
bool IsPrefixFree(const PathSet& s);

}  // namespace nestql

#endif  // NESTQL_DETREE_H_
