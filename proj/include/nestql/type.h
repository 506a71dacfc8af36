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

#ifndef NESTQL_TYPE_H_
#define NESTQL_TYPE_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nestql/value.h"

namespace nestql {

// Dom | {t} / [t] / {|t|} | <A: t, ...>. kAny is the element type of an
// empty collection literal whose element type is unknown; it joins with
// every type.
class Type {
 public:
  enum class Tag { kDom, kColl, kTuple, kAny };
  using Field = std::pair<std::string, Type>;

  Type();  // Dom

  static Type Dom() { return Type(); }
  static Type Any();
  static Type Coll(CollKind kind, Type elem);
  static Type Tuple(std::vector<Field> fields);
  static Type Unit() { return Tuple({}); }
  static Type Bool(CollKind kind) { return Coll(kind, Unit()); }

  Tag tag() const;
  bool is_dom() const { return tag() == Tag::kDom; }
  bool is_coll() const { return tag() == Tag::kColl; }
  bool is_tuple() const { return tag() == Tag::kTuple; }
  bool is_any() const { return tag() == Tag::kAny; }

  CollKind kind() const;
  const Type& elem() const;
  const std::vector<Field>& fields() const;
  const Type* field(std::string_view name) const;
  int field_index(std::string_view name) const;  // -1 when absent

 private:
  struct Rep;
  explicit Type(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

bool operator==(const Type& a, const Type& b);
inline bool operator!=(const Type& a, const Type& b) { return !(a == b); }

std::string PrintType(const Type& t);
Type ParseType(std::string_view text);

// Least upper bound in the "Any is bottom" order; nullopt on a clash.
std::optional<Type> Join(const Type& a, const Type& b);

// The least type of v; throws TypeError for heterogeneous collections.
Type TypeOf(const Value& v);

// True iff v inhabits t. On failure *diag (if given) receives the path to
// the first mismatch, e.g. "$.A[2]: expected Dom, got tuple".
bool CheckType(const Value& v, const Type& t, std::string* diag = nullptr);

// No set/list/bag anywhere inside.
bool IsCollectionFree(const Type& t);

}  // namespace nestql

#endif  // NESTQL_TYPE_H_
