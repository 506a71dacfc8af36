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

#ifndef NESTQL_VALUE_H_
#define NESTQL_VALUE_H_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nestql {

enum class CollKind { kSet = 0, kList = 1, kBag = 2 };

const char* CollKindName(CollKind k);

// Immutable complex value: an atom, a tuple with ordered labeled fields, or a
// set/list/bag. Copies share structure. Sets and bags are kept in canonical
// order (sets also deduplicated) by the factory functions.
class Value {
 public:
  enum class Tag { kAtom = 0, kTuple = 1, kColl = 2 };
  using Field = std::pair<std::string, Value>;

  Value();  // the unit tuple

  static Value Atom(std::string label);
  // Throws Error on a repeated label.
  static Value Tuple(std::vector<Field> fields);
  static Value Unit() { return Value(); }
  static Value Coll(CollKind kind, std::vector<Value> elems);
  static Value Set(std::vector<Value> elems) {
    return Coll(CollKind::kSet, std::move(elems));
  }
  static Value List(std::vector<Value> elems) {
    return Coll(CollKind::kList, std::move(elems));
  }
  static Value Bag(std::vector<Value> elems) {
    return Coll(CollKind::kBag, std::move(elems));
  }
  // Boolean convention: singleton of the unit tuple, or empty.
  static Value Bool(CollKind kind, bool b);

  Tag tag() const;
  bool is_atom() const { return tag() == Tag::kAtom; }
  bool is_tuple() const { return tag() == Tag::kTuple; }
  bool is_coll() const { return tag() == Tag::kColl; }

  const std::string& label() const;
  const std::vector<Field>& fields() const;
  // nullptr when absent or not a tuple.
  const Value* field(std::string_view name) const;
  CollKind kind() const;
  const std::vector<Value>& elems() const;

  // Number of nodes of the value tree (atoms, tuples and collections each
  // count one), saturating at UINT64_MAX.
  uint64_t node_count() const;

  bool same_rep(const Value& o) const { return rep_ == o.rep_; }

 private:
  struct Rep;
  explicit Value(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

// Canonical total order: atom < tuple < collection; atoms bytewise; tuples by
// label sequence then field-wise; collections by kind, length, elements.
int Compare(const Value& a, const Value& b);
inline bool operator==(const Value& a, const Value& b) {
  return Compare(a, b) == 0;
}
inline bool operator!=(const Value& a, const Value& b) {
  return Compare(a, b) != 0;
}
inline bool operator<(const Value& a, const Value& b) {
  return Compare(a, b) < 0;
}

Value ParseValue(std::string_view text);
std::string PrintValue(const Value& v);
// True when s can be written without quotes.
bool IsBareAtom(std::string_view s);
std::string QuoteAtomIfNeeded(const std::string& s);

enum class EqMode { kAtomic, kMon, kDeep };
const char* EqModeName(EqMode m);

// Throws EqualityModeError naming the offending sub-value when the mode's
// precondition fails.
bool ValueEqual(const Value& a, const Value& b, EqMode mode);

}  // namespace nestql

#endif  // NESTQL_VALUE_H_
