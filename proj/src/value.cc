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

#include "nestql/value.h"

#include <algorithm>
#include <limits>

#include "nestql/error.h"

namespace nestql {

struct Value::Rep {
  Tag tag = Tag::kTuple;
  std::string label;
  std::vector<Field> fields;
  CollKind kind = CollKind::kList;
  std::vector<Value> elems;
  uint64_t nodes = 1;
};

namespace {

uint64_t SatAdd(uint64_t a, uint64_t b) {
  uint64_t r = a + b;
  return r < a ? std::numeric_limits<uint64_t>::max() : r;
}

}  // namespace

const char* CollKindName(CollKind k) {
  switch (k) {
    case CollKind::kSet:
      return "set";
    case CollKind::kList:
      return "list";
    case CollKind::kBag:
      return "bag";
  }
  return "?";
}

const char* EqModeName(EqMode m) {
  switch (m) {
    case EqMode::kAtomic:
      return "atomic";
    case EqMode::kMon:
      return "mon";
    case EqMode::kDeep:
      return "deep";
  }
  return "?";
}

Value::Value() {
  static const auto* unit = new std::shared_ptr<const Rep>(std::make_shared<const Rep>());
  rep_ = *unit;
}

Value Value::Atom(std::string label) {
  auto rep = std::make_shared<Rep>();
  rep->tag = Tag::kAtom;
  rep->label = std::move(label);
  return Value(std::move(rep));
}

Value Value::Tuple(std::vector<Field> fields) {
  if (fields.empty()) return Value();
  auto rep = std::make_shared<Rep>();
  rep->tag = Tag::kTuple;
  uint64_t n = 1;
  for (size_t i = 0; i < fields.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (fields[i].first == fields[j].first) {
        throw Error("duplicate tuple label '" + fields[i].first + "'");
      }
    }
    n = SatAdd(n, fields[i].second.node_count());
  }
  rep->fields = std::move(fields);
  rep->nodes = n;
  return Value(std::move(rep));
}

Value Value::Coll(CollKind kind, std::vector<Value> elems) {
  if (kind != CollKind::kList) {
    std::sort(elems.begin(), elems.end(),
              [](const Value& a, const Value& b) { return Compare(a, b) < 0; });
    if (kind == CollKind::kSet) {
      elems.erase(std::unique(elems.begin(), elems.end(),
                              [](const Value& a, const Value& b) {
                                return Compare(a, b) == 0;
                              }),
                  elems.end());
    }
  }
  auto rep = std::make_shared<Rep>();
  rep->tag = Tag::kColl;
  rep->kind = kind;
  uint64_t n = 1;
  for (const Value& e : elems) n = SatAdd(n, e.node_count());
  rep->elems = std::move(elems);
  rep->nodes = n;
  return Value(std::move(rep));
}

Value Value::Bool(CollKind kind, bool b) {
  if (b) return Coll(kind, {Value()});
  return Coll(kind, {});
}

Value::Tag Value::tag() const { return rep_->tag; }
const std::string& Value::label() const { return rep_->label; }
const std::vector<Value::Field>& Value::fields() const { return rep_->fields; }
CollKind Value::kind() const { return rep_->kind; }
const std::vector<Value>& Value::elems() const { return rep_->elems; }
uint64_t Value::node_count() const { return rep_->nodes; }

const Value* Value::field(std::string_view name) const {
  if (!is_tuple()) return nullptr;
  for (const Field& f : rep_->fields) {
    if (f.first == name) return &f.second;
  }
  return nullptr;
}

int Compare(const Value& a, const Value& b) {
  if (a.same_rep(b)) return 0;
  if (a.tag() != b.tag()) return a.tag() < b.tag() ? -1 : 1;
  switch (a.tag()) {
    case Value::Tag::kAtom: {
      int c = a.label().compare(b.label());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Value::Tag::kTuple: {
      const auto& fa = a.fields();
      const auto& fb = b.fields();
      size_t n = std::min(fa.size(), fb.size());
      for (size_t i = 0; i < n; ++i) {
        int c = fa[i].first.compare(fb[i].first);
        if (c != 0) return c < 0 ? -1 : 1;
      }
      if (fa.size() != fb.size()) return fa.size() < fb.size() ? -1 : 1;
      for (size_t i = 0; i < n; ++i) {
        int c = Compare(fa[i].second, fb[i].second);
        if (c != 0) return c;
      }
      return 0;
    }
    case Value::Tag::kColl: {
      if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
      const auto& ea = a.elems();
      const auto& eb = b.elems();
      if (ea.size() != eb.size()) return ea.size() < eb.size() ? -1 : 1;
      for (size_t i = 0; i < ea.size(); ++i) {
        int c = Compare(ea[i], eb[i]);
        if (c != 0) return c;
      }
      return 0;
    }
  }
  return 0;
}

// ---- text format ----

bool IsBareAtom(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_' || c == '#' || c == '+' ||
              c == '-';
    if (!ok) return false;
  }
  return true;
}

std::string QuoteAtomIfNeeded(const std::string& s) {
  if (IsBareAtom(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

void PrintTo(const Value& v, std::string& out) {
  switch (v.tag()) {
    case Value::Tag::kAtom:
      out += QuoteAtomIfNeeded(v.label());
      return;
    case Value::Tag::kTuple: {
      out += '<';
      bool first = true;
      for (const auto& f : v.fields()) {
        if (!first) out += ", ";
        first = false;
        out += QuoteAtomIfNeeded(f.first);
        out += ": ";
        PrintTo(f.second, out);
      }
      out += '>';
      return;
    }
    case Value::Tag::kColl: {
      const char* open = v.kind() == CollKind::kSet    ? "{"
                         : v.kind() == CollKind::kList ? "["
                                                       : "{|";
      const char* close = v.kind() == CollKind::kSet    ? "}"
                          : v.kind() == CollKind::kList ? "]"
                                                        : "|}";
      out += open;
      bool first = true;
      for (const Value& e : v.elems()) {
        if (!first) out += ", ";
        first = false;
        PrintTo(e, out);
      }
      out += close;
      return;
    }
  }
}

class ValueParser {
 public:
  explicit ValueParser(std::string_view s) : s_(s) {}

  Value ParseAll() {
    Value v = ParseOne();
    Skip();
    if (pos_ != s_.size()) Fail("trailing input");
    return v;
  }

 private:
  [[noreturn]] void Fail(const std::string& msg) {
    throw SyntaxError("value: " + msg, pos_);
  }
  void Skip() {
    while (pos_ < s_.size() &&
           (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' ||
            s_[pos_] == '\r'))
      ++pos_;
  }
  bool Peek(std::string_view t) {
    Skip();
    return s_.substr(pos_, t.size()) == t;
  }
  bool Eat(std::string_view t) {
    if (!Peek(t)) return false;
    pos_ += t.size();
    return true;
  }
  void Expect(std::string_view t) {
    if (!Eat(t)) Fail("expected '" + std::string(t) + "'");
  }

  // Reads an atom into out; false when none starts here.
  bool TryAtom(std::string& out) {
    Skip();
    if (pos_ < s_.size() && s_[pos_] == '"') {
      ++pos_;
      out.clear();
      while (true) {
        if (pos_ >= s_.size()) Fail("unterminated quoted atom");
        char c = s_[pos_++];
        if (c == '"') break;
        if (c == '\\') {
          if (pos_ >= s_.size()) Fail("bad escape");
          c = s_[pos_++];
        }
        out += c;
      }
      return true;
    }
    size_t start = pos_;
    while (pos_ < s_.size() && IsBareAtom(s_.substr(pos_, 1))) ++pos_;
    if (pos_ == start) return false;
    out = std::string(s_.substr(start, pos_ - start));
    return true;
  }

  Value ParseOne() {
    Skip();
    if (pos_ >= s_.size()) Fail("unexpected end of input");
    if (Eat("{|")) return ParseElems(CollKind::kBag, "|}");
    if (Eat("{")) return ParseElems(CollKind::kSet, "}");
    if (Eat("[")) return ParseElems(CollKind::kList, "]");
    if (Eat("<")) return ParseTuple();
    std::string a;
    if (TryAtom(a)) return Value::Atom(std::move(a));
    Fail(std::string("unexpected character '") + s_[pos_] + "'");
  }

  Value ParseElems(CollKind kind, std::string_view close) {
    std::vector<Value> elems;
    if (!Eat(close)) {
      do {
        elems.push_back(ParseOne());
      } while (Eat(","));
      Expect(close);
    }
    return Value::Coll(kind, std::move(elems));
  }

  // <l: v, ...> or the positional form <v, w> labeled 1, 2, ...
  Value ParseTuple() {
    std::vector<Value::Field> fields;
    if (Eat(">")) return Value::Unit();
    int positional = -1;
    do {
      size_t save = pos_;
      std::string lab;
      bool labeled = false;
      if (TryAtom(lab) && Eat(":")) {
        labeled = true;
      } else {
        pos_ = save;
      }
      if (positional == -1) positional = labeled ? 0 : 1;
      if (labeled != (positional == 0)) Fail("mixed labeled and positional fields");
      if (!labeled) lab = std::to_string(fields.size() + 1);
      size_t at = pos_;
      Value v = ParseOne();
      for (const auto& f : fields) {
        if (f.first == lab) {
          pos_ = at;
          Fail("duplicate tuple label '" + lab + "'");
        }
      }
      fields.emplace_back(std::move(lab), std::move(v));
    } while (Eat(","));
    Expect(">");
    return Value::Tuple(std::move(fields));
  }

  std::string_view s_;
  size_t pos_ = 0;
};

[[noreturn]] void ModeFail(EqMode mode, const Value& v) {
  throw EqualityModeError(std::string(EqModeName(mode)) +
                          " equality not defined on " + PrintValue(v));
}

void RequireCollectionFree(const Value& v) {
  if (v.is_coll()) ModeFail(EqMode::kMon, v);
  if (v.is_tuple()) {
    for (const auto& f : v.fields()) RequireCollectionFree(f.second);
  }
}

}  // namespace

std::string PrintValue(const Value& v) {
  std::string out;
  PrintTo(v, out);
  return out;
}

Value ParseValue(std::string_view text) { return ValueParser(text).ParseAll(); }

bool ValueEqual(const Value& a, const Value& b, EqMode mode) {
  switch (mode) {
    case EqMode::kAtomic:
      if (!a.is_atom()) ModeFail(mode, a);
      if (!b.is_atom()) ModeFail(mode, b);
      return a.label() == b.label();
    case EqMode::kMon:
      RequireCollectionFree(a);
      RequireCollectionFree(b);
      return Compare(a, b) == 0;
    case EqMode::kDeep:
      // Sets and bags are canonical, so structural equality is extensional
      // equality for sets and multiset equality for bags.
      return Compare(a, b) == 0;
  }
  return false;
}

}  // namespace nestql
