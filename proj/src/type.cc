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

#include "nestql/type.h"

#include "nestql/error.h"

namespace nestql {

struct Type::Rep {
  Tag tag = Tag::kDom;
  CollKind kind = CollKind::kSet;
  std::optional<Type> elem;
  std::vector<Field> fields;
};

Type::Type() {
  static const auto* dom = new std::shared_ptr<const Rep>(std::make_shared<const Rep>());
  rep_ = *dom;
}

Type Type::Any() {
  auto rep = std::make_shared<Rep>();
  rep->tag = Tag::kAny;
  return Type(std::move(rep));
}

Type Type::Coll(CollKind kind, Type elem) {
  auto rep = std::make_shared<Rep>();
  rep->tag = Tag::kColl;
  rep->kind = kind;
  rep->elem = std::move(elem);
  return Type(std::move(rep));
}

Type Type::Tuple(std::vector<Field> fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (fields[i].first == fields[j].first) {
        throw TypeError("duplicate label '" + fields[i].first + "' in tuple type");
      }
    }
  }
  auto rep = std::make_shared<Rep>();
  rep->tag = Tag::kTuple;
  rep->fields = std::move(fields);
  return Type(std::move(rep));
}

Type::Tag Type::tag() const { return rep_->tag; }
CollKind Type::kind() const { return rep_->kind; }

const Type& Type::elem() const { return *rep_->elem; }

const std::vector<Type::Field>& Type::fields() const { return rep_->fields; }

const Type* Type::field(std::string_view name) const {
  for (const Field& f : rep_->fields) {
    if (f.first == name) return &f.second;
  }
  return nullptr;
}

int Type::field_index(std::string_view name) const {
  for (size_t i = 0; i < rep_->fields.size(); ++i) {
    if (rep_->fields[i].first == name) return static_cast<int>(i);
  }
  return -1;
}

bool operator==(const Type& a, const Type& b) {
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case Type::Tag::kDom:
    case Type::Tag::kAny:
      return true;
    case Type::Tag::kColl:
      return a.kind() == b.kind() && a.elem() == b.elem();
    case Type::Tag::kTuple: {
      const auto& fa = a.fields();
      const auto& fb = b.fields();
      if (fa.size() != fb.size()) return false;
      for (size_t i = 0; i < fa.size(); ++i) {
        if (fa[i].first != fb[i].first || !(fa[i].second == fb[i].second)) {
          return false;
        }
      }
      return true;
    }
  }
  return false;
}

std::string PrintType(const Type& t) {
  switch (t.tag()) {
    case Type::Tag::kDom:
      return "Dom";
    case Type::Tag::kAny:
      return "?";
    case Type::Tag::kColl: {
      std::string e = PrintType(t.elem());
      if (t.kind() == CollKind::kSet) return "{" + e + "}";
      if (t.kind() == CollKind::kList) return "[" + e + "]";
      return "{|" + e + "|}";
    }
    case Type::Tag::kTuple: {
      std::string out = "<";
      for (size_t i = 0; i < t.fields().size(); ++i) {
        if (i) out += ", ";
        out += QuoteAtomIfNeeded(t.fields()[i].first) + ": " +
               PrintType(t.fields()[i].second);
      }
      return out + ">";
    }
  }
  return "";
}

namespace {

class TypeParser {
 public:
  explicit TypeParser(std::string_view s) : s_(s) {}
  Type ParseAll() {
    Type t = ParseOne();
    Skip();
    if (pos_ != s_.size()) throw SyntaxError("type: trailing input", pos_);
    return t;
  }

 private:
  void Skip() {
    while (pos_ < s_.size() && isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool Eat(std::string_view t) {
    Skip();
    if (s_.substr(pos_, t.size()) != t) return false;
    pos_ += t.size();
    return true;
  }
  void Expect(std::string_view t) {
    if (!Eat(t)) throw SyntaxError("type: expected '" + std::string(t) + "'", pos_);
  }
  std::string Label() {
    Skip();
    size_t start = pos_;
    while (pos_ < s_.size() && IsBareAtom(s_.substr(pos_, 1))) ++pos_;
    if (start == pos_) throw SyntaxError("type: expected label", pos_);
    return std::string(s_.substr(start, pos_ - start));
  }
  Type ParseOne() {
    if (Eat("Dom")) return Type::Dom();
    if (Eat("?")) return Type::Any();
    if (Eat("{|")) {
      Type e = ParseOne();
      Expect("|}");
      return Type::Coll(CollKind::kBag, e);
    }
    if (Eat("{")) {
      Type e = ParseOne();
      Expect("}");
      return Type::Coll(CollKind::kSet, e);
    }
    if (Eat("[")) {
      Type e = ParseOne();
      Expect("]");
      return Type::Coll(CollKind::kList, e);
    }
    if (Eat("<")) {
      std::vector<Type::Field> fields;
      if (Eat(">")) return Type::Unit();
      do {
        // "<Dom, Dom>" is shorthand for <1: Dom, 2: Dom>.
        size_t save = pos_;
        std::string lab;
        bool labeled = false;
        Skip();
        if (pos_ < s_.size() && IsBareAtom(s_.substr(pos_, 1))) {
          lab = Label();
          labeled = Eat(":");
        }
        if (!labeled) {
          pos_ = save;
          lab = std::to_string(fields.size() + 1);
        }
        fields.emplace_back(lab, ParseOne());
      } while (Eat(","));
      Expect(">");
      return Type::Tuple(std::move(fields));
    }
    throw SyntaxError("type: unexpected input", pos_);
  }

  std::string_view s_;
  size_t pos_ = 0;
};

bool Check(const Value& v, const Type& t, std::string path, std::string* diag) {
  auto fail = [&](const std::string& why) {
    if (diag) *diag = path + ": " + why;
    return false;
  };
  switch (t.tag()) {
    case Type::Tag::kAny:
      return true;
    case Type::Tag::kDom:
      if (!v.is_atom()) return fail("expected Dom, got " + PrintValue(v));
      return true;
    case Type::Tag::kColl: {
      if (!v.is_coll()) return fail("expected " + PrintType(t) + ", got " + PrintValue(v));
      if (v.kind() != t.kind()) {
        return fail(std::string("expected a ") + CollKindName(t.kind()) + ", got a " +
                    CollKindName(v.kind()));
      }
      Type e = t.elem();
      for (size_t i = 0; i < v.elems().size(); ++i) {
        if (!Check(v.elems()[i], e, path + "[" + std::to_string(i) + "]", diag)) {
          return false;
        }
      }
      return true;
    }
    case Type::Tag::kTuple: {
      if (!v.is_tuple()) return fail("expected " + PrintType(t) + ", got " + PrintValue(v));
      const auto& fv = v.fields();
      const auto& ft = t.fields();
      if (fv.size() != ft.size()) return fail("expected " + PrintType(t) + ", field count differs");
      for (size_t i = 0; i < ft.size(); ++i) {
        if (fv[i].first != ft[i].first) {
          return fail("expected label '" + ft[i].first + "', got '" + fv[i].first + "'");
        }
        if (!Check(fv[i].second, ft[i].second, path + "." + ft[i].first, diag)) {
          return false;
        }
      }
      return true;
    }
  }
  return false;
}

}  // namespace

Type ParseType(std::string_view text) { return TypeParser(text).ParseAll(); }

std::optional<Type> Join(const Type& a, const Type& b) {
  if (a.is_any()) return b;
  if (b.is_any()) return a;
  if (a.tag() != b.tag()) return std::nullopt;
  switch (a.tag()) {
    case Type::Tag::kDom:
    case Type::Tag::kAny:
      return a;
    case Type::Tag::kColl: {
      if (a.kind() != b.kind()) return std::nullopt;
      auto e = Join(a.elem(), b.elem());
      if (!e) return std::nullopt;
      return Type::Coll(a.kind(), *e);
    }
    case Type::Tag::kTuple: {
      const auto& fa = a.fields();
      const auto& fb = b.fields();
      if (fa.size() != fb.size()) return std::nullopt;
      std::vector<Type::Field> out;
      for (size_t i = 0; i < fa.size(); ++i) {
        if (fa[i].first != fb[i].first) return std::nullopt;
        auto j = Join(fa[i].second, fb[i].second);
        if (!j) return std::nullopt;
        out.emplace_back(fa[i].first, *j);
      }
      return Type::Tuple(std::move(out));
    }
  }
  return std::nullopt;
}

Type TypeOf(const Value& v) {
  switch (v.tag()) {
    case Value::Tag::kAtom:
      return Type::Dom();
    case Value::Tag::kTuple: {
      std::vector<Type::Field> fs;
      for (const auto& f : v.fields()) fs.emplace_back(f.first, TypeOf(f.second));
      return Type::Tuple(std::move(fs));
    }
    case Value::Tag::kColl: {
      Type e = Type::Any();
      for (const Value& x : v.elems()) {
        auto j = Join(e, TypeOf(x));
        if (!j) throw TypeError("heterogeneous collection " + PrintValue(v));
        e = *j;
      }
      return Type::Coll(v.kind(), e);
    }
  }
  return Type::Dom();
}

bool CheckType(const Value& v, const Type& t, std::string* diag) {
  return Check(v, t, "$", diag);
}

bool IsCollectionFree(const Type& t) {
  if (t.is_coll()) return false;
  if (t.is_tuple()) {
    for (const auto& f : t.fields()) {
      if (!IsCollectionFree(f.second)) return false;
    }
  }
  return true;
}

}  // namespace nestql
