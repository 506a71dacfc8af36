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

#include "nestql/detree.h"

#include <map>

#include "nestql/error.h"

namespace nestql {

Term Term::Lab(std::string s) {
  auto r = std::make_shared<Rep>();
  r->lab = std::move(s);
  return Term(std::move(r));
}

Term Term::Pair(Term l, Term r) {
  auto rep = std::make_shared<Rep>();
  rep->left = std::make_shared<const Term>(std::move(l));
  rep->right = std::make_shared<const Term>(std::move(r));
  return Term(std::move(rep));
}

bool Term::is_marker() const {
  return !is_pair() && (rep_->lab == kEmptyMarker || rep_->lab == kUnitMarker);
}

namespace {

bool IsNumeral(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

int CompareTerm(const Term& a, const Term& b) {
  if (a.is_pair() != b.is_pair()) return a.is_pair() ? 1 : -1;
  if (a.is_pair()) {
    int c = CompareTerm(a.left(), b.left());
    return c != 0 ? c : CompareTerm(a.right(), b.right());
  }
  const std::string& x = a.lab();
  const std::string& y = b.lab();
  bool nx = IsNumeral(x), ny = IsNumeral(y);
  if (nx != ny) return nx ? -1 : 1;
  if (nx && x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
  int c = x.compare(y);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

// ---- text ----

namespace {

std::string PrintLabel(const std::string& s) {
  if (s == kEmptyMarker || s == kUnitMarker) return s;
  return QuoteAtomIfNeeded(s);
}

std::string PrintChain(const Term& t) {
  if (!t.is_pair()) return PrintLabel(t.lab());
  return PrintTerm(t.left()) + "." + PrintChain(t.right());
}

class PathParser {
 public:
  explicit PathParser(std::string_view s) : s_(s) {}

  DPath ParseAll() {
    DPath p = Items();
    Skip();
    if (pos_ != s_.size()) Fail("trailing input");
    return p;
  }

 private:
  [[noreturn]] void Fail(const std::string& m) { throw SyntaxError("path: " + m, pos_); }
  void Skip() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  DPath Items() {
    DPath out{Item()};
    Skip();
    while (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      out.push_back(Item());
      Skip();
    }
    return out;
  }

  Term Item() {
    Skip();
    if (pos_ >= s_.size()) Fail("unexpected end");
    if (s_.substr(pos_, 2) == kEmptyMarker || s_.substr(pos_, 2) == kUnitMarker) {
      std::string m(s_.substr(pos_, 2));
      pos_ += 2;
      return Term::Lab(m);
    }
    if (s_[pos_] == '(') {
      ++pos_;
      DPath inner = Items();
      Skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') Fail("expected ')'");
      ++pos_;
      if (inner.size() < 2) Fail("a pair needs two components");
      Term t = inner.back();
      for (size_t i = inner.size() - 1; i-- > 0;) t = Term::Pair(inner[i], t);
      return t;
    }
    if (s_[pos_] == '"') {
      ++pos_;
      std::string out;
      while (true) {
        if (pos_ >= s_.size()) Fail("unterminated quote");
        char c = s_[pos_++];
        if (c == '"') break;
        if (c == '\\' && pos_ < s_.size()) c = s_[pos_++];
        out += c;
      }
      return Term::Lab(out);
    }
    size_t start = pos_;
    while (pos_ < s_.size() && IsBareAtom(s_.substr(pos_, 1))) ++pos_;
    if (start == pos_) Fail("expected a step");
    return Term::Lab(std::string(s_.substr(start, pos_ - start)));
  }

  std::string_view s_;
  size_t pos_ = 0;
};

}  // namespace

std::string PrintTerm(const Term& t) {
  if (!t.is_pair()) return PrintLabel(t.lab());
  return "(" + PrintTerm(t.left()) + "." + PrintChain(t.right()) + ")";
}

std::string PrintDetPath(const DPath& p) {
  std::string out;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) out += '.';
    out += PrintTerm(p[i]);
  }
  return out;
}

DPath ParseDetPath(std::string_view text) { return PathParser(text).ParseAll(); }

std::string PrintPathSet(const PathSet& s) {
  std::string out;
  for (const auto& p : s) out += PrintDetPath(p) + "\n";
  return out;
}

PathSet ParsePathSet(std::string_view text) {
  PathSet out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == text.npos ? text.npos : nl - start);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (!line.empty() && line[0] != '%') out.insert(ParseDetPath(line));
    if (nl == text.npos) break;
    start = nl + 1;
  }
  return out;
}

// ---- encode / normalize ----

namespace {

const Term& EmptyT() {
  static const Term* t = new Term(Term::Lab(kEmptyMarker));
  return *t;
}
const Term& UnitT() {
  static const Term* t = new Term(Term::Lab(kUnitMarker));
  return *t;
}
const Term& SngT() {
  static const Term* t = new Term(Term::Lab("s"));
  return *t;
}

bool IsEmptyMarker(const Term& t) { return !t.is_pair() && t.lab() == kEmptyMarker; }
bool IsUnitMarker(const Term& t) { return !t.is_pair() && t.lab() == kUnitMarker; }

DPath Prepend(const Term& t, const DPath& p, size_t from = 0) {
  DPath out;
  out.reserve(p.size() - from + 1);
  out.push_back(t);
  out.insert(out.end(), p.begin() + static_cast<std::ptrdiff_t>(from), p.end());
  return out;
}

void Encode(const Value& v, DPath& cur, PathSet& out) {
  auto leaf = [&](const Term& t) {
    cur.push_back(t);
    out.insert(cur);
    cur.pop_back();
  };
  switch (v.tag()) {
    case Value::Tag::kAtom:
      leaf(Term::Lab(v.label()));
      return;
    case Value::Tag::kTuple:
      if (v.fields().empty()) {
        leaf(UnitT());
        return;
      }
      for (const auto& f : v.fields()) {
        cur.push_back(Term::Lab(f.first));
        Encode(f.second, cur, out);
        cur.pop_back();
      }
      return;
    case Value::Tag::kColl:
      if (v.elems().empty()) {
        leaf(EmptyT());
        return;
      }
      for (size_t i = 0; i < v.elems().size(); ++i) {
        cur.push_back(Term::Lab(std::to_string(i + 1)));
        Encode(v.elems()[i], cur, out);
        cur.pop_back();
      }
      return;
  }
}

}  // namespace

PathSet EncodeDet(const Value& v) {
  PathSet out;
  DPath cur;
  Encode(v, cur, out);
  return out;
}

PathSet NormalizeMarkers(const PathSet& s) {
  // A "[]" leaf at prefix P is redundant when some other path extends P with
  // a non-marker step.
  std::set<DPath> member_prefixes;
  for (const auto& p : s) {
    for (size_t k = 0; k < p.size(); ++k) {
      if (k + 1 < p.size() && !p[k].is_marker()) {
        member_prefixes.insert(DPath(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(k)));
      }
    }
  }
  PathSet out;
  for (const auto& p : s) {
    if (IsEmptyMarker(p.back())) {
      DPath pre(p.begin(), p.end() - 1);
      if (member_prefixes.count(pre)) continue;
    }
    out.insert(p);
  }
  return out;
}

bool IsPrefixFree(const PathSet& s) {
  // In path order a proper prefix sorts immediately before some extension.
  const DPath* prev = nullptr;
  for (const auto& p : s) {
    if (prev && prev->size() < p.size() && std::equal(prev->begin(), prev->end(), p.begin())) {
      return false;
    }
    prev = &p;
  }
  return true;
}

// ---- evaluation ----

namespace {

bool HasMember(const PathSet& v) {
  for (const auto& p : v) {
    if (p.size() >= 2 && !p[0].is_marker()) return true;
  }
  return false;
}

bool StartsWith(const DPath& p, const Path& pre) {
  if (p.size() <= pre.size()) return false;
  for (size_t i = 0; i < pre.size(); ++i) {
    if (p[i].is_pair() || p[i].lab() != pre[i]) return false;
  }
  return true;
}

PathSet ProjectDet(const PathSet& v, const Path& path) {
  PathSet out;
  for (const auto& p : v) {
    if (StartsWith(p, path)) out.insert(DPath(p.begin() + static_cast<std::ptrdiff_t>(path.size()), p.end()));
  }
  if (out.empty() && !v.empty()) throw EvalError("detree: no field " + PrintPath(path));
  return out;
}

std::set<std::string> LeafAtoms(const PathSet& v, const Path& path) {
  std::set<std::string> out;
  for (const auto& p : v) {
    if (p.size() == path.size() + 1 && StartsWith(p, path) && !p.back().is_pair() &&
        !p.back().is_marker()) {
      out.insert(p.back().lab());
    }
  }
  return out;
}

PathSet BoolSet(bool b) {
  if (b) return {DPath{SngT(), UnitT()}};
  return {DPath{EmptyT()}};
}

PathSet EvalDetRaw(const ExprP& q, const PathSet& v) {
  switch (q->op) {
    case Op::kId:
      return v;
    case Op::kConst:
      if (v.empty()) return {};
      return {DPath{Term::Lab(q->name)}};
    case Op::kEmpty:
      if (v.empty()) return {};
      return {DPath{EmptyT()}};
    case Op::kUnit:
      if (v.empty()) return {};
      return {DPath{UnitT()}};
    case Op::kSng: {
      PathSet out;
      for (const auto& p : v) out.insert(Prepend(SngT(), p));
      return out;
    }
    case Op::kProj:
      return ProjectDet(v, q->path);
    case Op::kCompose:
      return EvalDetRaw(q->kids[1], EvalDetRaw(q->kids[0], v));
    case Op::kFlatten: {
      PathSet out;
      for (const auto& p : v) {
        if (p.size() == 1 && IsEmptyMarker(p[0])) {
          out.insert(p);
        } else if (p.size() == 2 && IsEmptyMarker(p[1])) {
          out.insert(DPath{EmptyT()});
        } else if (p.size() >= 3 && !p[0].is_marker() && !p[1].is_marker()) {
          out.insert(Prepend(Term::Pair(p[0], p[1]), p, 2));
        }
      }
      return out;
    }
    case Op::kUnion: {
      PathSet out;
      bool empty[2] = {false, false};
      for (int side = 0; side < 2; ++side) {
        Term tag = Term::Lab(side == 0 ? "1" : "2");
        for (const auto& p : EvalDetRaw(q->kids[side], v)) {
          if (p.size() == 1 && IsEmptyMarker(p[0])) {
            empty[side] = true;
          } else if (p.size() >= 2 && !p[0].is_marker()) {
            out.insert(Prepend(Term::Pair(tag, p[0]), p, 1));
          }
        }
      }
      if (empty[0] && empty[1]) out.insert(DPath{EmptyT()});
      return out;
    }
    case Op::kTuple: {
      if (q->kids.empty()) return EvalDetRaw(ma::Unit(), v);
      PathSet out;
      for (size_t k = 0; k < q->kids.size(); ++k) {
        Term lab = Term::Lab(q->labels[k]);
        for (const auto& p : EvalDetRaw(q->kids[k], v)) out.insert(Prepend(lab, p));
      }
      return out;
    }
    case Op::kMap: {
      std::map<Term, PathSet> members;
      PathSet out;
      for (const auto& p : v) {
        if (p.size() == 1 && IsEmptyMarker(p[0])) {
          out.insert(p);
        } else if (p.size() >= 2 && !p[0].is_marker()) {
          members[p[0]].insert(DPath(p.begin() + 1, p.end()));
        }
      }
      for (const auto& [i, sub] : members) {
        for (const auto& w : EvalDetRaw(q->kids[0], sub)) out.insert(Prepend(i, w));
      }
      return out;
    }
    case Op::kPairWith: {
      const std::string& b = q->name;
      std::set<Term> idx;
      PathSet out;
      for (const auto& p : v) {
        if (p.empty() || p[0].is_pair() || p[0].lab() != b) continue;
        if (p.size() == 2 && IsEmptyMarker(p[1])) out.insert(DPath{EmptyT()});
        if (p.size() >= 3 && !p[1].is_marker()) {
          idx.insert(p[1]);
          DPath np{p[1], p[0]};
          np.insert(np.end(), p.begin() + 2, p.end());
          out.insert(np);
        }
      }
      for (const auto& p : v) {
        if (!p.empty() && !p[0].is_pair() && p[0].lab() == b) continue;
        for (const auto& i : idx) out.insert(Prepend(i, p));
      }
      return out;
    }
    case Op::kEqAtomic: {
      auto a = LeafAtoms(v, q->path);
      auto b = LeafAtoms(v, q->path2);
      for (const auto& x : a) {
        if (b.count(x)) return BoolSet(true);
      }
      return BoolSet(false);
    }
    case Op::kNot:
      return BoolSet(!HasMember(v));
    case Op::kTrue:
      return BoolSet(HasMember(v));
    default:
      throw EvalError(std::string("detree: unsupported operator '") + OpName(q->op) + "'");
  }
}

}  // namespace

PathSet EvalDet(const ExprP& q, const PathSet& v) { return NormalizeMarkers(EvalDetRaw(q, v)); }

// ---- decode ----

namespace {

bool LooksLikeIndex(const Term& t) {
  return t.is_pair() || IsNumeral(t.lab()) || t.lab() == "s";
}

Value DecodeNode(const std::vector<DPath>& paths, const std::optional<Type>& hint, size_t depth) {
  if (paths.empty()) throw EvalError("detree: missing subtree");
  // Markers and atoms are single-step leaves.
  bool only_leaf = paths.size() == 1 && paths[0].size() == depth + 1;
  std::map<Term, std::vector<DPath>> kids;
  bool empty_marker = false;
  for (const auto& p : paths) {
    if (p.size() == depth + 1) {
      if (IsEmptyMarker(p[depth]) && !only_leaf) {
        empty_marker = true;
        continue;
      }
      if (!only_leaf) throw EvalError("detree: prefix violation at " + PrintDetPath(p));
      continue;
    }
    kids[p[depth]].push_back(p);
  }
  if (only_leaf) {
    const Term& t = paths[0][depth];
    if (IsEmptyMarker(t)) return Value::List({});
    if (IsUnitMarker(t)) return Value::Unit();
    if (t.is_pair()) throw EvalError("detree: pair step as a leaf");
    if (hint && !hint->is_dom() && !hint->is_any()) {
      throw EvalError("detree: atom " + t.lab() + " where " + PrintType(*hint) + " expected");
    }
    return Value::Atom(t.lab());
  }
  (void)empty_marker;
  bool as_coll;
  if (hint && (hint->is_coll() || hint->is_tuple())) {
    as_coll = hint->is_coll();
  } else {
    int idx = 0, lab = 0;
    for (const auto& [t, unused] : kids) (LooksLikeIndex(t) ? idx : lab)++;
    if (idx && lab) throw EvalError("detree: mixed index and label children");
    as_coll = idx > 0;
  }
  if (as_coll) {
    std::optional<Type> eh;
    if (hint && hint->is_coll()) eh = hint->elem();
    std::vector<Value> elems;
    for (const auto& [t, sub] : kids) {
      if (t.is_marker()) throw EvalError("detree: marker used as an index");
      elems.push_back(DecodeNode(sub, eh, depth + 1));
    }
    return Value::List(std::move(elems));
  }
  std::vector<Value::Field> fields;
  if (hint && hint->is_tuple()) {
    for (const auto& [lab, ft] : hint->fields()) {
      auto it = kids.find(Term::Lab(lab));
      if (it == kids.end()) throw EvalError("detree: missing field " + lab);
      fields.emplace_back(lab, DecodeNode(it->second, ft, depth + 1));
    }
    if (fields.size() != kids.size()) throw EvalError("detree: unexpected tuple field");
  } else {
    for (const auto& [t, sub] : kids) {
      if (t.is_pair()) throw EvalError("detree: pair step as a tuple label");
      fields.emplace_back(t.lab(), DecodeNode(sub, std::nullopt, depth + 1));
    }
  }
  return Value::Tuple(std::move(fields));
}

}  // namespace

Value DecodeDet(const PathSet& s, const std::optional<Type>& hint) {
  std::vector<DPath> paths(s.begin(), s.end());
  return DecodeNode(paths, hint, 0);
}

}  // namespace nestql
