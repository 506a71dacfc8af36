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

#include "nestql/lp.h"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "nestql/error.h"

namespace nestql {
namespace {

bool VarLike(const std::string& s, const char* firsts) {
  if (s.empty() || !std::strchr(firsts, s[0])) return false;
  for (size_t i = 1; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}
bool IsStepVar(const std::string& s) { return VarLike(s, "ijk"); }
bool IsSeqVar(const std::string& s) { return VarLike(s, "uvw"); }

LPItem Lab(std::string s) { return {LPItem::Kind::kLab, std::move(s), {}}; }
LPItem Step(std::string s) { return {LPItem::Kind::kStep, std::move(s), {}}; }
LPItem Seq(std::string s) { return {LPItem::Kind::kSeq, std::move(s), {}}; }
LPItem PairI(LPItem a, LPItem b) { return {LPItem::Kind::kPair, "", {std::move(a), std::move(b)}}; }

LPPrefix PX() { return {}; }
LPPrefix PXi(const std::string& i) { return {LPPrefix::Kind::kVarStep, "X", i}; }

LPAtom Atom(std::string pred, LPPrefix pre, std::vector<LPItem> path) {
  LPAtom a;
  a.pred = std::move(pred);
  a.prefix = std::move(pre);
  a.path = std::move(path);
  return a;
}
LPAtom Unary(std::string pred, bool negated = false) {
  LPAtom a;
  a.pred = std::move(pred);
  a.unary = true;
  a.negated = negated;
  return a;
}

std::vector<LPItem> Labs(const Path& p, std::vector<LPItem> tail) {
  std::vector<LPItem> out;
  for (const auto& l : p) out.push_back(Lab(l));
  for (auto& t : tail) out.push_back(std::move(t));
  return out;
}

// ---- compiler ----

// Path programs see every collection as a list.
Type AsList(const Type& t) {
  if (t.is_coll()) return Type::Coll(CollKind::kList, AsList(t.elem()));
  if (t.is_tuple()) {
    std::vector<Type::Field> fs;
    for (const auto& f : t.fields()) fs.push_back({f.first, AsList(f.second)});
    return Type::Tuple(std::move(fs));
  }
  return t;
}

class LPCompiler {
 public:
  explicit LPCompiler(const LPOptions& o) : opt_(o) {}

  LogicProgram Run(const ExprP& q) {
    Out in;
    if (opt_.input_pred.empty()) {
      LPAtom fact;
      fact.pred = "p0";
      fact.prefix.kind = LPPrefix::Kind::kEps;
      fact.path = {Lab("dummy")};
      prog_.rules.push_back({fact, {}});
      in = {"p0", false};
    } else {
      in = {opt_.input_pred, opt_.input_may_be_empty};
    }
    prog_.goal = C(q, in, AsList(opt_.input)).pred;
    return prog_;
  }

 private:
  struct Out {
    std::string pred;
    bool may_empty = false;  // may hold an empty collection somewhere
  };

  std::string Fresh() { return "p" + std::to_string(next_++); }

  void Emit(LPAtom head, std::vector<LPAtom> body) { prog_.rules.push_back({std::move(head), std::move(body)}); }

  // p(X, <items>) :- in(X, v).
  Out FromAny(const Out& in, std::vector<LPItem> head, bool may_empty) {
    std::string p = Fresh();
    Emit(Atom(p, PX(), std::move(head)), {Atom(in.pred, PX(), {Seq("v")})});
    return {p, may_empty};
  }

  Type Infer(const ExprP& q, const Type& t) { return InferType(q, t, CollKind::kList); }

  void UnionRules(const std::string& p, const Out& in, const Path& a, const Path& b) {
    Emit(Atom(p, PX(), {PairI(Lab("1"), Step("i")), Seq("v")}), {Atom(in.pred, PX(), Labs(a, {Step("i"), Seq("v")}))});
    Emit(Atom(p, PX(), {PairI(Lab("2"), Step("i")), Seq("v")}), {Atom(in.pred, PX(), Labs(b, {Step("i"), Seq("v")}))});
    if (in.may_empty) {
      Emit(Atom(p, PX(), {Lab(kEmptyMarker)}),
           {Atom(in.pred, PX(), Labs(a, {Lab(kEmptyMarker)})), Atom(in.pred, PX(), Labs(b, {Lab(kEmptyMarker)}))});
    }
  }

  Out C(const ExprP& q, const Out& in, const Type& t) {
    switch (q->op) {
      case Op::kId:
        return FromAny(in, {Seq("v")}, in.may_empty);
      case Op::kConst:
        return FromAny(in, {Lab(q->name)}, false);
      case Op::kEmpty:
        return FromAny(in, {Lab(kEmptyMarker)}, true);
      case Op::kUnit:
        return FromAny(in, {Lab(kUnitMarker)}, false);
      case Op::kSng: {
        std::string p = Fresh();
        Emit(Atom(p, PX(), {Lab("s"), Seq("v")}), {Atom(in.pred, PX(), {Seq("v")})});
        return {p, in.may_empty};
      }
      case Op::kProj: {
        std::string p = Fresh();
        Emit(Atom(p, PX(), {Seq("v")}), {Atom(in.pred, PX(), Labs(q->path, {Seq("v")}))});
        return {p, in.may_empty};
      }
      case Op::kCompose: {
        Type mid = Infer(q->kids[0], t);
        Out o = C(q->kids[0], in, t);
        return C(q->kids[1], o, mid);
      }
      case Op::kFlatten: {
        std::string p = Fresh();
        Emit(Atom(p, PX(), {PairI(Step("i"), Step("j")), Seq("v")}),
             {Atom(in.pred, PX(), {Step("i"), Step("j"), Seq("v")})});
        if (in.may_empty) {
          Emit(Atom(p, PX(), {Lab(kEmptyMarker)}), {Atom(in.pred, PX(), {Lab(kEmptyMarker)})});
          Emit(Atom(p, PX(), {Lab(kEmptyMarker)}), {Atom(in.pred, PX(), {Step("i"), Lab(kEmptyMarker)})});
        }
        return {p, in.may_empty};
      }
      case Op::kUnion: {
        const ExprP& f = q->kids[0];
        const ExprP& g = q->kids[1];
        if (f->op == Op::kProj && g->op == Op::kProj) {
          std::string p = Fresh();
          UnionRules(p, in, f->path, g->path);
          return {p, in.may_empty};
        }
        Out tup = C(ma::Tuple({{"1", f}, {"2", g}}), in, t);
        std::string p = Fresh();
        UnionRules(p, tup, {"1"}, {"2"});
        return {p, tup.may_empty};
      }
      case Op::kTuple: {
        if (q->kids.empty()) return FromAny(in, {Lab(kUnitMarker)}, false);
        std::vector<Out> parts;
        for (const auto& k : q->kids) parts.push_back(C(k, in, t));
        std::string p = Fresh();
        bool me = false;
        for (size_t k = 0; k < parts.size(); ++k) {
          Emit(Atom(p, PX(), {Lab(q->labels[k]), Seq("v")}), {Atom(parts[k].pred, PX(), {Seq("v")})});
          me = me || parts[k].may_empty;
        }
        return {p, me};
      }
      case Op::kMap: {
        std::string start = Fresh();
        Emit(Atom(start, PXi("i"), {Seq("v")}), {Atom(in.pred, PX(), {Step("i"), Seq("v")})});
        Type e = t.is_coll() ? t.elem() : Type::Any();
        Out body = C(q->kids[0], {start, in.may_empty}, e);
        std::string end = Fresh();
        Emit(Atom(end, PX(), {Step("i"), Seq("v")}), {Atom(body.pred, PXi("i"), {Seq("v")})});
        if (in.may_empty) {
          Emit(Atom(end, PX(), {Lab(kEmptyMarker)}), {Atom(in.pred, PX(), {Lab(kEmptyMarker)})});
        }
        return {end, in.may_empty || body.may_empty};
      }
      case Op::kPairWith: {
        if (!t.is_tuple()) throw TypeError("pairwith on " + PrintType(t));
        const std::string& b = q->name;
        std::string p = Fresh();
        Emit(Atom(p, PX(), {Step("i"), Lab(b), Seq("v")}), {Atom(in.pred, PX(), {Lab(b), Step("i"), Seq("v")})});
        for (const auto& f : t.fields()) {
          if (f.first == b) continue;
          // Distinct suffix variables: the sibling's leaves are unrelated to
          // the member's.
          Emit(Atom(p, PX(), {Step("i"), Lab(f.first), Seq("w")}),
               {Atom(in.pred, PX(), {Lab(f.first), Seq("w")}),
                Atom(in.pred, PX(), {Lab(b), Step("i"), Seq("v")})});
        }
        if (in.may_empty) {
          Emit(Atom(p, PX(), {Lab(kEmptyMarker)}), {Atom(in.pred, PX(), {Lab(b), Lab(kEmptyMarker)})});
        }
        return {p, in.may_empty};
      }
      case Op::kEqAtomic: {
        std::string p = Fresh();
        Emit(Atom(p, PX(), {Lab("s"), Lab(kUnitMarker)}),
             {Atom(in.pred, PX(), Labs(q->path, {Seq("v")})), Atom(in.pred, PX(), Labs(q->path2, {Seq("v")}))});
        Emit(Atom(p, PX(), {Lab(kEmptyMarker)}), {Atom(in.pred, PX(), {Seq("v")})});
        return {p, true};
      }
      case Op::kTrue: {
        std::string p = Fresh();
        Emit(Atom(p, PX(), {Lab("s"), Lab(kUnitMarker)}), {Atom(in.pred, PX(), {Step("i"), Seq("v")})});
        Emit(Atom(p, PX(), {Lab(kEmptyMarker)}), {Atom(in.pred, PX(), {Seq("v")})});
        return {p, true};
      }
      case Op::kNot: {
        if (!opt_.with_negation) throw Error("lp: 'not' needs the negation extension");
        std::string ne = "ne_" + in.pred, set = "set_" + in.pred;
        LPAtom ne_head = Unary(ne), set_head = Unary(set);
        Emit(ne_head, {Atom(in.pred, PX(), {Step("i"), Seq("v")})});
        Emit(set_head, {Atom(in.pred, PX(), {Seq("v")})});
        std::string p = Fresh();
        Emit(Atom(p, PX(), {Lab("s"), Lab(kUnitMarker)}), {Unary(set), Unary(ne, /*negated=*/true)});
        Emit(Atom(p, PX(), {Lab(kEmptyMarker)}), {Atom(in.pred, PX(), {Seq("v")})});
        return {p, true};
      }
      case Op::kEqDeep:
        throw Error("lp: deep equality is not supported");
      default:
        throw Error(std::string("lp: non-core operator '") + OpName(q->op) + "'");
    }
  }

  const LPOptions& opt_;
  LogicProgram prog_;
  int next_ = 1;
};

// ---- printing ----

std::string PrintLabelItem(const std::string& s) {
  if (s == kEmptyMarker || s == kUnitMarker) return s;
  if (IsStepVar(s) || IsSeqVar(s) || s == "eps" || !IsBareAtom(s)) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  }
  return s;
}

std::string PrintItem(const LPItem& it);

std::string PrintChainItem(const LPItem& it) {
  if (it.kind != LPItem::Kind::kPair) return PrintItem(it);
  return PrintItem(it.pair[0]) + "." + PrintChainItem(it.pair[1]);
}

std::string PrintItem(const LPItem& it) {
  switch (it.kind) {
    case LPItem::Kind::kLab:
      return PrintLabelItem(it.name);
    case LPItem::Kind::kStep:
    case LPItem::Kind::kSeq:
      return it.name;
    case LPItem::Kind::kPair:
      return "(" + PrintItem(it.pair[0]) + "." + PrintChainItem(it.pair[1]) + ")";
  }
  return "";
}

std::string PrintAtom(const LPAtom& a) {
  std::string out = a.negated ? "not " : "";
  out += a.pred + "(";
  switch (a.prefix.kind) {
    case LPPrefix::Kind::kEps:
      out += "eps";
      break;
    case LPPrefix::Kind::kVar:
      out += a.prefix.var;
      break;
    case LPPrefix::Kind::kVarStep:
      out += a.prefix.var + "." + a.prefix.step;
      break;
  }
  if (!a.unary) {
    out += ", ";
    for (size_t i = 0; i < a.path.size(); ++i) {
      if (i) out += ".";
      out += PrintItem(a.path[i]);
    }
  }
  return out + ")";
}

// ---- parsing ----

class LPParser {
 public:
  explicit LPParser(std::string_view s, size_t base) : s_(s), base_(base) {}

  Rule ParseRule() {
    Rule r;
    r.head = ParseAtom();
    if (Eat(":-")) {
      do {
        r.body.push_back(ParseAtom());
      } while (Eat(","));
    }
    Expect(".");
    Skip();
    if (pos_ != s_.size()) Fail("trailing input");
    return r;
  }

 private:
  [[noreturn]] void Fail(const std::string& m) { throw SyntaxError("lp: " + m, base_ + pos_); }
  void Skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool Eat(std::string_view t) {
    Skip();
    if (s_.substr(pos_, t.size()) != t) return false;
    pos_ += t.size();
    return true;
  }
  void Expect(std::string_view t) {
    if (!Eat(t)) Fail("expected '" + std::string(t) + "'");
  }
  std::string Ident() {
    Skip();
    size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_) Fail("expected identifier");
    return std::string(s_.substr(start, pos_ - start));
  }

  LPAtom ParseAtom() {
    LPAtom a;
    Skip();
    if (s_.substr(pos_, 4) == "not " ) {
      pos_ += 4;
      a.negated = true;
    }
    a.pred = Ident();
    Expect("(");
    std::string v = Ident();
    if (v == "eps") {
      a.prefix.kind = LPPrefix::Kind::kEps;
      a.prefix.var.clear();
    } else {
      if (!std::isupper(static_cast<unsigned char>(v[0]))) Fail("prefix variable must start uppercase");
      a.prefix.var = v;
      Skip();
      if (pos_ < s_.size() && s_[pos_] == '.') {
        ++pos_;
        a.prefix.kind = LPPrefix::Kind::kVarStep;
        a.prefix.step = Ident();
        if (!IsStepVar(a.prefix.step)) Fail("expected a step variable after the prefix");
      }
    }
    if (Eat(",")) {
      a.path = Items();
      for (size_t i = 0; i + 1 < a.path.size(); ++i) {
        if (a.path[i].kind == LPItem::Kind::kSeq) Fail("sequence variable must come last");
      }
    } else {
      a.unary = true;
    }
    Expect(")");
    return a;
  }

  std::vector<LPItem> Items() {
    std::vector<LPItem> out{Item()};
    Skip();
    while (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      out.push_back(Item());
      Skip();
    }
    return out;
  }

  LPItem Item() {
    Skip();
    if (pos_ >= s_.size()) Fail("unexpected end");
    std::string_view two = s_.substr(pos_, 2);
    if (two == kEmptyMarker || two == kUnitMarker) {
      pos_ += 2;
      return Lab(std::string(two));
    }
    if (s_[pos_] == '(') {
      ++pos_;
      std::vector<LPItem> inner = Items();
      Expect(")");
      if (inner.size() < 2) Fail("a pair needs two components");
      LPItem t = inner.back();
      for (size_t i = inner.size() - 1; i-- > 0;) t = PairI(inner[i], t);
      for (const auto& x : inner) {
        if (x.kind == LPItem::Kind::kSeq) Fail("sequence variable inside a pair");
      }
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
      return Lab(out);
    }
    size_t start = pos_;
    while (pos_ < s_.size() && IsBareAtom(s_.substr(pos_, 1))) ++pos_;
    if (start == pos_) Fail("expected a path item");
    std::string w(s_.substr(start, pos_ - start));
    if (IsStepVar(w)) return Step(w);
    if (IsSeqVar(w)) return Seq(w);
    return Lab(w);
  }

  std::string_view s_;
  size_t base_;
  size_t pos_ = 0;
};

// ---- evaluation ----

struct Binding {
  std::map<std::string, DPath> pre;
  std::map<std::string, Term> step;
  std::map<std::string, DPath> seq;
};

struct Rel {
  std::map<DPath, std::set<DPath>> bin;
  std::set<DPath> un;
};

bool MatchItem(const LPItem& it, const Term& t, Binding& b) {
  switch (it.kind) {
    case LPItem::Kind::kLab:
      return !t.is_pair() && t.lab() == it.name;
    case LPItem::Kind::kStep: {
      if (t.is_marker()) return false;
      auto f = b.step.find(it.name);
      if (f != b.step.end()) return f->second == t;
      b.step.emplace(it.name, t);
      return true;
    }
    case LPItem::Kind::kPair:
      return t.is_pair() && MatchItem(it.pair[0], t.left(), b) && MatchItem(it.pair[1], t.right(), b);
    case LPItem::Kind::kSeq:
      return false;
  }
  return false;
}

bool MatchPath(const std::vector<LPItem>& items, const DPath& g, Binding& b) {
  size_t n = items.size();
  bool seq = n > 0 && items.back().kind == LPItem::Kind::kSeq;
  size_t fixed = seq ? n - 1 : n;
  if (seq ? g.size() < n : g.size() != n) return false;
  for (size_t i = 0; i < fixed; ++i) {
    if (!MatchItem(items[i], g[i], b)) return false;
  }
  if (seq) {
    DPath rest(g.begin() + static_cast<std::ptrdiff_t>(fixed), g.end());
    auto f = b.seq.find(items.back().name);
    if (f != b.seq.end()) return f->second == rest;
    b.seq.emplace(items.back().name, std::move(rest));
  }
  return true;
}

bool MatchPrefix(const LPPrefix& p, const DPath& g, Binding& b) {
  DPath x = g;
  if (p.kind == LPPrefix::Kind::kEps) return g.empty();
  if (p.kind == LPPrefix::Kind::kVarStep) {
    if (g.empty()) return false;
    LPItem s = Step(p.step);
    if (!MatchItem(s, g.back(), b)) return false;
    x.pop_back();
  }
  auto f = b.pre.find(p.var);
  if (f != b.pre.end()) return f->second == x;
  b.pre.emplace(p.var, std::move(x));
  return true;
}

Term BuildItem(const LPItem& it, const Binding& b) {
  switch (it.kind) {
    case LPItem::Kind::kLab:
      return Term::Lab(it.name);
    case LPItem::Kind::kStep: {
      auto f = b.step.find(it.name);
      if (f == b.step.end()) throw Error("lp: unsafe rule, unbound variable " + it.name);
      return f->second;
    }
    case LPItem::Kind::kPair:
      return Term::Pair(BuildItem(it.pair[0], b), BuildItem(it.pair[1], b));
    case LPItem::Kind::kSeq:
      break;
  }
  throw Error("lp: bad item");
}

DPath BuildPath(const std::vector<LPItem>& items, const Binding& b) {
  DPath out;
  for (const auto& it : items) {
    if (it.kind == LPItem::Kind::kSeq) {
      auto f = b.seq.find(it.name);
      if (f == b.seq.end()) throw Error("lp: unsafe rule, unbound variable " + it.name);
      out.insert(out.end(), f->second.begin(), f->second.end());
    } else {
      out.push_back(BuildItem(it, b));
    }
  }
  return out;
}

DPath BuildPrefix(const LPPrefix& p, const Binding& b) {
  if (p.kind == LPPrefix::Kind::kEps) return {};
  auto f = b.pre.find(p.var);
  if (f == b.pre.end()) throw Error("lp: unsafe rule, unbound variable " + p.var);
  DPath out = f->second;
  if (p.kind == LPPrefix::Kind::kVarStep) out.push_back(BuildItem(Step(p.step), b));
  return out;
}

class LPEvaluator {
 public:
  std::map<std::string, Rel> db;

  void Fire(const Rule& r) {
    std::vector<const LPAtom*> pos, neg;
    for (const auto& a : r.body) (a.negated ? neg : pos).push_back(&a);
    Join(r, pos, neg, 0, Binding{});
  }

 private:
  void Join(const Rule& r, const std::vector<const LPAtom*>& pos, const std::vector<const LPAtom*>& neg,
            size_t k, const Binding& b) {
    if (k == pos.size()) {
      for (const LPAtom* a : neg) {
        const Rel& rel = db[a->pred];
        DPath pre = BuildPrefix(a->prefix, b);
        if (a->unary) {
          if (rel.un.count(pre)) return;
        } else {
          auto it = rel.bin.find(pre);
          if (it != rel.bin.end() && it->second.count(BuildPath(a->path, b))) return;
        }
      }
      Rel& out = db[r.head.pred];
      DPath pre = BuildPrefix(r.head.prefix, b);
      if (r.head.unary) {
        out.un.insert(pre);
      } else {
        out.bin[pre].insert(BuildPath(r.head.path, b));
      }
      return;
    }
    const LPAtom& a = *pos[k];
    const Rel& rel = db[a.pred];
    auto try_prefix = [&](const DPath& pre, const std::set<DPath>* paths) {
      Binding b1 = b;
      if (!MatchPrefix(a.prefix, pre, b1)) return;
      if (a.unary) {
        Join(r, pos, neg, k + 1, b1);
        return;
      }
      for (const auto& p : *paths) {
        Binding b2 = b1;
        if (MatchPath(a.path, p, b2)) Join(r, pos, neg, k + 1, b2);
      }
    };
    // Direct lookup when the prefix is already determined.
    std::optional<DPath> known;
    if (a.prefix.kind == LPPrefix::Kind::kEps) known = DPath{};
    if (a.prefix.kind == LPPrefix::Kind::kVar && b.pre.count(a.prefix.var)) known = b.pre.at(a.prefix.var);
    if (a.unary) {
      if (known) {
        if (rel.un.count(*known)) try_prefix(*known, nullptr);
      } else {
        for (const auto& pre : rel.un) try_prefix(pre, nullptr);
      }
      return;
    }
    if (known) {
      auto it = rel.bin.find(*known);
      if (it != rel.bin.end()) try_prefix(it->first, &it->second);
    } else {
      for (const auto& [pre, paths] : rel.bin) try_prefix(pre, &paths);
    }
  }
};

std::vector<std::string> TopoOrder(const LogicProgram& p) {
  std::map<std::string, std::set<std::string>> deps;
  for (const auto& r : p.rules) {
    auto& d = deps[r.head.pred];
    for (const auto& a : r.body) {
      d.insert(a.pred);
      deps[a.pred];
    }
  }
  std::vector<std::string> order;
  std::map<std::string, int> state;  // 1 visiting, 2 done
  std::function<void(const std::string&)> visit = [&](const std::string& n) {
    if (state[n] == 2) return;
    if (state[n] == 1) throw Error("lp: recursive program through " + n);
    state[n] = 1;
    for (const auto& d : deps[n]) visit(d);
    state[n] = 2;
    order.push_back(n);
  };
  for (const auto& [n, unused] : deps) visit(n);
  return order;
}

void CheckSafety(const Rule& r) {
  std::set<std::string> bound;
  std::function<void(const LPItem&)> add = [&](const LPItem& it) {
    if (it.kind == LPItem::Kind::kStep || it.kind == LPItem::Kind::kSeq) bound.insert(it.name);
    for (const auto& x : it.pair) add(x);
  };
  for (const auto& a : r.body) {
    if (a.negated) continue;
    if (a.prefix.kind != LPPrefix::Kind::kEps) bound.insert(a.prefix.var);
    if (a.prefix.kind == LPPrefix::Kind::kVarStep) bound.insert(a.prefix.step);
    for (const auto& it : a.path) add(it);
  }
  std::function<void(const LPItem&)> need = [&](const LPItem& it) {
    if ((it.kind == LPItem::Kind::kStep || it.kind == LPItem::Kind::kSeq) && !bound.count(it.name)) {
      throw Error("lp: unsafe rule '" + PrintRule(r) + "', variable " + it.name + " is not bound");
    }
    for (const auto& x : it.pair) need(x);
  };
  auto need_atom = [&](const LPAtom& a) {
    if (a.prefix.kind != LPPrefix::Kind::kEps && !bound.count(a.prefix.var)) {
      throw Error("lp: unsafe rule '" + PrintRule(r) + "', variable " + a.prefix.var + " is not bound");
    }
    if (a.prefix.kind == LPPrefix::Kind::kVarStep) need(Step(a.prefix.step));
    for (const auto& it : a.path) need(it);
  };
  need_atom(r.head);
  for (const auto& a : r.body) {
    if (a.negated) need_atom(a);
  }
}

}  // namespace

LogicProgram CompileLP(const ExprP& q, const LPOptions& opt) { return LPCompiler(opt).Run(q); }

std::string PrintRule(const Rule& r) {
  std::string out = PrintAtom(r.head);
  if (!r.body.empty()) {
    out += " :- ";
    for (size_t i = 0; i < r.body.size(); ++i) {
      if (i) out += ", ";
      out += PrintAtom(r.body[i]);
    }
  }
  return out + ".";
}

std::string PrintLP(const LogicProgram& p) {
  std::string out = "% goal: " + p.goal + "\n";
  for (const auto& r : p.rules) out += PrintRule(r) + "\n";
  return out;
}

LogicProgram ParseLP(std::string_view text) {
  LogicProgram p;
  size_t start = 0;
  while (start <= text.size()) {
    size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == text.npos ? text.npos : nl - start);
    size_t a = line.find_first_not_of(" \t\r");
    if (a != std::string_view::npos) {
      std::string_view t = line.substr(a);
      if (t[0] == '%') {
        constexpr std::string_view kGoal = "% goal:";
        if (t.substr(0, kGoal.size()) == kGoal) {
          std::string g(t.substr(kGoal.size()));
          g.erase(0, g.find_first_not_of(" \t"));
          g.erase(g.find_last_not_of(" \t\r") + 1);
          p.goal = g;
        }
      } else {
        p.rules.push_back(LPParser(line, start).ParseRule());
      }
    }
    if (nl == text.npos) break;
    start = nl + 1;
  }
  if (p.goal.empty()) throw SyntaxError("lp: missing '% goal:' header", 0);
  return p;
}

bool IsNonrecursive(const LogicProgram& p) {
  try {
    TopoOrder(p);
    return true;
  } catch (const Error&) {
    return false;
  }
}

PathSet EvalLP(const LogicProgram& p, const std::vector<LPFacts>& extra) {
  std::vector<std::string> order = TopoOrder(p);
  LPEvaluator ev;
  for (const auto& f : extra) {
    for (const auto& [pre, path] : f.facts) ev.db[f.pred].bin[pre].insert(path);
  }
  std::map<std::string, std::vector<const Rule*>> by_head;
  for (const auto& r : p.rules) {
    CheckSafety(r);
    by_head[r.head.pred].push_back(&r);
  }
  for (const auto& pred : order) {
    for (const Rule* r : by_head[pred]) ev.Fire(*r);
  }
  PathSet out;
  auto it = ev.db[p.goal].bin.find(DPath{});
  if (it != ev.db[p.goal].bin.end()) out.insert(it->second.begin(), it->second.end());
  return NormalizeMarkers(out);
}

bool GoalTrue(const LogicProgram& p) {
  for (const auto& path : EvalLP(p)) {
    if (path.size() == 2 && !path[0].is_marker() && !path[1].is_pair() && path[1].lab() == kUnitMarker) {
      return true;
    }
  }
  return false;
}

// ---- isomorphism ----

namespace {

// Rule text with variables renamed by first occurrence and predicates
// replaced by the given names.
std::string CanonRule(const Rule& r, const std::map<std::string, std::string>& pred_name) {
  std::map<std::string, std::string> ren;
  int np = 0, ns = 0, nq = 0;
  auto var = [&](const std::string& v, char kind) {
    auto it = ren.find(v);
    if (it != ren.end()) return it->second;
    std::string n = kind == 'X' ? "X" + std::to_string(np++) : kind == 'i' ? "i" + std::to_string(ns++)
                                                                           : "v" + std::to_string(nq++);
    ren[v] = n;
    return n;
  };
  std::function<std::string(const LPItem&)> item = [&](const LPItem& it) -> std::string {
    switch (it.kind) {
      case LPItem::Kind::kLab: return "'" + it.name;
      case LPItem::Kind::kStep: return var(it.name, 'i');
      case LPItem::Kind::kSeq: return var(it.name, 'v');
      case LPItem::Kind::kPair: return "(" + item(it.pair[0]) + "." + item(it.pair[1]) + ")";
    }
    return "";
  };
  auto atom = [&](const LPAtom& a) {
    auto pn = pred_name.find(a.pred);
    std::string s = (a.negated ? "~" : "") + (pn == pred_name.end() ? "?" + a.pred : pn->second) + "(";
    if (a.prefix.kind == LPPrefix::Kind::kEps) {
      s += "eps";
    } else {
      s += var(a.prefix.var, 'X');
      if (a.prefix.kind == LPPrefix::Kind::kVarStep) s += "." + var(a.prefix.step, 'i');
    }
    if (!a.unary) {
      s += ",";
      for (const auto& it : a.path) s += item(it) + ".";
    }
    return s + ")";
  };
  std::string out = atom(r.head) + ":-";
  for (const auto& a : r.body) out += atom(a) + ",";
  return out;
}

std::vector<std::string> Preds(const LogicProgram& p) {
  std::set<std::string> s;
  for (const auto& r : p.rules) {
    s.insert(r.head.pred);
    for (const auto& a : r.body) s.insert(a.pred);
  }
  return {s.begin(), s.end()};
}

std::multiset<std::string> CanonAll(const LogicProgram& p, const std::map<std::string, std::string>& names) {
  std::multiset<std::string> out;
  for (const auto& r : p.rules) out.insert(CanonRule(r, names));
  return out;
}

}  // namespace

bool RuleIsomorphic(const LogicProgram& a, const LogicProgram& b) {
  if (a.rules.size() != b.rules.size()) return false;
  std::vector<std::string> pa = Preds(a), pb = Preds(b);
  if (pa.size() != pb.size()) return false;
  // Color refinement: start from rule shapes with predicates hidden.
  auto refine = [](const LogicProgram& p, const std::vector<std::string>& preds) {
    std::map<std::string, std::string> color;
    for (const auto& n : preds) color[n] = "";
    for (int round = 0; round < static_cast<int>(preds.size()) + 1; ++round) {
      std::map<std::string, std::multiset<std::string>> sig;
      for (const auto& r : p.rules) {
        std::string c = CanonRule(r, color);
        sig[r.head.pred].insert("H" + c);
        for (const auto& at : r.body) sig[at.pred].insert("B" + c);
      }
      std::map<std::string, std::string> next;
      for (const auto& n : preds) {
        std::string s;
        for (const auto& x : sig[n]) s += x + "|";
        next[n] = std::to_string(std::hash<std::string>{}(s)) + (n == p.goal ? "G" : "");
      }
      color = next;
    }
    return color;
  };
  auto ca = refine(a, pa), cb = refine(b, pb);
  std::map<std::string, std::vector<std::string>> class_b;
  for (const auto& [n, c] : cb) class_b[c].push_back(n);
  // Backtracking within color classes, checked against the full rule set.
  std::map<std::string, std::string> to_b;
  std::set<std::string> used;
  auto target = CanonAll(b, [&] {
    std::map<std::string, std::string> id;
    for (const auto& n : pb) id[n] = n;
    return id;
  }());
  std::function<bool(size_t)> go = [&](size_t k) -> bool {
    if (k == pa.size()) return to_b[a.goal] == b.goal && CanonAll(a, to_b) == target;
    const std::string& n = pa[k];
    for (const auto& m : class_b[ca[n]]) {
      if (used.count(m)) continue;
      used.insert(m);
      to_b[n] = m;
      if (go(k + 1)) return true;
      used.erase(m);
      to_b.erase(n);
    }
    return false;
  };
  return go(0);
}

}  // namespace nestql
