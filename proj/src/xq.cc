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

#include "nestql/xq.h"

#include <algorithm>
#include <cctype>

#include "nestql/error.h"

namespace nestql {

namespace xq {
namespace {
XQP Make(XQExpr e) { return std::make_shared<const XQExpr>(std::move(e)); }
}  // namespace

XQP EmptyElem(std::string a) {
  XQExpr e;
  e.kind = XQKind::kEmptyElem;
  e.label = std::move(a);
  return Make(std::move(e));
}
XQP Elem(std::string a, XQP body) {
  XQExpr e;
  e.kind = XQKind::kElem;
  e.label = std::move(a);
  e.kids = {std::move(body)};
  return Make(std::move(e));
}
XQP Seq(XQP a, XQP b) {
  XQExpr e;
  e.kind = XQKind::kSeq;
  e.kids = {std::move(a), std::move(b)};
  return Make(std::move(e));
}
XQP Var(XQVar v) {
  XQExpr e;
  e.kind = XQKind::kVar;
  e.var = std::move(v);
  return Make(std::move(e));
}
XQP Step(XQVar v, Axis axis, std::string test) {
  XQExpr e;
  e.kind = XQKind::kStep;
  e.var = std::move(v);
  e.axis = axis;
  e.label = std::move(test);
  return Make(std::move(e));
}
namespace {
XQP Binder(XQKind k, XQVar v, XQP a, XQP b) {
  XQExpr e;
  e.kind = k;
  e.var = std::move(v);
  e.kids = {std::move(a), std::move(b)};
  return Make(std::move(e));
}
XQP Binary(XQKind k, XQP a, XQP b) {
  XQExpr e;
  e.kind = k;
  e.kids = {std::move(a), std::move(b)};
  return Make(std::move(e));
}
}  // namespace
XQP For(XQVar v, XQP src, XQP body) { return Binder(XQKind::kFor, std::move(v), std::move(src), std::move(body)); }
XQP Let(XQVar v, XQP bound, XQP body) {
  return Binder(XQKind::kLet, std::move(v), std::move(bound), std::move(body));
}
XQP Some(XQVar v, XQP src, XQP cond) { return Binder(XQKind::kSome, std::move(v), std::move(src), std::move(cond)); }
XQP Every(XQVar v, XQP src, XQP cond) {
  return Binder(XQKind::kEvery, std::move(v), std::move(src), std::move(cond));
}
XQP If(XQP cond, XQP body) { return Binary(XQKind::kIf, std::move(cond), std::move(body)); }
XQP And(XQP a, XQP b) { return Binary(XQKind::kAnd, std::move(a), std::move(b)); }
XQP Or(XQP a, XQP b) { return Binary(XQKind::kOr, std::move(a), std::move(b)); }
XQP QueryEq(XQP a, XQP b, EqMode mode) {
  XQExpr e;
  e.kind = XQKind::kQueryEq;
  e.mode = mode;
  e.kids = {std::move(a), std::move(b)};
  return Make(std::move(e));
}
XQP VarEq(XQVar a, XQVar b, EqMode mode) {
  XQExpr e;
  e.kind = XQKind::kVarEq;
  e.var = std::move(a);
  e.var2 = std::move(b);
  e.mode = mode;
  return Make(std::move(e));
}
XQP Not(XQP a) {
  XQExpr e;
  e.kind = XQKind::kNot;
  e.kids = {std::move(a)};
  return Make(std::move(e));
}
}  // namespace xq

bool IsSingletonForm(const XQP& q) {
  switch (q->kind) {
    case XQKind::kEmptyElem:
    case XQKind::kElem:
    case XQKind::kVar:
      return true;
    case XQKind::kLet:
      return IsSingletonForm(q->kids[1]);
    default:
      return false;
  }
}

namespace {

XQVar Bound(int level, int id) { return {level, id, "x" + std::to_string(id)}; }

// ---- parser ----

class XQParser {
 public:
  XQParser(std::string_view s, const std::vector<std::string>& free) : s_(s) {
    for (const auto& f : free) scope_.push_back({f, XQVar{static_cast<int>(scope_.size()), 0, f}});
  }

  XQP Run() {
    XQP q = Expr();
    Skip();
    if (pos_ != s_.size()) Fail("unexpected trailing input");
    return q;
  }

 private:
  [[noreturn]] void Fail(const std::string& m) { throw SyntaxError("xq: " + m, pos_); }

  void Skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else if (s_.substr(pos_, 2) == "(:") {  // XQuery comment
        size_t e = s_.find(":)", pos_ + 2);
        if (e == s_.npos) Fail("unterminated comment");
        pos_ = e + 2;
      } else {
        break;
      }
    }
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
  static bool WordChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
  bool PeekWord(std::string_view w) {
    Skip();
    if (s_.substr(pos_, w.size()) != w) return false;
    size_t e = pos_ + w.size();
    return e >= s_.size() || !WordChar(s_[e]);
  }
  bool EatWord(std::string_view w) {
    if (!PeekWord(w)) return false;
    pos_ += w.size();
    return true;
  }
  void ExpectWord(std::string_view w) {
    if (!EatWord(w)) Fail("expected '" + std::string(w) + "'");
  }
  std::string Name() {
    Skip();
    size_t start = pos_;
    while (pos_ < s_.size() && IsBareAtom(s_.substr(pos_, 1))) ++pos_;
    if (start == pos_) Fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }
  std::string VarName() {
    Skip();
    if (pos_ >= s_.size() || s_[pos_] != '$') Fail("expected a variable");
    ++pos_;
    return Name();
  }

  int Depth() const { return static_cast<int>(scope_.size()); }

  XQVar Lookup(const std::string& n) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == n) return it->second;
    }
    Fail("unbound variable $" + n);
  }

  XQVar Fresh() { return Bound(Depth(), next_id_++); }

  XQP Expr() {
    XQP q = Single();
    while (Eat(",")) q = xq::Seq(q, Single());
    return q;
  }

  // Parses "$v in/:= <src> <kw> <body>" and returns the pieces.
  template <typename F>
  XQP BinderForm(std::string_view sep, std::string_view kw, F make) {
    std::string n = VarName();
    Expect(sep);
    XQP src = Single();
    ExpectWord(kw);
    XQVar v = Fresh();
    scope_.push_back({n, v});
    XQP body = Single();
    scope_.pop_back();
    return make(v, src, body);
  }

  XQP Single() {
    if (EatWord("for")) {
      return BinderForm("in", "return", [](XQVar v, XQP a, XQP b) { return xq::For(v, a, b); });
    }
    if (EatWord("let")) {
      size_t at = pos_;
      return BinderForm(":=", "return", [&](XQVar v, XQP a, XQP b) {
        if (!IsSingletonForm(a)) {
          pos_ = at;
          Fail("let must bind an element constructor or a variable");
        }
        return xq::Let(v, a, b);
      });
    }
    if (EatWord("some")) {
      return BinderForm("in", "satisfies", [](XQVar v, XQP a, XQP b) { return xq::Some(v, a, b); });
    }
    if (EatWord("every")) {
      return BinderForm("in", "satisfies", [](XQVar v, XQP a, XQP b) { return xq::Every(v, a, b); });
    }
    if (EatWord("if")) {
      Expect("(");
      XQP c = Expr();
      Expect(")");
      ExpectWord("then");
      XQP b = Single();
      if (EatWord("else")) {
        Expect("(");
        Expect(")");
      }
      return xq::If(c, b);
    }
    return OrExpr();
  }

  XQP OrExpr() {
    XQP q = AndExpr();
    while (EatWord("or")) q = xq::Or(q, AndExpr());
    return q;
  }
  XQP AndExpr() {
    XQP q = CmpExpr();
    while (EatWord("and")) q = xq::And(q, CmpExpr());
    return q;
  }
  XQP CmpExpr() {
    XQP a = PathExpr();
    EqMode mode;
    if (EatWord("eq")) {
      mode = EqMode::kAtomic;
    } else if (Eat("=")) {
      mode = EqMode::kDeep;
    } else {
      return a;
    }
    XQP b = PathExpr();
    if (a->kind == XQKind::kVar && b->kind == XQKind::kVar) return xq::VarEq(a->var, b->var, mode);
    return xq::QueryEq(a, b, mode);
  }

  XQP PathExpr() {
    XQP q = Primary();
    while (true) {
      Axis axis;
      if (Eat("//")) {
        axis = Axis::kDescendant;
      } else if (Peek("/") && !Peek("/>")) {
        ++pos_;
        axis = Axis::kChild;
      } else {
        break;
      }
      if (EatWord("child")) {
        Expect("::");
      } else if (EatWord("descendant")) {
        Expect("::");
        axis = Axis::kDescendant;
      } else if (PeekWord("parent") || PeekWord("ancestor") || PeekWord("self") ||
                 PeekWord("following") || PeekWord("preceding") || PeekWord("attribute")) {
        Fail("only the child and descendant axes are supported");
      }
      std::string test = Eat("*") ? "*" : Name();
      if (q->kind == XQKind::kVar) {
        q = xq::Step(q->var, axis, test);
      } else {
        // Steps on anything but a variable go through a fresh binder.
        XQVar v = Fresh();
        q = xq::For(v, q, xq::Step(v, axis, test));
      }
    }
    return q;
  }

  XQP Primary() {
    Skip();
    if (pos_ >= s_.size()) Fail("unexpected end of query");
    if (s_[pos_] == '$') return xq::Var(Lookup(VarName()));
    if (s_[pos_] == '<') return Element();
    if (EatWord("not")) {
      Expect("(");
      XQP a = Expr();
      Expect(")");
      return xq::Not(a);
    }
    if (Eat("(")) {
      if (Peek(")")) Fail("the empty sequence is not part of the language");
      XQP a = Expr();
      Expect(")");
      return a;
    }
    Fail("expected a query");
  }

  XQP Element() {
    Expect("<");
    std::string name = Name();
    if (Eat("/>")) return xq::EmptyElem(name);
    Expect(">");
    XQP body;
    auto add = [&](XQP x) { body = body ? xq::Seq(body, x) : x; };
    while (true) {
      if (Eat("</")) {
        size_t at = pos_;
        std::string close = Name();
        if (close != name) {
          pos_ = at;
          Fail("mismatched </" + close + ">, expected </" + name + ">");
        }
        Expect(">");
        break;
      }
      if (Eat("{")) {
        add(Expr());
        Expect("}");
      } else if (Peek("<")) {
        add(Element());
      } else {
        Fail("expected '{', an element, or </" + name + ">");
      }
    }
    return body ? xq::Elem(name, body) : xq::EmptyElem(name);
  }

  std::string_view s_;
  size_t pos_ = 0;
  std::vector<std::pair<std::string, XQVar>> scope_;
  int next_id_ = 1;
};

// ---- printer ----

std::string VarText(const XQVar& v) { return "$" + v.name; }

std::string Print(const XQP& q, bool top) {
  auto wrap = [&](std::string s) { return top ? s : "(" + s + ")"; };
  switch (q->kind) {
    case XQKind::kEmptyElem:
      return "<" + q->label + "/>";
    case XQKind::kElem: {
      const XQP& b = q->kids[0];
      std::string body = b->kind == XQKind::kElem || b->kind == XQKind::kEmptyElem ? Print(b, true)
                                                                                   : "{ " + Print(b, true) + " }";
      return "<" + q->label + ">" + body + "</" + q->label + ">";
    }
    case XQKind::kSeq:
      return "(" + Print(q->kids[0], true) + ", " + Print(q->kids[1], true) + ")";
    case XQKind::kVar:
      return VarText(q->var);
    case XQKind::kStep:
      return VarText(q->var) + (q->axis == Axis::kChild ? "/child::" : "/descendant::") + q->label;
    case XQKind::kFor:
    case XQKind::kLet:
    case XQKind::kSome:
    case XQKind::kEvery: {
      static const char* const kw[][3] = {
          {"for", " in ", " return "}, {"let", " := ", " return "}, {"some", " in ", " satisfies "},
          {"every", " in ", " satisfies "}};
      int k = q->kind == XQKind::kFor ? 0 : q->kind == XQKind::kLet ? 1 : q->kind == XQKind::kSome ? 2 : 3;
      return wrap(std::string(kw[k][0]) + " " + VarText(q->var) + kw[k][1] + Print(q->kids[0], true) + kw[k][2] +
                  Print(q->kids[1], true));
    }
    case XQKind::kIf:
      return wrap("if (" + Print(q->kids[0], true) + ") then " + Print(q->kids[1], true));
    case XQKind::kVarEq:
      return wrap(VarText(q->var) + (q->mode == EqMode::kAtomic ? " eq " : " = ") + VarText(q->var2));
    case XQKind::kQueryEq:
      return wrap(Print(q->kids[0], false) + (q->mode == EqMode::kAtomic ? " eq " : " = ") +
                  Print(q->kids[1], false));
    case XQKind::kNot:
      return "not(" + Print(q->kids[0], true) + ")";
    case XQKind::kAnd:
      return wrap(Print(q->kids[0], false) + " and " + Print(q->kids[1], false));
    case XQKind::kOr:
      return wrap(Print(q->kids[0], false) + " or " + Print(q->kids[1], false));
  }
  return "";
}

// ---- desugar ----

class XQDesugar {
 public:
  XQDesugar(int next_id, bool keep_not) : next_id_(next_id), keep_not_(keep_not) {}

  // depth: environment size at q.
  XQP D(const XQP& q, int depth) {
    switch (q->kind) {
      case XQKind::kEmptyElem:
      case XQKind::kVar:
      case XQKind::kStep:
      case XQKind::kVarEq:
        return q;
      case XQKind::kElem:
        return xq::Elem(q->label, D(q->kids[0], depth));
      case XQKind::kSeq:
      case XQKind::kOr:
        return xq::Seq(D(q->kids[0], depth), D(q->kids[1], depth));
      case XQKind::kIf:
      case XQKind::kAnd:
        return xq::If(D(q->kids[0], depth), D(q->kids[1], depth));
      case XQKind::kQueryEq:
        return xq::QueryEq(D(q->kids[0], depth), D(q->kids[1], depth), q->mode);
      case XQKind::kFor:
      case XQKind::kSome:
        return xq::For(q->var, D(q->kids[0], depth), D(q->kids[1], depth + 1));
      case XQKind::kLet:
        return xq::Let(q->var, D(q->kids[0], depth), D(q->kids[1], depth + 1));
      case XQKind::kEvery:
        return D(xq::Not(xq::Some(q->var, q->kids[0], xq::Not(q->kids[1]))), depth);
      case XQKind::kNot: {
        XQP c = D(q->kids[0], depth);
        if (keep_not_) return xq::Not(c);
        // (<a>{if c then <b/>}</a>) =deep <a/>, with both sides let-bound so
        // that only variable equality is needed.
        XQVar u = Bound(depth, next_id_++);
        XQVar w = Bound(depth + 1, next_id_++);
        return xq::Let(u, xq::Elem("a", xq::If(c, xq::EmptyElem("b"))),
                       xq::Let(w, xq::EmptyElem("a"), xq::VarEq(u, w, EqMode::kDeep)));
      }
    }
    return q;
  }

 private:
  int next_id_;
  bool keep_not_;
};

int FreeCount(const XQP& q, int depth_hint) {
  // Binder levels pin the environment size: a binder at level L sits at
  // depth L. Without binders, fall back to the largest referenced level.
  int best = -1;
  std::vector<std::pair<const XQExpr*, int>> stack{{q.get(), 0}};
  int max_ref = -1;
  while (!stack.empty()) {
    auto [e, d] = stack.back();
    stack.pop_back();
    switch (e->kind) {
      case XQKind::kFor:
      case XQKind::kLet:
      case XQKind::kSome:
      case XQKind::kEvery:
        if (best < 0) best = e->var.level - d;
        stack.push_back({e->kids[0].get(), d});
        stack.push_back({e->kids[1].get(), d + 1});
        continue;
      case XQKind::kVar:
      case XQKind::kStep:
        max_ref = std::max(max_ref, e->var.level - d);
        break;
      case XQKind::kVarEq:
        max_ref = std::max({max_ref, e->var.level - d, e->var2.level - d});
        break;
      default:
        break;
    }
    for (const auto& k : e->kids) stack.push_back({k.get(), d});
  }
  if (best >= 0) return best;
  return std::max(depth_hint, max_ref + 1);
}

}  // namespace

XQP ParseXQ(std::string_view text, const std::vector<std::string>& free_vars) {
  return XQParser(text, free_vars).Run();
}

std::string PrintXQ(const XQP& q) { return Print(q, true); }

int MaxVarId(const XQP& q) {
  int m = 0;
  if (q->kind == XQKind::kFor || q->kind == XQKind::kLet || q->kind == XQKind::kSome ||
      q->kind == XQKind::kEvery) {
    m = q->var.id;
  }
  for (const auto& k : q->kids) m = std::max(m, MaxVarId(k));
  return m;
}

XQP DesugarXQ(const XQP& q, bool keep_not, int free_vars) {
  return XQDesugar(MaxVarId(q) + 1, keep_not).D(q, FreeCount(q, free_vars));
}

bool IsCoreXQ(const XQP& q, bool allow_not) {
  switch (q->kind) {
    case XQKind::kAnd:
    case XQKind::kOr:
    case XQKind::kSome:
    case XQKind::kEvery:
      return false;
    case XQKind::kNot:
      if (!allow_not) return false;
      break;
    default:
      break;
  }
  for (const auto& k : q->kids) {
    if (!IsCoreXQ(k, allow_not)) return false;
  }
  return true;
}

bool XQEqual(const XQP& a, const XQP& b) {
  if (a->kind != b->kind || a->label != b->label || a->kids.size() != b->kids.size()) return false;
  switch (a->kind) {
    case XQKind::kStep:
      if (a->axis != b->axis) return false;
      [[fallthrough]];
    case XQKind::kVar:
    case XQKind::kFor:
    case XQKind::kLet:
    case XQKind::kSome:
    case XQKind::kEvery:
      if (a->var.level != b->var.level) return false;
      break;
    case XQKind::kVarEq:
      if (a->var.level != b->var.level || a->var2.level != b->var2.level || a->mode != b->mode) return false;
      break;
    case XQKind::kQueryEq:
      if (a->mode != b->mode) return false;
      break;
    default:
      break;
  }
  for (size_t i = 0; i < a->kids.size(); ++i) {
    if (!XQEqual(a->kids[i], b->kids[i])) return false;
  }
  return true;
}

size_t XQSize(const XQP& q) {
  size_t n = 1;
  for (const auto& k : q->kids) n += XQSize(k);
  return n;
}

}  // namespace nestql
