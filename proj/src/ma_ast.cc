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

#include <functional>

#include "nestql/error.h"
#include "nestql/ma.h"

namespace nestql {

bool IsCoreOp(Op op) { return static_cast<int>(op) <= static_cast<int>(Op::kUnique); }

const char* OpName(Op op) {
  switch (op) {
    case Op::kId: return "id";
    case Op::kConst: return "const";
    case Op::kEmpty: return "empty";
    case Op::kUnit: return "unit";
    case Op::kSng: return "sng";
    case Op::kMap: return "map";
    case Op::kFlatten: return "flatten";
    case Op::kPairWith: return "pairwith";
    case Op::kTuple: return "tup";
    case Op::kProj: return "pi";
    case Op::kCompose: return ";";
    case Op::kUnion: return "union";
    case Op::kEqAtomic: return "eqatom";
    case Op::kNot: return "not";
    case Op::kTrue: return "true";
    case Op::kMonus: return "monus";
    case Op::kUnique: return "unique";
    case Op::kEqMon: return "eqmon";
    case Op::kEqDeep: return "eq";
    case Op::kSelect: return "select";
    case Op::kDiff: return "diff";
    case Op::kIntersect: return "cap";
    case Op::kSubsetEq: return "subseteq";
    case Op::kMemberOf: return "in";
    case Op::kNest: return "nest";
    case Op::kCart: return "cart";
    case Op::kFlatMap: return "flatmap";
  }
  return "?";
}

std::string PrintPath(const Path& p) {
  std::string out;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) out += '.';
    out += QuoteAtomIfNeeded(p[i]);
  }
  return out;
}

namespace ma {
namespace {

ExprP Make(Op op) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  return e;
}

ExprP MakePaths(Op op, Path p, Path q) {
  if (p.empty() || q.empty()) throw Error(std::string(OpName(op)) + ": empty path");
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->path = std::move(p);
  e->path2 = std::move(q);
  return e;
}

ExprP MakeKids(Op op, std::vector<ExprP> kids) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->kids = std::move(kids);
  return e;
}

}  // namespace

ExprP Id() { return Make(Op::kId); }
ExprP Const(std::string atom) {
  auto e = std::make_shared<Expr>();
  e->op = Op::kConst;
  e->name = std::move(atom);
  return e;
}
ExprP Empty() { return Make(Op::kEmpty); }
ExprP Unit() { return Make(Op::kUnit); }
ExprP Sng() { return Make(Op::kSng); }
ExprP Map(ExprP f) { return MakeKids(Op::kMap, {std::move(f)}); }
ExprP Flatten() { return Make(Op::kFlatten); }
ExprP PairWith(std::string label) {
  auto e = std::make_shared<Expr>();
  e->op = Op::kPairWith;
  e->name = std::move(label);
  return e;
}
ExprP Tuple(std::vector<std::pair<std::string, ExprP>> fields) {
  auto e = std::make_shared<Expr>();
  e->op = Op::kTuple;
  for (auto& [l, f] : fields) {
    for (const auto& seen : e->labels) {
      if (seen == l) throw Error("tup: duplicate label '" + l + "'");
    }
    e->labels.push_back(l);
    e->kids.push_back(std::move(f));
  }
  return e;
}
ExprP Proj(Path path) {
  if (path.empty()) throw Error("pi: empty path");
  auto e = std::make_shared<Expr>();
  e->op = Op::kProj;
  e->path = std::move(path);
  return e;
}
ExprP Compose(ExprP f, ExprP g) { return MakeKids(Op::kCompose, {std::move(f), std::move(g)}); }
ExprP Seq(std::vector<ExprP> stages) {
  if (stages.empty()) return Id();
  ExprP acc = stages[0];
  for (size_t i = 1; i < stages.size(); ++i) acc = Compose(acc, stages[i]);
  return acc;
}
ExprP Union(ExprP f, ExprP g) { return MakeKids(Op::kUnion, {std::move(f), std::move(g)}); }
ExprP EqAtomic(Path p, Path q) { return MakePaths(Op::kEqAtomic, std::move(p), std::move(q)); }
ExprP Not() { return Make(Op::kNot); }
ExprP True() { return Make(Op::kTrue); }
ExprP Monus() { return Make(Op::kMonus); }
ExprP Unique() { return Make(Op::kUnique); }
ExprP EqMon(Path p, Path q) { return MakePaths(Op::kEqMon, std::move(p), std::move(q)); }
ExprP EqDeep(Path p, Path q) { return MakePaths(Op::kEqDeep, std::move(p), std::move(q)); }
ExprP Select(CondP c) {
  auto e = std::make_shared<Expr>();
  e->op = Op::kSelect;
  e->cond = std::move(c);
  return e;
}
ExprP Diff() { return Make(Op::kDiff); }
ExprP Intersect() { return Make(Op::kIntersect); }
ExprP SubsetEq(Path p, Path q) { return MakePaths(Op::kSubsetEq, std::move(p), std::move(q)); }
ExprP MemberOf(Path p, Path q) { return MakePaths(Op::kMemberOf, std::move(p), std::move(q)); }
ExprP Nest(std::string new_label, std::vector<std::string> grouped) {
  if (grouped.empty()) throw Error("nest: no grouped labels");
  auto e = std::make_shared<Expr>();
  e->op = Op::kNest;
  e->name = std::move(new_label);
  e->labels = std::move(grouped);
  return e;
}
ExprP Cart(ExprP f, ExprP g) { return MakeKids(Op::kCart, {std::move(f), std::move(g)}); }
ExprP FlatMap(ExprP f) { return MakeKids(Op::kFlatMap, {std::move(f)}); }

Path SplitPath(std::string_view dotted) {
  Path p;
  size_t start = 0;
  while (true) {
    size_t dot = dotted.find('.', start);
    std::string_view part = dotted.substr(start, dot == std::string_view::npos ? dotted.npos : dot - start);
    if (part.empty()) throw Error("bad path '" + std::string(dotted) + "'");
    p.emplace_back(part);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return p;
}

ExprP P(std::string_view dotted) { return Proj(SplitPath(dotted)); }

namespace {
CondP MakeCond(Cond::Kind k, std::vector<CondP> kids = {}) {
  auto c = std::make_shared<Cond>();
  c->kind = k;
  c->kids = std::move(kids);
  return c;
}
}  // namespace

CondP CTrue() { return MakeCond(Cond::Kind::kTrue); }
CondP CAnd(CondP a, CondP b) { return MakeCond(Cond::Kind::kAnd, {std::move(a), std::move(b)}); }
CondP COr(CondP a, CondP b) { return MakeCond(Cond::Kind::kOr, {std::move(a), std::move(b)}); }
CondP CNot(CondP a) { return MakeCond(Cond::Kind::kNot, {std::move(a)}); }
CondP CIff(CondP a, CondP b) { return MakeCond(Cond::Kind::kIff, {std::move(a), std::move(b)}); }
CondP CEq(Path p, Path q, EqMode mode) {
  auto c = std::make_shared<Cond>();
  c->kind = Cond::Kind::kPathEq;
  c->p = std::move(p);
  c->q = std::move(q);
  c->mode = mode;
  return c;
}
CondP CConst(Path p, std::string atom) {
  auto c = std::make_shared<Cond>();
  c->kind = Cond::Kind::kConstEq;
  c->p = std::move(p);
  c->atoms = {std::move(atom)};
  return c;
}
CondP CIn(Path p, std::vector<std::string> atoms) {
  auto c = std::make_shared<Cond>();
  c->kind = Cond::Kind::kIn;
  c->p = std::move(p);
  c->atoms = std::move(atoms);
  return c;
}
CondP CPred(ExprP pred) {
  auto c = std::make_shared<Cond>();
  c->kind = Cond::Kind::kPred;
  c->pred = std::move(pred);
  return c;
}

}  // namespace ma

// ---- printing ----

namespace {

std::string QuoteConst(const std::string& a) {
  std::string out = "'";
  for (char c : a) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

int CondPrec(const Cond& c) {
  switch (c.kind) {
    case Cond::Kind::kIff: return 1;
    case Cond::Kind::kOr: return 2;
    case Cond::Kind::kAnd: return 3;
    default: return 4;
  }
}

void PrintCondTo(const Cond& c, std::string& out, int min_prec);

void PrintTo(const Expr& e, std::string& out) {
  auto paths = [&](const char* kw) {
    out += kw;
    out += '[' + PrintPath(e.path) + ", " + PrintPath(e.path2) + ']';
  };
  switch (e.op) {
    case Op::kConst:
      out += QuoteConst(e.name);
      return;
    case Op::kMap:
    case Op::kFlatMap:
      out += OpName(e.op);
      out += '(';
      PrintTo(*e.kids[0], out);
      out += ')';
      return;
    case Op::kPairWith:
      out += "pairwith[" + QuoteAtomIfNeeded(e.name) + ']';
      return;
    case Op::kTuple:
      out += "tup[";
      for (size_t i = 0; i < e.kids.size(); ++i) {
        if (i) out += ", ";
        out += QuoteAtomIfNeeded(e.labels[i]) + " = ";
        PrintTo(*e.kids[i], out);
      }
      out += ']';
      return;
    case Op::kProj:
      out += "pi[" + PrintPath(e.path) + ']';
      return;
    case Op::kCompose:
      PrintTo(*e.kids[0], out);
      out += " ; ";
      if (e.kids[1]->op == Op::kCompose) {
        out += '(';
        PrintTo(*e.kids[1], out);
        out += ')';
      } else {
        PrintTo(*e.kids[1], out);
      }
      return;
    case Op::kUnion:
    case Op::kCart:
      out += OpName(e.op);
      out += '(';
      PrintTo(*e.kids[0], out);
      out += ", ";
      PrintTo(*e.kids[1], out);
      out += ')';
      return;
    case Op::kEqAtomic:
    case Op::kEqMon:
    case Op::kEqDeep:
    case Op::kSubsetEq:
    case Op::kMemberOf:
      paths(OpName(e.op));
      return;
    case Op::kSelect:
      out += "select[";
      PrintCondTo(*e.cond, out, 0);
      out += ']';
      return;
    case Op::kNest:
      out += "nest[" + QuoteAtomIfNeeded(e.name) + " = (";
      for (size_t i = 0; i < e.labels.size(); ++i) {
        if (i) out += ", ";
        out += QuoteAtomIfNeeded(e.labels[i]);
      }
      out += ")]";
      return;
    default:
      out += OpName(e.op);
      return;
  }
}

void PrintCondTo(const Cond& c, std::string& out, int min_prec) {
  int prec = CondPrec(c);
  bool paren = prec < min_prec;
  if (paren) out += '(';
  switch (c.kind) {
    case Cond::Kind::kTrue:
      out += "true";
      break;
    case Cond::Kind::kIff:
    case Cond::Kind::kOr:
    case Cond::Kind::kAnd: {
      const char* op = c.kind == Cond::Kind::kIff ? " <=> " : c.kind == Cond::Kind::kOr ? " || " : " && ";
      PrintCondTo(*c.kids[0], out, prec);
      out += op;
      PrintCondTo(*c.kids[1], out, prec + 1);
      break;
    }
    case Cond::Kind::kNot:
      out += '!';
      PrintCondTo(*c.kids[0], out, 4);
      break;
    case Cond::Kind::kPathEq:
      out += PrintPath(c.p);
      out += c.mode == EqMode::kAtomic ? " = " : c.mode == EqMode::kMon ? " =mon " : " =deep ";
      out += PrintPath(c.q);
      break;
    case Cond::Kind::kConstEq:
      out += PrintPath(c.p) + " = " + QuoteConst(c.atoms[0]);
      break;
    case Cond::Kind::kIn:
      out += PrintPath(c.p) + " in {";
      for (size_t i = 0; i < c.atoms.size(); ++i) {
        if (i) out += ", ";
        out += QuoteConst(c.atoms[i]);
      }
      out += '}';
      break;
    case Cond::Kind::kPred:
      out += "pred(";
      PrintTo(*c.pred, out);
      out += ')';
      break;
  }
  if (paren) out += ')';
}

bool CondEqual(const CondP& a, const CondP& b);

}  // namespace

std::string PrintMA(const ExprP& e) {
  std::string out;
  PrintTo(*e, out);
  return out;
}

std::string PrintCond(const CondP& c) {
  std::string out;
  PrintCondTo(*c, out, 0);
  return out;
}

bool ExprEqual(const ExprP& a, const ExprP& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op || a->name != b->name || a->path != b->path || a->path2 != b->path2 ||
      a->labels != b->labels || a->kids.size() != b->kids.size()) {
    return false;
  }
  for (size_t i = 0; i < a->kids.size(); ++i) {
    if (!ExprEqual(a->kids[i], b->kids[i])) return false;
  }
  if (static_cast<bool>(a->cond) != static_cast<bool>(b->cond)) return false;
  return !a->cond || CondEqual(a->cond, b->cond);
}

namespace {

bool CondEqual(const CondP& a, const CondP& b) {
  if (a->kind != b->kind || a->p != b->p || a->q != b->q || a->atoms != b->atoms ||
      a->kids.size() != b->kids.size()) {
    return false;
  }
  if (a->kind == Cond::Kind::kPathEq && a->mode != b->mode) return false;
  for (size_t i = 0; i < a->kids.size(); ++i) {
    if (!CondEqual(a->kids[i], b->kids[i])) return false;
  }
  if (a->kind == Cond::Kind::kPred) return ExprEqual(a->pred, b->pred);
  return true;
}

uint64_t CondSize(const Cond& c) {
  uint64_t n = 1;
  for (const auto& k : c.kids) n += CondSize(*k);
  if (c.pred) n += ExprSize(c.pred);
  return n;
}

bool CondIsCore(const Cond&) { return false; }

}  // namespace

uint64_t ExprSize(const ExprP& e) {
  uint64_t n = 1;
  for (const auto& k : e->kids) n += ExprSize(k);
  if (e->cond) n += CondSize(*e->cond);
  return n;
}

bool IsCore(const ExprP& e) {
  if (!IsCoreOp(e->op)) return false;
  if (e->cond && !CondIsCore(*e->cond)) return false;
  for (const auto& k : e->kids) {
    if (!IsCore(k)) return false;
  }
  return true;
}

}  // namespace nestql
