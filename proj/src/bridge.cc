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

#include "nestql/bridge.h"

#include "nestql/error.h"

namespace nestql {

Value EncodeC(const TreeP& t) {
  std::vector<Value> kids;
  kids.reserve(t->children.size());
  for (const auto& c : t->children) kids.push_back(EncodeC(c));
  return Value::Tuple({{"label", Value::Atom(t->label)}, {"children", Value::List(std::move(kids))}});
}

TreeP DecodeC(const Value& v) {
  const Value* label = v.field("label");
  const Value* kids = v.field("children");
  if (!label || !kids || !label->is_atom() || !kids->is_coll() || v.fields().size() != 2) {
    throw Error("not a tree encoding: " + PrintValue(v));
  }
  std::vector<TreeP> out;
  for (const auto& k : kids->elems()) out.push_back(DecodeC(k));
  return MakeTree(label->label(), std::move(out));
}

TreeP EncodeT(const Value& v) {
  if (v.is_atom()) return MakeTree(v.label());
  std::vector<TreeP> kids;
  if (v.is_tuple()) {
    for (const auto& [l, f] : v.fields()) kids.push_back(MakeTree(l, {EncodeT(f)}));
    return MakeTree("tup", std::move(kids));
  }
  if (v.kind() != CollKind::kList) {
    throw Error(std::string("tree encoding is defined on lists only, got a ") + CollKindName(v.kind()));
  }
  for (const auto& e : v.elems()) kids.push_back(EncodeT(e));
  return MakeTree("list", std::move(kids));
}

Value RootBindings(const TreeP& doc) {
  return Value::List({Value::Tuple({{"N", Value::Atom("root")}, {"V", EncodeC(doc)}})});
}

namespace {

// ---- XQ to MA ----

ExprP Lookup(const XQVar& v) { return ma::Select(ma::CConst({"N"}, v.name)); }

ExprP Bind(const XQVar& v, const ExprP& src, const ExprP& body) {
  using namespace ma;
  return Seq({Tuple({{"1", Id()}, {"2", src}}), PairWith("2"),
              FlatMap(Compose(Union(P("1"), Compose(Tuple({{"N", Const(v.name)}, {"V", P("2")}}), Sng())), body))});
}

ExprP MA(const XQP& q) {
  using namespace ma;
  switch (q->kind) {
    case XQKind::kSeq:
      return Union(MA(q->kids[0]), MA(q->kids[1]));
    case XQKind::kEmptyElem:
      return Compose(Tuple({{"label", Const(q->label)}, {"children", Empty()}}), Sng());
    case XQKind::kElem:
      return Compose(Tuple({{"label", Const(q->label)}, {"children", MA(q->kids[0])}}), Sng());
    case XQKind::kVar:
      return Compose(Lookup(q->var), Map(P("V")));
    case XQKind::kStep: {
      if (q->axis != Axis::kChild) throw Error("xq2ma: only the child axis can be translated");
      ExprP pick = q->label == "*" ? P("children") : Compose(P("children"), Select(CConst({"label"}, q->label)));
      return Seq({Lookup(q->var), Map(P("V")), FlatMap(pick)});
    }
    case XQKind::kFor:
    case XQKind::kLet:
      return Bind(q->var, MA(q->kids[0]), MA(q->kids[1]));
    case XQKind::kIf:
      return Seq({Tuple({{"1", Id()}, {"2", Compose(MA(q->kids[0]), True())}}), PairWith("2"),
                  FlatMap(Compose(P("1"), MA(q->kids[1])))});
    case XQKind::kNot:
      return Seq({MA(q->kids[0]), Map(Tuple({})), Not()});
    case XQKind::kVarEq: {
      CondP c = q->mode == EqMode::kAtomic ? CEq({"1", "V", "label"}, {"2", "V", "label"}, EqMode::kAtomic)
                                           : CEq({"1", "V"}, {"2", "V"}, EqMode::kDeep);
      return Seq({Tuple({{"1", Lookup(q->var)}, {"2", Lookup(q->var2)}}), PairWith("1"), FlatMap(PairWith("2")),
                  Select(c), Map(Tuple({{"label", Const("yes")}, {"children", Empty()}}))});
    }
    default:
      throw Error("xq2ma: desugar the query first (found a non-core construct)");
  }
}

// ---- MA to XQ ----

class ToXQ {
 public:
  XQP Run(const ExprP& q, const Type& t) {
    XQVar root{0, 0, "root"};
    return X(q, root, t, 1);
  }

 private:
  XQVar Fresh(int depth) { return {depth, next_, "x" + std::to_string(next_++)}; }

  // $x/a1/*/a2/*/.../ak/*
  XQP PathXQ(const XQVar& x, const Path& p, size_t i, int depth) {
    if (i == p.size()) return xq::Var(x);
    XQVar y = Fresh(depth);
    if (i + 1 == p.size()) return xq::For(y, xq::Step(x, Axis::kChild, p[i]), xq::Step(y, Axis::kChild, "*"));
    XQVar z = Fresh(depth + 1);
    return xq::For(y, xq::Step(x, Axis::kChild, p[i]),
                   xq::For(z, xq::Step(y, Axis::kChild, "*"), PathXQ(z, p, i + 1, depth + 2)));
  }

  // Members of a list-encoded result: e/*.
  XQP Members(const XQP& e, int depth) {
    if (e->kind == XQKind::kVar) return xq::Step(e->var, Axis::kChild, "*");
    XQVar y = Fresh(depth);
    return xq::For(y, e, xq::Step(y, Axis::kChild, "*"));
  }

  XQP BoolOf(XQP cond) { return xq::Elem("list", xq::If(std::move(cond), xq::EmptyElem("tup"))); }

  XQP X(const ExprP& q, const XQVar& x, const Type& t, int depth) {
    switch (q->op) {
      case Op::kId:
        return xq::Var(x);
      case Op::kConst:
        return xq::EmptyElem(q->name);
      case Op::kEmpty:
        return xq::EmptyElem("list");
      case Op::kUnit:
        return xq::EmptyElem("tup");
      case Op::kSng:
        return xq::Elem("list", xq::Var(x));
      case Op::kProj:
        return PathXQ(x, q->path, 0, depth);
      case Op::kCompose: {
        XQP a = X(q->kids[0], x, t, depth);
        Type mid = InferType(q->kids[0], t, CollKind::kList);
        XQVar y = Fresh(depth);
        XQP b = X(q->kids[1], y, mid, depth + 1);
        // A step result is a singleton on encoded inputs but not statically
        // so; bind it with for instead of let.
        return IsSingletonForm(a) ? xq::Let(y, a, b) : xq::For(y, a, b);
      }
      case Op::kMap: {
        XQVar y = Fresh(depth);
        return xq::Elem("list", xq::For(y, xq::Step(x, Axis::kChild, "*"), X(q->kids[0], y, t.elem(), depth + 1)));
      }
      case Op::kFlatMap:
        return X(ma::Compose(ma::Map(q->kids[0]), ma::Flatten()), x, t, depth);
      case Op::kFlatten: {
        XQVar y = Fresh(depth);
        return xq::Elem("list", xq::For(y, xq::Step(x, Axis::kChild, "list"), xq::Step(y, Axis::kChild, "*")));
      }
      case Op::kPairWith: {
        XQVar y = Fresh(depth);
        XQVar u = Fresh(depth), w = Fresh(depth + 1);
        XQP src = xq::For(u, xq::Step(x, Axis::kChild, q->name),
                          xq::For(w, xq::Step(u, Axis::kChild, "list"), xq::Step(w, Axis::kChild, "*")));
        XQP fields;
        for (const auto& [l, ft] : t.fields()) {
          XQP content = l == q->name ? xq::Var(y) : PathXQ(x, {l}, 0, depth + 1);
          XQP el = xq::Elem(l, content);
          fields = fields ? xq::Seq(fields, el) : el;
        }
        XQP tup = fields ? xq::Elem("tup", fields) : xq::EmptyElem("tup");
        return xq::Elem("list", xq::For(y, src, tup));
      }
      case Op::kTuple: {
        XQP fields;
        for (size_t k = 0; k < q->kids.size(); ++k) {
          XQP el = xq::Elem(q->labels[k], X(q->kids[k], x, t, depth));
          fields = fields ? xq::Seq(fields, el) : el;
        }
        return fields ? xq::Elem("tup", fields) : xq::EmptyElem("tup");
      }
      case Op::kUnion: {
        XQP a = Members(X(q->kids[0], x, t, depth), depth);
        XQP b = Members(X(q->kids[1], x, t, depth), depth);
        return xq::Elem("list", xq::Seq(a, b));
      }
      case Op::kEqAtomic:
      case Op::kEqDeep:
        return BoolOf(xq::QueryEq(PathXQ(x, q->path, 0, depth), PathXQ(x, q->path2, 0, depth),
                                  q->op == Op::kEqAtomic ? EqMode::kAtomic : EqMode::kDeep));
      case Op::kNot:
        return BoolOf(xq::Not(xq::Step(x, Axis::kChild, "*")));
      case Op::kTrue:
        return BoolOf(xq::Step(x, Axis::kChild, "*"));
      case Op::kSelect: {
        const Cond& c = *q->cond;
        if (c.kind != Cond::Kind::kPathEq || c.mode == EqMode::kMon) {
          throw Error("ma2xq: only selections on a path equality are translated; desugar first");
        }
        XQVar y = Fresh(depth);
        XQP test = xq::QueryEq(PathXQ(y, c.p, 0, depth + 1), PathXQ(y, c.q, 0, depth + 1), c.mode);
        return xq::Elem("list", xq::For(y, xq::Step(x, Axis::kChild, "*"), xq::If(test, xq::Var(y))));
      }
      default:
        throw Error(std::string("ma2xq: operator '") + OpName(q->op) + "' has no list translation; desugar first");
    }
  }

  int next_ = 1;
};

}  // namespace

ExprP XQToMA(const XQP& q) { return MA(q); }

XQP MAToXQ(const ExprP& q, const Type& input) { return DesugarXQ(ToXQ().Run(q, input)); }

bool CheckXQToMA(const XQP& q, const TreeP& doc) {
  std::vector<Value> lhs;
  for (const auto& t : EvalXQ(q, {doc})) lhs.push_back(EncodeC(t));
  EvalOptions o;
  o.sem = CollKind::kList;
  o.check_types = false;  // the C encoding has no finite type
  Value rhs = EvalMA(XQToMA(q), RootBindings(doc), o);
  return Value::List(std::move(lhs)) == rhs;
}

bool CheckMAToXQ(const ExprP& q, const Value& v, const Type& t) {
  EvalOptions o;
  o.sem = CollKind::kList;
  TreeP lhs = EncodeT(EvalMA(q, v, o));
  auto rhs = EvalXQ(MAToXQ(q, t), {EncodeT(v)});
  return rhs.size() == 1 && TreeEqual(lhs, rhs[0]);
}

}  // namespace nestql
