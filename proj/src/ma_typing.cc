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

#include "nestql/error.h"
#include "nestql/ma.h"

namespace nestql {
namespace {

class Typer {
 public:
  explicit Typer(CollKind sem) : sem_(sem) {}

  Type Infer(const ExprP& q, const Type& in) {
    switch (q->op) {
      case Op::kId:
        return in;
      case Op::kConst:
        return Type::Dom();
      case Op::kEmpty:
        return Type::Coll(sem_, Type::Any());
      case Op::kUnit:
        return Type::Unit();
      case Op::kSng:
        return Type::Coll(sem_, in);
      case Op::kMap: {
        Type e = Elem(q, in);
        return Type::Coll(sem_, Infer(q->kids[0], e));
      }
      case Op::kFlatten: {
        Type e = Elem(q, in);
        if (e.is_any()) return Type::Coll(sem_, Type::Any());
        if (!e.is_coll() || e.kind() != sem_) Fail(q, "a doubly nested " + Kind(), in);
        return e;
      }
      case Op::kFlatMap: {
        Type e = Elem(q, in);
        Type r = Infer(q->kids[0], e);
        if (r.is_any()) return Type::Coll(sem_, Type::Any());
        if (!r.is_coll() || r.kind() != sem_) {
          Fail(q, "a function returning a " + Kind(), r);
        }
        return r;
      }
      case Op::kPairWith: {
        if (in.is_any()) return Type::Coll(sem_, Type::Any());
        const Type* f = in.is_tuple() ? in.field(q->name) : nullptr;
        if (!f) Fail(q, "a tuple with field " + q->name, in);
        Type e = Elem(q, *f);
        std::vector<Type::Field> fs = in.fields();
        for (auto& x : fs) {
          if (x.first == q->name) x.second = e;
        }
        return Type::Coll(sem_, Type::Tuple(std::move(fs)));
      }
      case Op::kTuple: {
        std::vector<Type::Field> fs;
        for (size_t i = 0; i < q->kids.size(); ++i) {
          fs.emplace_back(q->labels[i], Infer(q->kids[i], in));
        }
        return Type::Tuple(std::move(fs));
      }
      case Op::kProj:
        return At(q, in, q->path);
      case Op::kCompose:
        return Infer(q->kids[1], Infer(q->kids[0], in));
      case Op::kUnion: {
        Type a = Infer(q->kids[0], in);
        Type b = Infer(q->kids[1], in);
        RequireColl(q, a);
        RequireColl(q, b);
        return JoinOr(q, a, b);
      }
      case Op::kCart: {
        Type a = Infer(q->kids[0], in);
        Type b = Infer(q->kids[1], in);
        Type ea = Elem(q, a);
        Type eb = Elem(q, b);
        return Type::Coll(sem_, Type::Tuple({{"1", ea}, {"2", eb}}));
      }
      case Op::kEqAtomic: {
        Type a = At(q, in, q->path);
        Type b = At(q, in, q->path2);
        if (!a.is_dom() && !a.is_any()) Fail(q, "Dom at " + PrintPath(q->path), a);
        if (!b.is_dom() && !b.is_any()) Fail(q, "Dom at " + PrintPath(q->path2), b);
        return Type::Bool(sem_);
      }
      case Op::kEqMon: {
        Type t = JoinOr(q, At(q, in, q->path), At(q, in, q->path2));
        if (!IsCollectionFree(t)) Fail(q, "a collection-free type", t);
        return Type::Bool(sem_);
      }
      case Op::kEqDeep:
        JoinOr(q, At(q, in, q->path), At(q, in, q->path2));
        return Type::Bool(sem_);
      case Op::kNot:
        Elem(q, in);
        return Type::Bool(sem_);
      case Op::kTrue:
        RequireBagOrList(q);
        Elem(q, in);
        return Type::Bool(sem_);
      case Op::kUnique:
        RequireBagOrList(q);
        Elem(q, in);
        return in;
      case Op::kMonus:
        RequireBagOrList(q);
        return PairOfColls(q, in);
      case Op::kDiff:
      case Op::kIntersect:
        return PairOfColls(q, in);
      case Op::kSubsetEq: {
        Type a = At(q, in, q->path);
        Type b = At(q, in, q->path2);
        RequireColl(q, a);
        RequireColl(q, b);
        JoinOr(q, a, b);
        return Type::Bool(sem_);
      }
      case Op::kMemberOf: {
        Type a = At(q, in, q->path);
        Type b = At(q, in, q->path2);
        JoinOr(q, Type::Coll(sem_, a), b);
        return Type::Bool(sem_);
      }
      case Op::kSelect: {
        Type e = Elem(q, in);
        CheckCond(q, *q->cond, e);
        return in.is_any() ? Type::Coll(sem_, Type::Any()) : in;
      }
      case Op::kNest: {
        if (sem_ != CollKind::kSet) Fail(q, "set semantics", in);
        Type e = Elem(q, in);
        if (e.is_any()) return Type::Coll(sem_, Type::Any());
        if (!e.is_tuple()) Fail(q, "a collection of tuples", in);
        std::vector<Type::Field> keys, grouped;
        for (const auto& l : q->labels) {
          if (!e.field(l)) Fail(q, "a tuple with field " + l, e);
        }
        for (const auto& f : e.fields()) {
          bool g = false;
          for (const auto& l : q->labels) g = g || l == f.first;
          (g ? grouped : keys).push_back(f);
        }
        for (const auto& k : keys) {
          if (k.first == q->name) Fail(q, "a fresh label " + q->name, e);
        }
        keys.emplace_back(q->name, Type::Coll(sem_, Type::Tuple(grouped)));
        return Type::Coll(sem_, Type::Tuple(std::move(keys)));
      }
    }
    return in;
  }

 private:
  std::string Kind() const { return CollKindName(sem_); }

  [[noreturn]] void Fail(const ExprP& q, const std::string& expected, const Type& got) {
    throw TypeError("in '" + PrintMA(q) + "': expected " + expected + ", got " + PrintType(got));
  }

  void RequireBagOrList(const ExprP& q) {
    if (sem_ == CollKind::kSet) {
      throw TypeError("in '" + PrintMA(q) + "': only defined under list or bag semantics");
    }
  }

  void RequireColl(const ExprP& q, const Type& t) {
    if (t.is_any()) return;
    if (!t.is_coll() || t.kind() != sem_) Fail(q, "a " + Kind(), t);
  }

  Type Elem(const ExprP& q, const Type& t) {
    if (t.is_any()) return Type::Any();
    RequireColl(q, t);
    return t.elem();
  }

  Type JoinOr(const ExprP& q, const Type& a, const Type& b) {
    auto j = Join(a, b);
    if (!j) Fail(q, "compatible operand types, first is " + PrintType(a), b);
    return *j;
  }

  Type At(const ExprP& q, const Type& in, const Path& p) {
    Type cur = in;
    for (const auto& l : p) {
      if (cur.is_any()) return cur;
      const Type* f = cur.is_tuple() ? cur.field(l) : nullptr;
      if (!f) Fail(q, "a tuple with field " + l, cur);
      cur = *f;
    }
    return cur;
  }

  Type PairOfColls(const ExprP& q, const Type& in) {
    if (in.is_any()) return Type::Coll(sem_, Type::Any());
    if (!in.is_tuple() || in.fields().size() != 2) Fail(q, "a pair of " + Kind() + "s", in);
    RequireColl(q, in.fields()[0].second);
    RequireColl(q, in.fields()[1].second);
    return JoinOr(q, in.fields()[0].second, in.fields()[1].second);
  }

  void CheckCond(const ExprP& q, const Cond& c, const Type& e) {
    switch (c.kind) {
      case Cond::Kind::kTrue:
        return;
      case Cond::Kind::kAnd:
      case Cond::Kind::kOr:
      case Cond::Kind::kIff:
      case Cond::Kind::kNot:
        for (const auto& k : c.kids) CheckCond(q, *k, e);
        return;
      case Cond::Kind::kPathEq: {
        Type a = At(q, e, c.p);
        Type b = At(q, e, c.q);
        Type t = JoinOr(q, a, b);
        if (c.mode == EqMode::kAtomic && !t.is_dom() && !t.is_any()) {
          Fail(q, "Dom operands for atomic equality", t);
        }
        if (c.mode == EqMode::kMon && !IsCollectionFree(t)) {
          Fail(q, "collection-free operands for mon equality", t);
        }
        return;
      }
      case Cond::Kind::kConstEq:
      case Cond::Kind::kIn: {
        Type a = At(q, e, c.p);
        if (!a.is_dom() && !a.is_any()) Fail(q, "Dom at " + PrintPath(c.p), a);
        return;
      }
      case Cond::Kind::kPred: {
        Type r = Infer(c.pred, e);
        RequireColl(c.pred, r);
        return;
      }
    }
  }

  CollKind sem_;
};

}  // namespace

Type InferType(const ExprP& q, const Type& in, CollKind sem) { return Typer(sem).Infer(q, in); }

}  // namespace nestql
