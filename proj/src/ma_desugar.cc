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

#include <algorithm>

#include "nestql/error.h"
#include "nestql/ma.h"

namespace nestql {

using namespace ma;  // NOLINT: builder vocabulary

namespace {

Path Cat(const Path& a, const Path& b) {
  Path out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void Leaves(const Type& t, Path& cur, std::vector<Path>& out) {
  switch (t.tag()) {
    case Type::Tag::kDom:
      out.push_back(cur);
      return;
    case Type::Tag::kAny:
      return;
    case Type::Tag::kColl:
      throw TypeError("mon equality on a type containing a collection: " + PrintType(t));
    case Type::Tag::kTuple:
      for (const auto& f : t.fields()) {
        cur.push_back(f.first);
        Leaves(f.second, cur, out);
        cur.pop_back();
      }
      return;
  }
}

ExprP ConstTrue() { return Compose(Unit(), Sng()); }

ExprP CartCore(ExprP f, ExprP g) {
  return Seq({Tuple({{"1", std::move(f)}, {"2", std::move(g)}}), PairWith("1"),
              Map(PairWith("2")), Flatten()});
}

Type ElemOf(const Type& t) { return t.is_coll() ? t.elem() : Type::Any(); }

class Desugarer {
 public:
  explicit Desugarer(CollKind k) : k_(k) {}

  ExprP D(const ExprP& q, const Type& in) {
    switch (q->op) {
      case Op::kMap:
        return Map(D(q->kids[0], ElemOf(in)));
      case Op::kTuple: {
        std::vector<std::pair<std::string, ExprP>> fs;
        for (size_t i = 0; i < q->kids.size(); ++i) fs.emplace_back(q->labels[i], D(q->kids[i], in));
        return Tuple(std::move(fs));
      }
      case Op::kCompose: {
        Type mid = InferType(q->kids[0], in, k_);
        return Compose(D(q->kids[0], in), D(q->kids[1], mid));
      }
      case Op::kUnion:
        return Union(D(q->kids[0], in), D(q->kids[1], in));
      case Op::kFlatMap:
        return Compose(Map(D(q->kids[0], ElemOf(in))), Flatten());
      case Op::kCart:
        return CartCore(D(q->kids[0], in), D(q->kids[1], in));
      case Op::kEqMon:
        return D(ExpandMonEqAt(q->path, q->path2, OperandType(in, q->path, q->path2)), in);
      case Op::kEqDeep: {
        Type t = OperandType(in, q->path, q->path2);
        if (!IsCollectionFree(t)) return q;
        return D(ExpandMonEqAt(q->path, q->path2, t), in);
      }
      case Op::kSelect: {
        // Filter through a Boolean: flatmap(<1: id, 2: gamma> ; pairwith[2] ; map(pi[1])).
        ExprP g = Pred(*q->cond, ElemOf(in));
        return Compose(Map(Seq({Tuple({{"1", Id()}, {"2", g}}), PairWith("2"), Map(Proj({"1"}))})),
                       Flatten());
      }
      case Op::kDiff:
        return D(FilterForm(in, /*keep=*/false), in);
      case Op::kIntersect:
        if (k_ == CollKind::kSet) {
          const auto& fs = in.fields();
          return D(Seq({Cart(Proj({fs[0].first}), Proj({fs[1].first})),
                        Select(CEq({"1"}, {"2"}, EqMode::kDeep)), Map(Proj({"1"}))}),
                   in);
        }
        return D(FilterForm(in, /*keep=*/true), in);
      case Op::kSubsetEq:
        // p is a subset of q iff p and (p cap q) are equal.
        return D(Seq({Tuple({{"A", Proj(q->path)},
                             {"A2", Compose(Tuple({{"R", Proj(q->path)}, {"S", Proj(q->path2)}}),
                                            Intersect())}}),
                      EqDeep({"A"}, {"A2"})}),
                 in);
      case Op::kMemberOf:
        return D(Compose(Tuple({{"A", Compose(Proj(q->path), Sng())}, {"B", Proj(q->path2)}}),
                         SubsetEq({"A"}, {"B"})),
                 in);
      case Op::kNest:
        return NestForm(q, in);
      default:
        return q;
    }
  }

 private:
  Type At(const Type& in, const Path& p) {
    Type cur = in;
    for (const auto& l : p) {
      if (cur.is_any()) return cur;
      const Type* f = cur.is_tuple() ? cur.field(l) : nullptr;
      if (!f) throw TypeError("no field '" + l + "' in " + PrintType(cur));
      cur = *f;
    }
    return cur;
  }

  Type OperandType(const Type& in, const Path& p, const Path& q) {
    auto j = Join(At(in, p), At(in, q));
    if (!j) throw TypeError("incompatible operands " + PrintPath(p) + " and " + PrintPath(q));
    return *j;
  }

  // Difference (keep=false) or list/bag intersection (keep=true):
  // pairwith[R] ; map(tup[R = pi[R], SR = tup[R = pi[R], S = pi[S]] ; pairwith[S] ;
  // select[R =deep S]]) ; select[SR empty or not] ; map(pi[R]).
  ExprP FilterForm(const Type& in, bool keep) {
    if (!in.is_tuple() || in.fields().size() != 2) {
      throw TypeError("expected a pair of collections, got " + PrintType(in));
    }
    const auto& fs = in.fields();
    ExprP test = keep ? Compose(Proj({"SR"}), True())
                      : Compose(Tuple({{"A", Proj({"SR"})}, {"B", Empty()}}), EqDeep({"A"}, {"B"}));
    return Seq({Tuple({{"R", Proj({fs[0].first})}, {"S", Proj({fs[1].first})}}), PairWith("R"),
                Map(Tuple({{"R", Proj({"R"})},
                           {"SR", Seq({Tuple({{"R", Proj({"R"})}, {"S", Proj({"S"})}}),
                                       PairWith("S"), Select(CEq({"R"}, {"S"}, EqMode::kDeep))})}})),
                Select(CPred(test)), Map(Proj({"R"}))});
  }

  ExprP NestForm(const ExprP& q, const Type& in) {
    Type e = ElemOf(in);
    if (!e.is_tuple()) return Empty();  // only the empty collection inhabits {?}
    std::vector<std::string> keys, grouped;
    for (const auto& f : e.fields()) {
      bool g = std::find(q->labels.begin(), q->labels.end(), f.first) != q->labels.end();
      (g ? grouped : keys).push_back(f.first);
    }
    std::vector<std::pair<std::string, ExprP>> key_fields, out_fields, member_fields;
    CondP same = CTrue();
    for (size_t i = 0; i < keys.size(); ++i) {
      key_fields.emplace_back(keys[i], Proj({keys[i]}));
      out_fields.emplace_back(keys[i], Proj({"1", keys[i]}));
      CondP c = CEq({"1", keys[i]}, {"2", keys[i]}, EqMode::kDeep);
      same = i == 0 ? c : CAnd(same, c);
    }
    for (const auto& g : grouped) member_fields.emplace_back(g, Proj({"2", g}));
    ExprP members = Seq({Tuple({{"1", Proj({"1"})}, {"2", Proj({"2"})}}), PairWith("2"), Select(same),
                         Map(Tuple(std::move(member_fields)))});
    out_fields.emplace_back(q->name, members);
    ExprP full = Seq({Tuple({{"1", Map(Tuple(std::move(key_fields)))}, {"2", Id()}}), PairWith("1"),
                      Map(Tuple(std::move(out_fields)))});
    return D(full, in);
  }

  // Boolean query on one element of type e.
  ExprP Pred(const Cond& c, const Type& e) {
    switch (c.kind) {
      case Cond::Kind::kTrue:
        return ConstTrue();
      case Cond::Kind::kPathEq:
        if (c.mode == EqMode::kAtomic) return EqAtomic(c.p, c.q);
        if (c.mode == EqMode::kMon) return D(EqMon(c.p, c.q), e);
        return D(EqDeep(c.p, c.q), e);
      case Cond::Kind::kConstEq:
        return Compose(Tuple({{"A", Proj(c.p)}, {"B", Const(c.atoms[0])}}), EqAtomic({"A"}, {"B"}));
      case Cond::Kind::kIn: {
        ExprP acc;
        for (const auto& a : c.atoms) {
          ExprP one = Compose(Tuple({{"A", Proj(c.p)}, {"B", Const(a)}}), EqAtomic({"A"}, {"B"}));
          acc = acc ? Or(acc, one) : one;
        }
        return acc ? acc : Empty();
      }
      case Cond::Kind::kPred: {
        ExprP p = D(c.pred, e);
        return k_ == CollKind::kSet ? p : Compose(p, True());
      }
      case Cond::Kind::kAnd:
        return Compose(CartCore(Pred(*c.kids[0], e), Pred(*c.kids[1], e)), Map(Unit()));
      case Cond::Kind::kOr:
        return Or(Pred(*c.kids[0], e), Pred(*c.kids[1], e));
      case Cond::Kind::kNot:
        return Compose(Pred(*c.kids[0], e), Not());
      case Cond::Kind::kIff:
        return Compose(Tuple({{"1", Pred(*c.kids[0], e)}, {"2", Pred(*c.kids[1], e)}}),
                       EqDeep({"1"}, {"2"}));
    }
    return ConstTrue();
  }

  // Disjunction; list/bag unions can hold two units, so collapse with true.
  ExprP Or(ExprP a, ExprP b) {
    ExprP u = Union(std::move(a), std::move(b));
    return k_ == CollKind::kSet ? u : Compose(u, True());
  }

  CollKind k_;
};

using U128 = BigNat;
constexpr U128 kMax = ~U128(0);

U128 SAdd(U128 a, U128 b) { return a > kMax - b ? kMax : a + b; }
U128 SMul(U128 a, U128 b) {
  if (a == 0 || b == 0) return 0;
  return a > kMax / b ? kMax : a * b;
}

}  // namespace

ExprP Desugar(const ExprP& q, const Type& in, CollKind sem) {
  InferType(q, in, sem);
  return Desugarer(sem).D(q, in);
}

ExprP ExpandMonEqAt(const Path& p, const Path& q, const Type& t) {
  std::vector<Path> leaves;
  Path cur;
  Leaves(t, cur, leaves);
  if (leaves.empty()) return ConstTrue();
  std::vector<ExprP> eqs;
  for (const auto& l : leaves) eqs.push_back(EqAtomic(Cat(p, l), Cat(q, l)));
  if (eqs.size() == 1) return eqs[0];
  ExprP acc = eqs.back();
  for (size_t i = eqs.size() - 1; i-- > 0;) acc = Cart(eqs[i], acc);
  return Compose(acc, Map(Unit()));
}

ExprP ExpandMonEq(const Type& t) { return ExpandMonEqAt({"A"}, {"B"}, t); }

std::string BigNatToString(BigNat n) {
  if (n == 0) return "0";
  std::string s;
  while (n > 0) {
    s += static_cast<char>('0' + static_cast<int>(n % 10));
    n /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

BigNat SizeBound(const ExprP& q, BigNat n) {
  switch (q->op) {
    case Op::kConst:
    case Op::kUnit:
    case Op::kEmpty:
      return 1;
    case Op::kId:
      return n;
    case Op::kSng:
      return SAdd(n, 1);
    case Op::kFlatten:
    case Op::kProj:
    case Op::kSelect:
    case Op::kMonus:
    case Op::kUnique:
    case Op::kDiff:
    case Op::kIntersect:
      return n;
    case Op::kNest:
      return SMul(n, 3);
    case Op::kTuple: {
      U128 s = 1;
      for (const auto& k : q->kids) s = SAdd(s, SizeBound(k, n));
      return s;
    }
    case Op::kUnion:
      return SAdd(SizeBound(q->kids[0], n), SizeBound(q->kids[1], n));
    case Op::kPairWith:
      return SAdd(SMul(n, n), 1);
    case Op::kCompose:
      return SizeBound(q->kids[1], SizeBound(q->kids[0], n));
    case Op::kMap:
    case Op::kFlatMap:
      return SMul(n, SizeBound(q->kids[0], n));
    case Op::kCart:
      return SAdd(1, SMul(3, SMul(SizeBound(q->kids[0], n), SizeBound(q->kids[1], n))));
    case Op::kEqAtomic:
    case Op::kEqMon:
    case Op::kEqDeep:
    case Op::kNot:
    case Op::kTrue:
    case Op::kSubsetEq:
    case Op::kMemberOf:
      return 2;
  }
  return kMax;
}

}  // namespace nestql
