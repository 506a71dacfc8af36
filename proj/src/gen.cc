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

#include "nestql/gen.h"

#include <functional>

#include "nestql/bridge.h"
#include "nestql/detree.h"
#include "nestql/error.h"
#include "nestql/lp.h"

namespace nestql::gen {

using namespace ma;

namespace {

int Uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool Coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

std::string AtomName(int i) { return std::string(1, static_cast<char>('a' + i)); }
std::string FieldName(int i) { return std::string(1, static_cast<char>('A' + i)); }

Type GenType(Rng& rng, const TypeOptions& o, int depth) {
  int pick = depth <= 0 ? 0 : Uniform(rng, 0, o.allow_coll ? 3 : 2);
  if (pick == 0) return Type::Dom();
  if (pick == 3) return Type::Coll(o.kind, GenType(rng, o, depth - 1));
  int n = Uniform(rng, 1, o.max_fields);
  std::vector<Type::Field> f;
  for (int i = 0; i < n; ++i) f.emplace_back(FieldName(i), GenType(rng, o, depth - 1));
  return Type::Tuple(std::move(f));
}

Value GenValue(Rng& rng, const Type& t, const ValueOptions& o) {
  if (t.is_tuple()) {
    std::vector<Value::Field> f;
    for (const auto& [l, ft] : t.fields()) f.emplace_back(l, GenValue(rng, ft, o));
    return Value::Tuple(std::move(f));
  }
  if (t.is_coll()) {
    int n = Uniform(rng, o.nonempty_colls ? 1 : 0, o.max_coll);
    std::vector<Value> e;
    for (int i = 0; i < n; ++i) e.push_back(GenValue(rng, t.elem(), o));
    return Value::Coll(t.kind(), std::move(e));
  }
  return Value::Atom(AtomName(Uniform(rng, 0, o.atoms - 1)));
}

// Paths through nested tuples (never through collections).
void TuplePaths(const Type& t, Path& prefix, std::vector<std::pair<Path, Type>>& out) {
  if (!t.is_tuple()) return;
  for (const auto& [l, ft] : t.fields()) {
    prefix.push_back(l);
    out.emplace_back(prefix, ft);
    TuplePaths(ft, prefix, out);
    prefix.pop_back();
  }
}

std::vector<std::pair<Path, Type>> TuplePaths(const Type& t) {
  std::vector<std::pair<Path, Type>> out;
  Path p;
  TuplePaths(t, p, out);
  return out;
}

std::vector<Path> DomPaths(const Type& t) {
  std::vector<Path> out;
  for (const auto& [p, ft] : TuplePaths(t)) {
    if (ft.is_dom()) out.push_back(p);
  }
  return out;
}

class QueryGen {
 public:
  QueryGen(Rng& rng, const QueryOptions& o) : rng_(rng), o_(o) {}

  TypedQuery Gen(const Type& in, int depth) {
    std::vector<std::function<TypedQuery()>> c;
    // Mostly compound nodes above the leaves, so queries are not trivial.
    if (depth > 0) AddCompound(in, depth, c);
    if (c.empty() || Coin(rng_, 0.3)) AddLeaves(in, c);
    return c[static_cast<size_t>(Uniform(rng_, 0, static_cast<int>(c.size()) - 1))]();
  }

  // A query with collection output.
  TypedQuery GenColl(const Type& in, int depth) {
    for (int i = 0; i < 8; ++i) {
      TypedQuery t = Gen(in, depth);
      if (t.out.is_coll()) return t;
    }
    TypedQuery t = Gen(in, depth);
    return {Compose(t.q, Sng()), Type::Coll(o_.sem, t.out)};
  }

 private:
  Type C(const Type& e) const { return Type::Coll(o_.sem, e); }
  Type Bool() const { return Type::Bool(o_.sem); }

  template <typename T>
  const T& Pick(const std::vector<T>& v) {
    return v[static_cast<size_t>(Uniform(rng_, 0, static_cast<int>(v.size()) - 1))];
  }

  void AddLeaves(const Type& in, std::vector<std::function<TypedQuery()>>& c) {
    c.push_back([in] { return TypedQuery{Id(), in}; });
    c.push_back([this] { return TypedQuery{Const(AtomName(Uniform(rng_, 0, 2))), Type::Dom()}; });
    c.push_back([] { return TypedQuery{Unit(), Type::Unit()}; });
    c.push_back([this, in] { return TypedQuery{Sng(), C(in)}; });
    if (o_.allow_empty) c.push_back([this] { return TypedQuery{Empty(), C(Type::Any())}; });
    auto tp = TuplePaths(in);
    if (!tp.empty()) {
      c.push_back([this, tp] {
        const auto& [p, t] = Pick(tp);
        return TypedQuery{Proj(p), t};
      });
      c.push_back([this, tp] {
        const auto& [p, t] = Pick(tp);
        return TypedQuery{Proj(p), t};
      });
    }
    auto dp = DomPaths(in);
    if (!dp.empty()) {
      c.push_back([this, dp] { return TypedQuery{EqAtomic(Pick(dp), Pick(dp)), Bool()}; });
    }
    if (in.is_tuple()) {
      std::vector<std::string> colls;
      for (const auto& [l, ft] : in.fields()) {
        if (ft.is_coll()) colls.push_back(l);
      }
      if (!colls.empty()) {
        c.push_back([this, in, colls] {
          const std::string& l = Pick(colls);
          std::vector<Type::Field> f;
          for (const auto& [fl, ft] : in.fields()) f.emplace_back(fl, fl == l ? ft.elem() : ft);
          return TypedQuery{PairWith(l), C(Type::Tuple(std::move(f)))};
        });
      }
    }
    if (in.is_coll()) {
      if (in.elem().is_coll()) c.push_back([in] { return TypedQuery{Flatten(), in.elem()}; });
      if (o_.allow_not) {
        c.push_back([this] { return TypedQuery{Not(), Bool()}; });
        if (o_.sem != CollKind::kSet) c.push_back([this] { return TypedQuery{True(), Bool()}; });
      }
      if (o_.allow_sugar && in.elem().is_tuple()) {
        auto ep = DomPaths(in.elem());
        if (!ep.empty()) {
          c.push_back([this, in, ep] { return TypedQuery{Select(CEq(Pick(ep), Pick(ep))), in}; });
        }
      }
    }
    if (o_.allow_sugar && !tp.empty()) {
      std::vector<Path> mon;
      for (const auto& [p, t] : tp) {
        if (IsCollectionFree(t)) mon.push_back(p);
      }
      if (!mon.empty()) {
        c.push_back([this, tp] {
          const auto& [p, t] = Pick(tp);
          std::vector<Path> same;
          for (const auto& [p2, t2] : tp) {
            if (t2 == t) same.push_back(p2);
          }
          ExprP e = IsCollectionFree(t) && Coin(rng_) ? EqMon(p, Pick(same)) : EqDeep(p, Pick(same));
          return TypedQuery{e, Bool()};
        });
      }
    }
  }

  void AddCompound(const Type& in, int depth, std::vector<std::function<TypedQuery()>>& c) {
    c.push_back([this, in, depth] {
      TypedQuery f = Gen(in, depth - 1);
      TypedQuery g = Gen(f.out, depth - 1);
      return TypedQuery{Compose(f.q, g.q), g.out};
    });
    c.push_back([this, in, depth] {
      int n = Uniform(rng_, 1, 2);
      std::vector<std::pair<std::string, ExprP>> f;
      std::vector<Type::Field> t;
      for (int i = 0; i < n; ++i) {
        TypedQuery k = Gen(in, depth - 1);
        f.emplace_back(FieldName(i), k.q);
        t.emplace_back(FieldName(i), k.out);
      }
      return TypedQuery{Tuple(std::move(f)), Type::Tuple(std::move(t))};
    });
    c.push_back([this, in, depth] {
      TypedQuery a = GenColl(in, depth - 1);
      for (int i = 0; i < 6; ++i) {
        TypedQuery b = GenColl(in, depth - 1);
        if (auto j = Join(a.out, b.out)) return TypedQuery{Union(a.q, b.q), *j};
      }
      return TypedQuery{Union(a.q, a.q), a.out};
    });
    if (in.is_coll()) {
      c.push_back([this, in, depth] {
        TypedQuery f = Gen(in.elem(), depth - 1);
        return TypedQuery{Map(f.q), C(f.out)};
      });
      c.push_back([this, in, depth] {
        TypedQuery f = Gen(in.elem(), depth - 1);
        return TypedQuery{Map(f.q), C(f.out)};
      });
      if (o_.allow_sugar) {
        c.push_back([this, in, depth] {
          TypedQuery f = GenColl(in.elem(), depth - 1);
          return TypedQuery{FlatMap(f.q), f.out};
        });
      }
    }
    if (o_.allow_sugar) {
      c.push_back([this, in, depth] {
        TypedQuery a = GenColl(in, depth - 1);
        TypedQuery b = GenColl(in, depth - 1);
        return TypedQuery{Cart(a.q, b.q), C(Type::Tuple({{"1", a.out.elem()}, {"2", b.out.elem()}}))};
      });
    }
  }

  Rng& rng_;
  QueryOptions o_;
};

class XQGen {
 public:
  XQGen(Rng& rng, const XQOptions& o) : rng_(rng), o_(o) {}

  XQP Gen(std::vector<XQVar>& env, int depth) {
    int pick = depth <= 1 ? Uniform(rng_, 0, 2) : depth >= 3 ? Uniform(rng_, 2, 10) : Uniform(rng_, 0, 10);
    switch (pick) {
      case 0:
        return xq::EmptyElem(Label());
      case 1:
        return xq::Var(PickVar(env));
      case 2:
        return xq::Step(PickVar(env), Axis::kChild, Coin(rng_, 0.3) ? "*" : Label());
      case 3:
      case 4:
        return xq::Elem(Label(), Gen(env, depth - 1));
      case 5:
        return xq::Seq(Gen(env, depth - 1), Gen(env, depth - 1));
      case 6:
      case 7: {
        XQP src = Gen(env, depth - 1);
        return Bind(env, depth, [&](const XQVar& v) { return xq::For(v, src, Gen(env, depth - 1)); });
      }
      case 8: {
        XQP bound = Coin(rng_) ? xq::Var(PickVar(env)) : xq::Elem(Label(), Gen(env, depth - 2 < 1 ? 1 : depth - 2));
        return Bind(env, depth, [&](const XQVar& v) { return xq::Let(v, bound, Gen(env, depth - 1)); });
      }
      case 9:
        return xq::If(Cond(env, depth - 1), Gen(env, depth - 1));
      default:
        return xq::VarEq(PickVar(env), PickVar(env), o_.mode);
    }
  }

 private:
  std::string Label() { return AtomName(Uniform(rng_, 0, o_.labels - 1)); }
  const XQVar& PickVar(const std::vector<XQVar>& env) {
    return env[static_cast<size_t>(Uniform(rng_, 0, static_cast<int>(env.size()) - 1))];
  }

  template <typename F>
  XQP Bind(std::vector<XQVar>& env, int, F body) {
    XQVar v{static_cast<int>(env.size()), next_, "x" + std::to_string(next_)};
    ++next_;
    env.push_back(v);
    XQP r = body(v);
    env.pop_back();
    return r;
  }

  XQP Cond(std::vector<XQVar>& env, int depth) {
    int pick = depth <= 1 ? 0 : Uniform(rng_, 0, 3);
    if (pick <= 1) return xq::VarEq(PickVar(env), PickVar(env), o_.mode);
    if (pick == 2) return xq::Not(Cond(env, depth - 1));
    return Gen(env, depth);
  }

  Rng& rng_;
  XQOptions o_;
  int next_ = 1;
};

// Closed query producing v.
ExprP ValueQuery(const Value& v, CollKind sem) {
  if (v.is_atom()) return Const(v.label());
  if (v.is_tuple()) {
    std::vector<std::pair<std::string, ExprP>> f;
    for (const auto& [l, fv] : v.fields()) f.emplace_back(l, ValueQuery(fv, sem));
    return Tuple(std::move(f));
  }
  ExprP out;
  for (const auto& e : v.elems()) {
    ExprP one = Compose(ValueQuery(e, sem), Sng());
    out = out ? Union(out, one) : one;
  }
  return out ? out : Empty();
}

// A constant collection to start closed queries from.
TypedQuery Seed(Rng& rng, const QueryOptions& o) {
  TypeOptions to;
  to.kind = o.sem;
  to.max_depth = 2;
  Type t = Type::Coll(o.sem, RandomType(rng, to));
  ValueOptions vo;
  vo.max_nodes = 12;
  vo.nonempty_colls = true;
  return {ValueQuery(RandomValue(rng, t, vo), o.sem), t};
}

}  // namespace

Type RandomType(Rng& rng, const TypeOptions& o) { return GenType(rng, o, o.max_depth); }

Value RandomValue(Rng& rng, const Type& t, const ValueOptions& o) {
  for (int i = 0; i < 200; ++i) {
    Value v = GenValue(rng, t, o);
    if (v.node_count() <= static_cast<uint64_t>(o.max_nodes)) return v;
  }
  throw Error("gen: no value of type " + PrintType(t) + " within " + std::to_string(o.max_nodes) + " nodes");
}

TypedQuery RandomQuery(Rng& rng, const Type& in, const QueryOptions& o) {
  return QueryGen(rng, o).Gen(in, o.max_depth);
}

TypedQuery RandomClosedQuery(Rng& rng, const QueryOptions& o) {
  QueryGen g(rng, o);
  TypedQuery seed = Seed(rng, o);
  TypedQuery t = g.Gen(seed.out, o.max_depth);
  return {Seq({Unit(), seed.q, t.q}), t.out};
}

ExprP RandomBooleanQuery(Rng& rng, const QueryOptions& o) {
  QueryGen g(rng, o);
  TypedQuery seed = Seed(rng, o);
  TypedQuery t = g.GenColl(seed.out, o.max_depth);
  std::vector<ExprP> stages{Unit(), seed.q, t.q, Map(Unit())};
  if (Coin(rng)) stages.push_back(Not());
  return Seq(stages);
}

XQP RandomXQ(Rng& rng, const XQOptions& o) {
  std::vector<XQVar> env{XQVar{0, 0, "root"}};
  return XQGen(rng, o).Gen(env, o.max_depth);
}

TreeP RandomTree(Rng& rng, int max_nodes, int labels) {
  int n = Uniform(rng, 1, max_nodes);
  // Attach each new node as the last child of a random earlier node.
  std::vector<std::string> label(static_cast<size_t>(n));
  std::vector<std::vector<int>> kids(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    label[static_cast<size_t>(i)] = AtomName(Uniform(rng, 0, labels - 1));
    if (i > 0) kids[static_cast<size_t>(Uniform(rng, 0, i - 1))].push_back(i);
  }
  std::function<TreeP(int)> build = [&](int i) {
    std::vector<TreeP> ch;
    for (int k : kids[static_cast<size_t>(i)]) ch.push_back(build(k));
    return MakeTree(label[static_cast<size_t>(i)], std::move(ch));
  };
  return build(0);
}

namespace {

constexpr size_t kMaxNotes = 5;

void Fail(SuiteResult& r, const std::string& msg) {
  ++r.failures;
  if (r.notes.size() < kMaxNotes) r.notes.push_back(msg);
}

}  // namespace

SuiteResult SuiteXQToMA(uint64_t seed, int cases) {
  SuiteResult r;
  Rng rng(seed);
  for (EqMode mode : {EqMode::kDeep, EqMode::kAtomic}) {
    int done = 0, tries = 0;
    while (done < cases) {
      if (++tries > 20 * cases) throw Error("xq2ma suite: too many discarded cases");
      XQOptions o;
      o.mode = mode;
      XQP q = RandomXQ(rng, o);
      TreeP doc = RandomTree(rng, 20);
      try {
        if (!CheckXQToMA(q, doc)) Fail(r, PrintXQ(q) + " on " + PrintXML(doc));
      } catch (const EvalError&) {
        ++r.discarded;
        continue;
      } catch (const Error& e) {
        Fail(r, std::string(e.what()) + ": " + PrintXQ(q));
      }
      ++done;
      ++r.cases;
    }
  }
  return r;
}

SuiteResult SuiteMAToXQ(uint64_t seed, int cases) {
  SuiteResult r;
  Rng rng(seed);
  for (int i = 0; i < cases; ++i) {
    TypeOptions to;
    to.kind = CollKind::kList;
    Type t = RandomType(rng, to);
    Value v = RandomValue(rng, t, ValueOptions{});
    QueryOptions qo;
    qo.sem = CollKind::kList;
    qo.allow_not = true;
    qo.max_depth = 3;
    TypedQuery q = RandomQuery(rng, t, qo);
    ++r.cases;
    try {
      if (!CheckMAToXQ(q.q, v, t)) Fail(r, PrintMA(q.q) + " on " + PrintValue(v));
    } catch (const Error& e) {
      Fail(r, std::string(e.what()) + ": " + PrintMA(q.q));
    }
  }
  return r;
}

SuiteResult SuiteOracles(uint64_t seed, int cases, int negation_cases) {
  SuiteResult r;
  Rng rng(seed);
  const Value input = Value::Atom("dummy");  // the program's base fact
  EvalOptions eo;
  eo.sem = CollKind::kList;
  QueryOptions qo;
  qo.sem = CollKind::kList;
  qo.max_depth = 3;
  for (int i = 0; i < cases; ++i) {
    TypedQuery q = RandomClosedQuery(rng, qo);
    ++r.cases;
    try {
      Value direct = EvalMA(q.q, input, eo);
      Value det = DecodeDet(EvalDet(q.q, EncodeDet(input)), q.out);
      Value lp = DecodeDet(EvalLP(CompileLP(q.q)), q.out);
      if (direct != det || direct != lp) {
        Fail(r, PrintMA(q.q) + ": " + PrintValue(direct) + " | " + PrintValue(det) + " | " + PrintValue(lp));
      }
    } catch (const Error& e) {
      Fail(r, std::string(e.what()) + ": " + PrintMA(q.q));
    }
  }
  qo.allow_not = true;
  LPOptions lo;
  lo.with_negation = true;
  for (int i = 0; i < negation_cases; ++i) {
    ExprP q = RandomBooleanQuery(rng, qo);
    ++r.cases;
    try {
      bool direct = !EvalMA(q, input, eo).elems().empty();
      if (direct != GoalTrue(CompileLP(q, lo))) Fail(r, PrintMA(q));
    } catch (const Error& e) {
      Fail(r, std::string(e.what()) + ": " + PrintMA(q));
    }
  }
  return r;
}

SuiteResult SuiteSizeBound(uint64_t seed, int cases) {
  SuiteResult r;
  Rng rng(seed);
  const CollKind kinds[] = {CollKind::kSet, CollKind::kBag, CollKind::kList};
  for (int i = 0; i < cases; ++i) {
    CollKind sem = kinds[i % 3];
    TypeOptions to;
    to.kind = sem;
    Type t = RandomType(rng, to);
    Value v = RandomValue(rng, t, ValueOptions{});
    QueryOptions qo;
    qo.sem = sem;
    qo.allow_not = true;
    qo.allow_sugar = true;
    qo.max_depth = 3;
    TypedQuery q = RandomQuery(rng, t, qo);
    ++r.cases;
    try {
      EvalOptions eo;
      eo.sem = sem;
      uint64_t got = EvalMA(q.q, v, eo).node_count();
      BigNat bound = SizeBound(q.q, v.node_count());
      if (BigNat(got) > bound) {
        Fail(r, PrintMA(q.q) + " on " + PrintValue(v) + ": " + std::to_string(got) + " > " + BigNatToString(bound));
      }
    } catch (const Error& e) {
      Fail(r, std::string(e.what()) + ": " + PrintMA(q.q));
    }
  }
  return r;
}

SuiteResult SuiteMonEq(uint64_t seed, int types, int pairs_per_type) {
  SuiteResult r;
  Rng rng(seed);
  TypeOptions to;
  to.allow_coll = false;
  to.max_depth = 3;
  ValueOptions vo;
  vo.atoms = 2;
  vo.max_nodes = 1000;
  for (int i = 0; i < types; ++i) {
    Type t = RandomType(rng, to);
    ExprP q = ExpandMonEq(t);
    for (int j = 0; j < pairs_per_type; ++j) {
      Value a = RandomValue(rng, t, vo);
      Value b = Coin(rng, 0.4) ? a : RandomValue(rng, t, vo);
      ++r.cases;
      try {
        bool got = !EvalMA(q, Value::Tuple({{"A", a}, {"B", b}})).elems().empty();
        if (got != ValueEqual(a, b, EqMode::kDeep)) Fail(r, PrintType(t) + ": " + PrintValue(a) + " vs " + PrintValue(b));
      } catch (const Error& e) {
        Fail(r, std::string(e.what()) + ": " + PrintType(t));
      }
    }
  }
  return r;
}

}  // namespace nestql::gen
