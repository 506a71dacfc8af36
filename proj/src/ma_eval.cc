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

#include <map>
#include <set>

#include "nestql/error.h"
#include "nestql/ma.h"

namespace nestql {
namespace {

const Value& At(const Value& v, const Path& p) {
  const Value* cur = &v;
  for (const auto& l : p) {
    const Value* f = cur->field(l);
    if (!f) throw EvalError("no field '" + l + "' in " + PrintValue(*cur));
    cur = f;
  }
  return *cur;
}

const Value& RequireColl(const Value& v, const char* op) {
  if (!v.is_coll()) throw EvalError(std::string(op) + ": expected a collection, got " + PrintValue(v));
  return v;
}

class Evaluator {
 public:
  explicit Evaluator(const EvalOptions& opt) : opt_(opt), k_(opt.sem) {}

  Value Eval(const ExprP& q, const Value& v) { return Guard(EvalRaw(q, v)); }

  bool Test(const Cond& c, const Value& v) {
    switch (c.kind) {
      case Cond::Kind::kTrue:
        return true;
      case Cond::Kind::kAnd:
        return Test(*c.kids[0], v) && Test(*c.kids[1], v);
      case Cond::Kind::kOr:
        return Test(*c.kids[0], v) || Test(*c.kids[1], v);
      case Cond::Kind::kIff:
        return Test(*c.kids[0], v) == Test(*c.kids[1], v);
      case Cond::Kind::kNot:
        return !Test(*c.kids[0], v);
      case Cond::Kind::kPathEq:
        return ValueEqual(At(v, c.p), At(v, c.q), c.mode);
      case Cond::Kind::kConstEq:
        return ValueEqual(At(v, c.p), Value::Atom(c.atoms[0]), EqMode::kAtomic);
      case Cond::Kind::kIn: {
        const Value& a = At(v, c.p);
        if (!a.is_atom()) throw EvalError("in: expected an atom, got " + PrintValue(a));
        for (const auto& x : c.atoms) {
          if (x == a.label()) return true;
        }
        return false;
      }
      case Cond::Kind::kPred:
        return !RequireColl(Eval(c.pred, v), "pred").elems().empty();
    }
    return false;
  }

 private:
  [[noreturn]] void Overflow() {
    throw LimitError("intermediate value exceeds " + std::to_string(opt_.max_nodes) + " nodes");
  }

  Value Guard(Value v) {
    if (v.node_count() > opt_.max_nodes) Overflow();
    return v;
  }

  Value Make(std::vector<Value> elems) { return Guard(Value::Coll(k_, std::move(elems))); }

  static void Chain(const ExprP& q, std::vector<ExprP>& out) {
    if (q->op == Op::kCompose) {
      Chain(q->kids[0], out);
      Chain(q->kids[1], out);
    } else {
      out.push_back(q);
    }
  }

  // Cart followed by Select: filter pairs without materializing the product.
  Value CartSelect(const ExprP& cart, const Cond& c, const Value& v) {
    Value f = RequireColl(Eval(cart->kids[0], v), "cart");
    Value g = RequireColl(Eval(cart->kids[1], v), "cart");
    std::vector<Value> out;
    uint64_t nodes = 1;
    for (const Value& a : f.elems()) {
      for (const Value& b : g.elems()) {
        Value t = Value::Tuple({{"1", a}, {"2", b}});
        if (Test(c, t)) {
          nodes += t.node_count();
          if (nodes > opt_.max_nodes) Overflow();
          out.push_back(std::move(t));
        }
      }
    }
    return Make(std::move(out));
  }

  Value Bool(bool b) { return Value::Bool(k_, b); }

  // Truncated multiset difference, dropping the first occurrences under lists.
  Value MonusOf(const Value& r, const Value& s) {
    std::map<Value, int64_t> count;
    for (const Value& x : s.elems()) ++count[x];
    std::vector<Value> out;
    for (const Value& x : r.elems()) {
      auto it = count.find(x);
      if (it != count.end() && it->second > 0) {
        --it->second;
      } else {
        out.push_back(x);
      }
    }
    return Make(std::move(out));
  }

  // Elements of r kept or dropped by membership in s, multiplicity of r.
  Value FilterBy(const Value& r, const Value& s, bool keep_members) {
    std::set<Value> in_s(s.elems().begin(), s.elems().end());
    std::vector<Value> out;
    for (const Value& x : r.elems()) {
      if ((in_s.count(x) > 0) == keep_members) out.push_back(x);
    }
    return Make(std::move(out));
  }

  Value EvalRaw(const ExprP& q, const Value& v) {
    switch (q->op) {
      case Op::kId:
        return v;
      case Op::kConst:
        return Value::Atom(q->name);
      case Op::kEmpty:
        return Value::Coll(k_, {});
      case Op::kUnit:
        return Value::Unit();
      case Op::kSng:
        return Make({v});
      case Op::kMap: {
        std::vector<Value> out;
        for (const Value& x : RequireColl(v, "map").elems()) out.push_back(Eval(q->kids[0], x));
        return Make(std::move(out));
      }
      case Op::kFlatMap:
      case Op::kFlatten: {
        std::vector<Value> out;
        for (const Value& x : RequireColl(v, OpName(q->op)).elems()) {
          Value inner = q->op == Op::kFlatten ? x : Eval(q->kids[0], x);
          for (const Value& y : RequireColl(inner, OpName(q->op)).elems()) out.push_back(y);
        }
        return Make(std::move(out));
      }
      case Op::kPairWith: {
        const Value* c = v.field(q->name);
        if (!c) throw EvalError("pairwith: no field '" + q->name + "' in " + PrintValue(v));
        std::vector<Value> out;
        for (const Value& x : RequireColl(*c, "pairwith").elems()) {
          std::vector<Value::Field> fs = v.fields();
          for (auto& f : fs) {
            if (f.first == q->name) f.second = x;
          }
          out.push_back(Value::Tuple(std::move(fs)));
        }
        return Make(std::move(out));
      }
      case Op::kTuple: {
        std::vector<Value::Field> fs;
        for (size_t i = 0; i < q->kids.size(); ++i) {
          fs.emplace_back(q->labels[i], Eval(q->kids[i], v));
        }
        return Value::Tuple(std::move(fs));
      }
      case Op::kProj:
        return At(v, q->path);
      case Op::kCompose: {
        std::vector<ExprP> stages;
        Chain(q, stages);
        Value cur = v;
        for (size_t i = 0; i < stages.size(); ++i) {
          if (stages[i]->op == Op::kCart && i + 1 < stages.size() &&
              stages[i + 1]->op == Op::kSelect) {
            cur = CartSelect(stages[i], *stages[i + 1]->cond, cur);
            ++i;
          } else {
            cur = Eval(stages[i], cur);
          }
        }
        return cur;
      }
      case Op::kUnion: {
        Value a = RequireColl(Eval(q->kids[0], v), "union");
        Value b = RequireColl(Eval(q->kids[1], v), "union");
        std::vector<Value> out = a.elems();
        out.insert(out.end(), b.elems().begin(), b.elems().end());
        return Make(std::move(out));
      }
      case Op::kCart: {
        Value a = RequireColl(Eval(q->kids[0], v), "cart");
        Value b = RequireColl(Eval(q->kids[1], v), "cart");
        std::vector<Value> out;
        uint64_t nodes = 1;
        for (const Value& x : a.elems()) {
          for (const Value& y : b.elems()) {
            out.push_back(Value::Tuple({{"1", x}, {"2", y}}));
            nodes += out.back().node_count();
            if (nodes > opt_.max_nodes) Overflow();
          }
        }
        return Make(std::move(out));
      }
      case Op::kEqAtomic:
        return Bool(ValueEqual(At(v, q->path), At(v, q->path2), EqMode::kAtomic));
      case Op::kEqMon:
        return Bool(ValueEqual(At(v, q->path), At(v, q->path2), EqMode::kMon));
      case Op::kEqDeep:
        return Bool(ValueEqual(At(v, q->path), At(v, q->path2), EqMode::kDeep));
      case Op::kNot:
        return Bool(RequireColl(v, "not").elems().empty());
      case Op::kTrue:
        return Bool(!RequireColl(v, "true").elems().empty());
      case Op::kUnique: {
        std::set<Value> seen;
        std::vector<Value> out;
        for (const Value& x : RequireColl(v, "unique").elems()) {
          if (seen.insert(x).second) out.push_back(x);
        }
        return Make(std::move(out));
      }
      case Op::kMonus:
      case Op::kDiff:
      case Op::kIntersect: {
        if (!v.is_tuple() || v.fields().size() != 2) {
          throw EvalError(std::string(OpName(q->op)) + ": expected a pair, got " + PrintValue(v));
        }
        const Value& r = RequireColl(v.fields()[0].second, OpName(q->op));
        const Value& s = RequireColl(v.fields()[1].second, OpName(q->op));
        if (q->op == Op::kMonus) return MonusOf(r, s);
        return FilterBy(r, s, q->op == Op::kIntersect);
      }
      case Op::kSubsetEq: {
        const Value& a = RequireColl(At(v, q->path), "subseteq");
        const Value& b = RequireColl(At(v, q->path2), "subseteq");
        std::set<Value> in_b(b.elems().begin(), b.elems().end());
        for (const Value& x : a.elems()) {
          if (!in_b.count(x)) return Bool(false);
        }
        return Bool(true);
      }
      case Op::kMemberOf: {
        const Value& a = At(v, q->path);
        for (const Value& x : RequireColl(At(v, q->path2), "in").elems()) {
          if (x == a) return Bool(true);
        }
        return Bool(false);
      }
      case Op::kSelect: {
        std::vector<Value> out;
        for (const Value& x : RequireColl(v, "select").elems()) {
          if (Test(*q->cond, x)) out.push_back(x);
        }
        return Make(std::move(out));
      }
      case Op::kNest: {
        // Group by the remaining fields; the grouped fields form C.
        std::map<Value, std::vector<Value>> groups;
        for (const Value& x : RequireColl(v, "nest").elems()) {
          std::vector<Value::Field> keys, grouped;
          for (const auto& f : x.fields()) {
            bool g = false;
            for (const auto& l : q->labels) g = g || l == f.first;
            (g ? grouped : keys).push_back(f);
          }
          groups[Value::Tuple(std::move(keys))].push_back(Value::Tuple(std::move(grouped)));
        }
        std::vector<Value> out;
        for (auto& [key, members] : groups) {
          std::vector<Value::Field> fs = key.fields();
          fs.emplace_back(q->name, Value::Coll(k_, std::move(members)));
          out.push_back(Value::Tuple(std::move(fs)));
        }
        return Make(std::move(out));
      }
    }
    throw EvalError("unknown operator");
  }

  const EvalOptions& opt_;
  CollKind k_;
};

}  // namespace

Value EvalMA(const ExprP& q, const Value& v, const EvalOptions& opt) {
  ExprP run = q;
  if (opt.check_types || !opt.native_extended) {
    Type in = TypeOf(v);
    if (opt.check_types) InferType(q, in, opt.sem);
    if (!opt.native_extended) run = Desugar(q, in, opt.sem);
  }
  Evaluator ev(opt);
  return ev.Eval(run, v);
}

}  // namespace nestql
