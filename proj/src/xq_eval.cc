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
#include "nestql/xq.h"

namespace nestql {
namespace {

using Seq = std::vector<TreeP>;

void Descendants(const TreeP& t, Axis axis, const std::string& test, Seq& out) {
  for (const auto& c : t->children) {
    if (test == "*" || c->label == test) out.push_back(c);
    if (axis == Axis::kDescendant) Descendants(c, axis, test, out);
  }
}

bool NodesEqual(const TreeP& a, const TreeP& b, EqMode mode) {
  if (mode == EqMode::kAtomic) {
    if (!a->children.empty() || !b->children.empty()) {
      throw EvalError("xq: atomic equality on a non-leaf node <" +
                      (a->children.empty() ? b->label : a->label) + ">");
    }
    return a->label == b->label;
  }
  return TreeEqual(a, b);
}

class XQEvaluator {
 public:
  explicit XQEvaluator(Env env) : env_(std::move(env)) {}

  Seq E(const XQP& q) {
    switch (q->kind) {
      case XQKind::kEmptyElem:
        return {MakeTree(q->label)};
      case XQKind::kElem:
        return {MakeTree(q->label, E(q->kids[0]))};
      case XQKind::kSeq:
      case XQKind::kOr: {
        Seq a = E(q->kids[0]);
        Seq b = E(q->kids[1]);
        a.insert(a.end(), b.begin(), b.end());
        return a;
      }
      case XQKind::kVar:
        return {At(q->var)};
      case XQKind::kStep: {
        Seq out;
        Descendants(At(q->var), q->axis, q->label, out);
        return out;
      }
      case XQKind::kFor:
      case XQKind::kSome: {
        Seq out;
        for (const auto& t : E(q->kids[0])) {
          Seq r = With(q->var, t, q->kids[1]);
          out.insert(out.end(), r.begin(), r.end());
        }
        return out;
      }
      case XQKind::kLet: {
        Seq b = E(q->kids[0]);
        if (b.size() != 1) throw EvalError("xq: let bound to " + std::to_string(b.size()) + " nodes");
        return With(q->var, b[0], q->kids[1]);
      }
      case XQKind::kIf:
      case XQKind::kAnd:
        if (E(q->kids[0]).empty()) return {};
        return E(q->kids[1]);
      case XQKind::kVarEq:
        return Yes(NodesEqual(At(q->var), At(q->var2), q->mode));
      case XQKind::kQueryEq: {
        Seq a = E(q->kids[0]);
        Seq b = E(q->kids[1]);
        bool eq = a.size() == b.size();
        for (size_t i = 0; eq && i < a.size(); ++i) eq = NodesEqual(a[i], b[i], q->mode);
        return Yes(eq);
      }
      case XQKind::kNot:
        return Yes(E(q->kids[0]).empty());
      case XQKind::kEvery: {
        for (const auto& t : E(q->kids[0])) {
          if (With(q->var, t, q->kids[1]).empty()) return {};
        }
        return Yes(true);
      }
    }
    return {};
  }

 private:
  static Seq Yes(bool b) {
    if (!b) return {};
    return {MakeTree("yes")};
  }

  const TreeP& At(const XQVar& v) const {
    if (v.level < 0 || static_cast<size_t>(v.level) >= env_.size()) {
      throw EvalError("xq: variable $" + v.name + " is not bound");
    }
    return env_[static_cast<size_t>(v.level)];
  }

  Seq With(const XQVar& v, const TreeP& t, const XQP& body) {
    if (static_cast<size_t>(v.level) != env_.size()) {
      throw EvalError("xq: binder $" + v.name + " at level " + std::to_string(v.level) + " in an environment of " +
                      std::to_string(env_.size()));
    }
    env_.push_back(t);
    Seq r = E(body);
    env_.pop_back();
    return r;
  }

  Env env_;
};

}  // namespace

std::vector<TreeP> EvalXQ(const XQP& q, const Env& env) { return XQEvaluator(env).E(q); }

bool DecideXQ(const XQP& q, const TreeP& doc) {
  Seq r = EvalXQ(q, {doc});
  if (r.size() != 1) {
    throw EvalError("xq: decision needs a single result tree, got " + std::to_string(r.size()));
  }
  return 2 * TreeSize(r[0]) > 2;
}

}  // namespace nestql
