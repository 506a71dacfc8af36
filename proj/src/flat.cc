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
#include "nestql/reductions.h"

namespace nestql {

using namespace ma;

namespace {

int CodePoints(const std::string& s) {
  int n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

bool IsPair(const Value& v) { return v.is_tuple() && v.fields().size() == 2; }

void CheckFlat(const Value& v) {
  if (v.is_atom()) return;
  if (IsPair(v)) {
    for (const auto& f : v.fields()) CheckFlat(f.second);
    return;
  }
  if (v.is_coll() && v.kind() == CollKind::kSet) {
    for (const auto& e : v.elems()) CheckFlat(e);
    return;
  }
  throw Error("flat: only sets, pairs and atoms can be encoded, got " + PrintValue(v));
}

// Returns the position of v's first character; pos is the next free one.
int Encode(const Value& v, int& pos, FlatDB& db) {
  int id = pos;
  if (v.is_atom()) {
    db.atomic.emplace_back(id, v.label());
    pos += CodePoints(v.label());
  } else if (v.is_tuple()) {
    ++pos;
    int a = Encode(v.fields()[0].second, pos, db);
    ++pos;
    int b = Encode(v.fields()[1].second, pos, db);
    ++pos;
    db.pair.emplace_back(id, a, b);
  } else {
    ++pos;
    bool first = true;
    for (const auto& e : v.elems()) {
      if (!first) ++pos;
      first = false;
      db.set.emplace_back(id, Encode(e, pos, db));
    }
    ++pos;
  }
  return id;
}

void Serialize(const Value& v, std::string& out) {
  if (v.is_atom()) {
    out += v.label();
  } else if (v.is_tuple()) {
    out += "⟨";
    Serialize(v.fields()[0].second, out);
    out += ",";
    Serialize(v.fields()[1].second, out);
    out += "⟩";
  } else {
    out += "{";
    bool first = true;
    for (const auto& e : v.elems()) {
      if (!first) out += ",";
      first = false;
      Serialize(e, out);
    }
    out += "}";
  }
}

Value Num(int i) { return Value::Atom(std::to_string(i)); }

// S|v: the members of relation S whose first column is v, mapped to their
// second column.
ExprP Restrict(const std::string& rel, const std::string& key) {
  return Seq({Tuple({{"1", P(key)}, {"2", P(rel)}}), PairWith("2"), Select(CEq({"1"}, {"2", "1"})), Map(P("2.2"))});
}

}  // namespace

FlatDB FlatEncode(const Value& v) {
  CheckFlat(v);
  FlatDB db;
  int pos = 1;
  Encode(v, pos, db);
  return db;
}

std::string FlatSerialize(const Value& v) {
  CheckFlat(v);
  std::string out;
  Serialize(v, out);
  return out;
}

std::string PrintFlatDB(const FlatDB& db) {
  std::string out;
  for (const auto& [i, a] : db.atomic) out += "atomic(" + std::to_string(i) + ", " + a + ").\n";
  for (const auto& [i, j] : db.set) out += "set(" + std::to_string(i) + ", " + std::to_string(j) + ").\n";
  for (const auto& [i, a, b] : db.pair) {
    out += "pair(" + std::to_string(i) + ", " + std::to_string(a) + ", " + std::to_string(b) + ").\n";
  }
  return out;
}

Value FlatDBValue(const FlatDB& db) {
  std::vector<Value> set, pair, atomic;
  for (const auto& [i, j] : db.set) set.push_back(Value::Tuple({{"1", Num(i)}, {"2", Num(j)}}));
  for (const auto& [i, a, b] : db.pair) pair.push_back(Value::Tuple({{"1", Num(i)}, {"2", Num(a)}, {"3", Num(b)}}));
  for (const auto& [i, a] : db.atomic) atomic.push_back(Value::Tuple({{"1", Num(i)}, {"2", Value::Atom(a)}}));
  return Value::Tuple({{"Set", Value::Set(std::move(set))},
                       {"Pair", Value::Set(std::move(pair))},
                       {"Atomic", Value::Set(std::move(atomic))}});
}

ExprP GenVTau(const Type& t) {
  if (t.is_tuple()) {
    if (t.fields().size() != 2) throw Error("vtau: tuples must have two fields");
    const auto& [la, ta] = t.fields()[0];
    const auto& [lb, tb] = t.fields()[1];
    ExprP parts = Seq({Cart(Compose(Restrict("L", "P.2"), Flatten()), Compose(Restrict("R", "P.3"), Flatten())),
                       Map(Tuple({{la, P("1")}, {lb, P("2")}}))});
    return Seq({Tuple({{"P", P("Pair")}, {"L", GenVTau(ta)}, {"R", GenVTau(tb)}}), PairWith("P"),
                Map(Tuple({{"1", P("P.1")}, {"2", parts}}))});
  }
  if (t.is_coll()) {
    if (t.kind() != CollKind::kSet) throw Error("vtau: only set types are supported");
    ExprP members = Seq({Tuple({{"M", Restrict("2", "1")}, {"E", P("E")}}), Cart(P("M"), P("E")),
                         Select(CEq({"1"}, {"2", "1"})), Map(P("2.2")), Flatten(), Sng()});
    return Seq({Tuple({{"1", Compose(P("Set"), Map(P("1")))}, {"2", P("Set")}, {"E", GenVTau(t.elem())}}),
                PairWith("1"), Map(Tuple({{"1", P("1")}, {"2", members}}))});
  }
  return Compose(P("Atomic"), Map(Tuple({{"1", P("1")}, {"2", Compose(P("2"), Sng())}})));
}

ExprP GenVPrime(const Type& t) { return Seq({GenVTau(t), Select(CConst({"1"}, "1")), Map(P("2")), Flatten()}); }

}  // namespace nestql
