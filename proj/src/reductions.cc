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

#include "nestql/reductions.h"

#include <algorithm>
#include <functional>
#include <sstream>

#include "nestql/error.h"

namespace nestql {

using namespace ma;

ExprP GenDoublyExp(int m) {
  if (m < 0) throw Error("gen-dexp: m must be nonnegative");
  std::vector<ExprP> stages{Union(Compose(Const("0"), Sng()), Compose(Const("1"), Sng()))};
  for (int i = 0; i < m; ++i) stages.push_back(Cart(Id(), Id()));
  return Seq(stages);
}

std::string Marked(const std::string& s) { return "[" + s + "]"; }

std::vector<std::string> TMSpec::Symbols() const {
  std::vector<std::string> out{kTapeStart};
  for (const auto& s : alphabet) {
    if (s != kTapeStart && std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

namespace {

bool Has(const std::vector<std::string>& v, const std::string& x) { return std::find(v.begin(), v.end(), x) != v.end(); }

std::vector<std::string> Words(std::istringstream& in) {
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace

void ValidateTM(const TMSpec& tm) {
  if (tm.states.empty()) throw Error("tm: no states");
  if (!Has(tm.states, tm.start)) throw Error("tm: start state '" + tm.start + "' is not a state");
  if (!Has(tm.alphabet, "#")) throw Error("tm: the alphabet must contain '#'");
  std::vector<std::string> syms = tm.Symbols();
  for (const auto& s : syms) {
    if (s.size() >= 2 && s.front() == '[' && s.back() == ']') throw Error("tm: symbol '" + s + "' is reserved");
  }
  for (const auto& f : tm.finals) {
    if (!Has(tm.states, f)) throw Error("tm: final '" + f + "' is not a state");
  }
  for (const auto& [key, moves] : tm.delta) {
    if (!Has(tm.states, key.first)) throw Error("tm: unknown state '" + key.first + "' in delta");
    if (!Has(syms, key.second)) throw Error("tm: unknown symbol '" + key.second + "' in delta");
    for (const auto& m : moves) {
      if (!Has(tm.states, m.state)) throw Error("tm: unknown state '" + m.state + "' in delta");
      if (!Has(syms, m.symbol)) throw Error("tm: unknown symbol '" + m.symbol + "' in delta");
      if (m.move < -1 || m.move > 1) throw Error("tm: move must be -1, 0 or +1");
    }
  }
  // Final states idle until the last step.
  for (const auto& f : tm.finals) {
    for (const auto& s : syms) {
      auto it = tm.delta.find({f, s});
      if (it == tm.delta.end() || !it->second.count(TMMove{f, s, 0})) {
        throw Error("tm: final state '" + f + "' needs the idle transition on '" + s + "'");
      }
    }
  }
}

TMSpec ParseTM(std::string_view text) {
  TMSpec tm;
  std::istringstream lines{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos || line[a] == '%') continue;
    size_t colon = line.find(':');
    if (colon == std::string::npos) throw Error("tm: line " + std::to_string(lineno) + " has no ':'");
    std::string key = line.substr(a, colon - a);
    std::istringstream rest(line.substr(colon + 1));
    std::vector<std::string> w = Words(rest);
    auto fail = [&](const std::string& m) { throw Error("tm: line " + std::to_string(lineno) + ": " + m); };
    if (key == "states") {
      tm.states = w;
    } else if (key == "alphabet") {
      tm.alphabet = w;
    } else if (key == "start") {
      if (w.size() != 1) fail("one start state expected");
      tm.start = w[0];
    } else if (key == "final") {
      tm.finals = w;
    } else if (key == "delta") {
      if (w.size() != 6 || w[2] != "->") fail("expected 'delta: q s -> q' s' move'");
      int mv;
      if (w[5] == "-1") {
        mv = -1;
      } else if (w[5] == "0") {
        mv = 0;
      } else if (w[5] == "+1" || w[5] == "1") {
        mv = 1;
      } else {
        fail("move must be -1, 0 or +1");
      }
      tm.delta[{w[0], w[1]}].insert(TMMove{w[3], w[4], mv});
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  ValidateTM(tm);
  return tm;
}

std::string PrintTM(const TMSpec& tm) {
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += " " + x;
    return s;
  };
  std::string out = "states:" + join(tm.states) + "\nalphabet:" + join(tm.alphabet) + "\nstart: " + tm.start +
                    "\nfinal:" + join(tm.finals) + "\n";
  for (const auto& [key, moves] : tm.delta) {
    for (const auto& m : moves) {
      out += "delta: " + key.first + " " + key.second + " -> " + m.state + " " + m.symbol + " " +
             (m.move > 0 ? "+1" : m.move < 0 ? "-1" : "0") + "\n";
    }
  }
  return out;
}

namespace {

void CheckInput(const TMSpec& tm, const std::vector<std::string>& input, int K) {
  if (K < 1 || K > 30) throw Error("tm: K must be between 1 and 30");
  auto syms = tm.Symbols();
  for (const auto& s : input) {
    if (s == kTapeStart || !Has(syms, s)) throw Error("tm: input symbol '" + s + "' is not in the alphabet");
  }
  if (input.size() + 1 > (size_t{1} << K)) {
    throw Error("tm: start marker plus input (" + std::to_string(input.size() + 1) + " cells) exceed 2^K");
  }
}

}  // namespace

bool SimulateNTM(const TMSpec& tm, const std::vector<std::string>& input, int K, long steps) {
  CheckInput(tm, input, K);
  if (steps < 0) throw Error("tm: negative step count");
  struct Conf {
    std::string q;
    size_t head;
    std::vector<std::string> tape;
    auto operator<=>(const Conf&) const = default;
  };
  size_t len = size_t{1} << K;
  Conf c0{tm.start, 0, std::vector<std::string>(len, "#")};
  c0.tape[0] = kTapeStart;
  for (size_t i = 0; i < input.size(); ++i) c0.tape[i + 1] = input[i];
  std::set<Conf> cur{c0};
  for (long t = 0; t < steps && !cur.empty(); ++t) {
    std::set<Conf> next;
    for (const auto& c : cur) {
      auto it = tm.delta.find({c.q, c.tape[c.head]});
      if (it == tm.delta.end()) continue;
      for (const auto& m : it->second) {
        if (m.move < 0 && c.head == 0) throw Error("tm: machine moves left of the start cell");
        if (m.move > 0 && c.head + 1 == len) continue;  // off the tape
        Conf n = c;
        n.q = m.state;
        n.tape[c.head] = m.symbol;
        n.head = static_cast<size_t>(static_cast<long>(c.head) + m.move);
        next.insert(std::move(n));
      }
    }
    cur = std::move(next);
  }
  for (const auto& c : cur) {
    if (Has(tm.finals, c.q)) return true;
  }
  return false;
}

// ---- the query ----

namespace tmq {

namespace {

ExprP UnionAll(const std::vector<ExprP>& parts) {
  if (parts.empty()) return Empty();
  ExprP out = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) out = Union(out, parts[i]);
  return out;
}

ExprP ConstSet(const std::vector<std::string>& atoms) {
  std::vector<ExprP> parts;
  for (const auto& a : atoms) parts.push_back(Compose(Const(a), Sng()));
  return UnionAll(parts);
}

Path Cat(Path a, const Path& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

CondP AndAll(const std::vector<CondP>& cs) {
  CondP out = cs[0];
  for (size_t i = 1; i < cs.size(); ++i) out = CAnd(out, cs[i]);
  return out;
}

// Boolean conjunction of two predicate queries.
ExprP BoolAnd(const ExprP& a, const ExprP& b) { return Compose(Cart(a, b), Map(Tuple({}))); }

int CeilLog2(size_t n) {
  int l = 0;
  while ((size_t{1} << l) < n) ++l;
  return l;
}

}  // namespace

Type TapeType(int depth) {
  Type t = Type::Dom();
  for (int i = 0; i < depth; ++i) t = Type::Tuple({{"1", t}, {"2", t}});
  return t;
}

Type ConfigType(int K) { return Type::Tuple({{"t", TapeType(K)}, {"q", Type::Dom()}}); }

ExprP MonEq(const Path& a, const Path& b, const Type& t) {
  if (t.is_tuple()) {
    const auto& f = t.fields();
    if (f.size() == 2 && f[0].first == "1" && f[1].first == "2" && f[0].second == f[1].second) {
      // Split each side into its two tagged halves and compare the halves
      // pairwise with one recursive test.
      ExprP phi = Union(Compose(Tuple({{"T", Const("1")}, {"V", P("1")}}), Sng()),
                        Compose(Tuple({{"T", Const("2")}, {"V", P("2")}}), Sng()));
      return Seq({Cart(Compose(Proj(a), phi), Compose(Proj(b), phi)),
                  Select(CEq({"1", "T"}, {"2", "T"}, EqMode::kAtomic)),
                  Select(CPred(MonEq({"1", "V"}, {"2", "V"}, f[0].second))), Cart(Id(), Id()),
                  Select(CConst({"1", "1", "T"}, "1")), Select(CConst({"2", "1", "T"}, "2")), Map(Tuple({}))});
    }
    if (f.empty()) return Compose(Unit(), Sng());
    ExprP out;
    for (const auto& [l, ft] : f) {
      ExprP e = MonEq(Cat(a, {l}), Cat(b, {l}), ft);
      out = out ? BoolAnd(out, e) : e;
    }
    return out;
  }
  if (t.is_coll()) throw Error("=mon is undefined on collections");
  return EqAtomic(a, b);
}

CondP MonCond(const Path& a, const Path& b, const Type& t, bool builtin) {
  if (!t.is_tuple()) return CEq(a, b, EqMode::kAtomic);
  if (builtin) return CEq(a, b, EqMode::kMon);
  return CPred(MonEq(a, b, t));
}

ExprP Tapes(const TMSpec& tm, int K) {
  std::vector<std::string> syms = tm.Symbols();
  std::vector<std::string> all = syms;
  for (const auto& s : syms) all.push_back(Marked(s));
  std::vector<ExprP> stages{ConstSet(all)};
  for (int i = 0; i < K; ++i) stages.push_back(Cart(Id(), Id()));
  return Seq(stages);
}

ExprP Configs(const TMSpec& tm, int K) {
  return Compose(Cart(Tapes(tm, K), ConstSet(tm.states)), Map(Tuple({{"t", P("1")}, {"q", P("2")}})));
}

ExprP StartTape(const TMSpec& tm, const std::vector<std::string>& input, int K) {
  CheckInput(tm, input, K);
  std::vector<std::string> x{Marked(kTapeStart)};
  x.insert(x.end(), input.begin(), input.end());
  int l = CeilLog2(x.size());
  x.resize(size_t{1} << l, "#");
  std::function<ExprP(size_t, size_t)> build = [&](size_t lo, size_t len) -> ExprP {
    if (len == 1) return Const(x[lo]);
    return Tuple({{"1", build(lo, len / 2)}, {"2", build(lo + len / 2, len / 2)}});
  };
  ExprP phi_x = build(0, x.size());
  if (l == K) return phi_x;
  std::vector<ExprP> empty{Const("#")};
  for (int i = 0; i < l; ++i) empty.push_back(Tuple({{"1", Id()}, {"2", Id()}}));
  std::vector<ExprP> stages{Tuple({{"1", phi_x}, {"2", Seq(empty)}})};
  ExprP pad = Tuple({{"1", Id()}, {"2", Tuple({{"1", P("2")}, {"2", P("2")}})}});
  for (int i = 0; i < K - l - 1; ++i) stages.push_back(pad);
  return Seq(stages);
}

ExprP StartConfig(const TMSpec& tm, const std::vector<std::string>& input, int K) {
  return Tuple({{"t", StartTape(tm, input, K)}, {"q", Const(tm.start)}});
}

ExprP AcceptingConfigs(const TMSpec& tm, int K) {
  std::vector<ExprP> sel;
  for (const auto& f : tm.finals) sel.push_back(Select(CConst({"q"}, f)));
  return Compose(Configs(tm, K), UnionAll(sel));
}

namespace {

ExprP PrepareSucc(const TMSpec& tm, int K) {
  return Seq({Configs(tm, K), Cart(Id(), Id()),
              Map(Tuple({{"s", Tuple({{"C", P("1")}, {"D", P("2")}})}, {"w", P("1.t")}, {"w2", P("2.t")}}))});
}

// One zoom step on windows of the given depth (>= 2).
ExprP ZoomIn(int depth, bool builtin) {
  Type half = TapeType(depth - 1), quarter = TapeType(depth - 2);
  auto keep = [](const std::string& side) {
    return Map(Tuple({{"s", P("s")}, {"w", Proj({"w", side})}, {"w2", Proj({"w2", side})}}));
  };
  ExprP middle = Tuple({{"1", P("1.2")}, {"2", P("2.1")}});
  ExprP left = Compose(Select(MonCond({"w", "1"}, {"w2", "1"}, half, builtin)), keep("2"));
  ExprP right = Compose(Select(MonCond({"w", "2"}, {"w2", "2"}, half, builtin)), keep("1"));
  ExprP mid = Seq({Select(MonCond({"w", "1", "1"}, {"w2", "1", "1"}, quarter, builtin)),
                   Select(MonCond({"w", "2", "2"}, {"w2", "2", "2"}, quarter, builtin)),
                   Map(Tuple({{"s", P("s")}, {"w", Compose(P("w"), middle)}, {"w2", Compose(P("w2"), middle)}}))});
  return Union(left, Union(right, mid));
}

ExprP MarkerSel(const TMSpec& tm) {
  std::vector<ExprP> sel;
  for (const char* side : {"1", "2"}) {
    for (const auto& s : tm.Symbols()) sel.push_back(Select(CConst({"w", side}, Marked(s))));
  }
  return UnionAll(sel);
}

// Windows of two cells on both tapes; one selection per transition and,
// for head moves, per symbol entering the head.
ExprP TransitionSel(const TMSpec& tm) {
  std::vector<ExprP> sel;
  auto state = [](const std::string& q, const std::string& q2) {
    return std::vector<CondP>{CConst({"s", "C", "q"}, q), CConst({"s", "D", "q"}, q2)};
  };
  for (const auto& [key, moves] : tm.delta) {
    const auto& [q, a] = key;
    for (const auto& m : moves) {
      if (m.move == 0) {
        for (int pos = 1; pos <= 2; ++pos) {
          std::string here = std::to_string(pos), other = std::to_string(3 - pos);
          auto c = state(q, m.state);
          c.push_back(CConst({"w", here}, Marked(a)));
          c.push_back(CConst({"w2", here}, Marked(m.symbol)));
          c.push_back(CEq({"w", other}, {"w2", other}, EqMode::kAtomic));
          sel.push_back(Select(AndAll(c)));
        }
        continue;
      }
      std::string from = m.move > 0 ? "1" : "2", to = m.move > 0 ? "2" : "1";
      for (const auto& s : tm.Symbols()) {
        auto c = state(q, m.state);
        c.push_back(CConst({"w", from}, Marked(a)));
        c.push_back(CConst({"w", to}, s));
        c.push_back(CConst({"w2", from}, m.symbol));
        c.push_back(CConst({"w2", to}, Marked(s)));
        sel.push_back(Select(AndAll(c)));
      }
    }
  }
  return UnionAll(sel);
}

}  // namespace

ExprP SuccFromTriples(const TMSpec& tm, int K, bool builtin) {
  std::vector<ExprP> stages;
  for (int j = 0; j < K - 1; ++j) stages.push_back(ZoomIn(K - j, builtin));
  stages.push_back(MarkerSel(tm));
  stages.push_back(TransitionSel(tm));
  stages.push_back(Map(P("s")));
  return Seq(stages);
}

ExprP Succ(const TMSpec& tm, int K, bool builtin) {
  return Compose(PrepareSucc(tm, K), SuccFromTriples(tm, K, builtin));
}

}  // namespace tmq

ExprP GenTMQuery(const TMSpec& tm, const std::vector<std::string>& input, int K, const TMQueryOptions& opt) {
  ValidateTM(tm);
  CheckInput(tm, input, K);
  using namespace tmq;
  bool b = opt.builtin_mon;
  Type conf = ConfigType(K);
  // psi_i: pairs <C, D> with D reachable from C in exactly 2^i steps.
  ExprP psi = Succ(tm, K, b);
  for (int i = 0; i < K; ++i) {
    psi = Seq({psi, Cart(Id(), Id()), Select(MonCond({"1", "D"}, {"2", "C"}, conf, b)),
               Map(Tuple({{"C", P("1.C")}, {"D", P("2.D")}}))});
  }
  ExprP reached = Seq({Tuple({{"1", StartConfig(tm, input, K)}, {"2", psi}}), PairWith("2"),
                       Select(MonCond({"1"}, {"2", "C"}, conf, b)), Map(P("2.D"))});
  ExprP same = b ? EqMon({"1"}, {"2"}) : MonEq({"1"}, {"2"}, conf);
  return Seq({Cart(reached, AcceptingConfigs(tm, K)), Map(same), Flatten()});
}

}  // namespace nestql
