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

#ifndef NESTQL_REDUCTIONS_H_
#define NESTQL_REDUCTIONS_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "nestql/ma.h"
#include "nestql/type.h"
#include "nestql/value.h"

namespace nestql {

// ---- doubly exponential values ----

// {0,1} followed by m cartesian squarings; yields 2^(2^m) nested pairs.
ExprP GenDoublyExp(int m);

// ---- Turing machines ----

// Reserved left-end symbol placed before the input; machines read it at
// position 0 and must not move left of it.
inline constexpr const char* kTapeStart = "<";
// Tape symbol s under the head.
std::string Marked(const std::string& s);

struct TMMove {
  std::string state;
  std::string symbol;
  int move = 0;  // -1, 0, +1
  auto operator<=>(const TMMove&) const = default;
};

struct TMSpec {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;  // includes "#"; kTapeStart is implicit
  std::string start;
  std::vector<std::string> finals;
  std::map<std::pair<std::string, std::string>, std::set<TMMove>> delta;

  // alphabet plus kTapeStart, in a fixed order.
  std::vector<std::string> Symbols() const;
};

// "states:", "alphabet:", "start:", "final:" lines and one
// "delta: q s -> q' s' move" line per transition; '%' starts a comment line.
// Validates the spec, including the idle self-loops of final states.
TMSpec ParseTM(std::string_view text);
std::string PrintTM(const TMSpec& tm);
void ValidateTM(const TMSpec& tm);

// Breadth-first search over configurations on a tape of 2^K cells holding
// kTapeStart, the input, then blanks. True iff a final state is reached at
// time exactly `steps`. Branches that run off the right end die; a move left
// of the start cell is an error.
bool SimulateNTM(const TMSpec& tm, const std::vector<std::string>& input, int K, long steps);

struct TMQueryOptions {
  // Use the =mon primitive; otherwise the linear-size recursive definition
  // over atomic equality.
  bool builtin_mon = true;
};

// Closed query whose Boolean value (set semantics, input <>) says whether
// the machine accepts within exactly 2^K steps.
ExprP GenTMQuery(const TMSpec& tm, const std::vector<std::string>& input, int K, const TMQueryOptions& opt = {});

// Pieces of the construction, exposed for tests.
namespace tmq {
Type TapeType(int depth);
Type ConfigType(int K);
ExprP MonEq(const Path& a, const Path& b, const Type& t);  // recursive =mon
CondP MonCond(const Path& a, const Path& b, const Type& t, bool builtin);
ExprP Tapes(const TMSpec& tm, int K);
ExprP Configs(const TMSpec& tm, int K);
ExprP StartTape(const TMSpec& tm, const std::vector<std::string>& input, int K);
ExprP StartConfig(const TMSpec& tm, const std::vector<std::string>& input, int K);
ExprP AcceptingConfigs(const TMSpec& tm, int K);
// From <s, w, w2> triples: K-1 zoom steps, the marker test, the transition
// selections and the projection onto s = <C, D>.
ExprP SuccFromTriples(const TMSpec& tm, int K, bool builtin);
ExprP Succ(const TMSpec& tm, int K, bool builtin);
}  // namespace tmq

// ---- flat encoding ----

// Relations over 1-based positions of the serialization that uses only
// braces, angle brackets, commas and atom characters.
struct FlatDB {
  std::vector<std::pair<int, std::string>> atomic;
  std::vector<std::pair<int, int>> set;
  std::vector<std::tuple<int, int, int>> pair;
};

// v must consist of sets, two-field tuples and atoms.
FlatDB FlatEncode(const Value& v);
std::string FlatSerialize(const Value& v);
std::string PrintFlatDB(const FlatDB& db);
// <Set: {<1, 2>}, Pair: {<1, 2, 3>}, Atomic: {<1, 2>}> with positions as
// numeral atoms.
Value FlatDBValue(const FlatDB& db);

// V_t over the FlatDB value; yields {<1: i, 2: {v}>} for every node i of
// type t.
ExprP GenVTau(const Type& t);
// Restricts V_t to the root and unwraps: computes {v}.
ExprP GenVPrime(const Type& t);

}  // namespace nestql

#endif  // NESTQL_REDUCTIONS_H_
