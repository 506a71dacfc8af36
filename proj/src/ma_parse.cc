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

#include <cctype>

#include "nestql/error.h"
#include "nestql/ma.h"

namespace nestql {
namespace {

bool IsAtomChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '#' || c == '+' ||
         c == '-';
}

class MAParser {
 public:
  explicit MAParser(std::string_view s) : s_(s) {}

  ExprP ParseAll() {
    ExprP e = ParseExpr();
    Skip();
    if (pos_ != s_.size()) Fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void Fail(const std::string& msg) { throw SyntaxError("ma: " + msg, pos_); }

  void Skip() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else if (c == '#' && pos_ + 1 < s_.size() && s_[pos_ + 1] == ' ') {
        // "# " starts a comment to end of line; '#' alone is an atom char.
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool Eat(std::string_view t) {
    Skip();
    if (s_.substr(pos_, t.size()) != t) return false;
    pos_ += t.size();
    return true;
  }
  void Expect(std::string_view t) {
    if (!Eat(t)) Fail("expected '" + std::string(t) + "'");
  }

  // Keyword match that does not swallow a prefix of a longer identifier.
  bool EatWord(std::string_view w) {
    Skip();
    if (s_.substr(pos_, w.size()) != w) return false;
    size_t end = pos_ + w.size();
    if (end < s_.size() && IsAtomChar(s_[end])) return false;
    pos_ = end;
    return true;
  }

  std::string Quoted(char q) {
    ++pos_;
    std::string out;
    while (true) {
      if (pos_ >= s_.size()) Fail("unterminated quote");
      char c = s_[pos_++];
      if (c == q) break;
      if (c == '\\') {
        if (pos_ >= s_.size()) Fail("bad escape");
        c = s_[pos_++];
      }
      out += c;
    }
    return out;
  }

  std::string Label() {
    Skip();
    if (pos_ < s_.size() && s_[pos_] == '"') return Quoted('"');
    size_t start = pos_;
    while (pos_ < s_.size() && IsAtomChar(s_[pos_])) ++pos_;
    if (start == pos_) Fail("expected label");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string AtomLit() {
    Skip();
    if (pos_ < s_.size() && s_[pos_] == '\'') return Quoted('\'');
    return Label();
  }

  Path ParsePath() {
    Path p{Label()};
    while (true) {
      Skip();
      if (pos_ < s_.size() && s_[pos_] == '.') {
        ++pos_;
        p.push_back(Label());
      } else {
        break;
      }
    }
    return p;
  }

  std::pair<Path, Path> TwoPaths() {
    Expect("[");
    Path p = ParsePath();
    Expect(",");
    Path q = ParsePath();
    Expect("]");
    return {p, q};
  }

  ExprP ParseExpr() {
    ExprP e = ParseTerm();
    while (Eat(";")) e = ma::Compose(e, ParseTerm());
    return e;
  }

  ExprP Paren1() {
    Expect("(");
    ExprP f = ParseExpr();
    Expect(")");
    return f;
  }

  std::pair<ExprP, ExprP> Paren2() {
    Expect("(");
    ExprP f = ParseExpr();
    Expect(",");
    ExprP g = ParseExpr();
    Expect(")");
    return {f, g};
  }

  ExprP ParseTerm() {
    Skip();
    if (pos_ >= s_.size()) Fail("unexpected end of query");
    size_t at = pos_;
    if (s_[pos_] == '\'') return ma::Const(Quoted('\''));
    if (Eat("(")) {
      ExprP e = ParseExpr();
      Expect(")");
      return e;
    }
    if (EatWord("id")) return ma::Id();
    if (EatWord("sng")) return ma::Sng();
    if (EatWord("flatten")) return ma::Flatten();
    if (EatWord("unit")) return ma::Unit();
    if (EatWord("empty")) return ma::Empty();
    if (EatWord("not")) return ma::Not();
    if (EatWord("true")) return ma::True();
    if (EatWord("monus")) return ma::Monus();
    if (EatWord("unique")) return ma::Unique();
    if (EatWord("diff")) return ma::Diff();
    if (EatWord("cap")) return ma::Intersect();
    if (EatWord("map")) return ma::Map(Paren1());
    if (EatWord("flatmap")) return ma::FlatMap(Paren1());
    if (EatWord("union")) {
      Skip();
      if (pos_ < s_.size() && s_[pos_] == '(') {
        auto [f, g] = Paren2();
        return ma::Union(f, g);
      }
      // Bare "union" acts on a pair: union(pi[1], pi[2]).
      return ma::Union(ma::Proj({"1"}), ma::Proj({"2"}));
    }
    if (EatWord("cart")) {
      auto [f, g] = Paren2();
      return ma::Cart(f, g);
    }
    if (EatWord("pairwith")) {
      Expect("[");
      std::string l = Label();
      Expect("]");
      return ma::PairWith(l);
    }
    if (EatWord("pi")) {
      Expect("[");
      Path p = ParsePath();
      Expect("]");
      return ma::Proj(p);
    }
    if (EatWord("tup")) {
      Expect("[");
      std::vector<std::pair<std::string, ExprP>> fields;
      if (!Eat("]")) {
        do {
          size_t lab_at = pos_;
          std::string l = Label();
          Expect("=");
          ExprP f = ParseExpr();
          for (const auto& [seen, unused] : fields) {
            if (seen == l) {
              pos_ = lab_at;
              Fail("duplicate label '" + l + "'");
            }
          }
          fields.emplace_back(l, f);
        } while (Eat(","));
        Expect("]");
      }
      return ma::Tuple(std::move(fields));
    }
    if (EatWord("eqatom")) {
      auto [p, q] = TwoPaths();
      return ma::EqAtomic(p, q);
    }
    if (EatWord("eqmon")) {
      auto [p, q] = TwoPaths();
      return ma::EqMon(p, q);
    }
    if (EatWord("eq")) {
      auto [p, q] = TwoPaths();
      return ma::EqDeep(p, q);
    }
    if (EatWord("subseteq")) {
      auto [p, q] = TwoPaths();
      return ma::SubsetEq(p, q);
    }
    if (EatWord("in")) {
      auto [p, q] = TwoPaths();
      return ma::MemberOf(p, q);
    }
    if (EatWord("select")) {
      Expect("[");
      CondP c = ParseIff();
      Expect("]");
      return ma::Select(c);
    }
    if (EatWord("nest")) {
      Expect("[");
      std::string c = Label();
      Expect("=");
      Expect("(");
      std::vector<std::string> grouped{Label()};
      while (Eat(",")) grouped.push_back(Label());
      Expect(")");
      Expect("]");
      return ma::Nest(c, grouped);
    }
    pos_ = at;
    Fail("unknown operator");
  }

  // cond := or ('<=>' or)* ; or := and ('||' and)* ; and := un ('&&' un)*
  CondP ParseIff() {
    CondP c = ParseOr();
    while (Eat("<=>")) c = ma::CIff(c, ParseOr());
    return c;
  }
  CondP ParseOr() {
    CondP c = ParseAnd();
    while (Eat("||")) c = ma::COr(c, ParseAnd());
    return c;
  }
  CondP ParseAnd() {
    CondP c = ParseUnary();
    while (Eat("&&")) c = ma::CAnd(c, ParseUnary());
    return c;
  }
  CondP ParseUnary() {
    if (Eat("!")) return ma::CNot(ParseUnary());
    if (Eat("(")) {
      CondP c = ParseIff();
      Expect(")");
      return c;
    }
    if (EatWord("true")) return ma::CTrue();
    if (EatWord("pred")) return ma::CPred(Paren1());
    Path p = ParsePath();
    if (EatWord("in")) {
      Expect("{");
      std::vector<std::string> atoms;
      if (!Eat("}")) {
        do {
          atoms.push_back(AtomLit());
        } while (Eat(","));
        Expect("}");
      }
      return ma::CIn(p, atoms);
    }
    if (Eat("=mon")) return ma::CEq(p, ParsePath(), EqMode::kMon);
    if (Eat("=deep")) return ma::CEq(p, ParsePath(), EqMode::kDeep);
    Expect("=");
    Skip();
    if (pos_ < s_.size() && s_[pos_] == '\'') return ma::CConst(p, Quoted('\''));
    return ma::CEq(p, ParsePath(), EqMode::kAtomic);
  }

  std::string_view s_;
  size_t pos_ = 0;
};

}  // namespace

ExprP ParseMA(std::string_view text) { return MAParser(text).ParseAll(); }

}  // namespace nestql
