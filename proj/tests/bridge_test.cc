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

#include <gtest/gtest.h>

#include "nestql/bridge.h"
#include "nestql/error.h"
#include "nestql/gen.h"

namespace nestql {
namespace {

TEST(EncodeC, Examples) {
  EXPECT_EQ(EncodeC(ParseXML("<a/>")), ParseValue("<label: a, children: []>"));
  EXPECT_EQ(EncodeC(ParseXML("<a><b/></a>")), ParseValue("<label: a, children: [<label: b, children: []>]>"));
  EXPECT_EQ(EncodeC(ParseXML("<a><c/><b/></a>")),
            ParseValue("<label: a, children: [<label: c, children: []>, <label: b, children: []>]>"));
  TreeP t = ParseXML("<a><b><c/></b><b/></a>");
  EXPECT_TRUE(TreeEqual(DecodeC(EncodeC(t)), t));
}

TEST(EncodeT, Examples) {
  EXPECT_EQ(PrintXML(EncodeT(ParseValue("[a, b]"))), "<list><a/><b/></list>");
  EXPECT_EQ(PrintXML(EncodeT(ParseValue("<A: a, B: b>"))), "<tup><A><a/></A><B><b/></B></tup>");
  EXPECT_EQ(PrintXML(EncodeT(ParseValue("[]"))), "<list/>");
  EXPECT_THROW(EncodeT(ParseValue("{a}")), Error);
}

TEST(XQToMA, EmptyElement) {
  EXPECT_EQ(PrintMA(XQToMA(ParseXQ("<a/>"))), PrintMA(ParseMA("tup[label = 'a', children = empty] ; sng")));
}

TEST(XQToMA, ChildStepSelectsByLabel) {
  std::string s = PrintMA(XQToMA(ParseXQ("$root/child::t")));
  EXPECT_NE(s.find("select[N = 'root']"), std::string::npos) << s;
  EXPECT_NE(s.find("flatmap(pi[children] ; select[label = 't'])"), std::string::npos) << s;
}

TEST(XQToMA, AtomicEqualityComparesLabels) {
  XQP q = ParseXQ("for $x in $root/* return for $y in $root/* return $x eq $y");
  std::string s = PrintMA(XQToMA(q));
  EXPECT_NE(s.find("select[1.V.label = 2.V.label]"), std::string::npos) << s;
  EXPECT_TRUE(CheckXQToMA(q, ParseXML("<r><a/><b/><a/></r>")));
}

TEST(XQToMA, RejectsDescendantAxis) { EXPECT_THROW(XQToMA(ParseXQ("$root/descendant::a")), Error); }

TEST(MAToXQ, TranslationRules) {
  Type t = ParseType("[Dom]");
  EXPECT_EQ(PrintXQ(MAToXQ(ma::Sng(), t)), "<list>{ $root }</list>");
  EXPECT_EQ(PrintXQ(MAToXQ(ma::Const("c"), t)), "<c/>");
  XQP fl = MAToXQ(ma::Flatten(), ParseType("[[Dom]]"));
  TreeP in = EncodeT(ParseValue("[[a, b], [], [c]]"));
  auto r = EvalXQ(fl, {in});
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(PrintXML(r[0]), "<list><a/><b/><c/></list>");
}

TEST(XQToMACheck, HandCases) {
  TreeP doc = ParseXML("<a><b/><c><b/></c></a>");
  for (const char* s : {"$root", "<a/>", "for $x in $root/* return <w>{ $x/child::b }</w>",
                        "let $y := <k>{ $root/child::c }</k> return $y/child::c/child::b",
                        "for $x in $root/* return if (not($x/child::b)) then $x",
                        "for $x in $root/child::b return for $y in $root/c/b return $x = $y"}) {
    XQP q = DesugarXQ(ParseXQ(s), true);
    EXPECT_TRUE(CheckXQToMA(q, doc)) << s;
  }
}

TEST(MAToXQCheck, HandCases) {
  struct C {
    const char* q;
    const char* v;
    const char* t;
  } cases[] = {
      {"map(sng) ; flatten", "[a, b]", "[Dom]"},
      {"flatmap(pi[B])", "[<A: a, B: [b, c]>, <A: d, B: []>]", "[<A: Dom, B: [Dom]>]"},
      {"pairwith[B]", "<A: a, B: [b, c]>", "<A: Dom, B: [Dom]>"},
      {"union(pi[A], pi[B])", "<A: [a], B: [b, a]>", "<A: [Dom], B: [Dom]>"},
      {"select[A = B]", "[<A: a, B: a>, <A: a, B: b>]", "[<A: Dom, B: Dom>]"},
      {"map(eqatom[A, B] ; not)", "[<A: a, B: a>, <A: a, B: b>]", "[<A: Dom, B: Dom>]"},
      {"map(eq[A, B]) ; map(true)", "[<A: [a], B: [a]>, <A: [a], B: []>]", "[<A: [Dom], B: [Dom]>]"},
  };
  for (const auto& c : cases) EXPECT_TRUE(CheckMAToXQ(ParseMA(c.q), ParseValue(c.v), ParseType(c.t))) << c.q;
}

TEST(BridgeProperty, XQToMARandom) {
  gen::SuiteResult r = gen::SuiteXQToMA(51, 60);
  EXPECT_TRUE(r.ok()) << (r.notes.empty() ? "" : r.notes[0]);
}

TEST(BridgeProperty, MAToXQRandom) {
  gen::SuiteResult r = gen::SuiteMAToXQ(52, 100);
  EXPECT_TRUE(r.ok()) << (r.notes.empty() ? "" : r.notes[0]);
}

}  // namespace
}  // namespace nestql
