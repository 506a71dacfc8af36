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

// nestql: command-line front end. Exit status 0 on success, 1 when a
// decide-/check- command finds its property false, 2 on any error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "nestql/bridge.h"
#include "nestql/detree.h"
#include "nestql/error.h"
#include "nestql/gen.h"
#include "nestql/lp.h"
#include "nestql/ma.h"
#include "nestql/reductions.h"
#include "nestql/xml.h"
#include "nestql/xq.h"

using namespace nestql;

namespace {

std::string ReadText(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), {}};
}

// Inline text, or the contents of a file when given as @path.
std::string Arg(const std::string& s) { return !s.empty() && s[0] == '@' ? ReadText(s.substr(1)) : s; }

CollKind Semantics(const std::string& s) {
  if (s == "set") return CollKind::kSet;
  if (s == "bag") return CollKind::kBag;
  if (s == "list") return CollKind::kList;
  throw Error("unknown semantics '" + s + "' (set, bag or list)");
}

uint64_t MaxNodes() {
  const char* env = std::getenv("NESTQL_MAX_VALUE_NODES");
  if (!env || !*env) return 10'000'000;
  char* end = nullptr;
  unsigned long long n = std::strtoull(env, &end, 10);
  if (*end || n == 0) throw Error("NESTQL_MAX_VALUE_NODES must be a positive integer");
  return n;
}

std::vector<std::string> Words(const std::string& s) {
  std::istringstream in(s);
  return {std::istream_iterator<std::string>(in), {}};
}

int Report(const char* name, const gen::SuiteResult& r) {
  std::cout << name << ": " << r.cases << " cases, " << r.failures << " failures";
  if (r.discarded) std::cout << ", " << r.discarded << " discarded";
  std::cout << "\n";
  for (const auto& n : r.notes) std::cout << "  " << n << "\n";
  return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nested query languages: monad algebra, deterministic trees, logic programs and Core XQuery"};
  app.require_subcommand(1, 1);

  std::string query, input, doc, program, type_text, tm_file, semantics = "set";
  std::string tm_input;
  int K = 1, m = 0, cases = 200, neg_cases = 200;
  uint64_t seed = 1;
  bool negation = false, expanded = false, evaluate = false, desugar = false;

  auto* eval_ma = app.add_subcommand("eval-ma", "Evaluate a monad algebra query");
  eval_ma->add_option("-q,--query", query, "Query file ('-' for stdin)")->required();
  eval_ma->add_option("-i,--input", input, "Input value file; default <>");
  eval_ma->add_option("-s,--semantics", semantics, "set, bag or list")->capture_default_str();
  eval_ma->add_flag("--desugar", desugar, "Rewrite sugar into the core before evaluating");

  auto* eval_xq = app.add_subcommand("eval-xq", "Evaluate an XQ query on a document bound to $root");
  eval_xq->add_option("-q,--query", query, "Query file")->required();
  eval_xq->add_option("-d,--doc", doc, "XML document file")->required();

  auto* decide_xq = app.add_subcommand("decide-xq", "Boolean reading of an XQ query: root of the result has children");
  decide_xq->add_option("-q,--query", query, "Query file")->required();
  decide_xq->add_option("-d,--doc", doc, "XML document file")->required();

  auto* xq2ma = app.add_subcommand("xq2ma", "Translate XQ to a list-semantics monad algebra query");
  xq2ma->add_option("-q,--query", query, "Query file")->required();

  auto* ma2xq = app.add_subcommand("ma2xq", "Translate a list monad algebra query to XQ");
  ma2xq->add_option("-q,--query", query, "Query file")->required();
  ma2xq->add_option("-t,--type", type_text, "Input type (inline, or @file)")->required();

  auto* ma2lp = app.add_subcommand("ma2lp", "Compile a core query to a nonrecursive logic program");
  ma2lp->add_option("-q,--query", query, "Query file")->required();
  ma2lp->add_flag("--negation", negation, "Allow 'not'");

  auto* eval_lp = app.add_subcommand("eval-lp", "Evaluate a logic program; prints the goal paths at eps");
  eval_lp->add_option("-p,--program", program, "Program file")->required();

  auto* det_enc = app.add_subcommand("detree-encode", "Value to deterministic tree path set");
  det_enc->add_option("-i,--input", input, "Value file")->required();
  auto* det_eval = app.add_subcommand("detree-eval", "Evaluate a core query on a path set");
  det_eval->add_option("-q,--query", query, "Query file")->required();
  det_eval->add_option("-i,--input", input, "Path set file")->required();
  auto* det_dec = app.add_subcommand("detree-decode", "Path set to value");
  det_dec->add_option("-i,--input", input, "Path set file")->required();
  det_dec->add_option("-t,--type", type_text, "Type hint (inline, or @file)");

  auto* gen_tm = app.add_subcommand("gen-tm", "Query deciding acceptance of a machine within 2^K steps");
  gen_tm->add_option("--tm", tm_file, "Machine file")->required();
  gen_tm->add_option("-x,--word", tm_input, "Input symbols, space separated");
  gen_tm->add_option("-K", K, "Tape and time exponent")->capture_default_str();
  gen_tm->add_flag("--expanded", expanded, "Define =mon from atomic equality");
  gen_tm->add_flag("--eval", evaluate, "Evaluate the query and compare with the simulator");

  auto* gen_dexp = app.add_subcommand("gen-dexp", "Query with a doubly exponential result");
  gen_dexp->add_option("-m", m, "Number of squarings")->required();
  gen_dexp->add_flag("--eval", evaluate, "Evaluate under set semantics");

  auto* flat = app.add_subcommand("flat", "Flat relational encoding of a value");
  flat->add_option("-i,--input", input, "Value file")->required();

  auto* vtau = app.add_subcommand("vtau", "Rebuild a value from its flat encoding by a query");
  vtau->add_option("-t,--type", type_text, "Value type (inline, or @file)")->required();
  vtau->add_option("-i,--input", input, "Value file; without it the query is printed");

  auto add_suite = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("--seed", seed, "Random seed")->capture_default_str();
    s->add_option("--cases", cases, "Number of cases")->capture_default_str();
    return s;
  };
  auto* c62 = add_suite("check-xq2ma", "XQ to MA translation, random queries and documents (cases per mode)");
  auto* c63 = add_suite("check-ma2xq", "MA to XQ translation, random queries and values");
  auto* cor = add_suite("check-oracles", "Direct, path-set and logic program evaluation agree");
  cor->add_option("--negation-cases", neg_cases, "Boolean queries with negation")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    EvalOptions eo;
    eo.max_nodes = MaxNodes();
    if (eval_ma->parsed()) {
      eo.sem = Semantics(semantics);
      eo.native_extended = !desugar;
      Value v = input.empty() ? Value::Unit() : ParseValue(ReadText(input));
      std::cout << PrintValue(EvalMA(ParseMA(ReadText(query)), v, eo)) << "\n";
    } else if (eval_xq->parsed()) {
      for (const auto& t : EvalXQ(ParseXQ(ReadText(query)), {ParseXML(ReadText(doc))})) std::cout << PrintXML(t) << "\n";
    } else if (decide_xq->parsed()) {
      bool b = DecideXQ(ParseXQ(ReadText(query)), ParseXML(ReadText(doc)));
      std::cout << (b ? "true" : "false") << "\n";
      return b ? 0 : 1;
    } else if (xq2ma->parsed()) {
      std::cout << PrintMA(XQToMA(DesugarXQ(ParseXQ(ReadText(query)), true))) << "\n";
    } else if (ma2xq->parsed()) {
      std::cout << PrintXQ(MAToXQ(ParseMA(ReadText(query)), ParseType(Arg(type_text)))) << "\n";
    } else if (ma2lp->parsed()) {
      LPOptions o;
      o.with_negation = negation;
      std::cout << PrintLP(CompileLP(ParseMA(ReadText(query)), o));
    } else if (eval_lp->parsed()) {
      std::cout << PrintPathSet(EvalLP(ParseLP(ReadText(program)))) << "\n";
    } else if (det_enc->parsed()) {
      std::cout << PrintPathSet(EncodeDet(ParseValue(ReadText(input)))) << "\n";
    } else if (det_eval->parsed()) {
      std::cout << PrintPathSet(EvalDet(ParseMA(ReadText(query)), ParsePathSet(ReadText(input)))) << "\n";
    } else if (det_dec->parsed()) {
      std::optional<Type> hint;
      if (!type_text.empty()) hint = ParseType(Arg(type_text));
      std::cout << PrintValue(DecodeDet(ParsePathSet(ReadText(input)), hint)) << "\n";
    } else if (gen_tm->parsed()) {
      TMSpec tm = ParseTM(ReadText(tm_file));
      std::vector<std::string> word = Words(tm_input);
      ExprP q = GenTMQuery(tm, word, K, {!expanded});
      if (!evaluate) {
        std::cout << PrintMA(q) << "\n";
        return 0;
      }
      bool got = !EvalMA(q, Value::Unit(), eo).elems().empty();
      bool want = SimulateNTM(tm, word, K, long{1} << K);
      std::cout << "query: " << (got ? "accept" : "reject") << "\nsimulator: " << (want ? "accept" : "reject") << "\n";
      return got == want ? 0 : 1;
    } else if (gen_dexp->parsed()) {
      ExprP q = GenDoublyExp(m);
      std::cout << (evaluate ? PrintValue(EvalMA(q, Value::Unit(), eo)) : PrintMA(q)) << "\n";
    } else if (flat->parsed()) {
      Value v = ParseValue(ReadText(input));
      std::cout << "% " << FlatSerialize(v) << "\n" << PrintFlatDB(FlatEncode(v));
    } else if (vtau->parsed()) {
      Type t = ParseType(Arg(type_text));
      ExprP q = GenVPrime(t);
      if (input.empty()) {
        std::cout << PrintMA(q) << "\n";
      } else {
        std::cout << PrintValue(EvalMA(q, FlatDBValue(FlatEncode(ParseValue(ReadText(input)))), eo)) << "\n";
      }
    } else if (c62->parsed()) {
      return Report("check-xq2ma", gen::SuiteXQToMA(seed, cases));
    } else if (c63->parsed()) {
      return Report("check-ma2xq", gen::SuiteMAToXQ(seed, cases));
    } else if (cor->parsed()) {
      return Report("check-oracles", gen::SuiteOracles(seed, cases, neg_cases));
    }
  } catch (const std::exception& e) {
    std::cerr << "nestql: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
