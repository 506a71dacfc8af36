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

#include "nestql/xml.h"

#include <algorithm>
#include <cctype>

#include "nestql/error.h"
#include "nestql/value.h"

namespace nestql {

TreeP MakeTree(std::string label, std::vector<TreeP> children) {
  return std::make_shared<const Tree>(Tree{std::move(label), std::move(children)});
}

namespace {

class XMLParser {
 public:
  explicit XMLParser(std::string_view s) : s_(s) {}

  TreeP Document() {
    TreeP t = Element();
    Skip();
    if (pos_ != s_.size()) Fail("content after the root element");
    return t;
  }

 private:
  [[noreturn]] void Fail(const std::string& m) { throw SyntaxError("xml: " + m, pos_); }

  void Skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::string Name() {
    size_t start = pos_;
    while (pos_ < s_.size() && IsBareAtom(s_.substr(pos_, 1))) ++pos_;
    if (start == pos_) Fail("expected a tag name");
    return std::string(s_.substr(start, pos_ - start));
  }

  void Expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) Fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  TreeP Element() {
    Skip();
    if (pos_ >= s_.size() || s_[pos_] != '<') Fail("expected '<'");
    ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '/') Fail("unexpected closing tag");
    std::string name = Name();
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      Expect('>');
      return MakeTree(name);
    }
    if (pos_ < s_.size() && s_[pos_] != '>') Fail("attributes are not supported");
    Expect('>');
    std::vector<TreeP> kids;
    while (true) {
      Skip();
      if (pos_ >= s_.size()) Fail("unclosed <" + name + ">");
      if (s_[pos_] != '<') Fail("text content is not supported");
      if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '/') {
        pos_ += 2;
        size_t at = pos_;
        std::string close = Name();
        if (close != name) {
          pos_ = at;
          Fail("mismatched </" + close + ">, expected </" + name + ">");
        }
        Skip();
        Expect('>');
        return MakeTree(name, std::move(kids));
      }
      kids.push_back(Element());
    }
  }

  std::string_view s_;
  size_t pos_ = 0;
};

void Print(const TreeP& t, std::string& out) {
  if (t->children.empty()) {
    out += "<" + t->label + "/>";
    return;
  }
  out += "<" + t->label + ">";
  for (const auto& c : t->children) Print(c, out);
  out += "</" + t->label + ">";
}

}  // namespace

TreeP ParseXML(std::string_view text) { return XMLParser(text).Document(); }

std::string PrintXML(const TreeP& t) {
  std::string out;
  Print(t, out);
  return out;
}

size_t TreeSize(const TreeP& t) {
  size_t n = 1;
  for (const auto& c : t->children) n += TreeSize(c);
  return n;
}

size_t TreeDepth(const TreeP& t) {
  size_t d = 0;
  for (const auto& c : t->children) d = std::max(d, TreeDepth(c));
  return d + 1;
}

int CompareTree(const TreeP& a, const TreeP& b) {
  if (a == b) return 0;
  if (int c = a->label.compare(b->label)) return c < 0 ? -1 : 1;
  size_t n = std::min(a->children.size(), b->children.size());
  for (size_t i = 0; i < n; ++i) {
    if (int c = CompareTree(a->children[i], b->children[i])) return c;
  }
  if (a->children.size() == b->children.size()) return 0;
  return a->children.size() < b->children.size() ? -1 : 1;
}

}  // namespace nestql
