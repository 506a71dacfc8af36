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

#ifndef NESTQL_XML_H_
#define NESTQL_XML_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace nestql {

// Node-labeled unranked ordered tree. Leaves stand for atomic values.
struct Tree;
using TreeP = std::shared_ptr<const Tree>;

struct Tree {
  std::string label;
  std::vector<TreeP> children;
};

TreeP MakeTree(std::string label, std::vector<TreeP> children = {});

// Only "<a>", "</a>" and "<a/>" tags; whitespace between tags is ignored.
// Tag names use the atom alphabet of the value syntax.
TreeP ParseXML(std::string_view text);
std::string PrintXML(const TreeP& t);

size_t TreeSize(const TreeP& t);
size_t TreeDepth(const TreeP& t);  // a leaf has depth 1
int CompareTree(const TreeP& a, const TreeP& b);
inline bool TreeEqual(const TreeP& a, const TreeP& b) { return CompareTree(a, b) == 0; }

}  // namespace nestql

#endif  // NESTQL_XML_H_
