/*
 * Copyright 2026 The patnli Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Small non-validating XML reader, enough for pattern files: elements,
// attributes, character data, comments, CDATA sections, processing
// instructions (skipped) and the predefined and numeric entities. No DTDs
// or namespaces.

#ifndef PATNLI_XML_HPP_
#define PATNLI_XML_HPP_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace patnli::xml {

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;  // document order
  std::vector<Element> children;
  std::string text;  // concatenated character data directly inside this element
  int line = 0;

  const std::string* attribute(std::string_view key) const;
};

// Parses a document with a single root element. Throws ParseError with a
// line number on malformed input.
Element parse(std::string_view document);

// Escapes &, <, >, " and ' for use in text or attribute values.
std::string escape(std::string_view text);

}  // namespace patnli::xml

#endif  // PATNLI_XML_HPP_
