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

#include <doctest.h>

#include "patnli/error.hpp"
#include "patnli/xml.hpp"

using namespace patnli;

TEST_CASE("elements, attributes and text") {
  const xml::Element root = xml::parse(
      "\xEF\xBB\xBF<?xml version=\"1.0\"?>\n<!-- c -->\n<a x='1' y=\"&lt;2&gt;\">hi <b/>"
      "<![CDATA[<raw>]]> &amp; &#65;&#x42;</a>");
  CHECK(root.name == "a");
  REQUIRE(root.attribute("y") != nullptr);
  CHECK(*root.attribute("x") == "1");
  CHECK(*root.attribute("y") == "<2>");
  CHECK(root.attribute("z") == nullptr);
  REQUIRE(root.children.size() == 1);
  CHECK(root.children[0].name == "b");
  CHECK(root.text == "hi <raw> & AB");
}

TEST_CASE("line numbers and malformed input") {
  const xml::Element root = xml::parse("<a>\n\n<b/>\n</a>");
  CHECK(root.children.at(0).line == 3);
  CHECK_THROWS_AS(xml::parse("<a><b></a>"), ParseError);
  CHECK_THROWS_AS(xml::parse("<a x='1' x='2'/>"), ParseError);
  CHECK_THROWS_AS(xml::parse("<a>"), ParseError);
  CHECK_THROWS_AS(xml::parse("<!DOCTYPE a><a/>"), ParseError);
  CHECK_THROWS_AS(xml::parse("<a>&bogus;</a>"), ParseError);
  CHECK_THROWS_AS(xml::parse("<a/><b/>"), ParseError);
  try {
    xml::parse("<a>\n<b>\n</c>\n</a>");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
}

TEST_CASE("escape round-trips") {
  const std::string raw = "a<b>&\"c'";
  const xml::Element e = xml::parse("<t v=\"" + xml::escape(raw) + "\">" + xml::escape(raw) + "</t>");
  CHECK(*e.attribute("v") == raw);
  CHECK(e.text == raw);
}
