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

#include "patnli/xml.hpp"

#include <cctype>
#include <charconv>
#include <fmt/format.h>

#include "patnli/error.hpp"

namespace patnli::xml {

const std::string* Element::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

namespace {

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool is_name_char(char c) {
  return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) ||
         c == '-' || c == '.';
}

class Parser {
 public:
  explicit Parser(std::string_view doc) : doc_(doc) {}

  Element parse_document() {
    if (doc_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    skip_misc();
    if (eof() || peek() != '<') fail("expected root element");
    Element root = parse_element();
    skip_misc();
    if (!eof()) fail("content after root element");
    return root;
  }

 private:
  bool eof() const { return pos_ >= doc_.size(); }
  char peek() const { return doc_[pos_]; }
  bool starts_with(std::string_view s) const { return doc_.substr(pos_, s.size()) == s; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < doc_.size(); ++i) {
      if (doc_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  [[noreturn]] void fail(std::string_view what) const {
    throw ParseError(fmt::format("XML line {}: {}", line_, what));
  }

  void skip_space() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  void skip_until(std::string_view terminator, std::string_view what) {
    std::size_t end = doc_.find(terminator, pos_);
    if (end == std::string_view::npos) fail(fmt::format("unterminated {}", what));
    advance(end + terminator.size() - pos_);
  }

  // Whitespace, comments and processing instructions outside the root.
  void skip_misc() {
    for (;;) {
      skip_space();
      if (starts_with("<!--")) {
        skip_until("-->", "comment");
      } else if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (starts_with("<!DOCTYPE")) {
        fail("DOCTYPE declarations are not supported");
      } else {
        return;
      }
    }
  }

  std::string parse_name() {
    if (eof() || !is_name_start(peek())) fail("expected a name");
    std::size_t start = pos_;
    while (!eof() && is_name_char(peek())) advance();
    return std::string(doc_.substr(start, pos_ - start));
  }

  void parse_reference(std::string& out) {
    // At '&'.
    std::size_t end = doc_.find(';', pos_);
    if (end == std::string_view::npos || end - pos_ > 12) fail("bad entity reference");
    std::string_view ref = doc_.substr(pos_ + 1, end - pos_ - 1);
    if (ref == "lt") {
      out += '<';
    } else if (ref == "gt") {
      out += '>';
    } else if (ref == "amp") {
      out += '&';
    } else if (ref == "quot") {
      out += '"';
    } else if (ref == "apos") {
      out += '\'';
    } else if (!ref.empty() && ref[0] == '#') {
      int base = 10;
      std::string_view digits = ref.substr(1);
      if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
        base = 16;
        digits.remove_prefix(1);
      }
      std::uint32_t cp = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, base);
      if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() ||
          cp > 0x10FFFF) {
        fail(fmt::format("bad character reference '&{};'", ref));
      }
      append_utf8(out, static_cast<char32_t>(cp));
    } else {
      fail(fmt::format("unknown entity '&{};'", ref));
    }
    advance(end + 1 - pos_);
  }

  std::string parse_attribute_value() {
    if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
    const char quote = peek();
    advance();
    std::string value;
    while (!eof() && peek() != quote) {
      if (peek() == '<') fail("'<' in attribute value");
      if (peek() == '&') {
        parse_reference(value);
      } else {
        value += peek();
        advance();
      }
    }
    if (eof()) fail("unterminated attribute value");
    advance();
    return value;
  }

  Element parse_element() {
    Element element;
    element.line = line_;
    advance();  // '<'
    element.name = parse_name();
    for (;;) {
      const bool had_space = !eof() && std::isspace(static_cast<unsigned char>(peek()));
      skip_space();
      if (eof()) fail(fmt::format("unterminated start tag <{}>", element.name));
      if (starts_with("/>")) {
        advance(2);
        return element;
      }
      if (peek() == '>') {
        advance();
        break;
      }
      if (!had_space) fail("expected whitespace between attributes");
      std::string key = parse_name();
      skip_space();
      if (eof() || peek() != '=') fail(fmt::format("expected '=' after attribute '{}'", key));
      advance();
      skip_space();
      std::string value = parse_attribute_value();
      if (element.attribute(key) != nullptr) {
        fail(fmt::format("duplicate attribute '{}' on <{}>", key, element.name));
      }
      element.attributes.emplace_back(std::move(key), std::move(value));
    }

    for (;;) {
      if (eof()) fail(fmt::format("element <{}> is not closed", element.name));
      if (starts_with("</")) {
        advance(2);
        std::string closing = parse_name();
        if (closing != element.name) {
          fail(fmt::format("mismatched end tag </{}>, expected </{}>", closing,
                           element.name));
        }
        skip_space();
        if (eof() || peek() != '>') fail("expected '>'");
        advance();
        return element;
      }
      if (starts_with("<!--")) {
        skip_until("-->", "comment");
      } else if (starts_with("<![CDATA[")) {
        advance(9);
        std::size_t end = doc_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA section");
        element.text.append(doc_.substr(pos_, end - pos_));
        advance(end + 3 - pos_);
      } else if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (peek() == '<') {
        element.children.push_back(parse_element());
      } else if (peek() == '&') {
        parse_reference(element.text);
      } else {
        element.text += peek();
        advance();
      }
    }
  }

  std::string_view doc_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

Element parse(std::string_view document) { return Parser(document).parse_document(); }

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace patnli::xml
