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

// NLI patterns: labeled premise/hypothesis templates with NP placeholders,
// selection restrictions over the placeholders and a seed assignment that
// reproduces the original hand-written problem.
//
// Pattern file layout:
//
//   <patterns>
//     <pattern id="38" label="entailment" class="non_projective">
//       <premise>[X] is in [Y].</premise>
//       <premise>[Y] is in [Z].</premise>
//       <hypothesis>[X] is in [Z].</hypothesis>
//       <restrict var="X" class="person"/>
//       <restrict rel="fit_in" vars="Y Z"/>
//       <seed X="John" Y="garden" Z="church"/>
//     </pattern>
//   </patterns>
//
// All placeholders must denote distinct entities unless the pattern sets
// distinct="none"; explicit <distinct vars="..."/> elements add further
// distinctness groups in that case.

#ifndef PATNLI_PATTERN_HPP_
#define PATNLI_PATTERN_HPP_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "patnli/labels.hpp"
#include "patnli/world.hpp"

namespace patnli {

// A sentence template. Placeholders are written `[VAR]` where VAR is an
// upper-case letter followed by upper-case letters, digits or '_'. Any other
// bracketed text is literal. Repeated placeholders corefer.
class Template {
 public:
  struct Token {
    bool placeholder = false;
    std::string text;  // literal text, or the variable name
    bool operator==(const Token&) const = default;
  };

  Template() = default;
  static Template parse(std::string_view text);

  const std::vector<Token>& tokens() const { return tokens_; }
  // Distinct variables in order of first occurrence.
  std::vector<std::string> placeholders() const;
  // Source text; parse(source()) == *this.
  std::string source() const;

  bool operator==(const Template&) const = default;

 private:
  std::vector<Token> tokens_;
};

struct ClassRestriction {
  std::string var;
  ClassExpr expr;
};

struct RelationRestriction {
  std::string relation;
  std::vector<std::string> vars;
};

struct DistinctRestriction {
  std::vector<std::string> vars;
};

using Restriction =
    std::variant<ClassRestriction, RelationRestriction, DistinctRestriction>;

// Variable -> entity name.
using Binding = std::map<std::string, std::string>;

struct Pattern {
  std::string id;
  Label label = Label::kEntailment;
  InferenceClass inference_class = InferenceClass::kDirectional;
  std::vector<Template> premises;  // 1 to 3
  Template hypothesis;
  std::vector<Restriction> restrictions;
  bool all_distinct = true;
  Binding seed;
  std::string note;  // free text, e.g. provenance of a reconstruction

  // Sorted variable names over premises and hypothesis.
  std::vector<std::string> variables() const;
};

// Throws ValidationError when `pattern` breaks an invariant or refers to
// classes, relations or entities missing from `world`.
void validate_pattern(const Pattern& pattern, const MiniWorld& world);

// Parses and validates a pattern file. Ids must be unique.
std::vector<Pattern> load_patterns(std::string_view source, const MiniWorld& world);

// Writes patterns back in the file layout above; load_patterns on the result
// yields the same patterns.
std::string serialize_patterns(std::span<const Pattern> patterns);

// True iff `binding` is complete and satisfies every restriction, including
// distinctness. Unknown entity names make the binding unsatisfying.
bool satisfies(const Pattern& pattern, const MiniWorld& world, const Binding& binding);

// Sanity check: the seed assignment satisfies every restriction.
bool check_seed(const Pattern& pattern, const MiniWorld& world);

// Total order on pattern ids: leading decimal number compared numerically,
// then the rest bytewise ("9" < "10" < "31a" < "99*d" < "100").
bool pattern_id_less(std::string_view a, std::string_view b);

}  // namespace patnli

#endif  // PATNLI_PATTERN_HPP_
