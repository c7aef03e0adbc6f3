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

#ifndef PATNLI_LABELS_HPP_
#define PATNLI_LABELS_HPP_

#include <array>
#include <optional>
#include <string_view>

namespace patnli {

enum class Label { kEntailment = 0, kNeutral = 1, kContradiction = 2 };

inline constexpr std::array<Label, 3> kAllLabels = {
    Label::kEntailment, Label::kNeutral, Label::kContradiction};

// Inference classes of spatial NLI problems. Closed set: breakdowns and
// statistics tables are keyed by it.
enum class InferenceClass {
  kDirectional = 0,
  kNonProjective = 1,
  kProjective = 2,
  kArgumentOrientation = 3,
};

inline constexpr std::array<InferenceClass, 4> kAllInferenceClasses = {
    InferenceClass::kDirectional, InferenceClass::kNonProjective,
    InferenceClass::kProjective, InferenceClass::kArgumentOrientation};

std::string_view to_string(Label label);
std::string_view to_string(InferenceClass cls);

// Short forms used in tables: E/N/C and Dir/NonP/Proj/ArgO.
std::string_view short_name(Label label);
std::string_view short_name(InferenceClass cls);

// Accepts the canonical names and the short forms.
std::optional<Label> parse_label(std::string_view text);
std::optional<InferenceClass> parse_inference_class(std::string_view text);

}  // namespace patnli

#endif  // PATNLI_LABELS_HPP_
