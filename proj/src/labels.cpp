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

#include "patnli/labels.hpp"

namespace patnli {

std::string_view to_string(Label label) {
  switch (label) {
    case Label::kEntailment:
      return "entailment";
    case Label::kNeutral:
      return "neutral";
    case Label::kContradiction:
      return "contradiction";
  }
  return "?";
}

std::string_view to_string(InferenceClass cls) {
  switch (cls) {
    case InferenceClass::kDirectional:
      return "directional";
    case InferenceClass::kNonProjective:
      return "non_projective";
    case InferenceClass::kProjective:
      return "projective";
    case InferenceClass::kArgumentOrientation:
      return "argument_orientation";
  }
  return "?";
}

std::string_view short_name(Label label) {
  switch (label) {
    case Label::kEntailment:
      return "E";
    case Label::kNeutral:
      return "N";
    case Label::kContradiction:
      return "C";
  }
  return "?";
}

std::string_view short_name(InferenceClass cls) {
  switch (cls) {
    case InferenceClass::kDirectional:
      return "Dir";
    case InferenceClass::kNonProjective:
      return "NonP";
    case InferenceClass::kProjective:
      return "Proj";
    case InferenceClass::kArgumentOrientation:
      return "ArgO";
  }
  return "?";
}

std::optional<Label> parse_label(std::string_view text) {
  for (Label label : kAllLabels) {
    if (text == to_string(label) || text == short_name(label)) return label;
  }
  return std::nullopt;
}

std::optional<InferenceClass> parse_inference_class(std::string_view text) {
  for (InferenceClass cls : kAllInferenceClasses) {
    if (text == to_string(cls) || text == short_name(cls)) return cls;
  }
  return std::nullopt;
}

}  // namespace patnli
