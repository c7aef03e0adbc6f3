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

// Constraint-satisfying instantiation of patterns into NLI samples.

#ifndef PATNLI_SAMPLER_HPP_
#define PATNLI_SAMPLER_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "patnli/error.hpp"
#include "patnli/labels.hpp"
#include "patnli/pattern.hpp"
#include "patnli/world.hpp"

namespace patnli {

// Entity per variable, aligned with Pattern::variables().
using Assignment = std::vector<EntityId>;

struct Sample {
  std::string id;  // "<pattern_id>-<ordinal>"
  std::string pattern_id;
  Label label = Label::kEntailment;
  InferenceClass inference_class = InferenceClass::kDirectional;
  std::vector<std::string> premises;
  std::string hypothesis;
  Binding assignment;

  bool operator==(const Sample&) const = default;
};

// Raised when a pattern fails the seed sanity check.
class GenerationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Every assignment satisfying the pattern's restrictions and distinctness,
// ordered lexicographically by entity id (= name) tuple over the sorted
// variables. Empty when the pattern is unsatisfiable.
std::vector<Assignment> enumerate_assignments(const Pattern& pattern,
                                              const MiniWorld& world);

Binding to_binding(const Pattern& pattern, const MiniWorld& world,
                   const Assignment& assignment);

// Renders a template: common nouns become "the <noun>", proper nouns stay
// bare, and the first letter of the sentence is capitalized. Throws
// ValidationError on an unbound placeholder or unknown entity.
std::string realize(const Template& tmpl, const Binding& binding, const MiniWorld& world);

// Builds the sample for one binding.
Sample instantiate(const Pattern& pattern, const MiniWorld& world,
                   const Binding& binding, std::string id);

// The seed problem of a pattern, id "<pattern_id>-seed".
Sample seed_problem(const Pattern& pattern, const MiniWorld& world);

struct CapWarning {
  std::string pattern_id;
  std::size_t requested = 0;
  std::size_t available = 0;
};

struct GenerationResult {
  std::vector<Sample> samples;
  std::vector<CapWarning> warnings;  // in pattern order
};

struct GenerateOptions {
  std::size_t per_pattern = 200;
  std::uint64_t seed = 42;
  // 0 means one worker per hardware thread. Output does not depend on it.
  std::size_t workers = 1;
};

// For each pattern draws min(per_pattern, |assignments|) distinct
// assignments uniformly without replacement from a stream keyed by
// (seed, pattern id). Samples are ordered by pattern id (pattern_id_less),
// then by enumeration order. Throws GenerationError naming the first pattern
// whose seed problem cannot be regenerated.
GenerationResult generate(std::span<const Pattern> patterns, const MiniWorld& world,
                          const GenerateOptions& options);

}  // namespace patnli

#endif  // PATNLI_SAMPLER_HPP_
