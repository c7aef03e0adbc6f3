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

// Aggregation of 5-point Likert annotations into 3-way NLI labels: Cohen's
// kappa, search over order-preserving 5-to-3 mappings that maximize mean
// pairwise agreement, and majority filtering.

#ifndef PATNLI_ANNOTATION_HPP_
#define PATNLI_ANNOTATION_HPP_

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patnli/labels.hpp"

namespace patnli {

// Scale points 1..5 plus the two opt-outs.
enum class Likert {
  kDefinitelyFalse = 1,
  kMostLikelyFalse = 2,
  kUnknown = 3,
  kMostLikelyTrue = 4,
  kDefinitelyTrue = 5,
  kDifficult = 6,
  kSkip = 7,
};

std::string_view to_string(Likert value);
// Accepts "definitely_false", "definitely false", "most-likely-true", the
// digits 1 to 5, "difficult" and "skip".
std::optional<Likert> parse_likert(std::string_view text);
inline bool is_scale_point(Likert value) { return value <= Likert::kDefinitelyTrue; }

struct LikertAnnotation {
  std::string item_id;
  std::string annotator_id;
  Likert value = Likert::kUnknown;
};

// CSV with header item_id,annotator_id,value. Throws ParseError on bad rows
// and ValidationError when an (item, annotator) pair repeats.
std::vector<LikertAnnotation> read_annotations_csv(std::string_view text);

// Order-preserving map of the 5-point scale onto three labels: points
// 1..lower go to contradiction, lower+1..upper to neutral and upper+1..5 to
// entailment, with 1 <= lower < upper <= 4. There are six of them.
class MonotoneMapping {
 public:
  MonotoneMapping(int lower, int upper);
  static const std::array<MonotoneMapping, 6>& all();  // lexicographic order

  int lower() const { return lower_; }
  int upper() const { return upper_; }
  // `value` must be a scale point.
  Label map(Likert value) const;
  std::string to_string() const;  // "(2,3)"

  friend auto operator<=>(const MonotoneMapping&, const MonotoneMapping&) = default;

 private:
  int lower_;
  int upper_;
};

// (p_o - p_e) / (1 - p_e); 1 when both annotators use one and the same label
// throughout. Throws ValidationError on empty or unequal-length input.
double cohen_kappa(std::span<const Label> a, std::span<const Label> b);

enum class MissingPolicy {
  kPairwise,  // drop an item from a pair when either annotator opted out
  kListwise,  // drop an item everywhere when any annotator opted out
};

enum class MappingSearch {
  kJoint,   // exhaustive over all 6^A combinations
  kGreedy,  // coordinate ascent from (2,3) for every annotator
};

struct MappingOptions {
  MissingPolicy missing = MissingPolicy::kPairwise;
  MappingSearch search = MappingSearch::kJoint;
};

struct PairAgreement {
  std::string first;
  std::string second;
  std::size_t items = 0;
  double kappa = 0.0;
};

struct MappingResult {
  std::map<std::string, MonotoneMapping> mappings;
  double mean_kappa = 0.0;
  std::vector<PairAgreement> pairs;  // under the chosen mappings
};

// Mapping per annotator maximizing the unweighted mean of pairwise kappas.
// Ties go to the lexicographically smallest tuple of cut points, annotators
// taken in id order. Throws ValidationError with fewer than two annotators,
// or when a pair shares fewer than two usable items.
MappingResult best_mappings(std::span<const LikertAnnotation> annotations,
                            const MappingOptions& options = {});

// item -> 3-way labels under `mappings`; opt-outs are left out.
std::map<std::string, std::vector<Label>> apply_mappings(
    std::span<const LikertAnnotation> annotations,
    const std::map<std::string, MonotoneMapping>& mappings);

// Items whose most frequent label is chosen by a strict majority of their
// annotators, with that label. Items with fewer than two labels are dropped.
std::map<std::string, Label> majority_filter(
    const std::map<std::string, std::vector<Label>>& labels);

}  // namespace patnli

#endif  // PATNLI_ANNOTATION_HPP_
