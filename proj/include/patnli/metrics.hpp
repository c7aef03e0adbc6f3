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

// Scoring model predictions against a corpus: sample accuracy, pattern
// accuracy (PA) at consistency thresholds, PA curves and their area,
// per-group breakdowns and per-pattern cartography.
//
// With N patterns, M_i predictions and c_i correct ones for pattern i:
//   accuracy = sum c_i / sum M_i
//   PA_t     = (1/N) * #{ i : c_i / M_i >= t }
//   AUC      = integral of PA_t over t in [0, 1] = (1/N) * sum c_i / M_i
// so AUC equals accuracy when all M_i are equal.

#ifndef PATNLI_METRICS_HPP_
#define PATNLI_METRICS_HPP_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patnli/corpus.hpp"
#include "patnli/labels.hpp"

namespace patnli {

// A consistency threshold held as an exact fraction in [0, 1].
class Threshold {
 public:
  Threshold() = default;

  // Decimal ("0.95", ".5", "1") or fraction ("2/3") text. Throws
  // ValidationError outside [0, 1] and ParseError on malformed text.
  static Threshold parse(std::string_view text);
  // Uses the shortest decimal that round-trips to `value`, so 0.67 is 67/100.
  static Threshold from_double(double value);
  static Threshold fraction(std::int64_t numerator, std::int64_t denominator);

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  long double exact_value() const {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }
  // Shortest decimal for the value, e.g. "0.95", "1", "0.6666666666666666".
  std::string to_string() const;

  // correct / total >= threshold, decided in integer arithmetic.
  bool admits(std::size_t correct, std::size_t total) const;

  friend bool operator==(const Threshold& a, const Threshold& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Threshold& a, const Threshold& b);

 private:
  Threshold(std::int64_t num, std::int64_t den);
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Comma-separated list of thresholds.
std::vector<Threshold> parse_thresholds(std::string_view list);

struct PredictionRecord {
  std::string sample_id;
  std::string pattern_id;
  Label predicted = Label::kEntailment;
  std::optional<std::array<double, 3>> probs;  // indexed by Label
};

// One record per line: {"sample_id","pattern_id","pred","probs"?}. When
// probs are present they must lie in [0,1], sum to 1 within 1e-6 and have
// `pred` as an argmax. Throws ParseError naming the line.
std::vector<PredictionRecord> read_predictions(std::string_view text);
std::string write_predictions(std::span<const PredictionRecord> records);

struct PatternPredictions {
  std::string pattern_id;
  Label gold = Label::kEntailment;
  InferenceClass inference_class = InferenceClass::kDirectional;
  std::vector<PredictionRecord> records;

  std::size_t total() const { return records.size(); }
  std::size_t correct() const;
};

// Predictions grouped by pattern, in pattern_id_less order.
class PredictionSet {
 public:
  // Throws ValidationError when empty or when a pattern has no records.
  explicit PredictionSet(std::vector<PatternPredictions> patterns);

  // Joins records with their corpus samples. Throws ValidationError for an
  // unknown sample id, a pattern id that disagrees with the corpus, a
  // duplicate prediction, or a pattern whose samples disagree on the label.
  static PredictionSet build(const Corpus& corpus, std::span<const PredictionRecord> records);

  const std::vector<PatternPredictions>& patterns() const { return patterns_; }
  std::size_t sample_count() const;

 private:
  std::vector<PatternPredictions> patterns_;
};

double sample_accuracy(const PredictionSet& preds);
double pattern_accuracy(const PredictionSet& preds, const Threshold& t);

struct PACurve {
  struct Point {
    Threshold threshold;
    double pa = 0.0;
  };
  std::vector<Point> points;  // strictly increasing thresholds
};

// PA at every grid threshold and at every breakpoint c_i / M_i. Throws
// ValidationError on an empty grid.
PACurve pa_curve(const PredictionSet& preds, std::span<const Threshold> grid);

// Evenly spaced grid 0, 1/steps, ..., 1.
std::vector<Threshold> uniform_grid(std::int64_t steps);

// Exact integral of the PA step function over [0, 1].
double pa_auc(const PredictionSet& preds);

enum class GroupBy { kLabel, kInferenceClass };
// "label", or "class" / "inference_class". Throws ValidationError otherwise.
GroupBy parse_group_by(std::string_view key);

struct GroupMetrics {
  std::string group;
  std::size_t patterns = 0;
  std::size_t samples = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
  std::vector<double> pa;  // aligned with the requested thresholds
};

// Metrics restricted to each group's patterns, for groups that occur.
std::vector<GroupMetrics> breakdown(const PredictionSet& preds, GroupBy by,
                                    std::span<const Threshold> thresholds);

struct CartographyPoint {
  std::string pattern_id;
  Label gold = Label::kEntailment;
  double confidence = 0.0;   // mean probability of the gold label
  double variability = 0.0;  // population standard deviation of the same
};

// Throws ValidationError when a record lacks probabilities.
std::vector<CartographyPoint> cartography(const PredictionSet& preds);

}  // namespace patnli

#endif  // PATNLI_METRICS_HPP_
