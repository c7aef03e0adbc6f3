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

#include "patnli/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <fmt/format.h>
#include <json.hpp>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "patnli/error.hpp"

namespace patnli {

// Threshold

Threshold::Threshold(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw ValidationError("threshold denominator must be positive");
  if (num < 0 || num > den) {
    throw ValidationError(fmt::format("threshold {}/{} is outside [0, 1]", num, den));
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Threshold Threshold::fraction(std::int64_t numerator, std::int64_t denominator) {
  return Threshold(numerator, denominator);
}

Threshold Threshold::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  auto bad = [&]() -> ParseError {
    return ParseError(fmt::format("malformed threshold '{}'", text));
  };
  auto parse_int = [&](std::string_view digits) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) throw bad();
    return v;
  };

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Threshold(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const std::size_t dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if ((whole.empty() && frac.empty()) || whole.size() > 18 || frac.size() > 17) throw bad();
  auto all_digits = [](std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (!all_digits(whole) || !all_digits(frac)) throw bad();
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const std::int64_t w = whole.empty() ? 0 : parse_int(whole);
  const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
  if (w > 1) throw ValidationError(fmt::format("threshold '{}' is outside [0, 1]", text));
  const std::int64_t num = w * den + f;
  return Threshold(negative ? -num : num, den);
}

Threshold Threshold::from_double(double value) {
  if (!std::isfinite(value)) throw ValidationError("threshold must be finite");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  if (ec != std::errc()) throw ValidationError("threshold is not representable");
  try {
    return parse(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
  } catch (const ParseError&) {
    throw ValidationError(fmt::format("threshold {} has too many decimal digits", value));
  }
}

std::string Threshold::to_string() const {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value());
  return std::string(buf, static_cast<std::size_t>(ptr - buf));
}

// GCC and Clang both provide a 128-bit integer; -Wpedantic needs the marker.
__extension__ using Wide = __int128;

bool Threshold::admits(std::size_t correct, std::size_t total) const {
  return static_cast<Wide>(correct) * den_ >= static_cast<Wide>(num_) * total;
}

std::strong_ordering operator<=>(const Threshold& a, const Threshold& b) {
  const Wide lhs = static_cast<Wide>(a.num_) * b.den_;
  const Wide rhs = static_cast<Wide>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::vector<Threshold> parse_thresholds(std::string_view list) {
  std::vector<Threshold> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    std::size_t comma = list.find(',', pos);
    if (comma == std::string_view::npos) comma = list.size();
    out.push_back(Threshold::parse(list.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

std::vector<Threshold> uniform_grid(std::int64_t steps) {
  if (steps <= 0) throw ValidationError("grid needs a positive number of steps");
  std::vector<Threshold> out;
  for (std::int64_t i = 0; i <= steps; ++i) out.push_back(Threshold::fraction(i, steps));
  return out;
}

// Predictions

namespace {

[[noreturn]] void line_error(std::size_t line, std::string_view what) {
  throw ParseError(fmt::format("predictions line {}: {}", line, what));
}

PredictionRecord parse_record(const nlohmann::json& j, std::size_t line) {
  if (!j.is_object()) line_error(line, "expected a JSON object");
  auto text = [&](const char* key) {
    auto it = j.find(key);
    if (it == j.end()) line_error(line, fmt::format("missing field '{}'", key));
    if (!it->is_string()) line_error(line, fmt::format("field '{}' must be a string", key));
    return it->get<std::string>();
  };
  PredictionRecord r;
  r.sample_id = text("sample_id");
  r.pattern_id = text("pattern_id");
  const std::string pred = text("pred");
  auto label = parse_label(pred);
  if (!label) line_error(line, fmt::format("unknown label '{}'", pred));
  r.predicted = *label;

  if (auto it = j.find("probs"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) line_error(line, "field 'probs' must be an object");
    std::array<double, 3> probs{};
    double sum = 0.0;
    for (Label l : kAllLabels) {
      auto p = it->find(std::string(to_string(l)));
      if (p == it->end() || !p->is_number()) {
        line_error(line, fmt::format("probs must give a number for '{}'", to_string(l)));
      }
      const double v = p->get<double>();
      if (!(v >= 0.0 && v <= 1.0)) {
        line_error(line, fmt::format("probability {} for '{}' is outside [0, 1]", v, to_string(l)));
      }
      probs[static_cast<std::size_t>(l)] = v;
      sum += v;
    }
    if (it->size() != 3) line_error(line, "probs must have exactly three labels");
    if (std::abs(sum - 1.0) > 1e-6) {
      line_error(line, fmt::format("probabilities sum to {}, expected 1", sum));
    }
    const double best = *std::max_element(probs.begin(), probs.end());
    if (probs[static_cast<std::size_t>(r.predicted)] != best) {
      line_error(line, fmt::format("pred '{}' is not the most probable label", pred));
    }
    r.probs = probs;
  }
  return r;
}

PredictionSet subset(const PredictionSet& preds, auto&& keep) {
  std::vector<PatternPredictions> kept;
  for (const auto& p : preds.patterns()) {
    if (keep(p)) kept.push_back(p);
  }
  return PredictionSet(std::move(kept));
}

}  // namespace

std::vector<PredictionRecord> read_predictions(std::string_view text) {
  std::vector<PredictionRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& err) {
      line_error(line_no, fmt::format("malformed JSON: {}", err.what()));
    }
    out.push_back(parse_record(j, line_no));
  }
  return out;
}

std::string write_predictions(std::span<const PredictionRecord> records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["sample_id"] = r.sample_id;
    j["pattern_id"] = r.pattern_id;
    j["pred"] = to_string(r.predicted);
    if (r.probs) {
      nlohmann::ordered_json probs;
      for (Label l : kAllLabels) probs[std::string(to_string(l))] = (*r.probs)[static_cast<std::size_t>(l)];
      j["probs"] = std::move(probs);
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::size_t PatternPredictions::correct() const {
  return static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(),
      [&](const PredictionRecord& r) { return r.predicted == gold; }));
}

PredictionSet::PredictionSet(std::vector<PatternPredictions> patterns)
    : patterns_(std::move(patterns)) {
  if (patterns_.empty()) throw ValidationError("prediction set is empty");
  std::set<std::string> seen;
  for (const auto& p : patterns_) {
    if (p.records.empty()) {
      throw ValidationError(fmt::format("pattern '{}' has no predictions", p.pattern_id));
    }
    if (!seen.insert(p.pattern_id).second) {
      throw ValidationError(fmt::format("pattern '{}' listed twice", p.pattern_id));
    }
  }
  std::sort(patterns_.begin(), patterns_.end(), [](const auto& a, const auto& b) {
    return pattern_id_less(a.pattern_id, b.pattern_id);
  });
}

PredictionSet PredictionSet::build(const Corpus& corpus,
                                   std::span<const PredictionRecord> records) {
  std::unordered_map<std::string_view, const Sample*> by_id;
  std::unordered_map<std::string_view, Label> gold;
  for (const auto& s : corpus.samples) {
    by_id.emplace(s.id, &s);
    auto [it, inserted] = gold.emplace(s.pattern_id, s.label);
    if (!inserted && it->second != s.label) {
      throw ValidationError(
          fmt::format("pattern '{}' has samples with different gold labels", s.pattern_id));
    }
  }
  std::map<std::string, PatternPredictions> groups;
  std::unordered_set<std::string_view> predicted;
  for (const auto& r : records) {
    auto it = by_id.find(r.sample_id);
    if (it == by_id.end()) {
      throw ValidationError(fmt::format("prediction for unknown sample '{}'", r.sample_id));
    }
    const Sample& s = *it->second;
    if (s.pattern_id != r.pattern_id) {
      throw ValidationError(fmt::format("sample '{}' belongs to pattern '{}', not '{}'",
                                        r.sample_id, s.pattern_id, r.pattern_id));
    }
    if (!predicted.insert(s.id).second) {
      throw ValidationError(fmt::format("sample '{}' predicted twice", r.sample_id));
    }
    auto& group = groups[s.pattern_id];
    group.pattern_id = s.pattern_id;
    group.gold = s.label;
    group.inference_class = s.inference_class;
    group.records.push_back(r);
  }
  std::vector<PatternPredictions> patterns;
  for (auto& [unused, group] : groups) patterns.push_back(std::move(group));
  return PredictionSet(std::move(patterns));
}

std::size_t PredictionSet::sample_count() const {
  std::size_t n = 0;
  for (const auto& p : patterns_) n += p.total();
  return n;
}

// Metrics

double sample_accuracy(const PredictionSet& preds) {
  std::size_t correct = 0;
  std::size_t total = 0;
  for (const auto& p : preds.patterns()) {
    correct += p.correct();
    total += p.total();
  }
  return static_cast<double>(correct) / static_cast<double>(total);
}

double pattern_accuracy(const PredictionSet& preds, const Threshold& t) {
  std::size_t passing = 0;
  for (const auto& p : preds.patterns()) {
    if (t.admits(p.correct(), p.total())) ++passing;
  }
  return static_cast<double>(passing) / static_cast<double>(preds.patterns().size());
}

namespace {

std::vector<Threshold> breakpoints(const PredictionSet& preds) {
  std::vector<Threshold> out;
  for (const auto& p : preds.patterns()) {
    out.push_back(Threshold::fraction(static_cast<std::int64_t>(p.correct()),
                                      static_cast<std::int64_t>(p.total())));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

PACurve pa_curve(const PredictionSet& preds, std::span<const Threshold> grid) {
  if (grid.empty()) throw ValidationError("PA curve needs at least one threshold");
  std::vector<Threshold> ts(grid.begin(), grid.end());
  for (const auto& b : breakpoints(preds)) ts.push_back(b);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  PACurve curve;
  for (const auto& t : ts) curve.points.push_back({t, pattern_accuracy(preds, t)});
  return curve;
}

double pa_auc(const PredictionSet& preds) {
  // PA_t is constant on each interval (b_{j-1}, b_j] between consecutive
  // breakpoints and equals PA at the interval's right end.
  const long double n = static_cast<long double>(preds.patterns().size());
  long double area = 0.0L;
  long double left = 0.0L;
  for (const auto& b : breakpoints(preds)) {
    std::size_t passing = 0;
    for (const auto& p : preds.patterns()) {
      if (b.admits(p.correct(), p.total())) ++passing;
    }
    const long double right = b.exact_value();
    area += (static_cast<long double>(passing) / n) * (right - left);
    left = right;
  }
  return static_cast<double>(area);
}

GroupBy parse_group_by(std::string_view key) {
  if (key == "label") return GroupBy::kLabel;
  if (key == "class" || key == "inference_class") return GroupBy::kInferenceClass;
  throw ValidationError(fmt::format("unknown grouping key '{}' (use label or class)", key));
}

std::vector<GroupMetrics> breakdown(const PredictionSet& preds, GroupBy by,
                                    std::span<const Threshold> thresholds) {
  std::vector<std::pair<std::string, std::function<bool(const PatternPredictions&)>>> groups;
  if (by == GroupBy::kLabel) {
    for (Label l : kAllLabels) {
      groups.emplace_back(std::string(to_string(l)),
                          [l](const PatternPredictions& p) { return p.gold == l; });
    }
  } else {
    for (InferenceClass c : kAllInferenceClasses) {
      groups.emplace_back(std::string(to_string(c)), [c](const PatternPredictions& p) {
        return p.inference_class == c;
      });
    }
  }

  std::vector<GroupMetrics> out;
  for (const auto& [name, keep] : groups) {
    if (std::none_of(preds.patterns().begin(), preds.patterns().end(), keep)) continue;
    const PredictionSet part = subset(preds, keep);
    GroupMetrics m;
    m.group = name;
    m.patterns = part.patterns().size();
    for (const auto& p : part.patterns()) {
      m.samples += p.total();
      m.correct += p.correct();
    }
    m.accuracy = sample_accuracy(part);
    for (const auto& t : thresholds) m.pa.push_back(pattern_accuracy(part, t));
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<CartographyPoint> cartography(const PredictionSet& preds) {
  std::vector<CartographyPoint> out;
  for (const auto& p : preds.patterns()) {
    const auto gold = static_cast<std::size_t>(p.gold);
    std::vector<double> values;
    for (const auto& r : p.records) {
      if (!r.probs) {
        throw ValidationError(
            fmt::format("sample '{}' has no probabilities; cartography needs them", r.sample_id));
      }
      values.push_back((*r.probs)[gold]);
    }
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    out.push_back({p.pattern_id, p.gold, mean, std::sqrt(sq / n)});
  }
  return out;
}

}  // namespace patnli
