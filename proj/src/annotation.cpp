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

#include "patnli/annotation.hpp"

#include <algorithm>
#include <cctype>
#include <fmt/format.h>
#include <set>

#include "patnli/error.hpp"
#include "patnli/io.hpp"

namespace patnli {

std::string_view to_string(Likert value) {
  switch (value) {
    case Likert::kDefinitelyFalse:
      return "definitely_false";
    case Likert::kMostLikelyFalse:
      return "most_likely_false";
    case Likert::kUnknown:
      return "unknown";
    case Likert::kMostLikelyTrue:
      return "most_likely_true";
    case Likert::kDefinitelyTrue:
      return "definitely_true";
    case Likert::kDifficult:
      return "difficult";
    case Likert::kSkip:
      return "skip";
  }
  return "?";
}

std::optional<Likert> parse_likert(std::string_view text) {
  std::string norm;
  for (char c : text) {
    if (c == ' ' || c == '-') c = '_';
    norm += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  while (!norm.empty() && norm.front() == '_') norm.erase(norm.begin());
  while (!norm.empty() && norm.back() == '_') norm.pop_back();
  if (norm.size() == 1 && norm[0] >= '1' && norm[0] <= '5') {
    return static_cast<Likert>(norm[0] - '0');
  }
  for (int v = 1; v <= 7; ++v) {
    if (norm == to_string(static_cast<Likert>(v))) return static_cast<Likert>(v);
  }
  return std::nullopt;
}

std::vector<LikertAnnotation> read_annotations_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw ParseError("annotations CSV is empty");
  const auto& header = rows.front();
  auto column = [&](std::string_view name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ParseError(fmt::format("annotations CSV: missing column '{}'", name));
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t item_col = column("item_id");
  const std::size_t annotator_col = column("annotator_id");
  const std::size_t value_col = column("value");

  std::vector<LikertAnnotation> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw ParseError(fmt::format("annotations CSV row {}: expected {} fields, got {}", r + 1,
                                   header.size(), row.size()));
    }
    LikertAnnotation a;
    a.item_id = row[item_col];
    a.annotator_id = row[annotator_col];
    auto value = parse_likert(row[value_col]);
    if (!value) {
      throw ParseError(
          fmt::format("annotations CSV row {}: unknown value '{}'", r + 1, row[value_col]));
    }
    a.value = *value;
    if (!seen.emplace(a.item_id, a.annotator_id).second) {
      throw ValidationError(fmt::format("item '{}' annotated twice by '{}'", a.item_id,
                                        a.annotator_id));
    }
    out.push_back(std::move(a));
  }
  return out;
}

// MonotoneMapping

MonotoneMapping::MonotoneMapping(int lower, int upper) : lower_(lower), upper_(upper) {
  if (!(1 <= lower && lower < upper && upper <= 4)) {
    throw ValidationError(fmt::format("invalid cut points ({},{})", lower, upper));
  }
}

const std::array<MonotoneMapping, 6>& MonotoneMapping::all() {
  static const std::array<MonotoneMapping, 6> mappings = {
      MonotoneMapping(1, 2), MonotoneMapping(1, 3), MonotoneMapping(1, 4),
      MonotoneMapping(2, 3), MonotoneMapping(2, 4), MonotoneMapping(3, 4)};
  return mappings;
}

Label MonotoneMapping::map(Likert value) const {
  if (!is_scale_point(value)) {
    throw ValidationError(fmt::format("'{}' is not a scale point", patnli::to_string(value)));
  }
  const int point = static_cast<int>(value);
  if (point <= lower_) return Label::kContradiction;
  if (point <= upper_) return Label::kNeutral;
  return Label::kEntailment;
}

std::string MonotoneMapping::to_string() const { return fmt::format("({},{})", lower_, upper_); }

// Kappa

double cohen_kappa(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) {
    throw ValidationError(
        fmt::format("kappa: sequences differ in length ({} vs {})", a.size(), b.size()));
  }
  if (a.empty()) throw ValidationError("kappa: empty sequences");
  std::array<double, 3> pa{};
  std::array<double, 3> pb{};
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++pa[static_cast<std::size_t>(a[i])];
    ++pb[static_cast<std::size_t>(b[i])];
    if (a[i] == b[i]) ++agree;
  }
  const double n = static_cast<double>(a.size());
  const double observed = static_cast<double>(agree) / n;
  double expected = 0.0;
  for (std::size_t k = 0; k < 3; ++k) expected += (pa[k] / n) * (pb[k] / n);
  if (expected >= 1.0) return observed >= 1.0 ? 1.0 : 0.0;
  return (observed - expected) / (1.0 - expected);
}

// Mapping search

namespace {

struct Table {
  std::vector<std::string> annotators;
  // values[a][i]: annotation of annotator a on item i, if any.
  std::vector<std::vector<std::optional<Likert>>> values;
};

Table tabulate(std::span<const LikertAnnotation> annotations, MissingPolicy missing) {
  std::set<std::string> annotators;
  std::set<std::string> items;
  for (const auto& a : annotations) {
    annotators.insert(a.annotator_id);
    items.insert(a.item_id);
  }
  Table t;
  t.annotators.assign(annotators.begin(), annotators.end());
  const std::vector<std::string> item_list(items.begin(), items.end());
  t.values.assign(t.annotators.size(), std::vector<std::optional<Likert>>(item_list.size()));
  for (const auto& a : annotations) {
    const auto ai = static_cast<std::size_t>(
        std::lower_bound(t.annotators.begin(), t.annotators.end(), a.annotator_id) -
        t.annotators.begin());
    const auto ii = static_cast<std::size_t>(
        std::lower_bound(item_list.begin(), item_list.end(), a.item_id) - item_list.begin());
    auto& slot = t.values[ai][ii];
    if (slot) {
      throw ValidationError(
          fmt::format("item '{}' annotated twice by '{}'", a.item_id, a.annotator_id));
    }
    slot = a.value;
  }
  if (missing == MissingPolicy::kListwise) {
    for (std::size_t i = 0; i < item_list.size(); ++i) {
      bool complete = true;
      for (const auto& column : t.values) {
        complete = complete && column[i] && is_scale_point(*column[i]);
      }
      if (!complete) {
        for (auto& column : t.values) column[i].reset();
      }
    }
  }
  return t;
}

struct PairTable {
  std::size_t first = 0;
  std::size_t second = 0;
  std::size_t items = 0;
  std::array<std::array<double, 6>, 6> kappa{};  // [mapping of first][mapping of second]
};

std::vector<PairTable> pair_tables(const Table& t) {
  const auto& mappings = MonotoneMapping::all();
  std::vector<PairTable> out;
  for (std::size_t a = 0; a < t.annotators.size(); ++a) {
    for (std::size_t b = a + 1; b < t.annotators.size(); ++b) {
      std::vector<std::pair<Likert, Likert>> shared;
      for (std::size_t i = 0; i < t.values[a].size(); ++i) {
        const auto& va = t.values[a][i];
        const auto& vb = t.values[b][i];
        if (va && vb && is_scale_point(*va) && is_scale_point(*vb)) shared.emplace_back(*va, *vb);
      }
      if (shared.size() < 2) {
        throw ValidationError(fmt::format(
            "annotators '{}' and '{}' share {} usable item(s); kappa needs at least 2",
            t.annotators[a], t.annotators[b], shared.size()));
      }
      PairTable pt{a, b, shared.size(), {}};
      std::vector<Label> la(shared.size());
      std::vector<Label> lb(shared.size());
      for (std::size_t ma = 0; ma < 6; ++ma) {
        for (std::size_t mb = 0; mb < 6; ++mb) {
          for (std::size_t i = 0; i < shared.size(); ++i) {
            la[i] = mappings[ma].map(shared[i].first);
            lb[i] = mappings[mb].map(shared[i].second);
          }
          pt.kappa[ma][mb] = cohen_kappa(la, lb);
        }
      }
      out.push_back(pt);
    }
  }
  return out;
}

double mean_kappa(const std::vector<PairTable>& pairs, const std::vector<std::size_t>& choice) {
  double sum = 0.0;
  for (const auto& p : pairs) sum += p.kappa[choice[p.first]][choice[p.second]];
  return sum / static_cast<double>(pairs.size());
}

constexpr double kTieTolerance = 1e-12;
constexpr std::size_t kMaxJointAnnotators = 9;

std::vector<std::size_t> joint_search(const std::vector<PairTable>& pairs, std::size_t annotators) {
  if (annotators > kMaxJointAnnotators) {
    throw ValidationError(fmt::format(
        "joint mapping search over {} annotators is too large; use the greedy search",
        annotators));
  }
  std::vector<std::size_t> choice(annotators, 0);
  std::vector<std::size_t> best = choice;
  double best_score = mean_kappa(pairs, choice);
  for (;;) {
    // Odometer increment, last annotator fastest: lexicographic order.
    std::size_t pos = annotators;
    while (pos > 0 && choice[pos - 1] == 5) choice[--pos] = 0;
    if (pos == 0) break;
    ++choice[pos - 1];
    const double score = mean_kappa(pairs, choice);
    if (score > best_score + kTieTolerance) {
      best_score = score;
      best = choice;
    }
  }
  return best;
}

std::vector<std::size_t> greedy_search(const std::vector<PairTable>& pairs,
                                       std::size_t annotators) {
  constexpr std::size_t kConventional = 3;  // (2,3)
  std::vector<std::size_t> choice(annotators, kConventional);
  for (std::size_t round = 0; round < 64; ++round) {
    bool changed = false;
    for (std::size_t a = 0; a < annotators; ++a) {
      std::vector<std::size_t> trial = choice;
      std::size_t best_m = choice[a];
      double best_score = mean_kappa(pairs, choice);
      for (std::size_t m = 0; m < 6; ++m) {
        trial[a] = m;
        const double score = mean_kappa(pairs, trial);
        if (score > best_score + kTieTolerance) {
          best_score = score;
          best_m = m;
        }
      }
      if (best_m != choice[a]) {
        choice[a] = best_m;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return choice;
}

}  // namespace

MappingResult best_mappings(std::span<const LikertAnnotation> annotations,
                            const MappingOptions& options) {
  const Table t = tabulate(annotations, options.missing);
  if (t.annotators.size() < 2) {
    throw ValidationError("mapping search needs at least two annotators");
  }
  const std::vector<PairTable> pairs = pair_tables(t);
  const std::vector<std::size_t> choice = options.search == MappingSearch::kJoint
                                              ? joint_search(pairs, t.annotators.size())
                                              : greedy_search(pairs, t.annotators.size());
  MappingResult result;
  for (std::size_t a = 0; a < t.annotators.size(); ++a) {
    result.mappings.emplace(t.annotators[a], MonotoneMapping::all()[choice[a]]);
  }
  result.mean_kappa = mean_kappa(pairs, choice);
  for (const auto& p : pairs) {
    result.pairs.push_back({t.annotators[p.first], t.annotators[p.second], p.items,
                            p.kappa[choice[p.first]][choice[p.second]]});
  }
  return result;
}

std::map<std::string, std::vector<Label>> apply_mappings(
    std::span<const LikertAnnotation> annotations,
    const std::map<std::string, MonotoneMapping>& mappings) {
  std::map<std::string, std::vector<Label>> out;
  for (const auto& a : annotations) {
    if (!is_scale_point(a.value)) continue;
    auto it = mappings.find(a.annotator_id);
    if (it == mappings.end()) {
      throw ValidationError(fmt::format("no mapping for annotator '{}'", a.annotator_id));
    }
    out[a.item_id].push_back(it->second.map(a.value));
  }
  return out;
}

std::map<std::string, Label> majority_filter(
    const std::map<std::string, std::vector<Label>>& labels) {
  std::map<std::string, Label> kept;
  for (const auto& [item, votes] : labels) {
    if (votes.size() < 2) continue;
    std::array<std::size_t, 3> counts{};
    for (Label l : votes) ++counts[static_cast<std::size_t>(l)];
    for (Label l : kAllLabels) {
      if (2 * counts[static_cast<std::size_t>(l)] > votes.size()) {
        kept.emplace(item, l);
        break;
      }
    }
  }
  return kept;
}

}  // namespace patnli
