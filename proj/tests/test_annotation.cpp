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

#include <algorithm>
#include <cmath>
#include <random>

#include "patnli/annotation.hpp"
#include "patnli/error.hpp"

using namespace patnli;

namespace {

constexpr Label E = Label::kEntailment;
constexpr Label N = Label::kNeutral;
constexpr Label C = Label::kContradiction;

std::vector<LikertAnnotation> table(const std::vector<std::vector<int>>& rows) {
  // rows[annotator][item]; 0 marks "skip"
  std::vector<LikertAnnotation> out;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t i = 0; i < rows[a].size(); ++i) {
      const int v = rows[a][i];
      out.push_back({"i" + std::to_string(i), "a" + std::to_string(a),
                     v == 0 ? Likert::kSkip : static_cast<Likert>(v)});
    }
  }
  return out;
}

// Straight from the definition, written separately from the library.
double oracle_kappa(const std::vector<int>& a, const std::vector<int>& b) {
  const double n = static_cast<double>(a.size());
  double agree = 0;
  double pa[3] = {0, 0, 0};
  double pb[3] = {0, 0, 0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    agree += a[i] == b[i];
    pa[a[i]] += 1 / n;
    pb[b[i]] += 1 / n;
  }
  const double po = agree / n;
  const double pe = pa[0] * pb[0] + pa[1] * pb[1] + pa[2] * pb[2];
  if (pe >= 1.0) return 1.0;
  return (po - pe) / (1 - pe);
}

// cut points (lo, hi): v <= lo -> 0, v <= hi -> 1, else 2
int oracle_map(int v, int lo, int hi) { return v <= lo ? 0 : (v <= hi ? 1 : 2); }

struct OracleBest {
  std::vector<std::pair<int, int>> cuts;
  double score = -2;
};

OracleBest brute_force(const std::vector<std::vector<int>>& rows) {
  std::vector<std::pair<int, int>> options;
  for (int lo = 1; lo <= 4; ++lo)
    for (int hi = lo + 1; hi <= 4; ++hi) options.emplace_back(lo, hi);
  OracleBest best;
  const std::size_t A = rows.size();
  std::size_t combos = 1;
  for (std::size_t a = 0; a < A; ++a) combos *= 6;
  for (std::size_t code = 0; code < combos; ++code) {
    std::vector<std::pair<int, int>> cuts(A);
    std::size_t rest = code;
    for (std::size_t a = A; a-- > 0;) {
      cuts[a] = options[rest % 6];
      rest /= 6;
    }
    double sum = 0;
    int pairs = 0;
    for (std::size_t a = 0; a < A; ++a) {
      for (std::size_t b = a + 1; b < A; ++b) {
        std::vector<int> la, lb;
        for (std::size_t i = 0; i < rows[a].size(); ++i) {
          if (rows[a][i] == 0 || rows[b][i] == 0) continue;
          la.push_back(oracle_map(rows[a][i], cuts[a].first, cuts[a].second));
          lb.push_back(oracle_map(rows[b][i], cuts[b].first, cuts[b].second));
        }
        sum += oracle_kappa(la, lb);
        ++pairs;
      }
    }
    const double score = sum / pairs;
    if (score > best.score + 1e-12) best = {cuts, score};
  }
  return best;
}

}  // namespace

TEST_CASE("kappa values") {
  const std::vector<Label> a{E, E, N, C};
  const std::vector<Label> b{E, N, N, C};
  CHECK(cohen_kappa(a, a) == 1.0);
  CHECK(std::abs(cohen_kappa(a, b) - 0.4375 / 0.6875) < 1e-9);
  const std::vector<Label> same{N, N, N};
  CHECK(cohen_kappa(same, same) == 1.0);
  CHECK_THROWS_AS(cohen_kappa(a, std::vector<Label>{E}), ValidationError);
  CHECK_THROWS_AS(cohen_kappa(std::vector<Label>{}, std::vector<Label>{}), ValidationError);
}

TEST_CASE("constant against uniform is near zero") {
  std::mt19937_64 rng(1);
  std::vector<Label> constant(3000, E);
  std::vector<Label> uniform;
  for (std::size_t i = 0; i < constant.size(); ++i) uniform.push_back(static_cast<Label>(rng() % 3));
  CHECK(std::abs(cohen_kappa(constant, uniform)) < 0.05);
}

TEST_CASE("kappa is symmetric and bounded") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    std::vector<Label> a, b;
    for (std::size_t i = 0; i < n; ++i) {
      a.push_back(static_cast<Label>(rng() % 3));
      b.push_back(static_cast<Label>(rng() % 3));
    }
    const double k = cohen_kappa(a, b);
    CHECK(k == cohen_kappa(b, a));
    CHECK(k >= -1.0);
    CHECK(k <= 1.0);
  }
}

TEST_CASE("monotone mappings") {
  const auto& all = MonotoneMapping::all();
  CHECK(all.size() == 6);
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(all.front().to_string() == "(1,2)");
  const MonotoneMapping m(2, 3);
  CHECK(m.map(Likert::kDefinitelyFalse) == C);
  CHECK(m.map(Likert::kMostLikelyFalse) == C);
  CHECK(m.map(Likert::kUnknown) == N);
  CHECK(m.map(Likert::kMostLikelyTrue) == E);
  CHECK(m.map(Likert::kDefinitelyTrue) == E);
  CHECK_THROWS_AS(m.map(Likert::kSkip), ValidationError);
  CHECK_THROWS_AS(MonotoneMapping(3, 3), ValidationError);
  CHECK_THROWS_AS(MonotoneMapping(0, 2), ValidationError);
}

TEST_CASE("likert parsing") {
  CHECK(parse_likert("definitely true") == Likert::kDefinitelyTrue);
  CHECK(parse_likert("most-likely-false") == Likert::kMostLikelyFalse);
  CHECK(parse_likert("3") == Likert::kUnknown);
  CHECK(parse_likert("skip") == Likert::kSkip);
  CHECK_FALSE(parse_likert("perhaps").has_value());
  const auto rows = read_annotations_csv("item_id,annotator_id,value\ni1,a,5\ni1,b,difficult\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].value == Likert::kDifficult);
  CHECK_THROWS_AS(read_annotations_csv("item,who,value\n"), ParseError);
  CHECK_THROWS_AS(read_annotations_csv("item_id,annotator_id,value\ni1,a,maybe\n"), ParseError);
  CHECK_THROWS_AS(best_mappings(read_annotations_csv(
                      "item_id,annotator_id,value\ni1,a,5\ni1,a,4\ni1,b,4\n")),
                  ValidationError);
}

TEST_CASE("perfect agreement under (2,3)") {
  const MappingResult r = best_mappings(table({{1, 2, 3, 4, 5}, {2, 1, 3, 5, 4}}));
  CHECK(r.mean_kappa == 1.0);
  for (const auto& [who, m] : r.mappings) CHECK(m == MonotoneMapping(2, 3));
}

TEST_CASE("joint search equals brute force") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<std::vector<int>> rows(3);
    const std::size_t items = 6 + rng() % 20;
    for (auto& row : rows) {
      for (std::size_t i = 0; i < items; ++i) row.push_back(rng() % 9 == 0 ? 0 : 1 + rng() % 5);
    }
    // keep at least two shared usable items per pair
    for (auto& row : rows) row[0] = 1, row[1] = 5;
    CAPTURE(trial);
    const OracleBest oracle = brute_force(rows);
    const MappingResult r = best_mappings(table(rows));
    CHECK(std::abs(r.mean_kappa - oracle.score) < 1e-12);
    std::size_t a = 0;
    for (const auto& [who, m] : r.mappings) {
      CHECK(m.lower() == oracle.cuts[a].first);
      CHECK(m.upper() == oracle.cuts[a].second);
      ++a;
    }
    const MappingResult greedy = best_mappings(table(rows), {MissingPolicy::kPairwise,
                                                             MappingSearch::kGreedy});
    CHECK(greedy.mean_kappa <= r.mean_kappa + 1e-12);
  }
}

TEST_CASE("mapping search ignores input order") {
  auto rows = table({{1, 2, 4, 5, 3, 3}, {2, 2, 5, 4, 3, 1}, {1, 3, 4, 4, 2, 3}});
  const MappingResult forward = best_mappings(rows);
  std::reverse(rows.begin(), rows.end());
  const MappingResult backward = best_mappings(rows);
  CHECK(forward.mappings == backward.mappings);
  CHECK(forward.mean_kappa == backward.mean_kappa);
}

TEST_CASE("missing values and degenerate inputs") {
  // a2 skips item 3; listwise drops it for the a0/a1 pair too
  const auto rows = table({{1, 3, 5, 5}, {1, 3, 5, 1}, {2, 3, 0, 4}});
  const MappingResult pairwise = best_mappings(rows);
  const MappingResult listwise = best_mappings(rows, {MissingPolicy::kListwise,
                                                      MappingSearch::kJoint});
  CHECK(pairwise.pairs.at(0).items == 4);
  CHECK(listwise.pairs.at(0).items == 3);
  CHECK_THROWS_AS(best_mappings(table({{1}, {2}})), ValidationError);
  CHECK_THROWS_AS(best_mappings(table({{1, 2, 3}})), ValidationError);
}

TEST_CASE("majority filter") {
  const std::map<std::string, std::vector<Label>> labels{
      {"kept", {E, E, C}}, {"split", {E, N, C}}, {"tie", {E, E, C, C}}, {"alone", {E}}};
  const auto kept = majority_filter(labels);
  CHECK(kept == std::map<std::string, Label>{{"kept", E}});
}

TEST_CASE("majority filter on 162 items matches a count") {
  std::mt19937_64 rng(162);
  std::map<std::string, std::vector<Label>> labels;
  std::size_t expected = 0;
  for (int i = 0; i < 162; ++i) {
    std::vector<Label> votes;
    int counts[3] = {0, 0, 0};
    for (int a = 0; a < 3; ++a) {
      const int v = static_cast<int>(rng() % 3);
      votes.push_back(static_cast<Label>(v));
      ++counts[v];
    }
    expected += *std::max_element(counts, counts + 3) >= 2;
    labels["item" + std::to_string(i)] = votes;
  }
  CHECK(majority_filter(labels).size() == expected);

  // copying an annotator who sided with the majority never loses an item
  const auto kept = majority_filter(labels);
  auto copied = labels;
  for (auto& [item, votes] : copied) {
    auto it = kept.find(item);
    votes.push_back(it != kept.end() ? it->second : votes.front());
  }
  const auto after = majority_filter(copied);
  for (const auto& [item, label] : kept) CHECK(after.at(item) == label);
}
