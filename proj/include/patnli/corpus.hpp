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

// Generated corpora: JSONL serialization, summary statistics and
// pattern-sharing train/test splits.
//
// JSONL layout: an optional first line `#{...}` holding provenance, then one
// object per sample:
//   {"id","pattern_id","label","class","premises":[...],"hypothesis",
//    "assignment":{"X":"John",...}}

#ifndef PATNLI_CORPUS_HPP_
#define PATNLI_CORPUS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "patnli/sampler.hpp"

namespace patnli {

struct Provenance {
  std::string world_sha256;
  std::string patterns_sha256;
  std::uint64_t seed = 0;
  std::size_t per_pattern = 0;
  std::string subset;  // empty for a full corpus, e.g. "test" for a split

  bool operator==(const Provenance&) const = default;
};

struct Corpus {
  std::vector<Sample> samples;
  std::optional<Provenance> provenance;

  bool operator==(const Corpus&) const = default;
};

std::string write_corpus(const Corpus& corpus);

// Throws ParseError naming the line for malformed records and
// ValidationError for duplicate sample ids.
Corpus read_corpus(std::string_view text);

// Case-insensitive "not" token or a token ending in "n't" in any sentence.
bool has_negation(const Sample& sample);

// Label counts for one slice of the corpus.
struct StatsRow {
  std::string name;
  std::array<std::size_t, 3> label_counts{};  // indexed by Label
  std::size_t count = 0;

  // Share of `label` within this row, in percent.
  double label_percent(Label label) const;
};

struct CorpusStats {
  std::size_t total = 0;
  // Dir, NonP, Proj, ArgO, +neg, 1prem, 2prem, 3prem, All.
  std::vector<StatsRow> rows;
  std::size_t patterns = 0;
  std::size_t patterns_with_negation = 0;

  const StatsRow& row(std::string_view name) const;
  // Share of the whole corpus covered by `row`, in percent.
  double share_percent(const StatsRow& row) const;
};

// Throws ValidationError on an empty corpus.
CorpusStats compute_stats(const Corpus& corpus);
std::string format_stats_table(const CorpusStats& stats);
std::string format_stats_csv(const CorpusStats& stats);

struct SplitSpec {
  std::size_t test_per_pattern = 100;
  // Samples per pattern reserved for shot draws; nullopt = all the rest.
  std::optional<std::size_t> pool_per_pattern;
  std::vector<std::size_t> shot_counts;
  std::size_t repetitions = 3;
  std::uint64_t seed = 42;
};

struct Splits {
  Corpus test;
  Corpus pool;
  // (k, repetition) -> k samples per pattern drawn from the pool.
  std::map<std::pair<std::size_t, std::size_t>, Corpus> shots;
};

// Per pattern, shuffles its samples with a stream keyed by (seed, pattern)
// and cuts test and pool; each (k, repetition) draws k pool samples with its
// own stream. Throws ValidationError naming a pattern that has too few
// samples.
Splits make_splits(const Corpus& corpus, const SplitSpec& spec);

}  // namespace patnli

#endif  // PATNLI_CORPUS_HPP_
