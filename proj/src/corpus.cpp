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

#include "patnli/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fmt/format.h>
#include <json.hpp>
#include <set>

#include "patnli/error.hpp"
#include "patnli/rng.hpp"

namespace patnli {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json provenance_json(const Provenance& p) {
  ordered_json j;
  j["world_sha256"] = p.world_sha256;
  j["patterns_sha256"] = p.patterns_sha256;
  j["seed"] = p.seed;
  j["per_pattern"] = p.per_pattern;
  if (!p.subset.empty()) j["subset"] = p.subset;
  return j;
}

[[noreturn]] void line_error(std::size_t line, std::string_view what) {
  throw ParseError(fmt::format("corpus line {}: {}", line, what));
}

const nlohmann::json& field(const nlohmann::json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end()) line_error(line, fmt::format("missing field '{}'", key));
  return *it;
}

std::string string_field(const nlohmann::json& j, const char* key, std::size_t line) {
  const auto& value = field(j, key, line);
  if (!value.is_string()) line_error(line, fmt::format("field '{}' must be a string", key));
  return value.get<std::string>();
}

Sample parse_sample(const nlohmann::json& j, std::size_t line) {
  if (!j.is_object()) line_error(line, "expected a JSON object");
  Sample s;
  s.id = string_field(j, "id", line);
  s.pattern_id = string_field(j, "pattern_id", line);
  const std::string label = string_field(j, "label", line);
  auto parsed_label = parse_label(label);
  if (!parsed_label) line_error(line, fmt::format("unknown label '{}'", label));
  s.label = *parsed_label;
  const std::string cls = string_field(j, "class", line);
  auto parsed_class = parse_inference_class(cls);
  if (!parsed_class) line_error(line, fmt::format("unknown inference class '{}'", cls));
  s.inference_class = *parsed_class;
  const auto& premises = field(j, "premises", line);
  if (!premises.is_array() || premises.empty() || premises.size() > 3) {
    line_error(line, "field 'premises' must be a list of 1 to 3 strings");
  }
  for (const auto& p : premises) {
    if (!p.is_string()) line_error(line, "field 'premises' must be a list of strings");
    s.premises.push_back(p.get<std::string>());
  }
  s.hypothesis = string_field(j, "hypothesis", line);
  const auto& assignment = field(j, "assignment", line);
  if (!assignment.is_object()) line_error(line, "field 'assignment' must be an object");
  for (const auto& [var, entity] : assignment.items()) {
    if (!entity.is_string()) line_error(line, "assignment values must be strings");
    s.assignment.emplace(var, entity.get<std::string>());
  }
  return s;
}

std::string lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool sentence_has_negation(std::string_view sentence) {
  std::string token;
  auto check = [&] {
    const std::string t = lower(token);
    token.clear();
    return t == "not" || (t.size() >= 3 && t.compare(t.size() - 3, 3, "n't") == 0);
  };
  for (char c : sentence) {
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '\'') {
      token += c;
    } else if (!token.empty() && check()) {
      return true;
    }
  }
  return !token.empty() && check();
}

std::vector<std::pair<std::string, std::vector<const Sample*>>> group_by_pattern(
    const Corpus& corpus) {
  std::map<std::string, std::vector<const Sample*>> groups;
  for (const auto& s : corpus.samples) groups[s.pattern_id].push_back(&s);
  std::vector<std::pair<std::string, std::vector<const Sample*>>> out(groups.begin(),
                                                                      groups.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return pattern_id_less(a.first, b.first); });
  return out;
}

}  // namespace

std::string write_corpus(const Corpus& corpus) {
  std::string out;
  if (corpus.provenance) out += "#" + provenance_json(*corpus.provenance).dump() + "\n";
  for (const auto& s : corpus.samples) {
    ordered_json j;
    j["id"] = s.id;
    j["pattern_id"] = s.pattern_id;
    j["label"] = to_string(s.label);
    j["class"] = to_string(s.inference_class);
    j["premises"] = s.premises;
    j["hypothesis"] = s.hypothesis;
    ordered_json assignment = ordered_json::object();
    for (const auto& [var, entity] : s.assignment) assignment[var] = entity;
    j["assignment"] = std::move(assignment);
    out += j.dump();
    out += '\n';
  }
  return out;
}

Corpus read_corpus(std::string_view text) {
  Corpus corpus;
  std::set<std::string> ids;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    if (line.front() == '#') {
      if (line_no != 1) line_error(line_no, "provenance header must be the first line");
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line.substr(1));
      } catch (const nlohmann::json::exception& err) {
        line_error(line_no, fmt::format("bad provenance header: {}", err.what()));
      }
      try {
        Provenance p;
        p.world_sha256 = j.at("world_sha256").get<std::string>();
        p.patterns_sha256 = j.at("patterns_sha256").get<std::string>();
        p.seed = j.at("seed").get<std::uint64_t>();
        p.per_pattern = j.at("per_pattern").get<std::size_t>();
        if (j.contains("subset")) p.subset = j.at("subset").get<std::string>();
        corpus.provenance = std::move(p);
      } catch (const nlohmann::json::exception& err) {
        line_error(line_no, fmt::format("bad provenance header: {}", err.what()));
      }
      continue;
    }

    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& err) {
      line_error(line_no, fmt::format("malformed JSON: {}", err.what()));
    }
    Sample s = parse_sample(j, line_no);
    if (!ids.insert(s.id).second) {
      throw ValidationError(
          fmt::format("corpus line {}: duplicate sample id '{}'", line_no, s.id));
    }
    corpus.samples.push_back(std::move(s));
  }
  return corpus;
}

bool has_negation(const Sample& sample) {
  for (const auto& p : sample.premises) {
    if (sentence_has_negation(p)) return true;
  }
  return sentence_has_negation(sample.hypothesis);
}

// Statistics

double StatsRow::label_percent(Label label) const {
  if (count == 0) return 0.0;
  return 100.0 * static_cast<double>(label_counts[static_cast<std::size_t>(label)]) /
         static_cast<double>(count);
}

const StatsRow& CorpusStats::row(std::string_view name) const {
  for (const auto& r : rows) {
    if (r.name == name) return r;
  }
  throw Error(fmt::format("no statistics row '{}'", name));
}

double CorpusStats::share_percent(const StatsRow& r) const {
  if (total == 0) return 0.0;
  return 100.0 * static_cast<double>(r.count) / static_cast<double>(total);
}

CorpusStats compute_stats(const Corpus& corpus) {
  if (corpus.samples.empty()) throw ValidationError("cannot compute statistics of an empty corpus");
  CorpusStats stats;
  stats.total = corpus.samples.size();
  for (InferenceClass cls : kAllInferenceClasses) {
    stats.rows.push_back({std::string(short_name(cls)), {}, 0});
  }
  stats.rows.push_back({"+neg", {}, 0});
  for (int n = 1; n <= 3; ++n) stats.rows.push_back({fmt::format("{}prem", n), {}, 0});
  stats.rows.push_back({"All", {}, 0});

  auto bump = [](StatsRow& row, Label label) {
    ++row.label_counts[static_cast<std::size_t>(label)];
    ++row.count;
  };
  std::set<std::string> patterns;
  std::set<std::string> negated_patterns;
  for (const auto& s : corpus.samples) {
    bump(stats.rows[static_cast<std::size_t>(s.inference_class)], s.label);
    if (has_negation(s)) {
      bump(stats.rows[4], s.label);
      negated_patterns.insert(s.pattern_id);
    }
    if (s.premises.size() >= 1 && s.premises.size() <= 3) {
      bump(stats.rows[4 + s.premises.size()], s.label);
    }
    bump(stats.rows.back(), s.label);
    patterns.insert(s.pattern_id);
  }
  stats.patterns = patterns.size();
  stats.patterns_with_negation = negated_patterns.size();
  return stats;
}

std::string format_stats_table(const CorpusStats& stats) {
  std::string out = fmt::format("{:<9}{:>7}{:>7}{:>7}{:>9} {:>8}\n", "Property", "E %",
                                "N %", "C %", "All %", "(#)");
  for (std::size_t i = 0; i < stats.rows.size(); ++i) {
    const StatsRow& r = stats.rows[i];
    if (i == 4 || i == 5 || i + 1 == stats.rows.size()) out += std::string(48, '-') + "\n";
    out += fmt::format("{:<9}{:>7.1f}{:>7.1f}{:>7.1f}{:>9.1f} {:>8}\n", r.name,
                       r.label_percent(Label::kEntailment), r.label_percent(Label::kNeutral),
                       r.label_percent(Label::kContradiction), stats.share_percent(r),
                       fmt::format("({})", r.count));
  }
  out += fmt::format("patterns: {}, with negation: {}\n", stats.patterns,
                     stats.patterns_with_negation);
  return out;
}

std::string format_stats_csv(const CorpusStats& stats) {
  std::string out = "property,E_pct,N_pct,C_pct,all_pct,count,E,N,C\n";
  for (const auto& r : stats.rows) {
    out += fmt::format("{},{:.1f},{:.1f},{:.1f},{:.1f},{},{},{},{}\n", r.name,
                       r.label_percent(Label::kEntailment), r.label_percent(Label::kNeutral),
                       r.label_percent(Label::kContradiction), stats.share_percent(r), r.count,
                       r.label_counts[0], r.label_counts[1], r.label_counts[2]);
  }
  return out;
}

// Splits

Splits make_splits(const Corpus& corpus, const SplitSpec& spec) {
  if (spec.repetitions == 0) throw ValidationError("split: repetitions must be positive");
  std::vector<std::size_t> shot_counts = spec.shot_counts;
  std::sort(shot_counts.begin(), shot_counts.end());
  shot_counts.erase(std::unique(shot_counts.begin(), shot_counts.end()), shot_counts.end());
  const std::size_t max_shots = shot_counts.empty() ? 0 : shot_counts.back();

  Splits splits;
  auto derived = [&](std::string subset) {
    Corpus c;
    if (corpus.provenance) {
      c.provenance = corpus.provenance;
      c.provenance->subset = std::move(subset);
    }
    return c;
  };
  splits.test = derived("test");
  splits.pool = derived("pool");
  for (std::size_t k : shot_counts) {
    for (std::size_t rep = 1; rep <= spec.repetitions; ++rep) {
      splits.shots.emplace(std::pair{k, rep},
                           derived(fmt::format("shots k={} rep={}", k, rep)));
    }
  }

  for (const auto& [pattern_id, samples] : group_by_pattern(corpus)) {
    const std::size_t rest =
        samples.size() > spec.test_per_pattern ? samples.size() - spec.test_per_pattern : 0;
    const std::size_t pool_size = spec.pool_per_pattern.value_or(rest);
    if (samples.size() < spec.test_per_pattern + pool_size || pool_size < max_shots) {
      throw ValidationError(fmt::format(
          "split: pattern '{}' has {} samples, needs {} for test plus a pool of at least {}",
          pattern_id, samples.size(), spec.test_per_pattern, std::max(pool_size, max_shots)));
    }
    RandomStream stream(spec.seed, "split/" + pattern_id);
    std::vector<std::size_t> order =
        stream.sample(samples.size(), spec.test_per_pattern + pool_size);
    std::vector<std::size_t> test(order.begin(), order.begin() + spec.test_per_pattern);
    std::vector<std::size_t> pool(order.begin() + spec.test_per_pattern, order.end());
    std::sort(test.begin(), test.end());
    for (std::size_t i : test) splits.test.samples.push_back(*samples[i]);
    std::vector<std::size_t> pool_sorted = pool;
    std::sort(pool_sorted.begin(), pool_sorted.end());
    for (std::size_t i : pool_sorted) splits.pool.samples.push_back(*samples[i]);

    for (std::size_t k : shot_counts) {
      for (std::size_t rep = 1; rep <= spec.repetitions; ++rep) {
        RandomStream shot_stream(spec.seed,
                                 fmt::format("shots/{}/{}/{}", pattern_id, k, rep));
        std::vector<std::size_t> drawn = shot_stream.sample(pool_sorted.size(), k);
        std::sort(drawn.begin(), drawn.end());
        Corpus& target = splits.shots.at({k, rep});
        for (std::size_t j : drawn) target.samples.push_back(*samples[pool_sorted[j]]);
      }
    }
  }
  return splits;
}

}  // namespace patnli
