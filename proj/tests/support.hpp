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

// Helpers shared by the unit tests and the acceptance binary.

#ifndef PATNLI_TESTS_SUPPORT_HPP_
#define PATNLI_TESTS_SUPPORT_HPP_

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "patnli/io.hpp"
#include "patnli/metrics.hpp"
#include "patnli/pattern.hpp"
#include "patnli/world.hpp"

namespace patnli::testing {

inline std::filesystem::path source_dir() { return PATNLI_SOURCE_DIR; }
inline std::filesystem::path test_data(const std::string& name) {
  return source_dir() / "tests" / "data" / name;
}
inline std::filesystem::path demo_world_path() {
  return source_dir() / "data" / "demo_world.yaml";
}
inline std::filesystem::path demo_patterns_path() {
  return source_dir() / "data" / "demo_patterns.xml";
}

inline MiniWorld load_world_file(const std::filesystem::path& path) {
  return load_world(read_file(path));
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("patnli-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// A label-only pattern whose first `correct` of `total` records are right.
inline PatternPredictions counted_pattern(const std::string& id, std::size_t correct,
                                          std::size_t total,
                                          InferenceClass cls = InferenceClass::kDirectional,
                                          Label gold = Label::kEntailment) {
  PatternPredictions p;
  p.pattern_id = id;
  p.gold = gold;
  p.inference_class = cls;
  const Label wrong = gold == Label::kEntailment ? Label::kNeutral : Label::kEntailment;
  for (std::size_t k = 0; k < total; ++k) {
    PredictionRecord r;
    r.sample_id = id + "-" + std::to_string(k + 1);
    r.pattern_id = id;
    r.predicted = k < correct ? gold : wrong;
    p.records.push_back(std::move(r));
  }
  return p;
}

// Random correct-counts for n patterns with M samples each (M drawn per pattern
// when `equal_m` is false).
inline std::vector<std::pair<std::size_t, std::size_t>> random_counts(std::mt19937_64& rng,
                                                                      std::size_t n,
                                                                      bool equal_m) {
  std::uniform_int_distribution<std::size_t> m_dist(1, 60);
  const std::size_t shared_m = m_dist(rng);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t m = equal_m ? shared_m : m_dist(rng);
    std::uniform_int_distribution<std::size_t> c_dist(0, m);
    out.emplace_back(c_dist(rng), m);
  }
  return out;
}

inline PredictionSet counted_set(const std::vector<std::pair<std::size_t, std::size_t>>& counts) {
  std::vector<PatternPredictions> patterns;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    patterns.push_back(
        counted_pattern("p" + std::to_string(i), counts[i].first, counts[i].second));
  }
  return PredictionSet(std::move(patterns));
}

}  // namespace patnli::testing

#endif  // PATNLI_TESTS_SUPPORT_HPP_
