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

// Deterministic random streams. Every draw goes through mt19937_64 (whose
// output sequence is fixed by the standard) and our own bounded sampling, so
// results do not depend on the standard library's distributions.

#ifndef PATNLI_RNG_HPP_
#define PATNLI_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace patnli {

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t splitmix64(std::uint64_t x);

// Seed for an independent stream identified by `key` under `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view key) {
  return splitmix64(master ^ splitmix64(fnv1a64(key)));
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t master, std::string_view key)
      : engine_(derive_seed(master, key)) {}

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  // k distinct indices from [0, population), uniformly without replacement,
  // in draw order (partial Fisher-Yates). Requires k <= population.
  std::vector<std::size_t> sample(std::size_t population, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace patnli

#endif  // PATNLI_RNG_HPP_
