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

#include <set>

#include "patnli/error.hpp"
#include "patnli/io.hpp"
#include "patnli/rng.hpp"
#include "support.hpp"

using namespace patnli;

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("csv") {
  const auto rows = parse_csv("a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\n\nlast,\n");
  REQUIRE(rows.size() == 3);
  CHECK(rows[1] == std::vector<std::string>{"x,1", "say \"hi\""});
  CHECK(rows[2] == std::vector<std::string>{"last", ""});
  CHECK_THROWS_AS(parse_csv("\"open"), ParseError);
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("q\"") == "\"q\"\"\"");
}

TEST_CASE("atomic writes") {
  patnli::testing::TempDir dir;
  write_file_atomic(dir / "f.txt", "one");
  write_file_atomic(dir / "f.txt", "two");
  CHECK(read_file(dir / "f.txt") == "two");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++files;
  CHECK(files == 1);
  CHECK_THROWS_AS(read_file(dir / "missing.txt"), Error);
}

TEST_CASE("random streams") {
  CHECK(derive_seed(42, "generate/38") == derive_seed(42, "generate/38"));
  CHECK(derive_seed(42, "generate/38") != derive_seed(42, "generate/39"));
  CHECK(derive_seed(42, "generate/38") != derive_seed(43, "generate/38"));

  RandomStream a(42, "k");
  RandomStream b(42, "k");
  for (int i = 0; i < 100; ++i) CHECK(a.below(1000) == b.below(1000));

  RandomStream s(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto picked = s.sample(30, 12);
    CHECK(picked.size() == 12);
    CHECK(std::set<std::size_t>(picked.begin(), picked.end()).size() == 12);
    for (auto v : picked) CHECK(v < 30);
  }
  CHECK(s.sample(5, 5).size() == 5);
  CHECK(s.sample(5, 0).empty());
  CHECK_THROWS(s.sample(3, 4));

  // every index is reachable and roughly uniform
  std::vector<int> hits(10, 0);
  RandomStream u(99);
  for (int i = 0; i < 20000; ++i) ++hits[u.sample(10, 1)[0]];
  for (int h : hits) CHECK(std::abs(h - 2000) < 250);
}
