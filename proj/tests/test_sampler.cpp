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
#include "patnli/sampler.hpp"
#include "support.hpp"

using namespace patnli;
using patnli::testing::load_world_file;
using patnli::testing::test_data;

namespace {

struct Bundle {
  MiniWorld world;
  std::vector<Pattern> patterns;
};

Bundle demo() {
  MiniWorld world = load_world_file(patnli::testing::demo_world_path());
  auto patterns = load_patterns(read_file(patnli::testing::demo_patterns_path()), world);
  return {std::move(world), std::move(patterns)};
}

Pattern single(const MiniWorld& world, const std::string& body) {
  return load_patterns("<patterns>" + body + "</patterns>", world).at(0);
}

}  // namespace

TEST_CASE("pattern 38 has six assignments on the seven-entity world") {
  const MiniWorld world = load_world_file(test_data("world7.yaml"));
  const Pattern p = load_patterns(read_file(test_data("pattern38.xml")), world).at(0);
  const auto got = enumerate_assignments(p, world);
  CHECK(got.size() == 6);

  // brute force over every triple
  std::vector<Assignment> oracle;
  const std::size_t n = world.entities().size();
  const EntitySet persons = world.entities_of("person");
  for (EntityId x = 0; x < n; ++x) {
    for (EntityId y = 0; y < n; ++y) {
      for (EntityId z = 0; z < n; ++z) {
        if (x == y || y == z || x == z || !persons.contains(x)) continue;
        const std::vector<EntityId> yz{y, z};
        if (world.relation_holds("fit_in", yz)) oracle.push_back({x, y, z});
      }
    }
  }
  CHECK(got == oracle);
}

TEST_CASE("empty and single-variable spaces") {
  const MiniWorld world = load_world_file(test_data("world7.yaml"));
  const Pattern none = single(world, R"(<pattern id="1" label="neutral" class="directional">
      <premise>[X] ran.</premise><hypothesis>[X] ran.</hypothesis>
      <restrict var="X" class="person &amp; building"/><seed X="John"/></pattern>)");
  CHECK(enumerate_assignments(none, world).empty());
  const Pattern one = single(world, R"(<pattern id="1" label="neutral" class="directional">
      <premise>[X] ran.</premise><hypothesis>[X] ran.</hypothesis>
      <restrict var="X" class="place"/><seed X="room"/></pattern>)");
  CHECK(enumerate_assignments(one, world).size() == 4);
}

TEST_CASE("distinctness switches") {
  const MiniWorld world = load_world_file(test_data("world7.yaml"));
  const std::string body = R"(
      <premise>[X] saw [Y] and [Z].</premise><hypothesis>[Y] saw [X].</hypothesis>
      <restrict var="X" class="person"/><restrict var="Y" class="person"/>
      <restrict var="Z" class="person"/>)";
  const Pattern strict = single(world, R"(<pattern id="1" label="neutral" class="directional">)" +
                                           body + R"(<seed X="John" Y="Mary" Z="Cindi"/></pattern>)");
  CHECK(enumerate_assignments(strict, world).size() == 6);
  const Pattern loose = single(world, R"(<pattern id="1" label="neutral" class="directional" distinct="none">)" +
                                          body + R"(<seed X="John" Y="John" Z="John"/></pattern>)");
  CHECK(enumerate_assignments(loose, world).size() == 27);
  const Pattern some = single(world, R"(<pattern id="1" label="neutral" class="directional" distinct="none">)" +
                                         body + R"(<distinct vars="X Y"/><seed X="John" Y="Mary" Z="John"/></pattern>)");
  CHECK(enumerate_assignments(some, world).size() == 18);
}

TEST_CASE("realize") {
  const MiniWorld world = load_world_file(test_data("world5.yaml"));
  CHECK(realize(Template::parse("[X] is in [Y]."), {{"X", "John"}, {"Y", "garden"}}, world) ==
        "John is in the garden.");
  CHECK(realize(Template::parse("[Y] is in [Z]."), {{"Y", "garden"}, {"Z", "church"}}, world) ==
        "The garden is in the church.");
  CHECK(realize(Template::parse("It rains."), {}, world) == "It rains.");
  CHECK(realize(Template::parse("[X] saw [X]."), {{"X", "Mary"}}, world) == "Mary saw Mary.");
  CHECK_THROWS_AS(realize(Template::parse("[X] ran."), {}, world), ValidationError);
}

TEST_CASE("demo generation") {
  const Bundle b = demo();
  const GenerationResult result = generate(b.patterns, b.world, {200, 42, 1});
  CHECK(result.samples.size() == 200 * b.patterns.size());
  CHECK(result.warnings.empty());

  std::map<std::string, std::set<Binding>> seen;
  for (const auto& s : result.samples) {
    CHECK(seen[s.pattern_id].insert(s.assignment).second);
    CHECK(s.hypothesis.find('[') == std::string::npos);
  }
  for (const auto& p : b.patterns) CHECK(seen[p.id].size() == 200);
  CHECK(result.samples.front().id == "9-1");
  CHECK(result.samples.back().id == "102f-200");
}

TEST_CASE("generation is deterministic and worker-independent") {
  const Bundle b = demo();
  const auto base = generate(b.patterns, b.world, {50, 7, 1}).samples;
  CHECK(generate(b.patterns, b.world, {50, 7, 1}).samples == base);
  CHECK(generate(b.patterns, b.world, {50, 7, 3}).samples == base);
  CHECK(generate(b.patterns, b.world, {50, 7, 0}).samples == base);
  CHECK(generate(b.patterns, b.world, {50, 8, 1}).samples != base);

  // adding or removing a pattern leaves the others untouched
  std::vector<Pattern> fewer(b.patterns.begin() + 1, b.patterns.end());
  const auto partial = generate(fewer, b.world, {50, 7, 1}).samples;
  CHECK(std::equal(partial.begin(), partial.end(), base.begin() + 50));
}

TEST_CASE("capping warns") {
  const MiniWorld world = load_world_file(test_data("world7.yaml"));
  const auto patterns = load_patterns(read_file(test_data("pattern38.xml")), world);
  const GenerationResult r = generate(patterns, world, {10, 1, 1});
  CHECK(r.samples.size() == 6);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].pattern_id == "38");
  CHECK(r.warnings[0].requested == 10);
  CHECK(r.warnings[0].available == 6);
  CHECK_THROWS_AS(generate(patterns, world, {0, 1, 1}), ValidationError);
}

TEST_CASE("sanity failure names the pattern") {
  const MiniWorld world = load_world_file(test_data("world7.yaml"));
  auto patterns = load_patterns(read_file(test_data("pattern38.xml")), world);
  patterns[0].seed = {{"X", "John"}, {"Y", "church"}, {"Z", "garden"}};
  try {
    generate(patterns, world, {5, 1, 1});
    FAIL("expected a generation error");
  } catch (const GenerationError& e) {
    CHECK(std::string(e.what()).find("'38'") != std::string::npos);
  }
}

TEST_CASE("seed problem") {
  const MiniWorld world = load_world_file(test_data("world5.yaml"));
  const Pattern p = load_patterns(read_file(test_data("pattern38.xml")), world).at(0);
  const Sample s = seed_problem(p, world);
  CHECK(s.premises == std::vector<std::string>{"John is in the garden.",
                                               "The garden is in the church."});
  CHECK(s.hypothesis == "John is in the church.");
  CHECK(s.label == Label::kEntailment);
}
