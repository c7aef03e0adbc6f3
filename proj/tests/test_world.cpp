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
#include <random>

#include "patnli/error.hpp"
#include "patnli/world.hpp"
#include "support.hpp"

using namespace patnli;
using patnli::testing::load_world_file;
using patnli::testing::test_data;

namespace {

std::string message_of(const std::string& yaml) {
  try {
    load_world(yaml);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

const char* kTwoClassHeader = R"(
classes:
  person:
  place:
entities:
  - {name: Mary, noun: proper, classes: [person], size: M}
  - {name: garden, classes: [place], size: L}
)";

}  // namespace

TEST_CASE("five-entity world loads") {
  const MiniWorld world = load_world_file(test_data("world5.yaml"));
  CHECK(world.entities().size() == 5);
  CHECK(world.names(world.entities_of("person")) ==
        std::vector<std::string>{"Cindi", "John", "Mary"});
  CHECK(world.entities_of("person & place").empty());
  CHECK(world.entities_of("*").size() == 5);
  CHECK(world.entity(*world.find("Mary")).noun == NounKind::kProper);
  CHECK(world.entity(*world.find("garden")).size == SizeCategory::kLarge);
}

TEST_CASE("fit_in holds in one direction only") {
  const MiniWorld world = load_world_file(test_data("world5.yaml"));
  const std::vector<std::string> forward{"garden", "church"};
  const std::vector<std::string> backward{"church", "garden"};
  CHECK(world.relation_holds("fit_in", forward));
  CHECK_FALSE(world.relation_holds("fit_in", backward));
  const std::vector<std::string> three{"garden", "church", "Mary"};
  CHECK_THROWS_AS(world.relation_holds("fit_in", three), ValidationError);
  CHECK_THROWS_AS(world.relation_holds("near", forward), ValidationError);
}

TEST_CASE("world validation errors name the offender") {
  CHECK(message_of("classes: {person: }\nentities: []\n").find("no entities") !=
        std::string::npos);
  const std::string vehicle = message_of(std::string(kTwoClassHeader) + R"(
relations:
  drive:
    arity: 2
    tuples: [[person, vehicle]]
)");
  CHECK(vehicle.find("vehicle") != std::string::npos);
  const std::string cycle = message_of(R"(
classes:
  a: {parents: [b]}
  b: {parents: [a]}
entities:
  - {name: x, classes: [a], size: S}
)");
  CHECK(cycle.find("cycl") != std::string::npos);
  CHECK(message_of(std::string(kTwoClassHeader) + R"(
relations:
  r:
    arity: 2
    tuples: [[person]]
)").find("'r'") != std::string::npos);
  CHECK(message_of(std::string(kTwoClassHeader) + R"(
relations:
  r:
    arity: 4
    tuples: [[person, place, place, place]]
)").find("arity") != std::string::npos);
  CHECK(message_of(R"(
classes: {person: }
entities:
  - {name: Mary, classes: [robot], size: M}
)").find("robot") != std::string::npos);
  CHECK(message_of(R"(
classes: {person: }
entities:
  - {name: Mary, classes: [person], size: XL}
)").find("XL") != std::string::npos);
  CHECK(message_of(R"(
classes: {person: }
entities:
  - {name: Mary, classes: [person], size: M}
  - {name: Mary, classes: [person], size: M}
)").find("Mary") != std::string::npos);
  CHECK(message_of("colours: []\n").find("colours") != std::string::npos);
}

TEST_CASE("malformed yaml is a parse error") {
  CHECK_THROWS_AS(load_world("entities: [unclosed\n"), ParseError);
}

TEST_CASE("class expressions") {
  CHECK(ClassExpr::parse("a & (b | !c)").to_string() == "(a & (b | !c))");
  CHECK(ClassExpr::parse("*").to_string() == "*");
  CHECK(ClassExpr::parse("size:S").atoms() == std::vector<std::string>{"size:S"});
  CHECK_THROWS_AS(ClassExpr::parse("a &"), ParseError);
  CHECK_THROWS_AS(ClassExpr::parse("(a"), ParseError);
  CHECK_THROWS_AS(ClassExpr::parse("a b"), ParseError);

  const MiniWorld world = load_world_file(test_data("world7.yaml"));
  CHECK(world.names(world.entities_of("place & !building")) ==
        std::vector<std::string>{"garden", "room"});
  CHECK(world.names(world.entities_of("size:M & place")) == std::vector<std::string>{"room"});
  CHECK_THROWS_AS(world.entities_of("vehicle"), ValidationError);
}

TEST_CASE("taxonomy is transitive") {
  const MiniWorld world = load_world_file(test_data("world7.yaml"));
  for (const char* sub : {"place_small", "building"}) {
    const EntitySet members = world.entities_of(sub);
    CHECK((members & world.entities_of("place")) == members);
  }
  CHECK(world.entities_of("place").size() == 4);
}

TEST_CASE("entities_of is monotone under union") {
  const MiniWorld world = load_world_file(test_data("world7.yaml"));
  const std::vector<std::string> atoms{"person", "place", "place_small", "building",
                                       "size:S", "size:M", "size:L"};
  for (const auto& a : atoms) {
    for (const auto& b : atoms) {
      const EntitySet ea = world.entities_of(a);
      const EntitySet both = world.entities_of(a + " | " + b);
      CHECK((ea & both) == ea);
      CHECK(both == (ea | world.entities_of(b)));
    }
  }
}

TEST_CASE("relation_holds is pure") {
  const MiniWorld world = load_world_file(test_data("world7.yaml"));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<EntityId> pick(0, world.entities().size() - 1);
  for (int i = 0; i < 200; ++i) {
    const std::vector<EntityId> args{pick(rng), pick(rng)};
    const bool first = world.relation_holds("fit_in", args);
    CHECK(world.relation_holds("fit_in", args) == first);
  }
}

TEST_CASE("demo world is large enough") {
  const MiniWorld world = load_world_file(patnli::testing::demo_world_path());
  CHECK(world.entities().size() >= 25);
  CHECK(world.taxonomy().size() >= 10);
  // size relation: S fits in M or L, M fits in L, nothing fits in S
  const std::vector<std::string> ok{"ball", "box"};
  const std::vector<std::string> bad{"box", "ball"};
  CHECK(world.relation_holds("fits_inside", ok));
  CHECK_FALSE(world.relation_holds("fits_inside", bad));
}
