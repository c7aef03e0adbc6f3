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

// Mini-world ontology: named entities, a class taxonomy (DAG), size
// categories and relations given as unions of products of entity sets.
// A MiniWorld is immutable once constructed and safe to share between
// threads.

#ifndef PATNLI_WORLD_HPP_
#define PATNLI_WORLD_HPP_

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace patnli {

enum class NounKind { kCommon, kProper };
enum class SizeCategory { kSmall, kMedium, kLarge };

std::string_view to_string(NounKind kind);
std::string_view to_string(SizeCategory size);

// Index into MiniWorld::entities(). Entities are stored sorted by name, so
// ids order the same way names do.
using EntityId = std::size_t;

struct Entity {
  std::string name;
  NounKind noun = NounKind::kCommon;
  std::vector<std::string> classes;  // declared (direct) classes
  SizeCategory size = SizeCategory::kMedium;
};

// Subset of a world's entities.
class EntitySet {
 public:
  EntitySet() = default;
  explicit EntitySet(std::size_t universe, bool full = false)
      : bits_(universe, full) {}

  std::size_t universe() const { return bits_.size(); }
  bool contains(EntityId id) const { return id < bits_.size() && bits_[id]; }
  void insert(EntityId id) { bits_.at(id) = true; }
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  // Members in ascending id (= lexicographic name) order.
  std::vector<EntityId> ids() const;

  EntitySet operator&(const EntitySet& other) const;
  EntitySet operator|(const EntitySet& other) const;
  EntitySet operator~() const;
  bool operator==(const EntitySet& other) const = default;

 private:
  std::vector<bool> bits_;
};

// Boolean expression over class identifiers:
//   expr   := term ('|' term)*
//   term   := unary ('&' unary)*
//   unary  := '!' unary | '(' expr ')' | '*' | IDENT
// `*` is the universal class. Size categories are available as the
// implicit classes `size:S`, `size:M` and `size:L`.
class ClassExpr {
 public:
  struct Node;

  // Universal class.
  ClassExpr();
  static ClassExpr parse(std::string_view text);  // throws ParseError
  static ClassExpr atom(std::string name);

  ClassExpr operator&(const ClassExpr& other) const;
  ClassExpr operator|(const ClassExpr& other) const;
  ClassExpr operator!() const;

  // Fully parenthesized canonical text; parse(to_string()) is equivalent.
  std::string to_string() const;
  // Class identifiers mentioned, sorted and unique.
  std::vector<std::string> atoms() const;
  const Node& root() const { return *root_; }

 private:
  explicit ClassExpr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

struct ClassExpr::Node {
  enum class Kind { kTop, kAtom, kNot, kAnd, kOr };
  Kind kind = Kind::kTop;
  std::string name;  // kAtom
  std::vector<std::shared_ptr<const Node>> children;
};

// class id -> parent class ids.
using Taxonomy = std::map<std::string, std::vector<std::string>>;

// One factor of a relation product term: a class expression or an explicit
// list of entity names.
using RelationFactor = std::variant<ClassExpr, std::vector<std::string>>;

struct RelationDef {
  std::string name;
  std::size_t arity = 2;
  // Union over terms; each term is a product of `arity` factors.
  std::vector<std::vector<RelationFactor>> terms;
};

class MiniWorld {
 public:
  // Validates every invariant and throws ValidationError naming the
  // offending element.
  MiniWorld(std::vector<Entity> entities, Taxonomy taxonomy,
            std::vector<RelationDef> relations);

  std::span<const Entity> entities() const { return entities_; }
  const Entity& entity(EntityId id) const { return entities_.at(id); }
  std::optional<EntityId> find(std::string_view name) const;
  const Taxonomy& taxonomy() const { return taxonomy_; }
  bool has_class(std::string_view id) const;

  const RelationDef* relation(std::string_view name) const;
  std::vector<std::string> relation_names() const;

  // Entities whose transitive class closure satisfies `expr`. Throws
  // ValidationError on an undeclared class.
  EntitySet entities_of(const ClassExpr& expr) const;
  EntitySet entities_of(std::string_view expr) const {
    return entities_of(ClassExpr::parse(expr));
  }
  std::vector<std::string> names(const EntitySet& set) const;

  // Throws ValidationError on an unknown relation or arity mismatch.
  bool relation_holds(std::string_view rel, std::span<const EntityId> args) const;
  bool relation_holds(std::string_view rel,
                      std::span<const std::string> arg_names) const;

 private:
  struct ResolvedRelation {
    RelationDef def;
    std::vector<std::vector<EntitySet>> extension;
  };

  EntitySet class_members(const std::string& id) const;
  EntitySet evaluate(const ClassExpr::Node& node) const;
  void check_classes(const ClassExpr& expr, std::string_view context) const;

  std::vector<Entity> entities_;
  Taxonomy taxonomy_;
  std::map<std::string, EntitySet, std::less<>> members_;
  std::map<std::string, ResolvedRelation, std::less<>> relations_;
};

// Parses the YAML world file (keys `classes`, `entities`, `relations`) and
// validates it. Throws ParseError on malformed YAML and ValidationError on
// schema or invariant violations.
MiniWorld load_world(std::string_view source);

}  // namespace patnli

#endif  // PATNLI_WORLD_HPP_
