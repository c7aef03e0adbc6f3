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

#include "patnli/world.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <fmt/format.h>
#include <set>
#include <utility>

#include "patnli/error.hpp"

namespace patnli {

namespace {

constexpr std::string_view kSizePrefix = "size:";

std::string size_class(SizeCategory size) {
  return std::string(kSizePrefix) + std::string(to_string(size));
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' ||
         c == '.' || c == '-';
}

using NodePtr = std::shared_ptr<const ClassExpr::Node>;

NodePtr make_node(ClassExpr::Node::Kind kind, std::string name = {},
                  std::vector<NodePtr> children = {}) {
  auto node = std::make_shared<ClassExpr::Node>();
  node->kind = kind;
  node->name = std::move(name);
  node->children = std::move(children);
  return node;
}

// Recursive-descent parser for class expressions.
class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr node = parse_or();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return node;
  }

 private:
  NodePtr parse_or() {
    std::vector<NodePtr> items{parse_and()};
    while (accept('|')) items.push_back(parse_and());
    if (items.size() == 1) return items.front();
    return make_node(ClassExpr::Node::Kind::kOr, {}, std::move(items));
  }

  NodePtr parse_and() {
    std::vector<NodePtr> items{parse_unary()};
    while (accept('&')) items.push_back(parse_unary());
    if (items.size() == 1) return items.front();
    return make_node(ClassExpr::Node::Kind::kAnd, {}, std::move(items));
  }

  NodePtr parse_unary() {
    if (accept('!')) {
      return make_node(ClassExpr::Node::Kind::kNot, {}, {parse_unary()});
    }
    if (accept('(')) {
      NodePtr inner = parse_or();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (accept('*')) return make_node(ClassExpr::Node::Kind::kTop);
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected class identifier");
    return make_node(ClassExpr::Node::Kind::kAtom,
                     std::string(text_.substr(start, pos_ - start)));
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(std::string_view what) const {
    throw ParseError(fmt::format("class expression '{}': {} at offset {}",
                                 text_, what, pos_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string node_to_string(const ClassExpr::Node& node) {
  using Kind = ClassExpr::Node::Kind;
  switch (node.kind) {
    case Kind::kTop:
      return "*";
    case Kind::kAtom:
      return node.name;
    case Kind::kNot:
      return "!" + node_to_string(*node.children.front());
    case Kind::kAnd:
    case Kind::kOr: {
      std::string out = "(";
      const char* sep = node.kind == Kind::kAnd ? " & " : " | ";
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i > 0) out += sep;
        out += node_to_string(*node.children[i]);
      }
      return out + ")";
    }
  }
  return "*";
}

void collect_atoms(const ClassExpr::Node& node, std::set<std::string>& out) {
  if (node.kind == ClassExpr::Node::Kind::kAtom) out.insert(node.name);
  for (const auto& child : node.children) collect_atoms(*child, out);
}

}  // namespace

std::string_view to_string(NounKind kind) {
  return kind == NounKind::kProper ? "proper" : "common";
}

std::string_view to_string(SizeCategory size) {
  switch (size) {
    case SizeCategory::kSmall:
      return "S";
    case SizeCategory::kMedium:
      return "M";
    case SizeCategory::kLarge:
      return "L";
  }
  return "?";
}

// EntitySet

std::size_t EntitySet::size() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::vector<EntityId> EntitySet::ids() const {
  std::vector<EntityId> out;
  for (EntityId i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back(i);
  }
  return out;
}

EntitySet EntitySet::operator&(const EntitySet& other) const {
  EntitySet out(universe());
  for (EntityId i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] && other.contains(i);
  return out;
}

EntitySet EntitySet::operator|(const EntitySet& other) const {
  EntitySet out(std::max(universe(), other.universe()));
  for (EntityId i = 0; i < out.bits_.size(); ++i) {
    out.bits_[i] = contains(i) || other.contains(i);
  }
  return out;
}

EntitySet EntitySet::operator~() const {
  EntitySet out(universe());
  for (EntityId i = 0; i < bits_.size(); ++i) out.bits_[i] = !bits_[i];
  return out;
}

// ClassExpr

ClassExpr::ClassExpr() : root_(make_node(Node::Kind::kTop)) {}

ClassExpr ClassExpr::parse(std::string_view text) {
  return ClassExpr(ExprParser(text).parse());
}

ClassExpr ClassExpr::atom(std::string name) {
  return ClassExpr(make_node(Node::Kind::kAtom, std::move(name)));
}

ClassExpr ClassExpr::operator&(const ClassExpr& other) const {
  return ClassExpr(make_node(Node::Kind::kAnd, {}, {root_, other.root_}));
}

ClassExpr ClassExpr::operator|(const ClassExpr& other) const {
  return ClassExpr(make_node(Node::Kind::kOr, {}, {root_, other.root_}));
}

ClassExpr ClassExpr::operator!() const {
  return ClassExpr(make_node(Node::Kind::kNot, {}, {root_}));
}

std::string ClassExpr::to_string() const { return node_to_string(*root_); }

std::vector<std::string> ClassExpr::atoms() const {
  std::set<std::string> out;
  collect_atoms(*root_, out);
  return {out.begin(), out.end()};
}

// MiniWorld

MiniWorld::MiniWorld(std::vector<Entity> entities, Taxonomy taxonomy,
                     std::vector<RelationDef> relations)
    : entities_(std::move(entities)), taxonomy_(std::move(taxonomy)) {
  if (entities_.empty()) throw ValidationError("world: no entities");

  for (const auto& [cls, parents] : taxonomy_) {
    if (cls.empty()) throw ValidationError("taxonomy: empty class identifier");
    if (cls.rfind(kSizePrefix, 0) == 0) {
      throw ValidationError(
          fmt::format("taxonomy: class '{}' uses the reserved prefix 'size:'", cls));
    }
    for (const auto& parent : parents) {
      if (!taxonomy_.contains(parent)) {
        throw ValidationError(fmt::format(
            "taxonomy: class '{}' has undeclared parent '{}'", cls, parent));
      }
    }
  }

  // Cycle check: iterative DFS with white/grey/black marking.
  std::map<std::string, int> color;
  for (const auto& [start, unused] : taxonomy_) {
    if (color[start] != 0) continue;
    std::vector<std::pair<std::string, std::size_t>> stack{{start, 0}};
    color[start] = 1;
    while (!stack.empty()) {
      auto& [cls, next] = stack.back();
      const auto& parents = taxonomy_.at(cls);
      if (next == parents.size()) {
        color[cls] = 2;
        stack.pop_back();
        continue;
      }
      const std::string& parent = parents[next++];
      if (color[parent] == 1) {
        throw ValidationError(
            fmt::format("taxonomy: cycle through class '{}'", parent));
      }
      if (color[parent] == 0) {
        color[parent] = 1;
        stack.emplace_back(parent, 0);
      }
    }
  }

  std::sort(entities_.begin(), entities_.end(),
            [](const Entity& a, const Entity& b) { return a.name < b.name; });
  for (std::size_t i = 0; i < entities_.size(); ++i) {
    const Entity& e = entities_[i];
    if (e.name.empty()) throw ValidationError("entity with empty name");
    if (i > 0 && entities_[i - 1].name == e.name) {
      throw ValidationError(fmt::format("entity '{}' declared twice", e.name));
    }
    if (e.classes.empty()) {
      throw ValidationError(fmt::format("entity '{}' has no classes", e.name));
    }
    for (const auto& cls : e.classes) {
      if (!taxonomy_.contains(cls)) {
        throw ValidationError(
            fmt::format("entity '{}' has undeclared class '{}'", e.name, cls));
      }
    }
  }

  const std::size_t n = entities_.size();
  for (const auto& [cls, unused] : taxonomy_) members_.emplace(cls, EntitySet(n));
  for (SizeCategory size :
       {SizeCategory::kSmall, SizeCategory::kMedium, SizeCategory::kLarge}) {
    members_.emplace(size_class(size), EntitySet(n));
  }
  for (EntityId id = 0; id < n; ++id) {
    std::vector<std::string> frontier = entities_[id].classes;
    std::set<std::string> seen;
    while (!frontier.empty()) {
      std::string cls = std::move(frontier.back());
      frontier.pop_back();
      if (!seen.insert(cls).second) continue;
      members_.at(cls).insert(id);
      for (const auto& parent : taxonomy_.at(cls)) frontier.push_back(parent);
    }
    members_.at(size_class(entities_[id].size)).insert(id);
  }

  for (auto& def : relations) {
    if (def.name.empty()) throw ValidationError("relation with empty name");
    if (relations_.contains(def.name)) {
      throw ValidationError(fmt::format("relation '{}' declared twice", def.name));
    }
    if (def.arity != 2 && def.arity != 3) {
      throw ValidationError(fmt::format(
          "relation '{}': arity must be 2 or 3, got {}", def.name, def.arity));
    }
    if (def.terms.empty()) {
      throw ValidationError(fmt::format("relation '{}': no tuples", def.name));
    }
    ResolvedRelation resolved;
    for (std::size_t t = 0; t < def.terms.size(); ++t) {
      const auto& term = def.terms[t];
      if (term.size() != def.arity) {
        throw ValidationError(fmt::format(
            "relation '{}': term {} has {} factors, arity is {}", def.name,
            t + 1, term.size(), def.arity));
      }
      std::vector<EntitySet> factors;
      for (const auto& factor : term) {
        EntitySet set(n);
        if (const auto* expr = std::get_if<ClassExpr>(&factor)) {
          check_classes(*expr, fmt::format("relation '{}'", def.name));
          set = entities_of(*expr);
        } else {
          for (const auto& name : std::get<std::vector<std::string>>(factor)) {
            auto id = find(name);
            if (!id) {
              throw ValidationError(fmt::format(
                  "relation '{}': unknown entity '{}'", def.name, name));
            }
            set.insert(*id);
          }
        }
        if (set.empty()) {
          throw ValidationError(fmt::format(
              "relation '{}': term {} has a factor with no entities", def.name,
              t + 1));
        }
        factors.push_back(std::move(set));
      }
      resolved.extension.push_back(std::move(factors));
    }
    std::string name = def.name;
    resolved.def = std::move(def);
    relations_.emplace(std::move(name), std::move(resolved));
  }
}

std::optional<EntityId> MiniWorld::find(std::string_view name) const {
  auto it = std::lower_bound(
      entities_.begin(), entities_.end(), name,
      [](const Entity& e, std::string_view key) { return e.name < key; });
  if (it == entities_.end() || it->name != name) return std::nullopt;
  return static_cast<EntityId>(it - entities_.begin());
}

bool MiniWorld::has_class(std::string_view id) const {
  return members_.find(id) != members_.end();
}

const RelationDef* MiniWorld::relation(std::string_view name) const {
  auto it = relations_.find(name);
  return it == relations_.end() ? nullptr : &it->second.def;
}

std::vector<std::string> MiniWorld::relation_names() const {
  std::vector<std::string> out;
  for (const auto& [name, unused] : relations_) out.push_back(name);
  return out;
}

void MiniWorld::check_classes(const ClassExpr& expr,
                              std::string_view context) const {
  for (const auto& atom : expr.atoms()) {
    if (!has_class(atom)) {
      throw ValidationError(
          fmt::format("{}: unknown class '{}'", context, atom));
    }
  }
}

EntitySet MiniWorld::class_members(const std::string& id) const {
  auto it = members_.find(id);
  if (it == members_.end()) {
    throw ValidationError(fmt::format("unknown class '{}'", id));
  }
  return it->second;
}

EntitySet MiniWorld::evaluate(const ClassExpr::Node& node) const {
  using Kind = ClassExpr::Node::Kind;
  switch (node.kind) {
    case Kind::kTop:
      return EntitySet(entities_.size(), true);
    case Kind::kAtom:
      return class_members(node.name);
    case Kind::kNot:
      return ~evaluate(*node.children.front());
    case Kind::kAnd: {
      EntitySet acc(entities_.size(), true);
      for (const auto& child : node.children) acc = acc & evaluate(*child);
      return acc;
    }
    case Kind::kOr: {
      EntitySet acc(entities_.size());
      for (const auto& child : node.children) acc = acc | evaluate(*child);
      return acc;
    }
  }
  return EntitySet(entities_.size());
}

EntitySet MiniWorld::entities_of(const ClassExpr& expr) const {
  return evaluate(expr.root());
}

std::vector<std::string> MiniWorld::names(const EntitySet& set) const {
  std::vector<std::string> out;
  for (EntityId id : set.ids()) out.push_back(entities_.at(id).name);
  return out;
}

bool MiniWorld::relation_holds(std::string_view rel,
                               std::span<const EntityId> args) const {
  auto it = relations_.find(rel);
  if (it == relations_.end()) {
    throw ValidationError(fmt::format("unknown relation '{}'", rel));
  }
  const ResolvedRelation& resolved = it->second;
  if (args.size() != resolved.def.arity) {
    throw ValidationError(fmt::format("relation '{}' has arity {}, got {} arguments",
                                      rel, resolved.def.arity, args.size()));
  }
  return std::any_of(
      resolved.extension.begin(), resolved.extension.end(),
      [&](const std::vector<EntitySet>& term) {
        for (std::size_t i = 0; i < args.size(); ++i) {
          if (!term[i].contains(args[i])) return false;
        }
        return true;
      });
}

bool MiniWorld::relation_holds(std::string_view rel,
                               std::span<const std::string> arg_names) const {
  std::vector<EntityId> ids;
  for (const auto& name : arg_names) {
    auto id = find(name);
    if (!id) throw ValidationError(fmt::format("unknown entity '{}'", name));
    ids.push_back(*id);
  }
  return relation_holds(rel, ids);
}

// YAML loading

namespace {

std::string where(const YAML::Node& node) {
  const YAML::Mark mark = node.Mark();
  if (mark.line < 0) return "";
  return fmt::format(" (line {})", mark.line + 1);
}

std::string scalar(const YAML::Node& node, std::string_view what) {
  if (!node || !node.IsScalar()) {
    throw ValidationError(fmt::format("{}: expected a string{}", what, where(node)));
  }
  return node.as<std::string>();
}

std::vector<std::string> string_list(const YAML::Node& node, std::string_view what) {
  std::vector<std::string> out;
  if (!node || node.IsNull()) return out;
  if (!node.IsSequence()) {
    throw ValidationError(fmt::format("{}: expected a list{}", what, where(node)));
  }
  for (const auto& item : node) out.push_back(scalar(item, what));
  return out;
}

void reject_unknown_keys(const YAML::Node& map,
                         std::initializer_list<std::string_view> allowed,
                         std::string_view what) {
  for (const auto& kv : map) {
    std::string key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError(fmt::format("{}: unknown key '{}'{}", what, key,
                                        where(kv.first)));
    }
  }
}

Entity parse_entity(const YAML::Node& node) {
  if (!node.IsMap()) {
    throw ValidationError(fmt::format("entities: expected a mapping{}", where(node)));
  }
  reject_unknown_keys(node, {"name", "noun", "classes", "size"}, "entity");
  Entity e;
  e.name = scalar(node["name"], "entity name");
  const std::string context = fmt::format("entity '{}'", e.name);
  const std::string noun = node["noun"] ? scalar(node["noun"], context) : "common";
  if (noun == "common") {
    e.noun = NounKind::kCommon;
  } else if (noun == "proper") {
    e.noun = NounKind::kProper;
  } else {
    throw ValidationError(
        fmt::format("{}: noun must be 'common' or 'proper', got '{}'", context, noun));
  }
  e.classes = string_list(node["classes"], context);
  const std::string size = scalar(node["size"], context + " size");
  if (size == "S") {
    e.size = SizeCategory::kSmall;
  } else if (size == "M") {
    e.size = SizeCategory::kMedium;
  } else if (size == "L") {
    e.size = SizeCategory::kLarge;
  } else {
    throw ValidationError(
        fmt::format("{}: size must be S, M or L, got '{}'", context, size));
  }
  return e;
}

RelationDef parse_relation(const std::string& name, const YAML::Node& node) {
  const std::string context = fmt::format("relation '{}'", name);
  if (!node.IsMap()) {
    throw ValidationError(fmt::format("{}: expected a mapping{}", context, where(node)));
  }
  reject_unknown_keys(node, {"arity", "tuples"}, context);
  RelationDef def;
  def.name = name;
  if (!node["arity"]) throw ValidationError(context + ": missing arity");
  try {
    def.arity = node["arity"].as<std::size_t>();
  } catch (const YAML::Exception&) {
    throw ValidationError(context + ": arity must be an integer");
  }
  const YAML::Node tuples = node["tuples"];
  if (!tuples || !tuples.IsSequence()) {
    throw ValidationError(context + ": tuples must be a list of product terms");
  }
  for (const auto& term_node : tuples) {
    if (!term_node.IsSequence()) {
      throw ValidationError(fmt::format("{}: each product term must be a list{}",
                                        context, where(term_node)));
    }
    std::vector<RelationFactor> term;
    for (const auto& factor : term_node) {
      if (factor.IsScalar()) {
        try {
          term.emplace_back(ClassExpr::parse(factor.as<std::string>()));
        } catch (const ParseError& err) {
          throw ValidationError(context + ": " + err.what());
        }
      } else if (factor.IsSequence()) {
        term.emplace_back(string_list(factor, context));
      } else {
        throw ValidationError(fmt::format(
            "{}: factor must be a class expression or a list of entities{}",
            context, where(factor)));
      }
    }
    def.terms.push_back(std::move(term));
  }
  return def;
}

}  // namespace

MiniWorld load_world(std::string_view source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(source));
  } catch (const YAML::Exception& err) {
    throw ParseError(fmt::format("world file: {}", err.what()));
  }
  if (!root.IsMap()) throw ParseError("world file: top level must be a mapping");
  reject_unknown_keys(root, {"classes", "entities", "relations"}, "world file");

  Taxonomy taxonomy;
  if (const YAML::Node classes = root["classes"]; classes && !classes.IsNull()) {
    if (!classes.IsMap()) throw ValidationError("classes: expected a mapping");
    for (const auto& kv : classes) {
      std::string id = kv.first.as<std::string>();
      std::vector<std::string> parents;
      if (kv.second.IsMap()) {
        reject_unknown_keys(kv.second, {"parents"}, "class '" + id + "'");
        parents = string_list(kv.second["parents"], "class '" + id + "'");
      } else if (!kv.second.IsNull()) {
        throw ValidationError(
            fmt::format("class '{}': expected {{parents: [...]}}{}", id, where(kv.second)));
      }
      if (!taxonomy.emplace(id, std::move(parents)).second) {
        throw ValidationError(fmt::format("class '{}' declared twice", id));
      }
    }
  }

  std::vector<Entity> entities;
  if (const YAML::Node list = root["entities"]; list && !list.IsNull()) {
    if (!list.IsSequence()) throw ValidationError("entities: expected a list");
    for (const auto& node : list) entities.push_back(parse_entity(node));
  }

  std::vector<RelationDef> relations;
  if (const YAML::Node rels = root["relations"]; rels && !rels.IsNull()) {
    if (!rels.IsMap()) throw ValidationError("relations: expected a mapping");
    for (const auto& kv : rels) {
      relations.push_back(parse_relation(kv.first.as<std::string>(), kv.second));
    }
  }

  return MiniWorld(std::move(entities), std::move(taxonomy), std::move(relations));
}

}  // namespace patnli
