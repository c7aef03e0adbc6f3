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

#include "patnli/pattern.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <set>
#include <sstream>

#include "patnli/error.hpp"
#include "patnli/xml.hpp"

namespace patnli {

namespace {

bool is_var_start(char c) { return c >= 'A' && c <= 'Z'; }
bool is_var_char(char c) { return is_var_start(c) || (c >= '0' && c <= '9') || c == '_'; }

bool is_variable_name(std::string_view name) {
  return !name.empty() && is_var_start(name.front()) &&
         std::all_of(name.begin(), name.end(), is_var_char);
}

std::vector<std::string> split_vars(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (c == ' ' || c == ',' || c == '\t' || c == '\n') {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += sep;
    out += items[i];
  }
  return out;
}

std::string trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return std::string(text.substr(begin, end - begin));
}

}  // namespace

// Template

Template Template::parse(std::string_view text) {
  Template out;
  std::string literal;
  auto flush = [&] {
    if (!literal.empty()) out.tokens_.push_back({false, std::move(literal)});
    literal.clear();
  };
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '[') {
      std::size_t close = text.find(']', i + 1);
      if (close != std::string_view::npos) {
        std::string_view name = text.substr(i + 1, close - i - 1);
        if (is_variable_name(name)) {
          flush();
          out.tokens_.push_back({true, std::string(name)});
          i = close + 1;
          continue;
        }
      }
    }
    literal += text[i++];
  }
  flush();
  return out;
}

std::vector<std::string> Template::placeholders() const {
  std::vector<std::string> out;
  for (const auto& token : tokens_) {
    if (token.placeholder &&
        std::find(out.begin(), out.end(), token.text) == out.end()) {
      out.push_back(token.text);
    }
  }
  return out;
}

std::string Template::source() const {
  std::string out;
  for (const auto& token : tokens_) {
    out += token.placeholder ? "[" + token.text + "]" : token.text;
  }
  return out;
}

// Pattern

std::vector<std::string> Pattern::variables() const {
  std::set<std::string> vars;
  for (const auto& premise : premises) {
    for (auto& v : premise.placeholders()) vars.insert(std::move(v));
  }
  for (auto& v : hypothesis.placeholders()) vars.insert(std::move(v));
  return {vars.begin(), vars.end()};
}

void validate_pattern(const Pattern& pattern, const MiniWorld& world) {
  const std::string ctx = fmt::format("pattern '{}'", pattern.id);
  if (pattern.id.empty()) throw ValidationError("pattern with empty id");
  if (pattern.premises.empty() || pattern.premises.size() > 3) {
    throw ValidationError(fmt::format("{}: needs 1 to 3 premises, has {}", ctx,
                                      pattern.premises.size()));
  }
  const std::vector<std::string> vars = pattern.variables();
  auto declared = [&](const std::string& v) {
    return std::binary_search(vars.begin(), vars.end(), v);
  };
  auto require_declared = [&](const std::string& v, std::string_view where) {
    if (!declared(v)) {
      throw ValidationError(fmt::format(
          "{}: {} references undeclared variable '{}'", ctx, where, v));
    }
  };

  for (const auto& restriction : pattern.restrictions) {
    if (const auto* cls = std::get_if<ClassRestriction>(&restriction)) {
      require_declared(cls->var, "restriction");
      for (const auto& atom : cls->expr.atoms()) {
        if (!world.has_class(atom)) {
          throw ValidationError(fmt::format("{}: unknown class '{}'", ctx, atom));
        }
      }
    } else if (const auto* rel = std::get_if<RelationRestriction>(&restriction)) {
      const RelationDef* def = world.relation(rel->relation);
      if (def == nullptr) {
        throw ValidationError(fmt::format("{}: unknown relation '{}'", ctx, rel->relation));
      }
      if (def->arity != rel->vars.size()) {
        throw ValidationError(fmt::format(
            "{}: relation '{}' has arity {}, restriction lists {} variables", ctx,
            rel->relation, def->arity, rel->vars.size()));
      }
      for (const auto& v : rel->vars) require_declared(v, "restriction");
    } else {
      const auto& distinct = std::get<DistinctRestriction>(restriction);
      if (distinct.vars.size() < 2) {
        throw ValidationError(fmt::format("{}: distinct needs at least two variables", ctx));
      }
      for (const auto& v : distinct.vars) require_declared(v, "distinct");
    }
  }

  for (const auto& [var, entity] : pattern.seed) {
    require_declared(var, "seed");
    if (!world.find(entity)) {
      throw ValidationError(
          fmt::format("{}: seed entity '{}' is not in the world", ctx, entity));
    }
  }
  for (const auto& v : vars) {
    if (!pattern.seed.contains(v)) {
      throw ValidationError(fmt::format("{}: seed incomplete, no entity for '{}'", ctx, v));
    }
  }
}

bool satisfies(const Pattern& pattern, const MiniWorld& world, const Binding& binding) {
  std::map<std::string, EntityId> ids;
  for (const auto& v : pattern.variables()) {
    auto it = binding.find(v);
    if (it == binding.end()) return false;
    auto id = world.find(it->second);
    if (!id) return false;
    ids.emplace(v, *id);
  }
  auto all_different = [&](const std::vector<std::string>& group) {
    std::set<EntityId> seen;
    for (const auto& v : group) {
      if (!seen.insert(ids.at(v)).second) return false;
    }
    return true;
  };
  if (pattern.all_distinct && !all_different(pattern.variables())) return false;

  for (const auto& restriction : pattern.restrictions) {
    if (const auto* cls = std::get_if<ClassRestriction>(&restriction)) {
      if (!world.entities_of(cls->expr).contains(ids.at(cls->var))) return false;
    } else if (const auto* rel = std::get_if<RelationRestriction>(&restriction)) {
      std::vector<EntityId> args;
      for (const auto& v : rel->vars) args.push_back(ids.at(v));
      if (!world.relation_holds(rel->relation, args)) return false;
    } else if (!all_different(std::get<DistinctRestriction>(restriction).vars)) {
      return false;
    }
  }
  return true;
}

bool check_seed(const Pattern& pattern, const MiniWorld& world) {
  return satisfies(pattern, world, pattern.seed);
}

bool pattern_id_less(std::string_view a, std::string_view b) {
  auto split = [](std::string_view s) {
    std::size_t n = 0;
    while (n < s.size() && s[n] >= '0' && s[n] <= '9') ++n;
    std::string_view digits = s.substr(0, n);
    std::size_t z = 0;
    while (z + 1 < digits.size() && digits[z] == '0') ++z;
    return std::pair{digits.substr(z), s.substr(n)};
  };
  auto [da, ra] = split(a);
  auto [db, rb] = split(b);
  const bool na = !da.empty();
  const bool nb = !db.empty();
  if (na != nb) return na;  // numbered ids first
  if (na) {
    if (da.size() != db.size()) return da.size() < db.size();
    if (da != db) return da < db;
  }
  if (ra != rb) return ra < rb;
  return a < b;
}

// Loading

namespace {

void reject_unknown_attributes(const xml::Element& element,
                               std::initializer_list<std::string_view> allowed,
                               std::string_view ctx) {
  for (const auto& [key, unused] : element.attributes) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError(fmt::format("{} line {}: unexpected attribute '{}' on <{}>",
                                        ctx, element.line, key, element.name));
    }
  }
}

const std::string& required(const xml::Element& element, std::string_view key,
                            std::string_view ctx) {
  const std::string* value = element.attribute(key);
  if (value == nullptr) {
    throw ValidationError(fmt::format("{} line {}: <{}> is missing attribute '{}'", ctx,
                                      element.line, element.name, key));
  }
  return *value;
}

Pattern parse_pattern(const xml::Element& element) {
  std::string ctx = "pattern";
  reject_unknown_attributes(element, {"id", "label", "class", "distinct", "note"}, ctx);
  Pattern p;
  p.id = required(element, "id", ctx);
  ctx = fmt::format("pattern '{}'", p.id);

  const std::string& label = required(element, "label", ctx);
  auto parsed_label = parse_label(label);
  if (!parsed_label) throw ValidationError(fmt::format("{}: unknown label '{}'", ctx, label));
  p.label = *parsed_label;

  const std::string& cls = required(element, "class", ctx);
  auto parsed_class = parse_inference_class(cls);
  if (!parsed_class) {
    throw ValidationError(fmt::format("{}: unknown inference class '{}'", ctx, cls));
  }
  p.inference_class = *parsed_class;

  if (const std::string* distinct = element.attribute("distinct")) {
    if (*distinct == "all") {
      p.all_distinct = true;
    } else if (*distinct == "none") {
      p.all_distinct = false;
    } else {
      throw ValidationError(
          fmt::format("{}: distinct must be 'all' or 'none', got '{}'", ctx, *distinct));
    }
  }
  if (const std::string* note = element.attribute("note")) p.note = *note;

  bool has_hypothesis = false;
  bool has_seed = false;
  for (const auto& child : element.children) {
    if (child.name == "premise") {
      reject_unknown_attributes(child, {}, ctx);
      p.premises.push_back(Template::parse(trim(child.text)));
    } else if (child.name == "hypothesis") {
      reject_unknown_attributes(child, {}, ctx);
      if (has_hypothesis) throw ValidationError(ctx + ": more than one <hypothesis>");
      has_hypothesis = true;
      p.hypothesis = Template::parse(trim(child.text));
    } else if (child.name == "restrict") {
      if (child.attribute("var") != nullptr) {
        reject_unknown_attributes(child, {"var", "class"}, ctx);
        ClassRestriction r;
        r.var = required(child, "var", ctx);
        try {
          r.expr = ClassExpr::parse(required(child, "class", ctx));
        } catch (const ParseError& err) {
          throw ValidationError(ctx + ": " + err.what());
        }
        p.restrictions.emplace_back(std::move(r));
      } else {
        reject_unknown_attributes(child, {"rel", "vars"}, ctx);
        RelationRestriction r;
        r.relation = required(child, "rel", ctx);
        r.vars = split_vars(required(child, "vars", ctx));
        p.restrictions.emplace_back(std::move(r));
      }
    } else if (child.name == "distinct") {
      reject_unknown_attributes(child, {"vars"}, ctx);
      p.restrictions.emplace_back(DistinctRestriction{split_vars(required(child, "vars", ctx))});
    } else if (child.name == "seed") {
      if (has_seed) throw ValidationError(ctx + ": more than one <seed>");
      has_seed = true;
      for (const auto& [var, entity] : child.attributes) p.seed.emplace(var, entity);
    } else {
      throw ValidationError(fmt::format("{} line {}: unexpected element <{}>", ctx,
                                        child.line, child.name));
    }
  }
  if (!has_hypothesis) throw ValidationError(ctx + ": missing <hypothesis>");
  if (!has_seed) throw ValidationError(ctx + ": missing <seed>");
  return p;
}

}  // namespace

std::vector<Pattern> load_patterns(std::string_view source, const MiniWorld& world) {
  const xml::Element root = xml::parse(source);
  if (root.name != "patterns") {
    throw ValidationError(fmt::format("pattern file: root element must be <patterns>, got <{}>",
                                      root.name));
  }
  std::vector<Pattern> out;
  std::set<std::string> ids;
  for (const auto& child : root.children) {
    if (child.name != "pattern") {
      throw ValidationError(fmt::format("pattern file line {}: unexpected element <{}>",
                                        child.line, child.name));
    }
    Pattern p = parse_pattern(child);
    if (!ids.insert(p.id).second) {
      throw ValidationError(fmt::format("duplicate pattern id '{}'", p.id));
    }
    validate_pattern(p, world);
    out.push_back(std::move(p));
  }
  return out;
}

std::string serialize_patterns(std::span<const Pattern> patterns) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<patterns>\n";
  for (const auto& p : patterns) {
    out << "  <pattern id=\"" << xml::escape(p.id) << "\" label=\"" << to_string(p.label)
        << "\" class=\"" << to_string(p.inference_class) << "\"";
    if (!p.all_distinct) out << " distinct=\"none\"";
    if (!p.note.empty()) out << " note=\"" << xml::escape(p.note) << "\"";
    out << ">\n";
    for (const auto& premise : p.premises) {
      out << "    <premise>" << xml::escape(premise.source()) << "</premise>\n";
    }
    out << "    <hypothesis>" << xml::escape(p.hypothesis.source()) << "</hypothesis>\n";
    for (const auto& restriction : p.restrictions) {
      if (const auto* cls = std::get_if<ClassRestriction>(&restriction)) {
        out << "    <restrict var=\"" << xml::escape(cls->var) << "\" class=\""
            << xml::escape(cls->expr.to_string()) << "\"/>\n";
      } else if (const auto* rel = std::get_if<RelationRestriction>(&restriction)) {
        out << "    <restrict rel=\"" << xml::escape(rel->relation) << "\" vars=\""
            << xml::escape(join(rel->vars, " ")) << "\"/>\n";
      } else {
        out << "    <distinct vars=\""
            << xml::escape(join(std::get<DistinctRestriction>(restriction).vars, " "))
            << "\"/>\n";
      }
    }
    out << "    <seed";
    for (const auto& [var, entity] : p.seed) {
      out << ' ' << var << "=\"" << xml::escape(entity) << '"';
    }
    out << "/>\n  </pattern>\n";
  }
  out << "</patterns>\n";
  return out.str();
}

}  // namespace patnli
