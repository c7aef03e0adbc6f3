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

#include "patnli/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <fmt/format.h>
#include <thread>

#include "patnli/rng.hpp"

namespace patnli {

namespace {

std::size_t index_of(const std::vector<std::string>& vars, const std::string& v) {
  return static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), v) -
                                  vars.begin());
}

// Restrictions rewritten over variable indices, each attached to the depth at
// which its last variable gets bound.
struct CompiledPattern {
  struct Relation {
    const std::string* name;
    std::vector<std::size_t> args;
  };
  std::vector<EntitySet> domains;
  std::vector<std::vector<Relation>> relations_at;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> distinct_at;
};

CompiledPattern compile(const Pattern& pattern, const MiniWorld& world) {
  const std::vector<std::string> vars = pattern.variables();
  const std::size_t n = vars.size();
  CompiledPattern c;
  c.domains.assign(n, EntitySet(world.entities().size(), true));
  c.relations_at.resize(n);
  c.distinct_at.resize(n);

  // Groups are split into pairs so that pruning happens as soon as both
  // members of a pair are bound.
  auto add_distinct = [&](std::vector<std::size_t> group) {
    std::sort(group.begin(), group.end());
    group.erase(std::unique(group.begin(), group.end()), group.end());
    for (std::size_t a = 0; a < group.size(); ++a) {
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        c.distinct_at[group[b]].push_back({group[a], group[b]});
      }
    }
  };
  if (pattern.all_distinct) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    add_distinct(std::move(all));
  }
  for (const auto& restriction : pattern.restrictions) {
    if (const auto* cls = std::get_if<ClassRestriction>(&restriction)) {
      std::size_t i = index_of(vars, cls->var);
      c.domains[i] = c.domains[i] & world.entities_of(cls->expr);
    } else if (const auto* rel = std::get_if<RelationRestriction>(&restriction)) {
      CompiledPattern::Relation r{&rel->relation, {}};
      for (const auto& v : rel->vars) r.args.push_back(index_of(vars, v));
      std::size_t depth = *std::max_element(r.args.begin(), r.args.end());
      c.relations_at[depth].push_back(std::move(r));
    } else {
      std::vector<std::size_t> group;
      for (const auto& v : std::get<DistinctRestriction>(restriction).vars) {
        group.push_back(index_of(vars, v));
      }
      add_distinct(std::move(group));
    }
  }
  return c;
}

bool consistent_at(const CompiledPattern& c, const MiniWorld& world,
                   const Assignment& partial, std::size_t depth) {
  for (const auto& [a, b] : c.distinct_at[depth]) {
    if (partial[a] == partial[b]) return false;
  }
  std::vector<EntityId> args;
  for (const auto& rel : c.relations_at[depth]) {
    args.clear();
    for (std::size_t i : rel.args) args.push_back(partial[i]);
    if (!world.relation_holds(*rel.name, args)) return false;
  }
  return true;
}

void extend(const CompiledPattern& c, const MiniWorld& world,
            const std::vector<std::vector<EntityId>>& candidates, Assignment& partial,
            std::size_t depth, std::vector<Assignment>& out) {
  if (depth == partial.size()) {
    out.push_back(partial);
    return;
  }
  for (EntityId id : candidates[depth]) {
    partial[depth] = id;
    if (consistent_at(c, world, partial, depth)) {
      extend(c, world, candidates, partial, depth + 1, out);
    }
  }
}

std::string noun_phrase(const Entity& entity) {
  return entity.noun == NounKind::kProper ? entity.name : "the " + entity.name;
}

std::vector<Sample> generate_one(const Pattern& pattern, const MiniWorld& world,
                                 const GenerateOptions& options,
                                 std::optional<CapWarning>& warning) {
  if (!check_seed(pattern, world)) {
    throw GenerationError(fmt::format(
        "sanity check failed: pattern '{}' seed violates its restrictions", pattern.id));
  }
  const std::vector<Assignment> space = enumerate_assignments(pattern, world);
  const std::vector<std::string> vars = pattern.variables();
  Assignment seed;
  for (const auto& v : vars) seed.push_back(*world.find(pattern.seed.at(v)));
  if (!std::binary_search(space.begin(), space.end(), seed)) {
    throw GenerationError(fmt::format(
        "sanity check failed: pattern '{}' cannot regenerate its seed problem", pattern.id));
  }

  const std::size_t k = std::min(options.per_pattern, space.size());
  if (k < options.per_pattern) {
    warning = CapWarning{pattern.id, options.per_pattern, space.size()};
  }
  RandomStream stream(options.seed, "generate/" + pattern.id);
  std::vector<std::size_t> picked = stream.sample(space.size(), k);
  std::sort(picked.begin(), picked.end());

  std::vector<Sample> out;
  out.reserve(k);
  for (std::size_t i = 0; i < picked.size(); ++i) {
    out.push_back(instantiate(pattern, world, to_binding(pattern, world, space[picked[i]]),
                              fmt::format("{}-{}", pattern.id, i + 1)));
  }
  return out;
}

}  // namespace

std::vector<Assignment> enumerate_assignments(const Pattern& pattern,
                                              const MiniWorld& world) {
  const CompiledPattern c = compile(pattern, world);
  std::vector<std::vector<EntityId>> candidates;
  for (const auto& domain : c.domains) candidates.push_back(domain.ids());
  std::vector<Assignment> out;
  Assignment partial(candidates.size());
  extend(c, world, candidates, partial, 0, out);
  return out;
}

Binding to_binding(const Pattern& pattern, const MiniWorld& world,
                   const Assignment& assignment) {
  const std::vector<std::string> vars = pattern.variables();
  if (vars.size() != assignment.size()) {
    throw ValidationError(fmt::format("pattern '{}': assignment has {} entities for {} variables",
                                      pattern.id, assignment.size(), vars.size()));
  }
  Binding out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    out.emplace(vars[i], world.entity(assignment[i]).name);
  }
  return out;
}

std::string realize(const Template& tmpl, const Binding& binding, const MiniWorld& world) {
  std::string out;
  for (const auto& token : tmpl.tokens()) {
    if (!token.placeholder) {
      out += token.text;
      continue;
    }
    auto it = binding.find(token.text);
    if (it == binding.end()) {
      throw ValidationError(fmt::format("unbound placeholder '[{}]'", token.text));
    }
    auto id = world.find(it->second);
    if (!id) throw ValidationError(fmt::format("unknown entity '{}'", it->second));
    out += noun_phrase(world.entity(*id));
  }
  if (!out.empty() && std::islower(static_cast<unsigned char>(out.front()))) {
    out.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(out.front())));
  }
  return out;
}

Sample instantiate(const Pattern& pattern, const MiniWorld& world,
                   const Binding& binding, std::string id) {
  Sample s;
  s.id = std::move(id);
  s.pattern_id = pattern.id;
  s.label = pattern.label;
  s.inference_class = pattern.inference_class;
  for (const auto& premise : pattern.premises) {
    s.premises.push_back(realize(premise, binding, world));
  }
  s.hypothesis = realize(pattern.hypothesis, binding, world);
  for (const auto& v : pattern.variables()) s.assignment.emplace(v, binding.at(v));
  return s;
}

Sample seed_problem(const Pattern& pattern, const MiniWorld& world) {
  return instantiate(pattern, world, pattern.seed, pattern.id + "-seed");
}

GenerationResult generate(std::span<const Pattern> patterns, const MiniWorld& world,
                          const GenerateOptions& options) {
  if (options.per_pattern == 0) {
    throw ValidationError("per_pattern must be a positive integer");
  }
  std::vector<const Pattern*> order;
  for (const auto& p : patterns) order.push_back(&p);
  std::sort(order.begin(), order.end(), [](const Pattern* a, const Pattern* b) {
    return pattern_id_less(a->id, b->id);
  });

  const std::size_t n = order.size();
  std::vector<std::vector<Sample>> per(n);
  std::vector<std::optional<CapWarning>> warnings(n);
  std::vector<std::exception_ptr> errors(n);

  std::size_t workers = options.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(n, 1));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        per[i] = generate_one(*order[i], world, options, warnings[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  GenerationResult result;
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (warnings[i]) result.warnings.push_back(*warnings[i]);
    for (auto& s : per[i]) result.samples.push_back(std::move(s));
  }
  return result;
}

}  // namespace patnli
