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

#include "patnli/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fmt/format.h>
#include <optional>
#include <ostream>

#include "patnli/annotation.hpp"
#include "patnli/corpus.hpp"
#include "patnli/error.hpp"
#include "patnli/io.hpp"
#include "patnli/metrics.hpp"
#include "patnli/pattern.hpp"
#include "patnli/sampler.hpp"
#include "patnli/world.hpp"

namespace patnli::cli {

namespace {

constexpr const char* kDefaultThresholds = "0.5,0.67,0.9,0.95,1.0";

struct Inputs {
  std::string world;
  std::string patterns;
};

struct GenerateArgs {
  Inputs inputs;
  std::size_t per_pattern = 200;
  std::uint64_t seed = kDefaultSeed;
  std::size_t workers = 0;
  std::string out;
};

struct SplitArgs {
  std::string corpus;
  std::size_t test = 100;
  std::optional<std::size_t> pool;
  std::vector<std::size_t> shots{1, 5, 10, 20};
  std::size_t reps = 3;
  std::uint64_t seed = kDefaultSeed;
  std::string out_dir;
};

struct EvalArgs {
  std::string corpus;
  std::string preds;
  std::string thresholds = kDefaultThresholds;
  std::string by;
  bool csv = false;
  std::string out;
  std::int64_t grid_steps = 100;
};

struct KappaArgs {
  std::string annotations;
  bool pairwise = true;
  std::string search = "joint";
  std::string mappings_out;
  std::string pairs_out;
  std::string majority_out;
};

void add_inputs(CLI::App* cmd, Inputs& inputs) {
  cmd->add_option("--world", inputs.world, "World YAML file")
      ->envname("PATNLI_WORLD")
      ->required();
  cmd->add_option("--patterns", inputs.patterns, "Pattern XML file")
      ->envname("PATNLI_PATTERNS")
      ->required();
}

std::string percent(double fraction) { return fmt::format("{:.1f}", 100.0 * fraction); }

// validate

int cmd_validate(const Inputs& inputs, bool verbose, std::ostream& out, std::ostream& err) {
  const MiniWorld world = load_world(read_file(inputs.world));
  const std::vector<Pattern> patterns = load_patterns(read_file(inputs.patterns), world);
  out << fmt::format("world: {} entities, {} classes, {} relations\n", world.entities().size(),
                     world.taxonomy().size(), world.relation_names().size());
  std::size_t failures = 0;
  for (const auto& p : patterns) {
    const std::size_t space = enumerate_assignments(p, world).size();
    const bool seed_ok = check_seed(p, world);
    if (!seed_ok) {
      ++failures;
      err << fmt::format("pattern {}: seed assignment violates its restrictions\n", p.id);
    }
    out << fmt::format("{:<6} {:<5} {:<4} {} premise(s), {} assignments{}\n", p.id,
                       short_name(p.inference_class), short_name(p.label), p.premises.size(),
                       space, seed_ok ? "" : "  SEED FAILED");
    if (verbose && seed_ok) {
      const Sample seed = seed_problem(p, world);
      for (const auto& premise : seed.premises) out << "         P: " << premise << '\n';
      out << "         H: " << seed.hypothesis << '\n';
    }
  }
  out << fmt::format("{} patterns, {} failed the seed check\n", patterns.size(), failures);
  return failures == 0 ? kExitOk : kExitFailure;
}

// generate

int cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err) {
  const std::string world_text = read_file(args.inputs.world);
  const std::string patterns_text = read_file(args.inputs.patterns);
  const MiniWorld world = load_world(world_text);
  const std::vector<Pattern> patterns = load_patterns(patterns_text, world);

  out << "seed: " << args.seed << '\n';
  GenerationResult result =
      generate(patterns, world, {args.per_pattern, args.seed, args.workers});
  for (const auto& w : result.warnings) {
    err << fmt::format("warning: capped pattern={} requested={} available={}\n", w.pattern_id,
                       w.requested, w.available);
  }
  Corpus corpus;
  corpus.samples = std::move(result.samples);
  corpus.provenance = Provenance{sha256_hex(world_text), sha256_hex(patterns_text), args.seed,
                                 args.per_pattern, ""};
  write_file_atomic(args.out, write_corpus(corpus));
  out << fmt::format("wrote {} samples from {} patterns to {}\n", corpus.samples.size(),
                     patterns.size(), args.out);
  return kExitOk;
}

// stats

int cmd_stats(const std::string& corpus_path, bool csv, std::ostream& out) {
  const CorpusStats stats = compute_stats(read_corpus(read_file(corpus_path)));
  out << (csv ? format_stats_csv(stats) : format_stats_table(stats));
  return kExitOk;
}

// split

int cmd_split(const SplitArgs& args, std::ostream& out) {
  const Corpus corpus = read_corpus(read_file(args.corpus));
  SplitSpec spec;
  spec.test_per_pattern = args.test;
  spec.pool_per_pattern = args.pool;
  spec.shot_counts = args.shots;
  spec.repetitions = args.reps;
  spec.seed = args.seed;
  out << "seed: " << args.seed << '\n';
  const Splits splits = make_splits(corpus, spec);

  const std::filesystem::path dir(args.out_dir);
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "test.jsonl", write_corpus(splits.test));
  write_file_atomic(dir / "pool.jsonl", write_corpus(splits.pool));
  out << fmt::format("test: {} samples\npool: {} samples\n", splits.test.samples.size(),
                     splits.pool.samples.size());
  for (const auto& [key, shot] : splits.shots) {
    const std::string name = fmt::format("shots-k{}-r{}.jsonl", key.first, key.second);
    write_file_atomic(dir / name, write_corpus(shot));
    out << fmt::format("{}: {} samples\n", name, shot.samples.size());
  }
  return kExitOk;
}

// eval / curve / carto

PredictionSet load_predictions(const EvalArgs& args) {
  const Corpus corpus = read_corpus(read_file(args.corpus));
  const std::vector<PredictionRecord> records = read_predictions(read_file(args.preds));
  return PredictionSet::build(corpus, records);
}

std::string threshold_header(const Threshold& t) {
  return t == Threshold::fraction(1, 1) ? "PA=1.0" : "PA>=" + t.to_string();
}

int cmd_eval(const EvalArgs& args, std::ostream& out) {
  const PredictionSet preds = load_predictions(args);
  const std::vector<Threshold> thresholds = parse_thresholds(args.thresholds);

  std::vector<GroupMetrics> rows;
  if (args.by.empty()) {
    GroupMetrics all;
    all.group = "all";
    all.patterns = preds.patterns().size();
    all.samples = preds.sample_count();
    all.accuracy = sample_accuracy(preds);
    for (const auto& t : thresholds) all.pa.push_back(pattern_accuracy(preds, t));
    rows.push_back(std::move(all));
  } else {
    rows = breakdown(preds, parse_group_by(args.by), thresholds);
  }

  if (args.csv) {
    out << "group,patterns,samples,acc";
    for (const auto& t : thresholds) out << ",pa_" << t.to_string();
    out << '\n';
    for (const auto& r : rows) {
      out << fmt::format("{},{},{},{:.6f}", r.group, r.patterns, r.samples, r.accuracy);
      for (double pa : r.pa) out << fmt::format(",{:.6f}", pa);
      out << '\n';
    }
    return kExitOk;
  }

  out << fmt::format("{:<24}{:>9}{:>9}{:>8}", "group", "patterns", "samples", "Acc");
  for (const auto& t : thresholds) out << fmt::format("{:>10}", threshold_header(t));
  out << '\n';
  for (const auto& r : rows) {
    out << fmt::format("{:<24}{:>9}{:>9}{:>8}", r.group, r.patterns, r.samples,
                       percent(r.accuracy));
    for (double pa : r.pa) out << fmt::format("{:>10}", percent(pa));
    out << '\n';
  }
  return kExitOk;
}

int cmd_curve(const EvalArgs& args, std::ostream& out) {
  const PredictionSet preds = load_predictions(args);
  const std::vector<Threshold> grid = uniform_grid(args.grid_steps);
  const PACurve curve = pa_curve(preds, grid);
  std::string csv = "threshold,pa\n";
  for (const auto& point : curve.points) {
    csv += fmt::format("{},{}\n", point.threshold.to_string(), point.pa);
  }
  write_file_atomic(args.out, csv);
  out << fmt::format("points: {}\nauc: {:.6f}\naccuracy: {:.6f}\n", curve.points.size(),
                     pa_auc(preds), sample_accuracy(preds));
  return kExitOk;
}

int cmd_carto(const EvalArgs& args, std::ostream& out) {
  const PredictionSet preds = load_predictions(args);
  std::string csv = "pattern_id,gold,confidence,variability\n";
  const std::vector<CartographyPoint> points = cartography(preds);
  for (const auto& p : points) {
    csv += fmt::format("{},{},{},{}\n", csv_field(p.pattern_id), to_string(p.gold),
                       p.confidence, p.variability);
  }
  write_file_atomic(args.out, csv);
  out << fmt::format("wrote {} patterns to {}\n", points.size(), args.out);
  return kExitOk;
}

// kappa

int cmd_kappa(const KappaArgs& args, std::ostream& out) {
  const std::vector<LikertAnnotation> annotations =
      read_annotations_csv(read_file(args.annotations));
  MappingOptions options;
  options.missing = args.pairwise ? MissingPolicy::kPairwise : MissingPolicy::kListwise;
  options.search = args.search == "greedy" ? MappingSearch::kGreedy : MappingSearch::kJoint;
  const MappingResult result = best_mappings(annotations, options);

  std::string mappings_csv = "annotator_id,lower_cut,upper_cut\n";
  out << "annotator  mapping\n";
  for (const auto& [annotator, mapping] : result.mappings) {
    out << fmt::format("{:<10} {}\n", annotator, mapping.to_string());
    mappings_csv += fmt::format("{},{},{}\n", csv_field(annotator), mapping.lower(),
                                mapping.upper());
  }
  std::string pairs_csv = "first,second,items,kappa\n";
  out << "\nfirst      second     items    kappa\n";
  for (const auto& p : result.pairs) {
    out << fmt::format("{:<10} {:<10} {:>5} {:>8.4f}\n", p.first, p.second, p.items, p.kappa);
    pairs_csv += fmt::format("{},{},{},{}\n", csv_field(p.first), csv_field(p.second), p.items,
                             p.kappa);
  }
  out << fmt::format("\nmean kappa: {:.4f}\n", result.mean_kappa);

  const auto labels = apply_mappings(annotations, result.mappings);
  const auto kept = majority_filter(labels);
  out << fmt::format("majority label: {} of {} items kept\n", kept.size(), labels.size());

  if (!args.mappings_out.empty()) write_file_atomic(args.mappings_out, mappings_csv);
  if (!args.pairs_out.empty()) write_file_atomic(args.pairs_out, pairs_csv);
  if (!args.majority_out.empty()) {
    std::string csv = "item_id,label\n";
    for (const auto& [item, label] : kept) {
      csv += fmt::format("{},{}\n", csv_field(item), to_string(label));
    }
    write_file_atomic(args.majority_out, csv);
  }
  return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pattern-based NLI corpus generation and pattern-consistency evaluation",
               "patnli"};
  app.require_subcommand(1);

  Inputs validate_inputs;
  bool verbose = false;
  auto* validate = app.add_subcommand("validate", "Check world, patterns and seed problems");
  add_inputs(validate, validate_inputs);
  validate->add_flag("-v,--verbose", verbose, "Print every seed problem");

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Sample a corpus from the patterns");
  add_inputs(generate_cmd, gen.inputs);
  generate_cmd->add_option("--per-pattern", gen.per_pattern, "Samples per pattern")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  generate_cmd->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  generate_cmd->add_option("--workers", gen.workers, "Worker threads (0 = all cores)")
      ->capture_default_str();
  generate_cmd->add_option("--out", gen.out, "Output corpus JSONL")->required();

  std::string stats_corpus;
  bool stats_csv = false;
  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("--corpus", stats_corpus, "Corpus JSONL")->required();
  stats->add_flag("--csv", stats_csv, "Emit CSV instead of a table");

  SplitArgs split;
  auto* split_cmd = app.add_subcommand("split", "Pattern-sharing test/few-shot splits");
  split_cmd->add_option("--corpus", split.corpus, "Corpus JSONL")->required();
  split_cmd->add_option("--test", split.test, "Test samples per pattern")->capture_default_str();
  split_cmd->add_option("--pool", split.pool, "Pool samples per pattern (default: the rest)");
  split_cmd->add_option("--shots", split.shots, "Shot counts per pattern")
      ->delimiter(',')
      ->capture_default_str();
  split_cmd->add_option("--reps", split.reps, "Draws per shot count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  split_cmd->add_option("--seed", split.seed, "Master seed")->capture_default_str();
  split_cmd->add_option("--out-dir", split.out_dir, "Directory for split files")->required();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Accuracy and pattern accuracy table");
  eval_cmd->add_option("--corpus", eval.corpus, "Corpus JSONL")->required();
  eval_cmd->add_option("--preds", eval.preds, "Predictions JSONL")->required();
  eval_cmd->add_option("--thresholds", eval.thresholds, "Comma-separated PA thresholds")
      ->capture_default_str();
  eval_cmd->add_option("--by", eval.by, "Break down by 'label' or 'class'");
  eval_cmd->add_flag("--csv", eval.csv, "Emit CSV instead of a table");

  EvalArgs curve;
  auto* curve_cmd = app.add_subcommand("curve", "PA curve as CSV");
  curve_cmd->add_option("--corpus", curve.corpus, "Corpus JSONL")->required();
  curve_cmd->add_option("--preds", curve.preds, "Predictions JSONL")->required();
  curve_cmd->add_option("--out", curve.out, "Output CSV (threshold,pa)")->required();
  curve_cmd->add_option("--grid-steps", curve.grid_steps, "Uniform grid resolution")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  EvalArgs carto;
  auto* carto_cmd = app.add_subcommand("carto", "Per-pattern confidence and variability");
  carto_cmd->add_option("--corpus", carto.corpus, "Corpus JSONL")->required();
  carto_cmd->add_option("--preds", carto.preds, "Predictions JSONL with probs")->required();
  carto_cmd->add_option("--out", carto.out, "Output CSV")->required();

  KappaArgs kappa;
  auto* kappa_cmd = app.add_subcommand("kappa", "Annotation mapping search and agreement");
  kappa_cmd->add_option("--annotations", kappa.annotations, "CSV item_id,annotator_id,value")
      ->required();
  kappa_cmd->add_flag("--pairwise-deletion,!--listwise-deletion", kappa.pairwise,
                      "Drop opted-out items per annotator pair (default) or everywhere");
  kappa_cmd->add_option("--search", kappa.search, "Mapping search: joint or greedy")
      ->check(CLI::IsMember({"joint", "greedy"}))
      ->capture_default_str();
  kappa_cmd->add_option("--mappings-out", kappa.mappings_out, "CSV of chosen mappings");
  kappa_cmd->add_option("--pairs-out", kappa.pairs_out, "CSV of pairwise kappa");
  kappa_cmd->add_option("--majority-out", kappa.majority_out, "CSV of majority-kept items");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(validate_inputs, verbose, out, err);
    if (*generate_cmd) return cmd_generate(gen, out, err);
    if (*stats) return cmd_stats(stats_corpus, stats_csv, out);
    if (*split_cmd) return cmd_split(split, out);
    if (*eval_cmd) return cmd_eval(eval, out);
    if (*curve_cmd) return cmd_curve(curve, out);
    if (*carto_cmd) return cmd_carto(carto, out);
    if (*kappa_cmd) return cmd_kappa(kappa, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace patnli::cli
