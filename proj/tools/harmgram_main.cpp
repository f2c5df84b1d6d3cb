// Command-line front end: each subcommand runs one pipeline stage and writes
// a deterministic CSV/DOT report, so stages can be inspected and diffed.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "harmgram/association.hpp"
#include "harmgram/corpus.hpp"
#include "harmgram/csv.hpp"
#include "harmgram/encoding.hpp"
#include "harmgram/errors.hpp"
#include "harmgram/fixtures.hpp"
#include "harmgram/ngram.hpp"
#include "harmgram/ranking.hpp"
#include "harmgram/reduction.hpp"

namespace {

using namespace harmgram;

int default_threads() {
  if (const char* env = std::getenv("HARMGRAM_THREADS")) {
    int value = std::atoi(env);
    if (value > 0) return value;
  }
  return 0;  // let OpenMP decide
}

// Buffers everything and writes in one go, so outputs are all-or-nothing.
void write_output(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << bytes;
  if (!out) throw Error("failed writing output file: " + path);
}

struct CommonOptions {
  std::string manifest;
  std::string out = "-";
  int threads = default_threads();
};

void add_common(CLI::App* cmd, CommonOptions& common, bool needs_manifest = true) {
  auto* manifest =
      cmd->add_option("--manifest", common.manifest, "corpus manifest (note/key path pairs)");
  if (needs_manifest) manifest->required();
  cmd->add_option("--out", common.out, "output path, '-' for stdout");
  cmd->add_option("--threads", common.threads,
                  "worker count (default: HARMGRAM_THREADS or all cores)");
}

EncodedCorpus load_encoded(const CommonOptions& common) {
  return encode_corpus(load_corpus(common.manifest), common.threads);
}

// ---------------------------------------------------------------------------
// encode
// ---------------------------------------------------------------------------

int run_encode(const CommonOptions& common) {
  auto encoded = load_encoded(common);
  std::ostringstream out;
  out << "movement,onset_num,onset_den,dur_num,dur_den,csdc,mode,in_pivot,distinct_degrees\n";
  for (const auto& movement : encoded) {
    for (const auto& ev : movement.events) {
      out << csv_quote(movement.id) << ',' << ev.onset.numerator() << ','
          << ev.onset.denominator() << ',' << ev.duration.numerator() << ','
          << ev.duration.denominator() << ',' << csv_quote(ev.csdc.str()) << ','
          << mode_name(ev.mode) << ',' << (ev.in_pivot ? 1 : 0) << ','
          << ev.distinct_degree_count() << "\n";
    }
  }
  write_output(common.out, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// unigrams
// ---------------------------------------------------------------------------

struct UnigramCli {
  CommonOptions common;
  std::string mode = "both";
  int min_distinct = 1;
  std::string weight = "duration";
  bool exclude_pivots = false;
  bool rank_frequency = false;
};

int run_unigrams(const UnigramCli& cli) {
  UnigramOptions options;
  if (cli.mode == "major") {
    options.mode = ModeFilter::major;
  } else if (cli.mode == "minor") {
    options.mode = ModeFilter::minor;
  } else if (cli.mode == "both") {
    options.mode = ModeFilter::both;
  } else {
    throw ArgumentError("--mode must be major, minor, or both");
  }
  if (cli.weight == "duration") {
    options.weight = WeightScheme::duration;
  } else if (cli.weight == "count") {
    options.weight = WeightScheme::count;
  } else {
    throw ArgumentError("--weight must be duration or count");
  }
  options.min_distinct = cli.min_distinct;
  options.exclude_pivots = cli.exclude_pivots;

  auto dist = unigram_distribution(load_encoded(cli.common), options);
  std::ostringstream out;
  if (cli.rank_frequency) {
    if (dist.empty()) {
      out << "rank,frequency\n";
    } else {
      write_rank_frequency_csv(out, rank_frequency_series(dist.proportions));
    }
  } else {
    write_unigrams_csv(out, dist);
  }
  write_output(cli.common.out, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// ngrams
// ---------------------------------------------------------------------------

struct NgramCli {
  CommonOptions common;
  int n = 2;
  int t = 0;
  bool vectors = false;
  int t_max = 10;
};

int run_ngrams(const NgramCli& cli) {
  auto encoded = load_encoded(cli.common);
  std::ostringstream out;
  if (cli.vectors) {
    if (cli.n != 2) throw ArgumentError("--vectors requires --n 2");
    write_skip_vectors_csv(out, skip_count_vectors(encoded, cli.t_max, cli.common.threads));
  } else {
    write_count_table_csv(out, count_skipgrams(encoded, cli.n, cli.t, cli.common.threads));
  }
  write_output(cli.common.out, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// rank
// ---------------------------------------------------------------------------

struct RankCli {
  CommonOptions common;
  std::string by = "count";
  bool exclude = false;
  int t = 0;
  int t_max = 10;
};

int run_rank(const RankCli& cli) {
  auto encoded = load_encoded(cli.common);
  std::ostringstream out;
  if (cli.by == "count") {
    auto table = count_skipgrams(encoded, 2, cli.t, cli.common.threads);
    auto ranking = rank_by_count(table, cli.exclude);
    write_ranking_csv(out, ranking, table.counts.size(), count_excluded_types(table),
                      /*score_is_count=*/true);
  } else if (cli.by == "beta3") {
    auto vectors = skip_count_vectors(encoded, cli.t_max, cli.common.threads);
    auto ranking = rank_by_beta3(vectors, cli.exclude, cli.common.threads);
    std::size_t excluded = 0;
    for (const auto& [type, vec] : vectors) {
      excluded += exclusion_flags(type.members[0], type.members[1]).excluded();
    }
    write_ranking_csv(out, ranking, vectors.size(), excluded, /*score_is_count=*/false);
  } else {
    throw ArgumentError("--by must be count or beta3");
  }
  write_output(cli.common.out, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// assoc / attractors
// ---------------------------------------------------------------------------

struct AssocCli {
  CommonOptions common;
  std::string chord1;
  std::string chord2;
  int t_limit = 5;
};

int run_assoc(const AssocCli& cli) {
  auto aggregates =
      bigram_token_aggregates(load_encoded(cli.common), cli.t_limit, cli.common.threads);
  std::ostringstream out;
  if (cli.chord1.empty() != cli.chord2.empty()) {
    throw ArgumentError("--chord1 and --chord2 must be given together");
  }
  if (!cli.chord1.empty()) {
    out << "chord1,chord2,a,b,c,d,p_value,asym\n";
    Csdc c1 = Csdc::parse(cli.chord1);
    Csdc c2 = Csdc::parse(cli.chord2);
    write_association_row_csv(out, c1, c2, contingency_from_aggregates(aggregates, c1, c2));
  } else {
    write_association_csv(out, aggregates);
  }
  write_output(cli.common.out, out.str());
  return 0;
}

SumAsymConvention parse_convention(const std::string& name) {
  if (name == "received") return SumAsymConvention::received;
  if (name == "plain") return SumAsymConvention::plain;
  throw ArgumentError("--sum-asym must be received or plain");
}

struct AttractorCli {
  CommonOptions common;
  int t_limit = 5;
  std::string sum_asym = "received";
};

int run_attractors(const AttractorCli& cli) {
  auto stats = attractor_table(load_encoded(cli.common), cli.t_limit,
                               parse_convention(cli.sum_asym), cli.common.threads);
  std::ostringstream out;
  write_attractors_csv(out, stats);
  write_output(cli.common.out, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// reduce
// ---------------------------------------------------------------------------

struct ReduceCli {
  CommonOptions common;
  int survivors = 0;
  double threshold = 0;
  bool has_threshold = false;
  std::string format = "csv";
  std::string force_source = "combined";
  std::string sum_asym = "received";
  int t_limit = 5;
};

ForceSource parse_force_source(const std::string& name) {
  if (name == "combined") return ForceSource::combined;
  if (name == "n_attractor") return ForceSource::n_attractor;
  if (name == "sum_asym") return ForceSource::sum_asym;
  if (name == "pct_attractor") return ForceSource::pct_attractor;
  throw ArgumentError("--force-source must be combined, n_attractor, sum_asym, or pct_attractor");
}

int run_reduce(const ReduceCli& cli) {
  if (cli.survivors <= 0 && !cli.has_threshold) {
    throw ArgumentError("reduce needs --survivors or --force-threshold");
  }
  auto encoded = load_encoded(cli.common);
  auto stats = attractor_table(encoded, cli.t_limit, parse_convention(cli.sum_asym),
                               cli.common.threads);
  auto forces = make_force_ranking(stats, parse_force_source(cli.force_source));

  std::ostringstream out;
  if (cli.format == "csv") {
    out << "movement,survivors,position,onset_num,onset_den,csdc\n";
  }
  for (const auto& movement : encoded) {
    if (movement.events.empty()) continue;
    auto tree = reduce(movement.events, forces);
    int survivors = cli.survivors;
    if (cli.has_threshold) {
      // Removal forces never decrease, so the threshold level is the first
      // step that would prune a chord at or above it.
      int removals = 0;
      for (const auto& link : tree.links) {
        if (forces.at(tree.leaves[static_cast<std::size_t>(link.removed)].csdc) >=
            cli.threshold) {
          break;
        }
        ++removals;
      }
      survivors = static_cast<int>(tree.leaves.size()) - removals;
    }
    survivors = std::clamp(survivors, 1, static_cast<int>(tree.leaves.size()));
    if (cli.format == "csv") {
      write_reduction_csv(out, movement.id, tree, survivors);
    } else if (cli.format == "dot") {
      export_tree_dot(tree, out);
    } else if (cli.format == "text") {
      export_tree_text(tree, out);
    } else {
      throw ArgumentError("--format must be csv, dot, or text");
    }
  }
  write_output(cli.common.out, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// fixtures
// ---------------------------------------------------------------------------

struct FixtureCli {
  std::string out_dir;
  FixtureConfig config;
};

int run_fixtures(const FixtureCli& cli) {
  std::string manifest = write_fixture_corpus(cli.config, cli.out_dir);
  std::cout << manifest << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"harmonic pattern mining over note-event corpora"};
  app.require_subcommand(1);

  CommonOptions encode_opts;
  auto* encode_cmd = app.add_subcommand("encode", "expand and encode the corpus to chord events");
  add_common(encode_cmd, encode_opts);

  UnigramCli unigram_cli;
  auto* unigrams_cmd = app.add_subcommand("unigrams", "chord-token distribution");
  add_common(unigrams_cmd, unigram_cli.common);
  unigrams_cmd->add_option("--mode", unigram_cli.mode, "major, minor, or both");
  unigrams_cmd->add_option("--min-distinct", unigram_cli.min_distinct,
                           "keep events with at least this many distinct degrees (1..4)");
  unigrams_cmd->add_option("--weight", unigram_cli.weight, "duration or count");
  unigrams_cmd->add_flag("--exclude-pivots", unigram_cli.exclude_pivots,
                         "drop events inside pivot spans");
  unigrams_cmd->add_flag("--rank-frequency", unigram_cli.rank_frequency,
                         "emit a rank,frequency series instead of proportions");

  NgramCli ngram_cli;
  auto* ngrams_cmd = app.add_subcommand("ngrams", "n-gram token counts");
  add_common(ngrams_cmd, ngram_cli.common);
  ngrams_cmd->add_option("--n", ngram_cli.n, "n-gram order (>= 1)");
  ngrams_cmd->add_option("--t", ngram_cli.t, "total skip budget (0 = contiguous)");
  ngrams_cmd->add_flag("--vectors", ngram_cli.vectors, "per-skip bigram count vectors");
  ngrams_cmd->add_option("--t-max", ngram_cli.t_max, "largest skip for --vectors");

  RankCli rank_cli;
  auto* rank_cmd = app.add_subcommand("rank", "rank bigram types");
  add_common(rank_cmd, rank_cli.common);
  rank_cmd->add_option("--by", rank_cli.by, "count or beta3");
  rank_cmd->add_flag("--exclude", rank_cli.exclude, "apply the exclusion criteria");
  rank_cmd->add_option("--t", rank_cli.t, "skip budget for count ranking");
  rank_cmd->add_option("--t-max", rank_cli.t_max, "largest skip for beta3 ranking");

  AssocCli assoc_cli;
  auto* assoc_cmd = app.add_subcommand("assoc", "contingency tables, Fisher p, asymmetry");
  add_common(assoc_cmd, assoc_cli.common);
  assoc_cmd->add_option("--chord1", assoc_cli.chord1, "first chord token, e.g. \"7,2,5,11\"");
  assoc_cmd->add_option("--chord2", assoc_cli.chord2, "second chord token, e.g. \"0,4,_,_\"");
  assoc_cmd->add_option("--t-limit", assoc_cli.t_limit, "skip cap for tokens");

  AttractorCli attractor_cli;
  auto* attractors_cmd = app.add_subcommand("attractors", "per-chord attractor statistics");
  add_common(attractors_cmd, attractor_cli.common);
  attractors_cmd->add_option("--t-limit", attractor_cli.t_limit, "skip cap for tokens");
  attractors_cmd->add_option("--sum-asym", attractor_cli.sum_asym, "received or plain");

  ReduceCli reduce_cli;
  auto* reduce_cmd = app.add_subcommand("reduce", "harmonic reduction trees and levels");
  add_common(reduce_cmd, reduce_cli.common);
  auto* survivors_opt =
      reduce_cmd->add_option("--survivors", reduce_cli.survivors, "chords to keep per movement");
  auto* threshold_opt = reduce_cmd->add_option("--force-threshold", reduce_cli.threshold,
                                               "keep chords at or above this force");
  survivors_opt->excludes(threshold_opt);
  reduce_cmd->add_option("--format", reduce_cli.format, "csv, dot, or text");
  reduce_cmd->add_option("--force-source", reduce_cli.force_source,
                         "combined, n_attractor, sum_asym, or pct_attractor");
  reduce_cmd->add_option("--sum-asym", reduce_cli.sum_asym, "received or plain");
  reduce_cmd->add_option("--t-limit", reduce_cli.t_limit, "skip cap for force statistics");

  FixtureCli fixture_cli;
  auto* fixtures_cmd = app.add_subcommand("fixtures", "generate a seeded synthetic corpus");
  fixtures_cmd->add_option("--out-dir", fixture_cli.out_dir, "target directory")->required();
  fixtures_cmd->add_option("--movements", fixture_cli.config.movements, "movement count");
  fixtures_cmd->add_option("--slices", fixture_cli.config.slices_per_movement,
                           "onsets per movement");
  fixtures_cmd->add_option("--parts", fixture_cli.config.parts, "instrumental parts (1..4)");
  fixtures_cmd->add_option("--seed", fixture_cli.config.seed, "generator seed");

  CLI11_PARSE(app, argc, argv);
  reduce_cli.has_threshold = threshold_opt->count() > 0;

  try {
    if (encode_cmd->parsed()) return run_encode(encode_opts);
    if (unigrams_cmd->parsed()) return run_unigrams(unigram_cli);
    if (ngrams_cmd->parsed()) return run_ngrams(ngram_cli);
    if (rank_cmd->parsed()) return run_rank(rank_cli);
    if (assoc_cmd->parsed()) return run_assoc(assoc_cli);
    if (attractors_cmd->parsed()) return run_attractors(attractor_cli);
    if (reduce_cmd->parsed()) return run_reduce(reduce_cli);
    if (fixtures_cmd->parsed()) return run_fixtures(fixture_cli);
  } catch (const ParseError& e) {
    std::cerr << "error: [parse] " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: [corpus] " << e.what() << "\n";
    return 1;
  } catch (const CapacityError& e) {
    std::cerr << "error: [encoding] " << e.what() << "\n";
    return 1;
  } catch (const StatError& e) {
    std::cerr << "error: [statistics] " << e.what() << "\n";
    return 1;
  } catch (const ArgumentError& e) {
    std::cerr << "error: [arguments] " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
