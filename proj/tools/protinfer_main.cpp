// Command-line front end: digest, build, calibrate, match, infer, report, bench.
//
// Exit codes: 0 success, 2 usage or input error, 3 internal invariant violation.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "protinfer/cluster.hpp"
#include "protinfer/digest.hpp"
#include "protinfer/engine.hpp"
#include "protinfer/errors.hpp"
#include "protinfer/inference.hpp"
#include "protinfer/seqio.hpp"

namespace {

using namespace protinfer;

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot open output file '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw Error(Errc::io_error, "write failed for output file '" + path + "'");
}

std::vector<std::size_t> parse_split_sizes(const std::string& csv) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty())
      throw Error(Errc::bad_format, "--fixture-split has an empty entry");
    std::size_t used = 0;
    unsigned long value = 0;
    try {
      value = std::stoul(item, &used);
    } catch (const std::exception&) {
      throw Error(Errc::bad_format, "--fixture-split entry '" + item + "' is not a number");
    }
    if (used != item.size() || value == 0)
      throw Error(Errc::bad_format, "--fixture-split entry '" + item + "' is not a positive integer");
    sizes.push_back(static_cast<std::size_t>(value));
  }
  if (sizes.empty()) throw Error(Errc::bad_format, "--fixture-split is empty");
  return sizes;
}

// A query argument is either an inline comma-separated residue string or a
// path to a FASTA file; sequences never contain '/' or '.', so those mark
// intended-but-missing paths.
std::vector<AminoAcidSequence> resolve_queries(const std::string& query) {
  if (std::filesystem::is_regular_file(query)) {
    std::vector<AminoAcidSequence> out;
    for (const auto& record : read_fasta_file(query)) out.push_back(record.sequence);
    return out;
  }
  if (query.find('/') != std::string::npos || query.find('.') != std::string::npos)
    throw Error(Errc::io_error, "query file not found: '" + query + "'");
  std::vector<AminoAcidSequence> out;
  std::uint32_t index = 0;
  for (const auto& segment : split_query_segments(query)) {
    if (segment.empty())
      throw Error(Errc::empty_segment, "query segment " + std::to_string(index) + " is empty");
    try {
      out.push_back(*validate_sequence(segment, AmbiguityPolicy::reject));
    } catch (const Error& e) {
      throw Error(e.code(),
                  "query segment " + std::to_string(index) + ": " + e.what(),
                  e.position());
    }
    ++index;
  }
  return out;
}

int run_digest(const std::string& fasta_path, const DigestParams& params,
               const std::string& output) {
  params.validate();
  const auto records = read_fasta_file(fasta_path);
  std::string text;
  for (const auto& record : records) {
    for (const auto& fragment : tryptic_digest(record.sequence, params)) {
      text += record.accession;
      text += '\t';
      text += std::to_string(fragment.start);
      text += '\t';
      text += fragment.sequence.to_letters();
      text += '\n';
    }
  }
  write_output(output, text);
  return 0;
}

int run_build(const std::string& references_path, const DigestParams& params,
              std::uint32_t capacity, const std::string& fixture_split,
              const std::string& output) {
  params.validate();
  const auto references = read_fasta_file(references_path);
  const auto clusters = build_clusters(references, params);
  const TileMap map = fixture_split.empty()
                          ? assign_tiles(clusters, capacity)
                          : assign_tiles_explicit(clusters, parse_split_sizes(fixture_split),
                                                  capacity);
  write_output(output, save_tile_map(map));
  return 0;
}

int run_calibrate(const std::string& tilemap_path, const std::string& fasta_path,
                  std::uint32_t sample_size, unsigned workers,
                  const std::string& output) {
  const TileMap map = read_tile_map_file(tilemap_path);
  const auto records = read_fasta_file(fasta_path);
  const ProbabilityTable table =
      calibrate(map, records, sample_size, EngineConfig{.worker_count = workers});
  write_output(output, save_probability_table(table, map));
  return 0;
}

int run_match(const std::string& tilemap_path, const std::string& query,
              unsigned workers, const std::string& output) {
  const TileMap map = read_tile_map_file(tilemap_path);
  const Engine engine(map, EngineConfig{.worker_count = workers});
  const auto per_query = engine.scan_queries(resolve_queries(query));
  write_output(output, format_match_report(per_query, map));
  return 0;
}

int run_infer(const std::string& tilemap_path, const std::string& probtable_path,
              const std::string& query, unsigned workers, const std::string& output) {
  const TileMap map = read_tile_map_file(tilemap_path);
  const ProbabilityTable table = read_probability_table_file(probtable_path);
  const Engine engine(map, EngineConfig{.worker_count = workers});

  // All queries contribute to one inference: identified peptides are pooled
  // across comma-separated segments (or FASTA records) before scoring.
  std::vector<MatchEvent> events;
  for (const auto& query_events : engine.scan_queries(resolve_queries(query)))
    events.insert(events.end(), query_events.begin(), query_events.end());

  const auto result = infer(score_clusters(events, map, table));
  write_output(output, format_inference_report(result, map));
  return 0;
}

int run_report(const std::string& tilemap_path, const std::string& output) {
  const TileMap map = read_tile_map_file(tilemap_path);
  std::string text = "#tilereport v1 tiles=" + std::to_string(map.assignments.size()) +
                     " capacity=" + std::to_string(map.capacity) + "\n";
  text +=
      "tile\tpatterns\tclassic_states\tm0_states\tm1_states\tm2_states\t"
      "m3_states\tm4_states\tstates\ttransitions\tpmv_bits\n";

  TileResourceReport totals;
  std::size_t total_patterns = 0;
  std::size_t total_classic = 0;
  for (const auto& tile : map.assignments) {
    const auto report = state_report(build_tile_automaton(tile, map, true));
    text += std::to_string(report.tile_id);
    text += '\t' + std::to_string(report.pattern_count);
    text += '\t' + std::to_string(report.classic_state_count);
    for (const auto& machine : report.machines)
      text += '\t' + std::to_string(machine.states);
    text += '\t' + std::to_string(report.total_states);
    text += '\t' + std::to_string(report.total_transitions);
    text += '\t' + std::to_string(report.total_pmv_bits);
    text += '\n';

    total_patterns += report.pattern_count;
    total_classic += report.classic_state_count;
    for (std::size_t b = 0; b < report.machines.size(); ++b) {
      totals.machines[b].states += report.machines[b].states;
    }
    totals.total_states += report.total_states;
    totals.total_transitions += report.total_transitions;
    totals.total_pmv_bits += report.total_pmv_bits;
  }
  text += "total\t" + std::to_string(total_patterns);
  text += '\t' + std::to_string(total_classic);
  for (const auto& machine : totals.machines) text += '\t' + std::to_string(machine.states);
  text += '\t' + std::to_string(totals.total_states);
  text += '\t' + std::to_string(totals.total_transitions);
  text += '\t' + std::to_string(totals.total_pmv_bits);
  text += '\n';
  write_output(output, text);
  return 0;
}

// ---------------------------------------------------------------------------
// bench: naive per-pattern scan vs classic automaton vs bit-split engine.

struct PhaseSample {
  double prepare_ms = 0;
  double match_ms = 0;
  double collect_ms = 0;

  double total_ms() const { return prepare_ms + match_ms + collect_ms; }
};

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

double mean_of(const std::vector<double>& values) {
  double sum = 0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::string format_ms(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.3f", value);
  return buffer;
}

std::string format_ratio(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.2f", value);
  return buffer;
}

double elapsed_ms(std::chrono::steady_clock::time_point from,
                  std::chrono::steady_clock::time_point to) {
  return std::chrono::duration<double, std::milli>(to - from).count();
}

// Final event order shared by every configuration.
void sort_events(std::vector<MatchEvent>& events) {
  std::sort(events.begin(), events.end(), [](const MatchEvent& a, const MatchEvent& b) {
    if (a.end_position != b.end_position) return a.end_position < b.end_position;
    if (a.tile_id != b.tile_id) return a.tile_id < b.tile_id;
    return a.peptide_id < b.peptide_id;
  });
}

std::vector<MatchEvent> resolve_tile_matches(
    const TileMap& map, const std::vector<std::vector<PatternMatch>>& per_tile) {
  std::vector<MatchEvent> events;
  for (std::size_t t = 0; t < per_tile.size(); ++t) {
    const auto& tile = map.assignments[t];
    for (const auto& match : per_tile[t]) {
      const PeptideId peptide = tile.peptide_ids[match.pattern_index];
      events.push_back(MatchEvent{0, tile.tile_id, tile.cluster_id, peptide,
                                  match.end_position});
    }
  }
  sort_events(events);
  return events;
}

int run_bench(const std::string& tilemap_path, std::size_t query_length,
              std::uint32_t trials, std::uint64_t seed, unsigned workers,
              const std::string& output) {
  if (query_length == 0) throw Error(Errc::bad_format, "--length must be >= 1");
  if (trials == 0) throw Error(Errc::bad_format, "--trials must be >= 1");

  const TileMap map = read_tile_map_file(tilemap_path);
  const std::size_t tile_count = map.assignments.size();

  // One-time construction, outside the timed phases.
  std::vector<TileAutomaton> tiles;
  tiles.reserve(tile_count);
  for (const auto& tile : map.assignments)
    tiles.push_back(build_tile_automaton(tile, map, true));
  const Engine engine_w1(map, EngineConfig{.worker_count = 1});
  const Engine engine_full(map, EngineConfig{.worker_count = workers});

  std::size_t pattern_count = 0;
  for (const auto& tile : map.assignments) pattern_count += tile.peptide_ids.size();

  enum Config { kNaive = 0, kClassic, kBitsplitW1, kBitsplitFull, kConfigCount };
  static const char* const kConfigNames[kConfigCount] = {"naive", "classic",
                                                         "bitsplit_w1", "bitsplit_full"};
  std::array<std::vector<PhaseSample>, kConfigCount> samples;

  std::mt19937_64 gen(seed);
  std::size_t matches_total = 0;

  for (std::uint32_t trial = 0; trial < trials; ++trial) {
    std::string letters(query_length, 'A');
    for (auto& c : letters) c = kAlphabet[gen() % kAlphabetSize];

    std::array<std::vector<MatchEvent>, kConfigCount> results;
    for (int config = 0; config < kConfigCount; ++config) {
      using clock = std::chrono::steady_clock;
      PhaseSample sample;

      const auto t0 = clock::now();
      const AminoAcidSequence query =
          *validate_sequence(letters, AmbiguityPolicy::reject);
      const auto t1 = clock::now();
      sample.prepare_ms = elapsed_ms(t0, t1);

      if (config == kNaive) {
        std::vector<std::vector<PatternMatch>> per_tile(tile_count);
        const auto& text = query.codes();
        for (std::size_t t = 0; t < tile_count; ++t) {
          const auto& tile = map.assignments[t];
          for (std::size_t bit = 0; bit < tile.peptide_ids.size(); ++bit) {
            const auto& pattern = map.peptide(tile.peptide_ids[bit]).sequence.codes();
            auto it = text.begin();
            while (true) {
              it = std::search(it, text.end(), pattern.begin(), pattern.end());
              if (it == text.end()) break;
              const std::size_t end =
                  static_cast<std::size_t>(it - text.begin()) + pattern.size() - 1;
              per_tile[t].push_back(
                  PatternMatch{static_cast<std::uint32_t>(bit), end});
              ++it;
            }
          }
          std::sort(per_tile[t].begin(), per_tile[t].end());
        }
        const auto t2 = clock::now();
        sample.match_ms = elapsed_ms(t1, t2);
        results[config] = resolve_tile_matches(map, per_tile);
        sample.collect_ms = elapsed_ms(t2, clock::now());
      } else if (config == kClassic) {
        std::vector<std::vector<PatternMatch>> per_tile(tile_count);
        for (std::size_t t = 0; t < tile_count; ++t)
          per_tile[t] = scan_classic(*tiles[t].classic, query);
        const auto t2 = clock::now();
        sample.match_ms = elapsed_ms(t1, t2);
        results[config] = resolve_tile_matches(map, per_tile);
        sample.collect_ms = elapsed_ms(t2, clock::now());
      } else {
        const Engine& engine = (config == kBitsplitW1) ? engine_w1 : engine_full;
        results[config] = engine.scan_all(query);
        const auto t2 = clock::now();
        sample.match_ms = elapsed_ms(t1, t2);
        std::size_t checksum = 0;
        for (const auto& event : results[config]) checksum += event.end_position;
        static volatile std::size_t sink;
        sink = checksum;
        sample.collect_ms = elapsed_ms(t2, clock::now());
      }
      samples[config].push_back(sample);
    }

    for (int config = 1; config < kConfigCount; ++config) {
      if (results[config] != results[kNaive])
        throw Error(Errc::internal,
                    std::string("bench cross-check failed: ") + kConfigNames[config] +
                        " diverges from naive scan on trial " + std::to_string(trial));
    }
    matches_total += results[kNaive].size();
  }

  std::string text = "#bench v1 patterns=" + std::to_string(pattern_count) +
                     " tiles=" + std::to_string(tile_count) +
                     " query_length=" + std::to_string(query_length) +
                     " trials=" + std::to_string(trials) +
                     " seed=" + std::to_string(seed) +
                     " workers=" + std::to_string(engine_full.config().effective_workers()) +
                     " matches_total=" + std::to_string(matches_total) + "\n";
  text += "config\tphase\tmedian_ms\tmean_ms\n";

  std::array<double, kConfigCount> median_totals{};
  for (int config = 0; config < kConfigCount; ++config) {
    std::vector<double> prepare, match, collect, total;
    for (const auto& sample : samples[config]) {
      prepare.push_back(sample.prepare_ms);
      match.push_back(sample.match_ms);
      collect.push_back(sample.collect_ms);
      total.push_back(sample.total_ms());
    }
    const auto row = [&](const char* phase, const std::vector<double>& values) {
      text += kConfigNames[config];
      text += '\t';
      text += phase;
      text += '\t' + format_ms(median_of(values));
      text += '\t' + format_ms(mean_of(values));
      text += '\n';
    };
    row("prepare", prepare);
    row("match", match);
    row("collect", collect);
    row("total", total);
    median_totals[config] = median_of(total);
  }

  const auto ratio_row = [&](const char* label, double num, double den) {
    text += "ratio\t";
    text += label;
    text += '\t' + format_ratio(num / den);
    text += '\n';
  };
  ratio_row("naive/classic", median_totals[kNaive], median_totals[kClassic]);
  ratio_row("naive/bitsplit_full", median_totals[kNaive], median_totals[kBitsplitFull]);
  ratio_row("classic/bitsplit_full", median_totals[kClassic], median_totals[kBitsplitFull]);

  write_output(output, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tile-parallel peptide matching and protein inference toolkit"};
  app.require_subcommand(1);

  std::string output;
  std::string input_path;
  std::string second_path;
  std::string query;
  std::string fixture_split;
  DigestParams digest_params;
  std::uint32_t capacity = kDefaultTileCapacity;
  std::uint32_t sample_size = 10;
  unsigned workers = 0;
  std::size_t bench_length = 100000;
  std::uint32_t bench_trials = 5;
  std::uint64_t bench_seed = 1;

  const auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("-o,--output", output, "Output file (default: standard output)");
  };
  const auto add_digest_params = [&](CLI::App* cmd) {
    cmd->add_option("--min-length", digest_params.min_length,
                    "Minimum peptide length after concatenation")
        ->capture_default_str();
    cmd->add_option("--max-length", digest_params.max_length,
                    "Maximum peptide length after concatenation")
        ->capture_default_str();
    cmd->add_option("--missed-cleavages", digest_params.missed_cleavages,
                    "Number of allowed missed cleavage sites")
        ->capture_default_str();
  };
  const auto add_workers = [&](CLI::App* cmd) {
    cmd->add_option("--workers", workers,
                    "Worker thread count (0 = all available cores)")
        ->capture_default_str();
  };

  CLI::App* cmd_digest = app.add_subcommand("digest", "Tryptic digestion of a FASTA file");
  cmd_digest->add_option("fasta", input_path, "Protein FASTA file")->required();
  add_digest_params(cmd_digest);
  add_output(cmd_digest);

  CLI::App* cmd_build = app.add_subcommand("build", "Build a tile map from reference proteins");
  cmd_build->add_option("references", input_path, "Reference protein FASTA file")->required();
  cmd_build->add_option("--capacity", capacity, "Peptides per tile")->capture_default_str();
  cmd_build->add_option("--fixture-split", fixture_split,
                        "Explicit per-tile chunk sizes, comma-separated "
                        "(overrides first-fit splitting)");
  add_digest_params(cmd_build);
  add_output(cmd_build);

  CLI::App* cmd_calibrate =
      app.add_subcommand("calibrate", "Compute peptide probabilities from a sample");
  cmd_calibrate->add_option("tilemap", input_path, "Tile map file")->required();
  cmd_calibrate->add_option("sample", second_path, "Calibration FASTA file")->required();
  cmd_calibrate->add_option("--sample-size", sample_size, "Records used as the sample")
      ->capture_default_str();
  add_workers(cmd_calibrate);
  add_output(cmd_calibrate);

  CLI::App* cmd_match = app.add_subcommand("match", "Scan queries against all tiles");
  cmd_match->add_option("tilemap", input_path, "Tile map file")->required();
  cmd_match
      ->add_option("query", query,
                   "Comma-separated residue string, or a FASTA file path")
      ->required();
  add_workers(cmd_match);
  add_output(cmd_match);

  CLI::App* cmd_infer =
      app.add_subcommand("infer", "Infer the reference cluster for a query");
  cmd_infer->add_option("tilemap", input_path, "Tile map file")->required();
  cmd_infer->add_option("probtable", second_path, "Probability table file")->required();
  cmd_infer
      ->add_option("query", query,
                   "Comma-separated residue string, or a FASTA file path")
      ->required();
  add_workers(cmd_infer);
  add_output(cmd_infer);

  CLI::App* cmd_report =
      app.add_subcommand("report", "Automaton state and transition counts per tile");
  cmd_report->add_option("tilemap", input_path, "Tile map file")->required();
  add_output(cmd_report);

  CLI::App* cmd_bench = app.add_subcommand(
      "bench", "Time naive, classic, and bit-split scans on generated queries");
  cmd_bench->add_option("tilemap", input_path, "Tile map file")->required();
  cmd_bench->add_option("--length", bench_length, "Generated query length")
      ->capture_default_str();
  cmd_bench->add_option("--trials", bench_trials, "Timing trials per configuration")
      ->capture_default_str();
  cmd_bench->add_option("--seed", bench_seed, "Query generation seed")
      ->capture_default_str();
  add_workers(cmd_bench);
  add_output(cmd_bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cmd_digest) return run_digest(input_path, digest_params, output);
    if (*cmd_build)
      return run_build(input_path, digest_params, capacity, fixture_split, output);
    if (*cmd_calibrate)
      return run_calibrate(input_path, second_path, sample_size, workers, output);
    if (*cmd_match) return run_match(input_path, query, workers, output);
    if (*cmd_infer) return run_infer(input_path, second_path, query, workers, output);
    if (*cmd_report) return run_report(input_path, output);
    if (*cmd_bench)
      return run_bench(input_path, bench_length, bench_trials, bench_seed, workers, output);
  } catch (const Error& e) {
    std::cerr << "protinfer: error [" << errc_name(e.code()) << "]: " << e.what() << '\n';
    return e.code() == Errc::internal ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "protinfer: internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
