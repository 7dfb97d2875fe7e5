#include "protinfer/engine.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

namespace protinfer {

unsigned EngineConfig::effective_workers() const {
  if (worker_count > 0) return worker_count;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

Engine::Engine(const TileMap& map, EngineConfig config)
    : map_(map), config_(config) {
  map_.validate();
  tiles_.reserve(map_.assignments.size());
  for (const TileAssignment& tile : map_.assignments)
    tiles_.push_back(build_tile_automaton(tile, map_, config_.verify_with_classic));
}

void Engine::scan_one_tile(std::size_t tile_index, std::uint32_t query_index,
                           const AminoAcidSequence& query,
                           std::vector<MatchEvent>& sink) const {
  const TileAutomaton& tile = tiles_[tile_index];
  const std::vector<PatternMatch> matches = scan_tile(tile, query);

  if (tile.classic) {
    // Release-mode tripwire: the bit-split machines must agree with the
    // classic automaton they were derived from.
    const std::vector<PatternMatch> reference = scan_classic(*tile.classic, query);
    if (matches != reference)
      throw Error(Errc::internal,
                  "bit-split scan of tile " + std::to_string(tile.tile_id) +
                      " disagrees with the classic automaton (" +
                      std::to_string(matches.size()) + " vs " +
                      std::to_string(reference.size()) + " events)");
  }

  sink.reserve(matches.size());
  for (const PatternMatch& match : matches) {
    const PeptideId peptide_id = tile.peptide_ids[match.pattern_index];
    sink.push_back({query_index, tile.tile_id, map_.peptide(peptide_id).cluster_id,
                    peptide_id, match.end_position});
  }
}

std::vector<MatchEvent> Engine::scan_all(const AminoAcidSequence& query) const {
  auto per_query = scan_queries({query});
  return std::move(per_query.front());
}

std::vector<std::vector<MatchEvent>> Engine::scan_queries(
    const std::vector<AminoAcidSequence>& queries) const {
  const std::size_t tile_count = tiles_.size();
  const std::size_t task_count = tile_count * queries.size();
  std::vector<std::vector<MatchEvent>> buffers(task_count);  // one per (query, tile)

  auto run_task = [&](std::size_t task) {
    const std::size_t query_index = task / tile_count;
    const std::size_t tile_index = task % tile_count;
    scan_one_tile(tile_index, static_cast<std::uint32_t>(query_index),
                  queries[query_index], buffers[task]);
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(config_.effective_workers(), task_count));
  if (workers <= 1) {
    for (std::size_t task = 0; task < task_count; ++task) run_task(task);
  } else {
    std::atomic<std::size_t> next_task{0};
    std::vector<std::exception_ptr> failures(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t task; (task = next_task.fetch_add(1)) < task_count;)
            run_task(task);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    for (std::thread& thread : pool) thread.join();
    for (const std::exception_ptr& failure : failures)
      if (failure) std::rethrow_exception(failure);
  }

  std::vector<std::vector<MatchEvent>> per_query(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    std::vector<MatchEvent>& merged = per_query[q];
    for (std::size_t t = 0; t < tile_count; ++t) {
      const auto& buffer = buffers[q * tile_count + t];
      merged.insert(merged.end(), buffer.begin(), buffer.end());
    }
    std::sort(merged.begin(), merged.end(), [](const MatchEvent& a, const MatchEvent& b) {
      return std::tie(a.end_position, a.tile_id, a.peptide_id) <
             std::tie(b.end_position, b.tile_id, b.peptide_id);
    });
  }
  return per_query;
}

std::vector<std::string> split_query_segments(const std::string& raw_input) {
  std::vector<std::string> segments;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = raw_input.find(',', start);
    const std::string segment = raw_input.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    const std::size_t first = segment.find_first_not_of(" \t\r\n");
    segments.push_back(first == std::string::npos
                           ? std::string{}
                           : segment.substr(first, segment.find_last_not_of(" \t\r\n") -
                                                       first + 1));
    if (comma == std::string::npos) return segments;
    start = comma + 1;
  }
}

std::vector<std::vector<MatchEvent>> Engine::scan_multi(
    const std::string& raw_input) const {
  const std::vector<std::string> segments = split_query_segments(raw_input);
  std::vector<AminoAcidSequence> queries;
  queries.reserve(segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].empty())
      throw Error(Errc::empty_segment,
                  "query " + std::to_string(i) + " is empty (stray comma?)");
    try {
      queries.push_back(AminoAcidSequence::from_letters(segments[i]));
    } catch (const Error& e) {
      throw Error(e.code(), "query " + std::to_string(i) + ": " + e.what(),
                  e.position());
    }
  }
  return scan_queries(queries);
}

std::string format_match_report(const std::vector<std::vector<MatchEvent>>& per_query,
                                const TileMap& map) {
  std::ostringstream out;
  out << "query\ttile\tcluster\tpeptide_id\tsequence\tend_pos\n";
  for (const auto& events : per_query) {
    for (const MatchEvent& event : events) {
      out << event.query_index << '\t' << event.tile_id << '\t' << event.cluster_id
          << '\t' << event.peptide_id << '\t'
          << map.peptide(event.peptide_id).sequence.to_letters() << '\t'
          << event.end_position << '\n';
    }
  }
  return out.str();
}

}  // namespace protinfer
