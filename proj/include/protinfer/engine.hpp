// Runs every tile automaton against one or more queries.
//
// Tiles are scanned as independent tasks over an immutable automaton set
// and the per-tile results are merged into one deterministic event order,
// so the output is identical for every worker count.

#ifndef PROTINFER_ENGINE_HPP_
#define PROTINFER_ENGINE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "protinfer/automaton.hpp"
#include "protinfer/cluster.hpp"

namespace protinfer {

struct MatchEvent {
  std::uint32_t query_index = 0;
  TileId tile_id = 0;
  ClusterId cluster_id = 0;
  PeptideId peptide_id = 0;
  std::size_t end_position = 0;

  friend auto operator<=>(const MatchEvent&, const MatchEvent&) = default;
};

struct EngineConfig {
  unsigned worker_count = 0;  // 0 = available parallelism
  bool verify_with_classic = false;

  unsigned effective_workers() const;
};

class Engine {
 public:
  Engine(const TileMap& map, EngineConfig config = {});

  // Events for one query, ordered by (end_position, tile_id, peptide_id).
  std::vector<MatchEvent> scan_all(const AminoAcidSequence& query) const;

  // Comma-separated raw input; query_index follows comma order. Residue
  // errors carry the query index, ",," is an empty_segment error.
  std::vector<std::vector<MatchEvent>> scan_multi(const std::string& raw_input) const;

  std::vector<std::vector<MatchEvent>> scan_queries(
      const std::vector<AminoAcidSequence>& queries) const;

  const std::vector<TileAutomaton>& tiles() const { return tiles_; }
  const TileMap& tile_map() const { return map_; }
  const EngineConfig& config() const { return config_; }

 private:
  void scan_one_tile(std::size_t tile_index, std::uint32_t query_index,
                     const AminoAcidSequence& query,
                     std::vector<MatchEvent>& sink) const;

  TileMap map_;
  EngineConfig config_;
  std::vector<TileAutomaton> tiles_;
};

// Splits on commas and trims surrounding whitespace; does not validate.
std::vector<std::string> split_query_segments(const std::string& raw_input);

// Match report TSV: header then one row per event in engine order.
std::string format_match_report(const std::vector<std::vector<MatchEvent>>& per_query,
                                const TileMap& map);

}  // namespace protinfer

#endif  // PROTINFER_ENGINE_HPP_
