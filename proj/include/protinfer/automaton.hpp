// Per-tile pattern automata.
//
// build_classic constructs the standard Aho-Corasick machine (trie,
// breadth-first failure links, outputs unioned along the links) and
// flattens it into a dense total transition function, so scanning never
// consults a failure link. bit_split then derives one two-symbol machine
// per residue bit via subset construction; the five machines step in
// lockstep and a pattern matches exactly when its bit is set in all five
// partial-match vectors.

#ifndef PROTINFER_AUTOMATON_HPP_
#define PROTINFER_AUTOMATON_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "protinfer/cluster.hpp"
#include "protinfer/seqio.hpp"

namespace protinfer {

// One bit per tile-local pattern index.
using PatternMask = std::uint64_t;
inline constexpr std::size_t kMaxTilePatterns = 64;

// Restricts a mask to the low `width` bits.
constexpr PatternMask pattern_mask_fill(std::size_t width) {
  return width >= 64 ? ~PatternMask{0} : (PatternMask{1} << width) - 1;
}

struct PatternMatch {
  std::uint32_t pattern_index;  // tile-local (= PMV bit index)
  std::size_t end_position;     // 0-based index of the last matched residue

  friend auto operator<=>(const PatternMatch&, const PatternMatch&) = default;
};

struct ClassicAutomaton {
  // Dense transitions, state * kAlphabetSize + residue. State 0 is the root.
  std::vector<std::uint32_t> next;
  std::vector<PatternMask> output;  // patterns ending (directly or via suffix) here
  std::vector<std::uint32_t> depth;
  std::size_t pattern_count = 0;

  std::size_t state_count() const { return output.size(); }
  std::uint32_t step(std::uint32_t state, ResidueCode code) const {
    return next[state * kAlphabetSize + code];
  }

  friend bool operator==(const ClassicAutomaton&, const ClassicAutomaton&) = default;
};

ClassicAutomaton build_classic(std::span<const AminoAcidSequence> patterns);

// All (pattern, occurrence) events, sorted by (end position, pattern index).
std::vector<PatternMatch> scan_classic(const ClassicAutomaton& automaton,
                                       const AminoAcidSequence& text);

struct BitSplitMachine {
  int bit_index = 0;
  std::vector<std::array<std::uint32_t, 2>> next;  // total: [state][bit value]
  std::vector<PatternMask> pmv;                    // per-state partial-match vector

  std::size_t state_count() const { return next.size(); }
  std::uint32_t step(std::uint32_t state, unsigned bit) const { return next[state][bit]; }

  friend bool operator==(const BitSplitMachine&, const BitSplitMachine&) = default;
};

// Subset construction of the classic automaton restricted to one bit lane.
// State numbering follows breadth-first discovery order, so the result is
// deterministic for a given classic automaton.
BitSplitMachine bit_split(const ClassicAutomaton& automaton, int bit_index,
                          std::size_t tile_size);

struct TileAutomaton {
  TileId tile_id = 0;
  std::array<BitSplitMachine, kResidueBits> machines;
  std::vector<PeptideId> peptide_ids;  // PMV bit index -> peptide id
  std::size_t classic_state_count = 0;

  // Retained only when requested; a scan-time cross-check aid. Never
  // serialized and not part of equality.
  std::shared_ptr<const ClassicAutomaton> classic;

  std::size_t pattern_count() const { return peptide_ids.size(); }

  friend bool operator==(const TileAutomaton& a, const TileAutomaton& b) {
    return a.tile_id == b.tile_id && a.machines == b.machines &&
           a.peptide_ids == b.peptide_ids &&
           a.classic_state_count == b.classic_state_count;
  }
};

TileAutomaton build_tile_automaton(const TileAssignment& tile, const TileMap& map,
                                   bool keep_classic = false);

// Steps all five machines once per residue and reports the AND of their
// partial-match vectors; event-for-event identical to scan_classic over the
// same patterns.
std::vector<PatternMatch> scan_tile(const TileAutomaton& tile,
                                    const AminoAcidSequence& text);

struct MachineReport {
  std::size_t states = 0;
  std::size_t transitions = 0;  // always 2 * states
  std::size_t pmv_bits = 0;     // states * tile size
};

struct TileResourceReport {
  TileId tile_id = 0;
  std::size_t pattern_count = 0;
  std::array<MachineReport, kResidueBits> machines;
  std::size_t total_states = 0;
  std::size_t total_transitions = 0;
  std::size_t total_pmv_bits = 0;
  std::size_t classic_state_count = 0;
};

TileResourceReport state_report(const TileAutomaton& tile);

// Compiled-automaton cache, "#tileauto v1" text format (see README).
// load(save(x)) == x for the persistent fields.
std::string save_tile_automaton(const TileAutomaton& tile);
TileAutomaton load_tile_automaton(std::string_view text);

}  // namespace protinfer

#endif  // PROTINFER_AUTOMATON_HPP_
