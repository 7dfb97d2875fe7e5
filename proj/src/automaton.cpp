#include "protinfer/automaton.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace protinfer {

using detail::chomp;

ClassicAutomaton build_classic(std::span<const AminoAcidSequence> patterns) {
  if (patterns.empty())
    throw Error(Errc::no_patterns, "cannot build an automaton from zero patterns");
  if (patterns.size() > kMaxTilePatterns)
    throw Error(Errc::too_many_patterns,
                std::to_string(patterns.size()) + " patterns exceed the per-tile limit of " +
                    std::to_string(kMaxTilePatterns));
  {
    std::set<AminoAcidSequence> unique;
    for (const auto& pattern : patterns) {
      if (pattern.empty())
        throw Error(Errc::empty_pattern, "patterns must be non-empty");
      if (!unique.insert(pattern).second)
        throw Error(Errc::duplicate_pattern,
                    "duplicate pattern '" + pattern.to_letters() + "'");
    }
  }

  // Trie with slot 0 = root; 0 in a child slot means "absent".
  ClassicAutomaton a;
  auto add_state = [&a](std::uint32_t node_depth) {
    a.next.resize(a.next.size() + kAlphabetSize, 0);
    a.output.push_back(0);
    a.depth.push_back(node_depth);
    return static_cast<std::uint32_t>(a.output.size() - 1);
  };
  add_state(0);
  a.pattern_count = patterns.size();

  for (std::size_t p = 0; p < patterns.size(); ++p) {
    std::uint32_t state = 0;
    for (ResidueCode code : patterns[p]) {
      std::uint32_t child = a.next[state * kAlphabetSize + code];
      if (child == 0) {
        child = add_state(a.depth[state] + 1);
        a.next[state * kAlphabetSize + code] = child;
      }
      state = child;
    }
    a.output[state] |= PatternMask{1} << p;
  }

  // Breadth-first pass: computes failure targets, unions outputs along
  // them, and flattens the trie into a dense total transition function.
  std::vector<std::uint32_t> fail(a.state_count(), 0);
  std::deque<std::uint32_t> queue;
  for (std::size_t c = 0; c < kAlphabetSize; ++c) {
    const std::uint32_t child = a.next[c];
    if (child != 0) queue.push_back(child);  // depth-1 states fail to the root
  }
  while (!queue.empty()) {
    const std::uint32_t state = queue.front();
    queue.pop_front();
    a.output[state] |= a.output[fail[state]];
    for (std::size_t c = 0; c < kAlphabetSize; ++c) {
      std::uint32_t& slot = a.next[state * kAlphabetSize + c];
      const std::uint32_t via_fail = a.next[fail[state] * kAlphabetSize + c];
      if (slot == 0) {
        slot = via_fail;
      } else {
        fail[slot] = via_fail;
        queue.push_back(slot);
      }
    }
  }
  return a;
}

std::vector<PatternMatch> scan_classic(const ClassicAutomaton& automaton,
                                       const AminoAcidSequence& text) {
  std::vector<PatternMatch> events;
  std::uint32_t state = 0;
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    state = automaton.step(state, text[pos]);
    PatternMask mask = automaton.output[state];
    while (mask != 0) {
      const unsigned bit = static_cast<unsigned>(std::countr_zero(mask));
      events.push_back({bit, pos});
      mask &= mask - 1;
    }
  }
  return events;
}

BitSplitMachine bit_split(const ClassicAutomaton& automaton, int bit_index,
                          std::size_t tile_size) {
  if (bit_index < 0 || bit_index >= kResidueBits)
    throw Error(Errc::bad_format, "bit index must be in [0, 5)");
  const PatternMask width = pattern_mask_fill(tile_size);

  BitSplitMachine machine;
  machine.bit_index = bit_index;

  // Intern subsets of classic states under a canonical sorted key.
  std::map<std::vector<std::uint32_t>, std::uint32_t> interned;
  std::vector<const std::vector<std::uint32_t>*> subset_of;  // id -> members
  std::deque<std::uint32_t> queue;

  auto intern = [&](std::vector<std::uint32_t> subset) {
    const auto [it, inserted] =
        interned.emplace(std::move(subset), static_cast<std::uint32_t>(interned.size()));
    if (inserted) {
      machine.next.push_back({0, 0});
      PatternMask pmv = 0;
      for (std::uint32_t member : it->first) pmv |= automaton.output[member];
      machine.pmv.push_back(pmv & width);
      subset_of.push_back(&it->first);
      queue.push_back(it->second);
    }
    return it->second;
  };

  intern({0});
  while (!queue.empty()) {
    const std::uint32_t id = queue.front();
    queue.pop_front();
    const std::vector<std::uint32_t>& subset = *subset_of[id];
    for (unsigned value = 0; value < 2; ++value) {
      std::vector<std::uint32_t> successor;
      for (std::uint32_t member : subset) {
        for (std::size_t code = 0; code < kAlphabetSize; ++code) {
          if (((code >> bit_index) & 1u) != value) continue;
          successor.push_back(automaton.step(member, static_cast<ResidueCode>(code)));
        }
      }
      std::sort(successor.begin(), successor.end());
      successor.erase(std::unique(successor.begin(), successor.end()), successor.end());
      machine.next[id][value] = intern(std::move(successor));
    }
  }
  return machine;
}

TileAutomaton build_tile_automaton(const TileAssignment& tile, const TileMap& map,
                                   bool keep_classic) {
  std::vector<AminoAcidSequence> patterns;
  patterns.reserve(tile.peptide_ids.size());
  for (PeptideId id : tile.peptide_ids) patterns.push_back(map.peptide(id).sequence);

  auto classic = std::make_shared<ClassicAutomaton>(build_classic(patterns));

  TileAutomaton result;
  result.tile_id = tile.tile_id;
  result.peptide_ids = tile.peptide_ids;
  result.classic_state_count = classic->state_count();
  for (int bit = 0; bit < kResidueBits; ++bit)
    result.machines[bit] = bit_split(*classic, bit, patterns.size());
  if (keep_classic) result.classic = std::move(classic);
  return result;
}

std::vector<PatternMatch> scan_tile(const TileAutomaton& tile,
                                    const AminoAcidSequence& text) {
  std::vector<PatternMatch> events;
  std::array<std::uint32_t, kResidueBits> states{};
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    const ResidueCode code = text[pos];
    PatternMask hits = ~PatternMask{0};
    for (int bit = 0; bit < kResidueBits; ++bit) {
      states[bit] = tile.machines[bit].step(states[bit], (code >> bit) & 1u);
      hits &= tile.machines[bit].pmv[states[bit]];
    }
    while (hits != 0) {
      const unsigned bit = static_cast<unsigned>(std::countr_zero(hits));
      events.push_back({bit, pos});
      hits &= hits - 1;
    }
  }
  return events;
}

TileResourceReport state_report(const TileAutomaton& tile) {
  TileResourceReport report;
  report.tile_id = tile.tile_id;
  report.pattern_count = tile.pattern_count();
  report.classic_state_count = tile.classic_state_count;
  for (int bit = 0; bit < kResidueBits; ++bit) {
    const std::size_t states = tile.machines[bit].state_count();
    report.machines[bit] = {states, 2 * states, states * tile.pattern_count()};
    report.total_states += report.machines[bit].states;
    report.total_transitions += report.machines[bit].transitions;
    report.total_pmv_bits += report.machines[bit].pmv_bits;
  }
  return report;
}

namespace {

std::uint64_t parse_field_uint(std::string_view field, const char* what) {
  return detail::parse_uint(field, what);
}

}  // namespace

std::string save_tile_automaton(const TileAutomaton& tile) {
  std::ostringstream out;
  out << "#tileauto v1 tile=" << tile.tile_id << " patterns=" << tile.pattern_count()
      << " classic_states=" << tile.classic_state_count << '\n';
  for (std::size_t bit = 0; bit < tile.peptide_ids.size(); ++bit)
    out << "pattern\t" << bit << '\t' << tile.peptide_ids[bit] << '\n';
  for (const BitSplitMachine& machine : tile.machines) {
    out << "machine\t" << machine.bit_index << "\tstates=" << machine.state_count()
        << '\n';
    for (std::size_t s = 0; s < machine.state_count(); ++s) {
      out << s << '\t' << machine.next[s][0] << '\t' << machine.next[s][1] << '\t'
          << std::hex << machine.pmv[s] << std::dec << '\n';
    }
  }
  return out.str();
}

TileAutomaton load_tile_automaton(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;

  if (!std::getline(in, line))
    throw Error(Errc::bad_format, "empty tileauto file");
  chomp(line);

  TileAutomaton tile;
  std::size_t pattern_count = 0;
  {
    std::istringstream header(line);
    std::string magic, version, field;
    header >> magic >> version;
    if (magic != "#tileauto" || version != "v1")
      throw Error(Errc::bad_format, "missing '#tileauto v1' header");
    bool have_tile = false, have_patterns = false, have_classic = false;
    while (header >> field) {
      const std::size_t eq = field.find('=');
      if (eq == std::string::npos)
        throw Error(Errc::bad_format, "malformed tileauto header field '" + field + "'");
      const std::string key = field.substr(0, eq);
      const std::uint64_t value = parse_field_uint(field.substr(eq + 1), key.c_str());
      if (key == "tile") {
        tile.tile_id = static_cast<TileId>(value);
        have_tile = true;
      } else if (key == "patterns") {
        pattern_count = value;
        have_patterns = true;
      } else if (key == "classic_states") {
        tile.classic_state_count = value;
        have_classic = true;
      } else {
        throw Error(Errc::bad_format, "unknown tileauto header field '" + key + "'");
      }
    }
    if (!have_tile || !have_patterns || !have_classic)
      throw Error(Errc::bad_format, "tileauto header is incomplete");
  }
  if (pattern_count < 1 || pattern_count > kMaxTilePatterns)
    throw Error(Errc::bad_format, "tileauto pattern count out of range");

  tile.peptide_ids.resize(pattern_count);
  std::size_t patterns_seen = 0;
  int machines_seen = 0;
  BitSplitMachine* current = nullptr;
  std::size_t states_expected = 0;

  while (std::getline(in, line)) {
    chomp(line);
    if (line.empty() || (line[0] == '#')) continue;
    const auto fields = detail::split_tabs(line);
    if (fields[0] == "pattern") {
      if (fields.size() != 3)
        throw Error(Errc::bad_format, "tileauto pattern row needs 3 fields");
      const std::size_t bit = parse_field_uint(fields[1], "pattern bit");
      if (bit != patterns_seen)
        throw Error(Errc::bad_format, "tileauto pattern rows must be in bit order");
      if (bit >= pattern_count)
        throw Error(Errc::bad_format, "tileauto pattern bit out of range");
      tile.peptide_ids[bit] =
          static_cast<PeptideId>(parse_field_uint(fields[2], "peptide id"));
      ++patterns_seen;
    } else if (fields[0] == "machine") {
      if (current && current->state_count() != states_expected)
        throw Error(Errc::bad_format, "tileauto machine has missing state rows");
      if (fields.size() != 3 || !fields[2].starts_with("states="))
        throw Error(Errc::bad_format, "tileauto machine row needs 'machine\\tB\\tstates=N'");
      const std::size_t bit = parse_field_uint(fields[1], "machine bit");
      if (bit != static_cast<std::size_t>(machines_seen) || bit >= kResidueBits)
        throw Error(Errc::bad_format, "tileauto machines must appear in bit order 0..4");
      states_expected = parse_field_uint(fields[2].substr(7), "state count");
      if (states_expected == 0)
        throw Error(Errc::bad_format, "tileauto machine must have at least one state");
      current = &tile.machines[bit];
      current->bit_index = static_cast<int>(bit);
      ++machines_seen;
    } else {
      if (!current)
        throw Error(Errc::bad_format, "tileauto state row before any machine row");
      if (fields.size() != 4)
        throw Error(Errc::bad_format, "tileauto state row needs 4 fields");
      const std::size_t id = parse_field_uint(fields[0], "state id");
      if (id != current->state_count())
        throw Error(Errc::bad_format, "tileauto state rows must be consecutive from 0");
      if (id >= states_expected)
        throw Error(Errc::bad_format, "tileauto machine has more states than declared");
      const auto next0 = parse_field_uint(fields[1], "next0");
      const auto next1 = parse_field_uint(fields[2], "next1");
      if (next0 >= states_expected || next1 >= states_expected)
        throw Error(Errc::bad_format, "tileauto transition target out of range");
      current->next.push_back(
          {static_cast<std::uint32_t>(next0), static_cast<std::uint32_t>(next1)});
      current->pmv.push_back(detail::parse_uint(fields[3], "pmv hex", 16) & pattern_mask_fill(pattern_count));
    }
  }
  if (current && current->state_count() != states_expected)
    throw Error(Errc::bad_format, "tileauto machine has missing state rows");
  if (patterns_seen != pattern_count)
    throw Error(Errc::bad_format, "tileauto pattern rows do not match declared count");
  if (machines_seen != kResidueBits)
    throw Error(Errc::bad_format, "tileauto must declare exactly 5 machines");
  return tile;
}

}  // namespace protinfer
