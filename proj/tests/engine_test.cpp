#include <algorithm>
#include <random>
#include <tuple>

#include "doctest.h"
#include "oracles.hpp"
#include "protinfer/engine.hpp"

using namespace protinfer;

namespace {

AminoAcidSequence seq(std::string_view letters) {
  return AminoAcidSequence::from_letters(letters);
}

// Two single-peptide clusters -> two tiles ("AC" is peptide 0, "CD" is 1).
TileMap two_tile_map() {
  std::vector<Cluster> clusters{{1, "P1", {{0, seq("AC")}}},
                                {2, "P2", {{1, seq("CD")}}}};
  return assign_tiles(clusters, 20);
}

}  // namespace

TEST_SUITE_BEGIN("engine");

TEST_CASE("scan_all unions per-tile results with resolved ids") {
  const Engine engine(two_tile_map());
  const auto events = engine.scan_all(seq("ACD"));
  REQUIRE(events.size() == 2);
  CHECK(events[0].tile_id == 0);
  CHECK(events[0].cluster_id == 1);
  CHECK(events[0].peptide_id == 0);
  CHECK(events[0].end_position == 1);
  CHECK(events[1].tile_id == 1);
  CHECK(events[1].cluster_id == 2);
  CHECK(events[1].peptide_id == 1);
  CHECK(events[1].end_position == 2);

  CHECK(engine.scan_all(seq("WWW")).empty());
}

TEST_CASE("event order is (end, tile, peptide) regardless of workers") {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 10; ++trial) {
    const TileMap map = gen::random_tile_map(rng, 3, 8, 4, "ACDE");
    const auto query = gen::random_sequence(rng, 500, "ACDE");

    const Engine one(map, {.worker_count = 1});
    const Engine eight(map, {.worker_count = 8});
    const auto events = one.scan_all(query);
    CHECK(events == eight.scan_all(query));

    for (std::size_t i = 1; i < events.size(); ++i) {
      const auto& a = events[i - 1];
      const auto& b = events[i];
      const auto key = [](const MatchEvent& e) {
        return std::tuple(e.end_position, e.tile_id, e.peptide_id);
      };
      CHECK(key(a) <= key(b));
    }
  }
}

TEST_CASE("scan_all restricted to one tile equals scan_tile") {
  std::mt19937_64 rng(21);
  const TileMap map = gen::random_tile_map(rng, 2, 6, 3, "ACD");
  const Engine engine(map);
  const auto query = gen::random_sequence(rng, 300, "ACD");
  const auto events = engine.scan_all(query);

  for (std::size_t t = 0; t < engine.tiles().size(); ++t) {
    const auto& tile = map.assignments[t];
    std::vector<PatternMatch> restricted;
    for (const auto& event : events)
      if (event.tile_id == tile.tile_id) {
        // recover the PMV bit index from the peptide id
        const auto it = std::find(tile.peptide_ids.begin(), tile.peptide_ids.end(),
                                  event.peptide_id);
        REQUIRE(it != tile.peptide_ids.end());
        restricted.push_back(
            {static_cast<std::uint32_t>(it - tile.peptide_ids.begin()),
             event.end_position});
      }
    auto expected = scan_tile(engine.tiles()[t], query);
    std::sort(restricted.begin(), restricted.end(),
              [](const PatternMatch& a, const PatternMatch& b) {
                if (a.end_position != b.end_position)
                  return a.end_position < b.end_position;
                return a.pattern_index < b.pattern_index;
              });
    CHECK(restricted == expected);
  }
}

TEST_CASE("verify_with_classic cross-checks without changing results") {
  std::mt19937_64 rng(22);
  const TileMap map = gen::random_tile_map(rng, 2, 8, 4, "ACD");
  const auto query = gen::random_sequence(rng, 400, "ACD");
  const Engine plain(map);
  const Engine checked(map, {.worker_count = 2, .verify_with_classic = true});
  CHECK(plain.scan_all(query) == checked.scan_all(query));
}

TEST_CASE("scan_multi splits on commas and trims") {
  const Engine engine(two_tile_map());
  const auto per_query = engine.scan_multi("ACD, AAC\t,CD");
  REQUIRE(per_query.size() == 3);
  CHECK(per_query[0].size() == 2);
  REQUIRE(per_query[1].size() == 1);
  CHECK(per_query[1][0].peptide_id == 0);
  CHECK(per_query[1][0].query_index == 1);
  REQUIRE(per_query[2].size() == 1);
  CHECK(per_query[2][0].peptide_id == 1);
  CHECK(per_query[2][0].query_index == 2);

  const auto single = engine.scan_multi("ACD");
  CHECK(single.size() == 1);
}

TEST_CASE("scan_multi error reporting carries the query index") {
  const Engine engine(two_tile_map());
  try {
    engine.scan_multi("ACD,,CD");
    FAIL("expected empty_segment");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_segment);
  }
  CHECK_THROWS_AS(engine.scan_multi("ACD,"), Error);
  CHECK_THROWS_AS(engine.scan_multi(""), Error);

  try {
    engine.scan_multi("ACD,AXC");
    FAIL("expected invalid_residue");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_residue);
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }
}

TEST_CASE("match report format") {
  const Engine engine(two_tile_map());
  const auto per_query = engine.scan_multi("ACD,CD");
  const std::string report = format_match_report(per_query, engine.tile_map());
  CHECK(report ==
        "query\ttile\tcluster\tpeptide_id\tsequence\tend_pos\n"
        "0\t0\t1\t0\tAC\t1\n"
        "0\t1\t2\t1\tCD\t2\n"
        "1\t1\t2\t1\tCD\t1\n");
}

TEST_CASE("worker count zero means available parallelism") {
  CHECK(EngineConfig{}.effective_workers() >= 1);
  CHECK(EngineConfig{.worker_count = 3}.effective_workers() == 3);
}

TEST_SUITE_END();
