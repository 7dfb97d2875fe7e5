#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "protinfer/cluster.hpp"

using namespace protinfer;

namespace {

FastaRecord record(std::string accession, std::string_view letters) {
  return {std::move(accession), "", AminoAcidSequence::from_letters(letters)};
}

Errc code_of_load(std::string_view text) {
  try {
    load_tile_map(text);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::internal;  // marker: no error thrown
}

}  // namespace

TEST_SUITE_BEGIN("cluster");

TEST_CASE("build_clusters assigns global ids in (cluster, position) order") {
  const std::vector<FastaRecord> refs{record("P1", "AAKCC"), record("P2", "DDKEE")};
  const auto clusters = build_clusters(refs);
  REQUIRE(clusters.size() == 2);
  CHECK(clusters[0].cluster_id == 1);
  CHECK(clusters[0].reference_accession == "P1");
  REQUIRE(clusters[0].peptides.size() == 2);
  CHECK(clusters[0].peptides[0].id == 0);
  CHECK(clusters[0].peptides[0].sequence.to_letters() == "AAK");
  CHECK(clusters[0].peptides[1].id == 1);
  CHECK(clusters[1].peptides[0].id == 2);
  CHECK(clusters[1].peptides[1].sequence.to_letters() == "EE");
}

TEST_CASE("within-cluster duplicates collapse, across clusters they persist") {
  // CCKCCK digests to {CCK, CCK}; dedup keeps the first
  const std::vector<FastaRecord> dup{record("P1", "CCKCCK")};
  const auto one = build_clusters(dup);
  REQUIRE(one[0].peptides.size() == 1);
  CHECK(one[0].peptides[0].sequence.to_letters() == "CCK");

  const std::vector<FastaRecord> degenerate{record("P1", "AAK"), record("P2", "AAK")};
  const auto two = build_clusters(degenerate);
  REQUIRE(two.size() == 2);
  CHECK(two[0].peptides[0].sequence == two[1].peptides[0].sequence);
  CHECK(two[0].peptides[0].id != two[1].peptides[0].id);
}

TEST_CASE("a reference with no surviving peptides is an error") {
  // single residues, all filtered by the default min_length of 2
  const std::vector<FastaRecord> refs{record("P1", "KKK")};
  try {
    build_clusters(refs);
    FAIL("expected empty_digest");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_digest);
  }
}

TEST_CASE("first-fit splitting chops clusters into consecutive chunks") {
  std::mt19937_64 rng(7);
  // clusters sized [27, 9] at capacity 20 split into tiles [20, 7, 9]
  std::vector<Cluster> sized{{1, "A", {}}, {2, "B", {}}};
  PeptideId id = 0;
  for (std::size_t i = 0; i < 27; ++i)
    sized[0].peptides.push_back({id++, gen::random_sequence(rng, 3)});
  for (std::size_t i = 0; i < 9; ++i)
    sized[1].peptides.push_back({id++, gen::random_sequence(rng, 3)});

  const TileMap map = assign_tiles(sized, 20);
  REQUIRE(map.assignments.size() == 3);
  CHECK(map.assignments[0].peptide_ids.size() == 20);
  CHECK(map.assignments[0].cluster_id == 1);
  CHECK(map.assignments[1].peptide_ids.size() == 7);
  CHECK(map.assignments[1].cluster_id == 1);
  CHECK(map.assignments[2].peptide_ids.size() == 9);
  CHECK(map.assignments[2].cluster_id == 2);
}

TEST_CASE("assign_tiles output is structurally valid for random inputs") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const auto clusters = gen::random_clusters(rng, 1 + rng() % 5, 1 + rng() % 100, 4);
    const std::size_t capacity = 1 + rng() % 32;
    const TileMap map = assign_tiles(clusters, capacity);
    CHECK_NOTHROW(map.validate());

    std::size_t cluster_total = 0;
    for (const auto& cluster : clusters) cluster_total += cluster.peptides.size();
    std::size_t tile_total = 0;
    for (const auto& tile : map.assignments) tile_total += tile.peptide_ids.size();
    CHECK(tile_total == cluster_total);
    CHECK(map.peptide_count() == cluster_total);

    // concatenating a cluster's tiles reproduces its peptide list
    for (const auto& cluster : clusters) {
      std::vector<PeptideId> concatenated;
      for (const auto& tile : map.assignments)
        if (tile.cluster_id == cluster.cluster_id)
          concatenated.insert(concatenated.end(), tile.peptide_ids.begin(),
                              tile.peptide_ids.end());
      std::vector<PeptideId> expected;
      for (const auto& peptide : cluster.peptides) expected.push_back(peptide.id);
      CHECK(concatenated == expected);
    }
  }
}

TEST_CASE("explicit chunk sizes reproduce uneven splits") {
  std::mt19937_64 rng(9);
  std::vector<Cluster> clusters{{1, "A", {}}};
  for (PeptideId id = 0; id < 27; ++id)
    clusters[0].peptides.push_back({id, gen::random_sequence(rng, 3)});

  const std::vector<std::size_t> sizes{13, 14};
  const TileMap map = assign_tiles_explicit(clusters, sizes, 20);
  REQUIRE(map.assignments.size() == 2);
  CHECK(map.assignments[0].peptide_ids.size() == 13);
  CHECK(map.assignments[1].peptide_ids.size() == 14);

  const std::vector<std::size_t> short_sizes{13};  // covers 13 of 27 peptides
  CHECK_THROWS_AS(assign_tiles_explicit(clusters, short_sizes, 20), Error);
  const std::vector<std::size_t> first_fit_sizes{20, 7};
  CHECK_NOTHROW(assign_tiles_explicit(clusters, first_fit_sizes, 20));
  const std::vector<std::size_t> over_capacity{21, 6};
  CHECK_THROWS_AS(assign_tiles_explicit(clusters, over_capacity, 20), Error);
}

TEST_CASE("save/load round-trips random maps") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 25; ++trial) {
    const TileMap map = gen::random_tile_map(rng, 1 + rng() % 4, 12, 5);
    CHECK(load_tile_map(save_tile_map(map)) == map);
  }
}

TEST_CASE("load rejects structural violations") {
  const TileMap map = [] {
    std::mt19937_64 rng(11);
    return gen::random_tile_map(rng, 2, 4, 4, kAlphabet, 4);
  }();
  const std::string good = save_tile_map(map);
  CHECK(load_tile_map(good) == map);

  CHECK(code_of_load("") == Errc::bad_format);
  CHECK(code_of_load("no header\n") == Errc::bad_format);
  CHECK(code_of_load("#tilemap v1 capacity=20\n") == Errc::bad_format);  // no tiles

  // capacity violation: three peptides in a capacity-2 tile
  CHECK(code_of_load("#tilemap v1 capacity=2\n"
                     "0\t1\tA\t0\tAC\n0\t1\tA\t1\tCD\n0\t1\tA\t2\tDE\n") ==
        Errc::capacity_exceeded);
  // duplicate sequence within one tile
  CHECK(code_of_load("#tilemap v1 capacity=20\n"
                     "0\t1\tA\t0\tAC\n0\t1\tA\t1\tAC\n") ==
        Errc::duplicate_peptide_in_tile);
  // tile ids must be consecutive from 0
  CHECK(code_of_load("#tilemap v1 capacity=20\n1\t1\tA\t0\tAC\n") ==
        Errc::non_consecutive_tile_ids);
  // residues are validated
  CHECK(code_of_load("#tilemap v1 capacity=20\n0\t1\tA\t0\tAXC\n") ==
        Errc::invalid_residue);
}

TEST_CASE("comment lines are ignored by the loader") {
  const std::string text =
      "#tilemap v1 capacity=20\n# a comment\n0\t1\tA\t0\tAC\n# another\n";
  const TileMap map = load_tile_map(text);
  CHECK(map.assignments.size() == 1);
  CHECK(map.peptide(0).sequence.to_letters() == "AC");
  CHECK(map.accession(1) == "A");
}

TEST_SUITE_END();
