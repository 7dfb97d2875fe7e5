// Reference-protein clusters and their mapping onto fixed-capacity tiles.
//
// Each cluster is the deduplicated tryptic digest of one reference
// sequence. A tile holds at most `capacity` peptides of exactly one
// cluster; large clusters span several consecutive tiles.

#ifndef PROTINFER_CLUSTER_HPP_
#define PROTINFER_CLUSTER_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "protinfer/digest.hpp"
#include "protinfer/seqio.hpp"

namespace protinfer {

using PeptideId = std::uint32_t;
using ClusterId = std::uint32_t;
using TileId = std::uint32_t;

inline constexpr std::size_t kDefaultTileCapacity = 20;

struct Peptide {
  PeptideId id = 0;  // globally unique, assigned in (cluster, position) order
  AminoAcidSequence sequence;

  friend bool operator==(const Peptide&, const Peptide&) = default;
};

struct Cluster {
  ClusterId cluster_id = 0;  // consecutive from 1 in reference file order
  std::string reference_accession;
  std::vector<Peptide> peptides;  // deduplicated, digest order

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

struct TileAssignment {
  TileId tile_id = 0;
  ClusterId cluster_id = 0;
  std::vector<PeptideId> peptide_ids;  // position in this list = PMV bit index

  friend bool operator==(const TileAssignment&, const TileAssignment&) = default;
};

struct PeptideInfo {
  AminoAcidSequence sequence;
  ClusterId cluster_id = 0;

  friend bool operator==(const PeptideInfo&, const PeptideInfo&) = default;
};

struct TileMap {
  std::size_t capacity = kDefaultTileCapacity;
  std::vector<TileAssignment> assignments;        // tile_ids consecutive from 0
  std::map<PeptideId, PeptideInfo> registry;      // every peptide, exactly once
  std::map<ClusterId, std::string> accessions;    // cluster -> reference accession

  std::size_t peptide_count() const { return registry.size(); }
  const PeptideInfo& peptide(PeptideId id) const;
  const std::string& accession(ClusterId id) const;

  // Checks every structural invariant; throws on violation.
  void validate() const;

  friend bool operator==(const TileMap&, const TileMap&) = default;
};

// Digests each reference into a cluster; within-cluster duplicate sequences
// collapse to their first occurrence. Throws empty_digest when a reference
// yields no peptides after filtering.
std::vector<Cluster> build_clusters(std::span<const FastaRecord> references,
                                    const DigestParams& params = {});

// First-fit sequential split: each cluster's peptide list chopped into
// consecutive chunks of size <= capacity, tiles numbered in cluster order.
TileMap assign_tiles(std::span<const Cluster> clusters,
                     std::size_t capacity = kDefaultTileCapacity);

// Same, but with caller-supplied chunk sizes (one entry per tile). Chunks
// must cover each cluster exactly and respect the capacity.
TileMap assign_tiles_explicit(std::span<const Cluster> clusters,
                              std::span<const std::size_t> chunk_sizes,
                              std::size_t capacity = kDefaultTileCapacity);

// Tile-map text format: `#tilemap v1 capacity=<n>` then one line per
// peptide `tile<TAB>cluster<TAB>accession<TAB>peptide_id<TAB>sequence`,
// sorted by (tile_id, PMV bit index). '#' lines are comments.
std::string save_tile_map(const TileMap& map);
TileMap load_tile_map(std::string_view text);
TileMap read_tile_map_file(const std::string& path);

}  // namespace protinfer

#endif  // PROTINFER_CLUSTER_HPP_
