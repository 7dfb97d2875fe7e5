#include "protinfer/cluster.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "text_util.hpp"

namespace protinfer {

using detail::chomp;
using detail::parse_uint;
using detail::split_tabs;

const PeptideInfo& TileMap::peptide(PeptideId id) const {
  const auto it = registry.find(id);
  if (it == registry.end())
    throw Error(Errc::unknown_peptide, "peptide id " + std::to_string(id) +
                                           " not in tile map registry");
  return it->second;
}

const std::string& TileMap::accession(ClusterId id) const {
  const auto it = accessions.find(id);
  if (it == accessions.end())
    throw Error(Errc::bad_format, "cluster " + std::to_string(id) + " has no accession");
  return it->second;
}

void TileMap::validate() const {
  if (capacity < 1)
    throw Error(Errc::bad_format, "tile capacity must be >= 1");
  if (assignments.empty())
    throw Error(Errc::bad_format, "tile map has no tiles");

  std::unordered_set<PeptideId> seen_ids;
  ClusterId last_cluster = 0;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    const TileAssignment& tile = assignments[i];
    if (tile.tile_id != i)
      throw Error(Errc::non_consecutive_tile_ids,
                  "expected tile " + std::to_string(i) + ", found tile " +
                      std::to_string(tile.tile_id));
    if (tile.peptide_ids.empty())
      throw Error(Errc::bad_format, "tile " + std::to_string(i) + " has no peptides");
    if (tile.peptide_ids.size() > capacity)
      throw Error(Errc::capacity_exceeded,
                  "tile " + std::to_string(i) + " holds " +
                      std::to_string(tile.peptide_ids.size()) + " peptides, capacity is " +
                      std::to_string(capacity));
    if (tile.cluster_id == 0)
      throw Error(Errc::bad_format, "cluster ids start at 1");
    // Clusters occupy consecutive tiles and appear in id order.
    if (tile.cluster_id != last_cluster) {
      if (tile.cluster_id != last_cluster + 1)
        throw Error(Errc::bad_format,
                    "tile " + std::to_string(i) + ": cluster " +
                        std::to_string(tile.cluster_id) + " follows cluster " +
                        std::to_string(last_cluster));
      last_cluster = tile.cluster_id;
    }

    std::set<AminoAcidSequence> tile_sequences;
    for (PeptideId id : tile.peptide_ids) {
      if (!seen_ids.insert(id).second)
        throw Error(Errc::bad_format,
                    "peptide id " + std::to_string(id) + " appears in more than one tile");
      const PeptideInfo& info = peptide(id);
      if (info.cluster_id != tile.cluster_id)
        throw Error(Errc::bad_format,
                    "peptide " + std::to_string(id) + " belongs to cluster " +
                        std::to_string(info.cluster_id) + " but sits in a tile of cluster " +
                        std::to_string(tile.cluster_id));
      if (!tile_sequences.insert(info.sequence).second)
        throw Error(Errc::duplicate_peptide_in_tile,
                    "tile " + std::to_string(i) + " holds sequence '" +
                        info.sequence.to_letters() + "' twice");
    }
  }
  if (seen_ids.size() != registry.size())
    throw Error(Errc::bad_format, "registry size " + std::to_string(registry.size()) +
                                      " does not match assigned peptide count " +
                                      std::to_string(seen_ids.size()));
  for (const auto& [cluster_id, accession] : accessions) {
    if (accession.empty())
      throw Error(Errc::bad_format,
                  "cluster " + std::to_string(cluster_id) + " has an empty accession");
  }
  if (accessions.size() != last_cluster)
    throw Error(Errc::bad_format, "accession table does not cover all clusters");
}

std::vector<Cluster> build_clusters(std::span<const FastaRecord> references,
                                    const DigestParams& params) {
  if (references.empty())
    throw Error(Errc::empty_file, "no reference records");

  std::vector<Cluster> clusters;
  clusters.reserve(references.size());
  PeptideId next_id = 0;
  for (std::size_t i = 0; i < references.size(); ++i) {
    Cluster cluster;
    cluster.cluster_id = static_cast<ClusterId>(i + 1);
    cluster.reference_accession = references[i].accession;

    std::set<AminoAcidSequence> seen;
    for (auto& fragment : tryptic_digest(references[i].sequence, params)) {
      if (!seen.insert(fragment.sequence).second) continue;  // first occurrence wins
      cluster.peptides.push_back({next_id++, std::move(fragment.sequence)});
    }
    if (cluster.peptides.empty())
      throw Error(Errc::empty_digest,
                  "reference '" + cluster.reference_accession + "' (cluster " +
                      std::to_string(cluster.cluster_id) + ") digests to zero peptides");
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

namespace {

TileMap finish_map(std::span<const Cluster> clusters, std::size_t capacity,
                   std::vector<TileAssignment> assignments) {
  TileMap map;
  map.capacity = capacity;
  map.assignments = std::move(assignments);
  for (const Cluster& cluster : clusters) {
    map.accessions[cluster.cluster_id] = cluster.reference_accession;
    for (const Peptide& peptide : cluster.peptides)
      map.registry[peptide.id] = {peptide.sequence, cluster.cluster_id};
  }
  map.validate();
  return map;
}

}  // namespace

TileMap assign_tiles(std::span<const Cluster> clusters, std::size_t capacity) {
  if (capacity < 1)
    throw Error(Errc::bad_format, "tile capacity must be >= 1");

  std::vector<TileAssignment> assignments;
  TileId next_tile = 0;
  for (const Cluster& cluster : clusters) {
    for (std::size_t offset = 0; offset < cluster.peptides.size(); offset += capacity) {
      const std::size_t count = std::min(capacity, cluster.peptides.size() - offset);
      TileAssignment tile{next_tile++, cluster.cluster_id, {}};
      for (std::size_t i = 0; i < count; ++i)
        tile.peptide_ids.push_back(cluster.peptides[offset + i].id);
      assignments.push_back(std::move(tile));
    }
  }
  return finish_map(clusters, capacity, std::move(assignments));
}

TileMap assign_tiles_explicit(std::span<const Cluster> clusters,
                              std::span<const std::size_t> chunk_sizes,
                              std::size_t capacity) {
  std::vector<TileAssignment> assignments;
  std::size_t cluster_index = 0;
  std::size_t offset = 0;  // peptides consumed in the current cluster
  TileId next_tile = 0;
  for (std::size_t chunk : chunk_sizes) {
    if (chunk < 1)
      throw Error(Errc::bad_format, "explicit tile size must be >= 1");
    while (cluster_index < clusters.size() &&
           offset == clusters[cluster_index].peptides.size()) {
      ++cluster_index;
      offset = 0;
    }
    if (cluster_index == clusters.size())
      throw Error(Errc::bad_format, "explicit tile sizes exceed total peptide count");
    const Cluster& cluster = clusters[cluster_index];
    if (offset + chunk > cluster.peptides.size())
      throw Error(Errc::bad_format,
                  "explicit tile of " + std::to_string(chunk) +
                      " peptides crosses the boundary of cluster " +
                      std::to_string(cluster.cluster_id));
    TileAssignment tile{next_tile++, cluster.cluster_id, {}};
    for (std::size_t i = 0; i < chunk; ++i)
      tile.peptide_ids.push_back(cluster.peptides[offset + i].id);
    assignments.push_back(std::move(tile));
    offset += chunk;
  }
  while (cluster_index < clusters.size() &&
         offset == clusters[cluster_index].peptides.size()) {
    ++cluster_index;
    offset = 0;
  }
  if (cluster_index != clusters.size())
    throw Error(Errc::bad_format, "explicit tile sizes leave peptides unassigned");
  return finish_map(clusters, capacity, std::move(assignments));
}

std::string save_tile_map(const TileMap& map) {
  std::ostringstream out;
  out << "#tilemap v1 capacity=" << map.capacity << '\n';
  for (const TileAssignment& tile : map.assignments) {
    for (PeptideId id : tile.peptide_ids) {
      const PeptideInfo& info = map.peptide(id);
      out << tile.tile_id << '\t' << tile.cluster_id << '\t'
          << map.accession(tile.cluster_id) << '\t' << id << '\t'
          << info.sequence.to_letters() << '\n';
    }
  }
  return out.str();
}

TileMap load_tile_map(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;

  // Header: "#tilemap v1 capacity=<n>"
  if (!std::getline(in, line))
    throw Error(Errc::bad_format, "empty tile map file");
  chomp(line);
  constexpr std::string_view kPrefix = "#tilemap v1 capacity=";
  if (!line.starts_with(kPrefix))
    throw Error(Errc::bad_format, "missing '#tilemap v1' header");
  TileMap map;
  map.capacity = parse_uint(std::string_view(line).substr(kPrefix.size()), "capacity");

  while (std::getline(in, line)) {
    chomp(line);
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 5)
      throw Error(Errc::bad_format, "tile map row needs 5 tab-separated fields: " + line);
    const TileId tile_id = static_cast<TileId>(parse_uint(fields[0], "tile id"));
    const ClusterId cluster_id = static_cast<ClusterId>(parse_uint(fields[1], "cluster id"));
    const std::string accession(fields[2]);
    const PeptideId peptide_id = static_cast<PeptideId>(parse_uint(fields[3], "peptide id"));
    auto sequence = AminoAcidSequence::from_letters(fields[4]);

    if (map.assignments.empty() || map.assignments.back().tile_id != tile_id) {
      const TileId expected =
          map.assignments.empty() ? 0 : map.assignments.back().tile_id + 1;
      if (tile_id != expected)
        throw Error(Errc::non_consecutive_tile_ids,
                    "expected tile " + std::to_string(expected) + ", found tile " +
                        std::to_string(tile_id));
      map.assignments.push_back({tile_id, cluster_id, {}});
    }
    TileAssignment& tile = map.assignments.back();
    if (tile.cluster_id != cluster_id)
      throw Error(Errc::bad_format,
                  "tile " + std::to_string(tile_id) + " maps to more than one cluster");
    if (map.registry.count(peptide_id))
      throw Error(Errc::bad_format,
                  "peptide id " + std::to_string(peptide_id) + " appears twice");

    const auto [it, inserted] = map.accessions.emplace(cluster_id, accession);
    if (!inserted && it->second != accession)
      throw Error(Errc::bad_format, "cluster " + std::to_string(cluster_id) +
                                        " has conflicting accessions");
    tile.peptide_ids.push_back(peptide_id);
    map.registry[peptide_id] = {std::move(sequence), cluster_id};
  }

  map.validate();
  return map;
}

TileMap read_tile_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(Errc::io_error, "cannot open tile map file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_tile_map(buffer.str());
}

}  // namespace protinfer
