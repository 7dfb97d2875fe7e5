// Peptide probability calibration and maximum-total-probability inference.
//
// A peptide's absolute probability is the fraction of calibration sample
// sequences that contain it at least once. A cluster's score sums the
// probabilities of its peptides identified in the query, each peptide
// counted once regardless of occurrence count. Scores are exact rationals
// over the sample size, so argmax ties are never a floating-point artifact.

#ifndef PROTINFER_INFERENCE_HPP_
#define PROTINFER_INFERENCE_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "protinfer/cluster.hpp"
#include "protinfer/engine.hpp"
#include "protinfer/seqio.hpp"

namespace protinfer {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;  // > 0

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num * b.den == b.num * a.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num * b.den < b.num * a.den;
  }
};

// Renders n/d as an exact decimal when it terminates within 9 digits,
// otherwise 9 digits with the last one rounded. "0.3", "0.25", "1", "0".
std::string format_rational(const Rational& value);

class ProbabilityTable {
 public:
  ProbabilityTable() = default;
  ProbabilityTable(std::uint32_t sample_size, std::map<PeptideId, std::uint32_t> hits)
      : sample_size_(sample_size), hits_(std::move(hits)) {}

  std::uint32_t sample_size() const { return sample_size_; }
  const std::map<PeptideId, std::uint32_t>& hits() const { return hits_; }

  bool contains(PeptideId id) const { return hits_.count(id) != 0; }
  std::uint32_t hit_count(PeptideId id) const;  // throws unknown_peptide
  Rational probability(PeptideId id) const { return {hit_count(id), sample_size_}; }

  friend bool operator==(const ProbabilityTable&, const ProbabilityTable&) = default;

 private:
  std::uint32_t sample_size_ = 1;
  std::map<PeptideId, std::uint32_t> hits_;  // covers every registry peptide
};

// Scans the first sample_size calibration records with the engine and
// counts, per peptide, the sample sequences containing it.
ProbabilityTable calibrate(const TileMap& map, std::span<const FastaRecord> calibration_db,
                           std::uint32_t sample_size = 10,
                           const EngineConfig& engine_config = {});

struct ClusterScore {
  ClusterId cluster_id = 0;
  Rational score;
  std::vector<PeptideId> contributors;  // distinct identified peptides, ascending

  friend bool operator==(const ClusterScore&, const ClusterScore&) = default;
};

// One entry per cluster in the map (score 0 when nothing was identified),
// in cluster-id order. Throws unknown_peptide if an event's peptide is
// missing from the table.
std::vector<ClusterScore> score_clusters(std::span<const MatchEvent> events,
                                         const TileMap& map,
                                         const ProbabilityTable& table);

struct InferenceResult {
  std::vector<ClusterScore> ranked;   // score descending, then cluster id
  std::vector<ClusterId> winners;     // all clusters attaining the maximum
  bool no_evidence = false;           // every score is zero
};

// Ties are reported in full, never silently broken.
InferenceResult infer(std::vector<ClusterScore> scores);

// Probability-table file: `#probtable v1 sample_size=<n>` then
// `peptide_id<TAB>sequence<TAB>hit_count<TAB>probability` per line.
std::string save_probability_table(const ProbabilityTable& table, const TileMap& map);
ProbabilityTable load_probability_table(std::string_view text);
ProbabilityTable read_probability_table_file(const std::string& path);

// Inference report: cluster rows sorted as in InferenceResult plus a
// final WINNERS: line.
std::string format_inference_report(const InferenceResult& result, const TileMap& map);

}  // namespace protinfer

#endif  // PROTINFER_INFERENCE_HPP_
