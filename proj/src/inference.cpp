#include "protinfer/inference.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace protinfer {

using detail::chomp;

std::string format_rational(const Rational& value) {
  if (value.den <= 0)
    throw Error(Errc::internal, "rational with non-positive denominator");
  if (value.num < 0)
    throw Error(Errc::internal, "rational scores are never negative");
  std::int64_t whole = value.num / value.den;
  std::int64_t rest = value.num % value.den;
  if (rest == 0) return std::to_string(whole);
  std::string digits;
  for (int digit = 0; digit < 9 && rest != 0; ++digit) {
    rest *= 10;
    digits += static_cast<char>('0' + rest / value.den);
    rest %= value.den;
  }
  // Exact decimals are emitted in full; inexact ones round the ninth digit,
  // carrying into the whole part when every digit is 9.
  if (rest * 2 >= value.den) {
    std::size_t i = digits.size();
    while (i > 0 && digits[i - 1] == '9') digits[--i] = '0';
    if (i == 0)
      ++whole;
    else
      ++digits[i - 1];
  }
  return std::to_string(whole) + '.' + digits;
}

std::uint32_t ProbabilityTable::hit_count(PeptideId id) const {
  const auto it = hits_.find(id);
  if (it == hits_.end())
    throw Error(Errc::unknown_peptide,
                "peptide id " + std::to_string(id) + " has no probability entry");
  return it->second;
}

ProbabilityTable calibrate(const TileMap& map, std::span<const FastaRecord> calibration_db,
                           std::uint32_t sample_size,
                           const EngineConfig& engine_config) {
  if (sample_size < 1)
    throw Error(Errc::bad_format, "sample size must be >= 1");
  if (calibration_db.size() < sample_size)
    throw Error(Errc::sample_too_small,
                "calibration database has " + std::to_string(calibration_db.size()) +
                    " records, need " + std::to_string(sample_size));

  std::map<PeptideId, std::uint32_t> hits;
  for (const auto& [id, info] : map.registry) hits.emplace(id, 0);

  const Engine engine(map, engine_config);
  for (std::uint32_t i = 0; i < sample_size; ++i) {
    // Per-sequence presence, not per-occurrence counting.
    std::set<PeptideId> present;
    for (const MatchEvent& event : engine.scan_all(calibration_db[i].sequence))
      present.insert(event.peptide_id);
    for (PeptideId id : present) ++hits.at(id);
  }
  return ProbabilityTable(sample_size, std::move(hits));
}

std::vector<ClusterScore> score_clusters(std::span<const MatchEvent> events,
                                         const TileMap& map,
                                         const ProbabilityTable& table) {
  std::map<ClusterId, std::set<PeptideId>> identified;
  for (const auto& [cluster_id, accession] : map.accessions)
    identified.emplace(cluster_id, std::set<PeptideId>{});
  for (const MatchEvent& event : events) {
    if (!table.contains(event.peptide_id))
      throw Error(Errc::unknown_peptide, "event references peptide id " +
                                             std::to_string(event.peptide_id) +
                                             " absent from the probability table");
    identified.at(map.peptide(event.peptide_id).cluster_id).insert(event.peptide_id);
  }

  std::vector<ClusterScore> scores;
  scores.reserve(identified.size());
  for (const auto& [cluster_id, peptides] : identified) {
    ClusterScore entry;
    entry.cluster_id = cluster_id;
    std::int64_t hit_sum = 0;
    for (PeptideId id : peptides) {
      hit_sum += table.hit_count(id);
      entry.contributors.push_back(id);
    }
    entry.score = {hit_sum, table.sample_size()};
    scores.push_back(std::move(entry));
  }
  return scores;
}

InferenceResult infer(std::vector<ClusterScore> scores) {
  if (scores.empty())
    throw Error(Errc::bad_format, "cannot infer from an empty score list");

  InferenceResult result;
  result.ranked = std::move(scores);
  std::sort(result.ranked.begin(), result.ranked.end(),
            [](const ClusterScore& a, const ClusterScore& b) {
              if (a.score == b.score) return a.cluster_id < b.cluster_id;
              return b.score < a.score;
            });

  const Rational best = result.ranked.front().score;
  for (const ClusterScore& entry : result.ranked)
    if (entry.score == best) result.winners.push_back(entry.cluster_id);
  std::sort(result.winners.begin(), result.winners.end());
  result.no_evidence = (best == Rational{0, 1});
  return result;
}

std::string save_probability_table(const ProbabilityTable& table, const TileMap& map) {
  std::ostringstream out;
  out << "#probtable v1 sample_size=" << table.sample_size() << '\n';
  for (const auto& [id, hit_count] : table.hits()) {
    out << id << '\t' << map.peptide(id).sequence.to_letters() << '\t' << hit_count
        << '\t'
        << format_rational({hit_count, table.sample_size()}) << '\n';
  }
  return out.str();
}

namespace {

std::uint64_t parse_table_uint(std::string_view field, const char* what) {
  return detail::parse_uint(field, what);
}

}  // namespace

ProbabilityTable load_probability_table(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line))
    throw Error(Errc::bad_format, "empty probability table file");
  chomp(line);
  constexpr std::string_view kPrefix = "#probtable v1 sample_size=";
  if (!line.starts_with(kPrefix))
    throw Error(Errc::bad_format, "missing '#probtable v1' header");
  const auto sample_size = static_cast<std::uint32_t>(
      parse_table_uint(std::string_view(line).substr(kPrefix.size()), "sample size"));
  if (sample_size < 1)
    throw Error(Errc::bad_format, "probtable sample size must be >= 1");

  std::map<PeptideId, std::uint32_t> hits;
  while (std::getline(in, line)) {
    chomp(line);
    if (line.empty() || line[0] == '#') continue;
    const auto fields = detail::split_tabs(line);
    if (fields.size() != 4)
      throw Error(Errc::bad_format, "probtable row needs 4 tab-separated fields");
    const auto id = static_cast<PeptideId>(parse_table_uint(fields[0], "peptide id"));
    AminoAcidSequence::from_letters(fields[1]);  // sequence column must be valid
    const auto hit_count =
        static_cast<std::uint32_t>(parse_table_uint(fields[2], "hit count"));
    if (hit_count > sample_size)
      throw Error(Errc::bad_format, "hit count " + std::to_string(hit_count) +
                                        " exceeds sample size " +
                                        std::to_string(sample_size));
    if (!hits.emplace(id, hit_count).second)
      throw Error(Errc::bad_format,
                  "peptide id " + std::to_string(id) + " appears twice in probtable");
  }
  if (hits.empty())
    throw Error(Errc::bad_format, "probability table has no entries");
  return ProbabilityTable(sample_size, std::move(hits));
}

ProbabilityTable read_probability_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(Errc::io_error, "cannot open probability table '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_probability_table(buffer.str());
}

std::string format_inference_report(const InferenceResult& result, const TileMap& map) {
  std::ostringstream out;
  out << "cluster_id\taccession\tscore\tcontributing_peptide_ids\n";
  for (const ClusterScore& entry : result.ranked) {
    out << entry.cluster_id << '\t' << map.accession(entry.cluster_id) << '\t'
        << format_rational(entry.score) << '\t';
    for (std::size_t i = 0; i < entry.contributors.size(); ++i) {
      if (i > 0) out << ',';
      out << entry.contributors[i];
    }
    out << '\n';
  }
  out << "WINNERS:";
  for (std::size_t i = 0; i < result.winners.size(); ++i)
    out << (i == 0 ? '\t' : ',') << result.winners[i];
  if (result.no_evidence) out << "\t(no peptide evidence)";
  out << '\n';
  return out.str();
}

}  // namespace protinfer
