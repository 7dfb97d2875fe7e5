// In-silico tryptic digestion: cleave after K or R unless the next residue
// is P, then expand missed-cleavage runs and apply the length filter.

#ifndef PROTINFER_DIGEST_HPP_
#define PROTINFER_DIGEST_HPP_

#include <cstddef>
#include <vector>

#include "protinfer/seqio.hpp"

namespace protinfer {

struct DigestParams {
  std::size_t min_length = 2;
  std::size_t max_length = 64;
  std::size_t missed_cleavages = 0;

  void validate() const;  // throws bad_format on min > max or max > 64
};

struct PeptideFragment {
  std::size_t start = 0;  // 0-based offset within the parent protein
  AminoAcidSequence sequence;

  friend bool operator==(const PeptideFragment&, const PeptideFragment&) = default;
};

// 0-based cut positions: i is a cleavage boundary when protein[i-1] is K/R
// and protein[i] is not P. Sequence ends are not included.
std::vector<std::size_t> cleavage_sites(const AminoAcidSequence& protein);

// Fragments made of 1..missed_cleavages+1 consecutive tryptic pieces,
// length-filtered after concatenation, ordered by (start, length).
// Duplicate sequences within one protein are kept.
std::vector<PeptideFragment> tryptic_digest(const AminoAcidSequence& protein,
                                            const DigestParams& params = {});

}  // namespace protinfer

#endif  // PROTINFER_DIGEST_HPP_
