#include "protinfer/digest.hpp"

#include <string>

namespace protinfer {

namespace {
const ResidueCode kLysine = encode_residue('K');
const ResidueCode kArginine = encode_residue('R');
const ResidueCode kProline = encode_residue('P');
}  // namespace

void DigestParams::validate() const {
  if (min_length < 1)
    throw Error(Errc::bad_format, "digest min_length must be >= 1");
  if (min_length > max_length)
    throw Error(Errc::bad_format, "digest min_length " + std::to_string(min_length) +
                                      " exceeds max_length " + std::to_string(max_length));
  if (max_length > 64)
    throw Error(Errc::bad_format, "digest max_length must be <= 64");
}

std::vector<std::size_t> cleavage_sites(const AminoAcidSequence& protein) {
  std::vector<std::size_t> sites;
  for (std::size_t i = 0; i + 1 < protein.size(); ++i) {
    const ResidueCode r = protein[i];
    if ((r == kLysine || r == kArginine) && protein[i + 1] != kProline)
      sites.push_back(i + 1);
  }
  return sites;
}

std::vector<PeptideFragment> tryptic_digest(const AminoAcidSequence& protein,
                                            const DigestParams& params) {
  params.validate();
  if (protein.empty())
    throw Error(Errc::empty_sequence, "cannot digest an empty protein");

  // Piece boundaries: 0, each cleavage site, protein end.
  std::vector<std::size_t> bounds{0};
  for (std::size_t site : cleavage_sites(protein)) bounds.push_back(site);
  bounds.push_back(protein.size());
  const std::size_t pieces = bounds.size() - 1;

  std::vector<PeptideFragment> out;
  for (std::size_t first = 0; first < pieces; ++first) {
    const std::size_t last_piece = std::min(pieces, first + params.missed_cleavages + 1);
    for (std::size_t end = first + 1; end <= last_piece; ++end) {
      const std::size_t start = bounds[first];
      const std::size_t length = bounds[end] - start;
      if (length < params.min_length || length > params.max_length) continue;
      out.push_back({start, protein.slice(start, length)});
    }
  }
  return out;
}

}  // namespace protinfer
