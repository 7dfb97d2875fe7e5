// Amino-acid alphabet, sequence validation and FASTA I/O.
//
// The canonical alphabet is the 20 standard amino-acid letters in
// alphabetical order, coded 0..19. Every code fits in 5 bits; bit b of a
// code is the symbol consumed by bit-split machine b.

#ifndef PROTINFER_SEQIO_HPP_
#define PROTINFER_SEQIO_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "protinfer/errors.hpp"

namespace protinfer {

inline constexpr std::string_view kAlphabet = "ACDEFGHIKLMNPQRSTVWY";
inline constexpr std::size_t kAlphabetSize = 20;
inline constexpr int kResidueBits = 5;

using ResidueCode = std::uint8_t;

// 'A' -> 0 .. 'Y' -> 19. Lower case accepted. Throws invalid_residue
// otherwise; ambiguity codes (B, J, O, U, X, Z) are never mapped.
ResidueCode encode_residue(char letter);

// Inverse of encode_residue; code must be in [0, 20).
char decode_residue(ResidueCode code);

// True for the 20 canonical letters (either case).
bool is_canonical_letter(char letter);

enum class AmbiguityPolicy {
  reject,       // any non-canonical character is an error
  skip_record,  // signal the caller to drop the containing record
};

// A validated residue string stored as 5-bit codes.
class AminoAcidSequence {
 public:
  AminoAcidSequence() = default;
  explicit AminoAcidSequence(std::vector<ResidueCode> codes) : codes_(std::move(codes)) {}

  static AminoAcidSequence from_letters(std::string_view letters);

  std::string to_letters() const;

  std::size_t size() const { return codes_.size(); }
  bool empty() const { return codes_.empty(); }
  ResidueCode operator[](std::size_t i) const { return codes_[i]; }
  std::span<const ResidueCode> codes() const { return codes_; }

  // Contiguous subsequence [first, first + count).
  AminoAcidSequence slice(std::size_t first, std::size_t count) const;

  auto begin() const { return codes_.begin(); }
  auto end() const { return codes_.end(); }

  friend bool operator==(const AminoAcidSequence&, const AminoAcidSequence&) = default;
  friend bool operator<(const AminoAcidSequence& a, const AminoAcidSequence& b) {
    return a.codes_ < b.codes_;
  }

 private:
  std::vector<ResidueCode> codes_;
};

// Validates `raw` (whitespace stripped, case folded). Empty input is an
// error under every policy. On a non-canonical character: reject throws
// invalid_residue carrying the 0-based position, skip_record returns
// nullopt so the caller can drop the record.
std::optional<AminoAcidSequence> validate_sequence(
    std::string_view raw, AmbiguityPolicy policy = AmbiguityPolicy::reject);

struct FastaRecord {
  std::string accession;    // first whitespace-delimited header token
  std::string description;  // remainder of the header line
  AminoAcidSequence sequence;

  friend bool operator==(const FastaRecord&, const FastaRecord&) = default;
};

// Parses a FASTA stream: records in file order, sequence lines concatenated
// with interior whitespace removed, letters case-folded before validation.
// Under skip_record, records containing non-canonical residues are dropped.
std::vector<FastaRecord> parse_fasta(std::istream& in,
                                     AmbiguityPolicy policy = AmbiguityPolicy::reject);
std::vector<FastaRecord> parse_fasta(std::string_view text,
                                     AmbiguityPolicy policy = AmbiguityPolicy::reject);

// Writes records back out, sequences wrapped at 60 columns.
void serialize_fasta(std::ostream& out, std::span<const FastaRecord> records);
std::string serialize_fasta(std::span<const FastaRecord> records);

std::vector<FastaRecord> read_fasta_file(const std::string& path,
                                         AmbiguityPolicy policy = AmbiguityPolicy::reject);

}  // namespace protinfer

#endif  // PROTINFER_SEQIO_HPP_
