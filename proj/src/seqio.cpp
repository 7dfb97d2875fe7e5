#include "protinfer/seqio.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace protinfer {

namespace {

constexpr std::uint8_t kBadCode = 0xFF;

constexpr std::array<std::uint8_t, 256> make_code_table() {
  std::array<std::uint8_t, 256> table{};
  for (auto& entry : table) entry = kBadCode;
  for (std::size_t i = 0; i < kAlphabet.size(); ++i) {
    const char upper = kAlphabet[i];
    table[static_cast<unsigned char>(upper)] = static_cast<std::uint8_t>(i);
    table[static_cast<unsigned char>(upper - 'A' + 'a')] = static_cast<std::uint8_t>(i);
  }
  return table;
}

constexpr std::array<std::uint8_t, 256> kCodeTable = make_code_table();

std::string printable(char c) {
  if (std::isprint(static_cast<unsigned char>(c)))
    return std::string(1, c);
  return "\\x" + std::to_string(static_cast<unsigned>(static_cast<unsigned char>(c)));
}

}  // namespace

ResidueCode encode_residue(char letter) {
  const std::uint8_t code = kCodeTable[static_cast<unsigned char>(letter)];
  if (code == kBadCode)
    throw Error(Errc::invalid_residue, "invalid residue '" + printable(letter) + "'");
  return code;
}

char decode_residue(ResidueCode code) {
  if (code >= kAlphabetSize)
    throw Error(Errc::invalid_residue,
                "residue code " + std::to_string(code) + " out of range");
  return kAlphabet[code];
}

bool is_canonical_letter(char letter) {
  return kCodeTable[static_cast<unsigned char>(letter)] != kBadCode;
}

AminoAcidSequence AminoAcidSequence::from_letters(std::string_view letters) {
  auto seq = validate_sequence(letters, AmbiguityPolicy::reject);
  return std::move(*seq);  // reject either returns a value or throws
}

std::string AminoAcidSequence::to_letters() const {
  std::string out;
  out.reserve(codes_.size());
  for (ResidueCode code : codes_) out.push_back(kAlphabet[code]);
  return out;
}

AminoAcidSequence AminoAcidSequence::slice(std::size_t first, std::size_t count) const {
  return AminoAcidSequence(
      std::vector<ResidueCode>(codes_.begin() + first, codes_.begin() + first + count));
}

std::optional<AminoAcidSequence> validate_sequence(std::string_view raw,
                                                   AmbiguityPolicy policy) {
  std::vector<ResidueCode> codes;
  codes.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    const std::uint8_t code = kCodeTable[static_cast<unsigned char>(c)];
    if (code == kBadCode) {
      if (policy == AmbiguityPolicy::skip_record) return std::nullopt;
      throw Error(Errc::invalid_residue,
                  "invalid residue '" + printable(c) + "' at position " +
                      std::to_string(codes.size()),
                  codes.size());
    }
    codes.push_back(code);
  }
  if (codes.empty())
    throw Error(Errc::empty_sequence, "sequence is empty after trimming");
  return AminoAcidSequence(std::move(codes));
}

std::vector<FastaRecord> parse_fasta(std::istream& in, AmbiguityPolicy policy) {
  std::vector<FastaRecord> records;
  std::vector<std::string> seen;  // accessions, including skipped records

  std::string header;       // current header line without '>'
  std::string residues;     // accumulated sequence letters
  bool in_record = false;

  auto flush = [&]() {
    if (!in_record) return;
    std::string accession;
    std::string description;
    const std::size_t split = header.find_first_of(" \t");
    if (split == std::string::npos) {
      accession = header;
    } else {
      accession = header.substr(0, split);
      const std::size_t rest = header.find_first_not_of(" \t", split);
      if (rest != std::string::npos) description = header.substr(rest);
    }
    if (accession.empty())
      throw Error(Errc::malformed_header, "FASTA header has no accession");
    for (const auto& prev : seen) {
      if (prev == accession)
        throw Error(Errc::duplicate_accession, "duplicate accession '" + accession + "'");
    }
    seen.push_back(accession);
    if (residues.empty())
      throw Error(Errc::empty_sequence, "record '" + accession + "' has no sequence data");
    auto seq = validate_sequence(residues, policy);
    if (seq)
      records.push_back({std::move(accession), std::move(description), std::move(*seq)});
    residues.clear();
  };

  std::string line;
  bool saw_any_content = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    saw_any_content = true;
    if (line[0] == '>') {
      flush();
      header = line.substr(1);
      in_record = true;
    } else {
      if (!in_record)
        throw Error(Errc::malformed_header, "sequence data before first '>' header");
      residues += line;
    }
  }
  flush();

  if (!saw_any_content || !in_record)
    throw Error(Errc::empty_file, "FASTA input contains no records");
  return records;
}

std::vector<FastaRecord> parse_fasta(std::string_view text, AmbiguityPolicy policy) {
  std::istringstream in{std::string(text)};
  return parse_fasta(in, policy);
}

void serialize_fasta(std::ostream& out, std::span<const FastaRecord> records) {
  constexpr std::size_t kWrap = 60;
  for (const auto& record : records) {
    out << '>' << record.accession;
    if (!record.description.empty()) out << ' ' << record.description;
    out << '\n';
    const std::string letters = record.sequence.to_letters();
    for (std::size_t i = 0; i < letters.size(); i += kWrap)
      out << letters.substr(i, kWrap) << '\n';
  }
}

std::string serialize_fasta(std::span<const FastaRecord> records) {
  std::ostringstream out;
  serialize_fasta(out, records);
  return out.str();
}

std::vector<FastaRecord> read_fasta_file(const std::string& path, AmbiguityPolicy policy) {
  std::ifstream in(path);
  if (!in)
    throw Error(Errc::io_error, "cannot open FASTA file '" + path + "'");
  return parse_fasta(in, policy);
}

}  // namespace protinfer
