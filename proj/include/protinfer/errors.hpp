// Error taxonomy shared by all protinfer modules.

#ifndef PROTINFER_ERRORS_HPP_
#define PROTINFER_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace protinfer {

enum class Errc {
  // seqio
  empty_file,
  malformed_header,
  invalid_residue,
  duplicate_accession,
  empty_sequence,
  // cluster
  empty_digest,
  capacity_exceeded,
  duplicate_peptide_in_tile,
  non_consecutive_tile_ids,
  // automaton
  no_patterns,
  empty_pattern,
  duplicate_pattern,
  too_many_patterns,
  // engine
  empty_segment,
  // inference
  sample_too_small,
  unknown_peptide,
  // file formats
  bad_format,
  io_error,
  // tripwire: an internal invariant was violated
  internal,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Error(Errc code, std::string message, std::size_t position = npos)
      : std::runtime_error(std::move(message)), code_(code), position_(position) {}

  Errc code() const { return code_; }

  // Offset the error refers to (residue index, line number, ...), npos if n/a.
  std::size_t position() const { return position_; }

 private:
  Errc code_;
  std::size_t position_;
};

}  // namespace protinfer

#endif  // PROTINFER_ERRORS_HPP_
