#include "protinfer/errors.hpp"

namespace protinfer {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::empty_file: return "EmptyFile";
    case Errc::malformed_header: return "MalformedHeader";
    case Errc::invalid_residue: return "InvalidResidue";
    case Errc::duplicate_accession: return "DuplicateAccession";
    case Errc::empty_sequence: return "EmptySequence";
    case Errc::empty_digest: return "EmptyDigest";
    case Errc::capacity_exceeded: return "CapacityExceeded";
    case Errc::duplicate_peptide_in_tile: return "DuplicatePeptideInTile";
    case Errc::non_consecutive_tile_ids: return "NonConsecutiveTileIds";
    case Errc::no_patterns: return "NoPatterns";
    case Errc::empty_pattern: return "EmptyPattern";
    case Errc::duplicate_pattern: return "DuplicatePattern";
    case Errc::too_many_patterns: return "TooManyPatterns";
    case Errc::empty_segment: return "EmptySegment";
    case Errc::sample_too_small: return "SampleTooSmall";
    case Errc::unknown_peptide: return "UnknownPeptide";
    case Errc::bad_format: return "BadFormat";
    case Errc::io_error: return "IoError";
    case Errc::internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace protinfer
