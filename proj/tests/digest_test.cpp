#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "protinfer/digest.hpp"

using namespace protinfer;

namespace {

std::vector<std::string> fragment_letters(const std::vector<PeptideFragment>& fragments) {
  std::vector<std::string> out;
  for (const auto& fragment : fragments) out.push_back(fragment.sequence.to_letters());
  return out;
}

AminoAcidSequence seq(std::string_view letters) {
  return AminoAcidSequence::from_letters(letters);
}

}  // namespace

TEST_SUITE_BEGIN("digest");

TEST_CASE("cleavage rule: after K or R unless P follows") {
  CHECK(cleavage_sites(seq("AAKCC")) == std::vector<std::size_t>{3});
  CHECK(cleavage_sites(seq("AAKPCC")).empty());
  CHECK(cleavage_sites(seq("ARC")) == std::vector<std::size_t>{2});
  CHECK(cleavage_sites(seq("CCCC")).empty());
  CHECK(cleavage_sites(seq("AAK")).empty());  // terminal K cuts nothing off
}

TEST_CASE("worked fragment lists") {
  CHECK(fragment_letters(tryptic_digest(seq("AAKCC"))) ==
        std::vector<std::string>{"AAK", "CC"});
  CHECK(fragment_letters(tryptic_digest(seq("AAKPCC"))) ==
        std::vector<std::string>{"AAKPCC"});
  CHECK(fragment_letters(tryptic_digest(seq("CCCC"))) ==
        std::vector<std::string>{"CCCC"});

  const DigestParams one_missed{.min_length = 1, .missed_cleavages = 1};
  CHECK(fragment_letters(tryptic_digest(seq("AKRC"), one_missed)) ==
        std::vector<std::string>{"AK", "AKR", "R", "RC", "C"});
}

TEST_CASE("starts are 0-based offsets into the protein") {
  const auto fragments = tryptic_digest(seq("AAKCC"));
  REQUIRE(fragments.size() == 2);
  CHECK(fragments[0].start == 0);
  CHECK(fragments[1].start == 3);
}

TEST_CASE("length filter applies after concatenation") {
  // AK + C: the pair AKC passes a min_length of 3 even though C alone fails
  const DigestParams params{.min_length = 3, .missed_cleavages = 1};
  CHECK(fragment_letters(tryptic_digest(seq("AKC"), params)) ==
        std::vector<std::string>{"AKC"});
  // max_length filters the concatenation but keeps the pieces
  const DigestParams narrow{.min_length = 1, .max_length = 3, .missed_cleavages = 1};
  CHECK(fragment_letters(tryptic_digest(seq("AAKCCC"), narrow)) ==
        std::vector<std::string>{"AAK", "CCC"});
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(tryptic_digest(seq("AAK"), {.min_length = 5, .max_length = 4}), Error);
  CHECK_THROWS_AS(tryptic_digest(seq("AAK"), {.max_length = 65}), Error);
  CHECK_THROWS_AS(tryptic_digest(seq("AAK"), {.min_length = 0}), Error);
  CHECK_THROWS_AS(tryptic_digest(AminoAcidSequence{}, {}), Error);
}

TEST_CASE("zero-missed-cleavage pieces reconstruct the protein") {
  std::mt19937_64 rng(3);
  const DigestParams unfiltered{.min_length = 1, .max_length = 64};
  for (int trial = 0; trial < 50; ++trial) {
    const auto protein = gen::random_sequence(rng, 1 + rng() % 60);
    std::string joined;
    for (const auto& fragment : tryptic_digest(protein, unfiltered))
      joined += fragment.sequence.to_letters();
    CHECK(joined == protein.to_letters());
  }
}

TEST_CASE("every fragment is a contiguous substring at its stated start") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto protein = gen::random_sequence(rng, 1 + rng() % 120);
    const std::string letters = protein.to_letters();
    const DigestParams params{.min_length = 1, .missed_cleavages = rng() % 3};
    for (const auto& fragment : tryptic_digest(protein, params)) {
      const std::string expect = fragment.sequence.to_letters();
      CHECK(letters.compare(fragment.start, expect.size(), expect) == 0);
    }
  }
}

TEST_CASE("raising missed_cleavages only adds fragments") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto protein = gen::random_sequence(rng, 1 + rng() % 120);
    for (std::size_t m = 1; m <= 2; ++m) {
      const auto smaller = tryptic_digest(protein, {.missed_cleavages = m - 1});
      const auto larger = tryptic_digest(protein, {.missed_cleavages = m});
      for (const auto& fragment : smaller)
        CHECK(std::find(larger.begin(), larger.end(), fragment) != larger.end());
    }
  }
}

TEST_CASE("agreement with the boundary-enumeration oracle") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto protein = gen::random_sequence(rng, 1 + rng() % 200);
    const DigestParams params{.min_length = 1 + rng() % 3,
                              .max_length = 8 + rng() % 57,
                              .missed_cleavages = rng() % 3};
    CHECK(tryptic_digest(protein, params) ==
          oracles::digest_by_enumeration(protein, params));
  }
}

TEST_SUITE_END();
