#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "stratree/errors.hpp"
#include "stratree/seqio.hpp"

using namespace stratree;

TEST_CASE("fasta parsing") {
  const auto b = parse_fasta(">a\nACGT\n>b\nACGA");
  CHECK(b.taxa == std::vector<std::string>{"a", "b"});
  CHECK(b.rows == std::vector<std::string>{"ACGT", "ACGA"});

  CHECK_THROWS_AS(parse_fasta(">a\nACG\n>b\nACGA"), AlignmentLengthError);
  CHECK_THROWS_AS(parse_fasta(">a\nACGT\n>a\nACGA"), DuplicateTaxonError);
  CHECK_THROWS_AS(parse_fasta(">a\nACXT\n>b\nACGA"), AlphabetError);

  const auto c = parse_fasta(">a\nac-g\n>a2\nACGG");
  CHECK(c.rows == std::vector<std::string>{"AC-G", "ACGG"});

  const auto wrapped = parse_fasta(">x desc\nAC\nGT\r\n>y\nAC GA\n");
  CHECK(wrapped.taxa[0] == "x");
  CHECK(wrapped.rows == std::vector<std::string>{"ACGT", "ACGA"});
}

TEST_CASE("mismatch distances") {
  const auto b = parse_fasta(">a\nACGT\n>b\nACGA");
  CHECK(mismatch_distance(b, {GapMode::Ignore})(0, 1) == 0.25);
  CHECK(mismatch_distance(b, {GapMode::Mismatch})(0, 1) == 0.25);

  const auto g = parse_fasta(">a\nAC-T\n>b\nACGT");
  CHECK(mismatch_distance(g, {GapMode::Ignore})(0, 1) == 0.0);
  CHECK(mismatch_distance(g, {GapMode::Mismatch})(0, 1) == 0.25);

  // Gap-vs-gap columns leave the denominator in both modes.
  const auto gg = parse_fasta(">a\nA-GT\n>b\nA-GA");
  CHECK(mismatch_distance(gg, {GapMode::Mismatch})(0, 1) == doctest::Approx(1.0 / 3.0));

  const auto none = parse_fasta(">a\n--\n>b\nAC");
  CHECK_THROWS_AS(mismatch_distance(none, {GapMode::Ignore}), NoComparableSitesError);

  const auto rna = parse_fasta(">a\nACGU\n>b\nACGT");
  CHECK(mismatch_distance(rna)(0, 1) == 0.0);

  const auto amb = parse_fasta(">a\nACGN\n>b\nACGT");
  CHECK(mismatch_distance(amb)(0, 1) == 0.0);
  DistanceOptions strict;
  strict.strict_n = true;
  CHECK(mismatch_distance(amb, strict)(0, 1) == 0.25);
}

TEST_CASE("distance matrices of random alignments are valid") {
  std::mt19937_64 rng(7);
  const std::string alphabet = "ACGTN-";
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const int len = 1 + static_cast<int>(rng() % 30);
    std::string text;
    for (int i = 0; i < n; ++i) {
      text += ">t" + std::to_string(i) + "\n";
      for (int k = 0; k < len; ++k) text += alphabet[rng() % (k == 0 ? 4 : alphabet.size())];
      text += "\n";
    }
    const auto block = parse_fasta(text);
    for (GapMode mode : {GapMode::Ignore, GapMode::Mismatch}) {
      DistanceMatrix d;
      try {
        d = mismatch_distance(block, {mode});
      } catch (const NoComparableSitesError&) {
        continue;
      }
      CHECK_NOTHROW(d.validate());
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) CHECK(d(i, j) <= 1.0);
      }
    }
  }
}

TEST_CASE("distance csv round trip") {
  const auto d = mismatch_distance(parse_fasta(">a\nACGT\n>b\nACGA\n>c\nTTGA"));
  const auto back = parse_distance_csv(format_distance_csv(d));
  REQUIRE(back.taxa() == d.taxa());
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(back(i, j) == d(i, j));
  }
  CHECK_THROWS_AS(parse_distance_csv("a,b\n0,1\n"), CsvSyntaxError);
}

TEST_CASE("newick parsing") {
  const auto t = parse_newick("((a:1,b:1):0.5,c:2);");
  REQUIRE(t.leaves().size() == 3);
  const int a = *t.find_leaf("a");
  const int cherry = t.nodes[a].parent;
  CHECK(t.nodes[cherry].length == 0.5);
  CHECK(t.nodes[cherry].parent == t.root);
  CHECK(t.path_length(a, *t.find_leaf("c")) == 3.5);

  const auto star = parse_newick("(a,b,c);");
  CHECK(star.nodes[star.root].children.size() == 3);
  for (int leaf : star.leaves()) CHECK(star.nodes[leaf].length == 0.0);

  CHECK_THROWS_AS(parse_newick("((a,b);"), NewickSyntaxError);
  CHECK_THROWS_AS(parse_newick("(a,b);x"), NewickSyntaxError);
  CHECK_THROWS_AS(parse_newick("(a:-1,b);"), NegativeLengthError);
  CHECK(parse_newick("(a_1:1,'b c':2);").find_leaf("a_1").has_value());
}

TEST_CASE("newick serialization") {
  const auto t = parse_newick("((b:0.3,c:0.4):0.02,a:0.5);");
  CHECK(serialize_newick(t) == "((b:0.3,c:0.4):0.02,a:0.5);");
}

TEST_CASE("newick round trip on random trees") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 15);
    const auto t = oracle::random_binary_tree(n, rng);
    const auto back = parse_newick(serialize_newick(t, 17));
    CHECK(same_tree(t, back, 0.0));
    const auto rounded = parse_newick(serialize_newick(t, 6));
    CHECK(same_tree(t, rounded, 1e-5));
  }
}
