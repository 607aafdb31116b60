#include <doctest.h>

#include "helpers.hpp"

using namespace countreg;
using namespace testing_util;

TEST_CASE("FNV-1a digests") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("artifact kinds") {
  CHECK(load("table.dfa").kind == ArtifactKind::Automaton);
  CHECK(load("s1_witness.re").kind == ArtifactKind::Regex);
  CHECK(load("l_eq.ncm").kind == ArtifactKind::Counter);
  CHECK(load("s1.pda").kind == ArtifactKind::Pushdown);
  CHECK(load("ab_c.shape").kind == ArtifactKind::Shape);
  CHECK(parse_artifact("semilinear dim 1\nlinear base 0 periods 1\n").kind == ArtifactKind::Semilinear);
  auto re = parse_artifact("alphabet a b c\n(ab)*\n");
  CHECK(re.fa->alphabet.size() == 3);
  CHECK_THROWS_AS(parse_artifact("type xyz\n"), ParseError);
  CHECK_THROWS_AS(load("missing.dfa"), Error);
}

TEST_CASE("fixture corpus matches its recorded sequences") {
  auto corpus = load_fixture_corpus(FIXTURE_DIR);
  CHECK(corpus.size() >= 20);
  std::map<std::string, std::vector<BigInt>> byname;
  for (auto& e : corpus) {
    auto got = artifact_counts(e.artifact, static_cast<int>(e.recorded.size()) - 1);
    CHECK_MESSAGE(got == e.recorded, e.name);
    byname[e.name] = e.recorded;
  }
  // values stated in the source material
  CHECK(byname.at("l_maj")[7] == 64);
  CHECK(byname.at("l_eq")[4] == 6);
  CHECK(byname.at("l_bal")[6] == 5);
  for (int n = 1; n <= 10; ++n) CHECK(byname.at("intro_l")[n] == BigInt(1) << (n - 1));
}

TEST_CASE("budget override") {
  CHECK(default_state_budget() > 0);
}
