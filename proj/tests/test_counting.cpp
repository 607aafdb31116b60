#include <doctest.h>

#include "helpers.hpp"

using namespace countreg;
using namespace testing_util;

TEST_CASE("count_words agrees with enumeration on random automata") {
  std::mt19937 rng(21);
  for (int it = 0; it < 100; ++it) {
    auto nfa = random_nfa(rng, 2 + it % 6, 2 + it % 2, 0.3, it % 3 == 0);
    auto d = minimal_dfa(nfa);
    auto seq = counting_sequence(d, 10).terms;
    auto brute = length_counts(as_set(enumerate(nfa, 10)), 10);
    CHECK(seq == brute);
    for (int n = 0; n <= 10; ++n) CHECK(count_words(d, n) == brute[n]);
  }
}

TEST_CASE("big counts stay exact") {
  auto u = automaton("universal_ab.dfa");
  BigInt two = 2;
  CHECK(count_words(u, 200) == boost::multiprecision::pow(two, 200));
}

TEST_CASE("generating functions") {
  CHECK(gf_to_string(generating_function(automaton("universal_ab.dfa"))) == "gf: (1) / (1 - 2z)");
  CHECK(gf_to_string(generating_function(automaton("half_ab.dfa"))) == "gf: (1 - z) / (1 - 2z)");
  std::mt19937 rng(22);
  for (int it = 0; it < 40; ++it) {
    auto d = minimal_dfa(random_nfa(rng, 2 + it % 5, 2, 0.3, false));
    auto gf = generating_function(d);
    CHECK(gf_series(gf, 15) == counting_sequence(d, 15).terms);
    CHECK(parse_gf(gf_to_string(gf)).num == gf.num);
  }
  CHECK_THROWS(parse_gf("sqrt(1-4z)"));
}

TEST_CASE("polynomial arithmetic") {
  Poly a(std::vector<BigInt>{1, -1}), b(std::vector<BigInt>{1, 1});
  Poly p = a * b;
  CHECK(p == Poly(std::vector<BigInt>{1, 0, -1}));
  CHECK(exact_div(p, a) == b);
  CHECK(poly_gcd(p * Poly::constant(6), a * Poly::constant(4)) == Poly(std::vector<BigInt>{-1, 1}));
  CHECK_THROWS(exact_div(b, Poly(std::vector<BigInt>{0, 2})));
  CHECK(derivative(p) == Poly(std::vector<BigInt>{0, -2}));
  RationalGF r{p, a * a};
  auto red = reduce_gf(r);
  CHECK(red.num == b);
  CHECK(red.den == a);
}

TEST_CASE("counting equality of witnesses") {
  auto s1 = automaton("s1_witness.re");
  auto pda = load("s1.pda");
  CHECK(counting_sequence(minimal_dfa(s1), 12).terms == artifact_counts(pda, 12));
  CHECK(counting_equal(minimal_dfa(automaton("maj_witness.dfa")), minimal_dfa(automaton("half_ab.dfa"))) == false);
  CHECK(counting_equal(minimal_dfa(automaton("m2.dfa")), minimal_dfa(automaton("half_ab.dfa"))));
  std::mt19937 rng(23);
  for (int it = 0; it < 60; ++it) {
    auto a = minimal_dfa(random_nfa(rng, 3, 2, 0.3, false));
    auto b = minimal_dfa(random_nfa(rng, 3, 2, 0.3, false));
    int h = counting_equal_horizon(a, b);
    bool brute = counting_sequence(a, h + 20).terms == counting_sequence(b, h + 20).terms;
    CHECK(counting_equal(a, b) == brute);
  }
}

TEST_CASE("growth classes") {
  CHECK(classify_growth(minimal_dfa(automaton("table.dfa"))).kind == GrowthKind::Constant);
  CHECK(classify_growth(minimal_dfa(automaton("table.dfa"))).parameter == 2);
  CHECK(classify_growth(automaton("universal_ab.dfa")).kind == GrowthKind::Exponential);
  auto poly = minimal_dfa(parse_regex("a*b*c*", Alphabet({"a", "b", "c"})));
  auto g = classify_growth(poly);
  CHECK(g.kind == GrowthKind::Polynomial);
  CHECK(g.parameter == 2);
  std::mt19937 rng(24);
  for (int it = 0; it < 60; ++it) {
    auto d = minimal_dfa(random_nfa(rng, 2 + it % 4, 2, 0.25, false));
    auto c = classify_growth(d);
    auto seq = counting_sequence(d, 40).terms;
    BigInt mx = 0;
    for (auto& v : seq) mx = std::max(mx, v);
    if (c.kind == GrowthKind::Constant) CHECK(mx <= c.parameter);
    if (c.kind == GrowthKind::Exponential) CHECK(mx > 40);
  }
}

TEST_CASE("pole diagnostics") {
  auto rep = pole_report(generating_function(automaton("universal_ab.dfa")), 1);
  REQUIRE(rep.roots.size() == 1);
  CHECK(rep.roots[0].modulus == doctest::Approx(0.5));
  CHECK(rep.classes[0].dominating == Dominance::Yes);
  // 1/(1 - z^2) has poles 1 and -1 of equal modulus; merging by parity separates them
  RationalGF alt{Poly::constant(1), Poly(std::vector<BigInt>{1, 0, -1})};
  CHECK(pole_report(alt, 1).classes[0].dominating != Dominance::Yes);
  auto merged = pole_report(alt, 2);
  CHECK(merged.classes.size() == 2);
  CHECK(merged.classes[0].dominating == Dominance::Yes);
}

TEST_CASE("witness combinations add up the counting functions") {
  auto r1 = minimal_dfa(automaton("l_sq_witness.re"));
  auto r2 = minimal_dfa(automaton("s1_witness.re"));
  auto c1 = counting_sequence(r1, 12).terms, c2 = counting_sequence(r2, 12).terms;
  auto un = counting_sequence(minimal_dfa(witness_combine(CombineMode::MarkedUnion, r1, &r2)), 11).terms;
  auto cat = counting_sequence(minimal_dfa(witness_combine(CombineMode::MarkedConcat, r1, &r2)), 11).terms;
  for (int n = 0; n <= 10; ++n) {
    // one marker letter per combination
    CHECK(un[n + 1] == c1[n] + c2[n]);
    BigInt conv = 0;
    for (int i = 0; i <= n; ++i) conv += c1[i] * c2[n - i];
    CHECK(cat[n + 1] == conv);
  }
  CHECK_THROWS(parse_combine_mode("shuffle"));
}
