#include <doctest.h>

#include "helpers.hpp"

using namespace countreg;
using namespace testing_util;

TEST_CASE("regex parsing builds the expected languages") {
  Alphabet ab({"a", "b"});
  auto fa = parse_regex("(aa)*b(a+b)*", ab);
  auto lang = as_set(enumerate(fa, 6));
  auto brute = brute_language(
      [](const Word& w) {
        size_t i = 0;
        while (i < w.size() && w[i] == 0) ++i;
        return i < w.size() && i % 2 == 0;
      },
      2, 6);
  CHECK(lang == brute);

  CHECK(fa_accepts(parse_regex("eps", ab), {}));
  CHECK(fa_accepts(parse_regex("a|b", ab), {1}));
  CHECK_FALSE(fa_accepts(parse_regex("a^*b", ab), {1, 1}));
  CHECK_THROWS_AS(parse_regex("(ab", ab), ParseError);
  CHECK_THROWS_AS(parse_regex("ac", ab), ParseError);
  CHECK_THROWS_AS(parse_regex("", ab), ParseError);
}

TEST_CASE("multi-character symbols take the longest match") {
  Alphabet s({"a", "ab", "b"});
  auto fa = parse_regex("ab b", s);
  CHECK(fa_accepts(fa, {1, 2}));
  CHECK_FALSE(fa_accepts(fa, {0, 2, 2}));
}

TEST_CASE("automaton text round trip is canonical") {
  auto fa = automaton("table.dfa");
  std::string t = automaton_to_text(fa);
  auto back = parse_automaton(t);
  CHECK(automaton_to_text(back) == t);
  CHECK(as_set(enumerate(back, 8)) == as_set(enumerate(fa, 8)));
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_automaton("type dfa\nalphabet a\nstates q\ninitial q\ntrans q a r\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
  }
  CHECK_THROWS_AS(parse_automaton("type dfa\nalphabet a\nstates q r\ninitial q\ntrans q a q\ntrans q a r\n"), Error);
}

TEST_CASE("determinize, minimize and complete preserve the language") {
  std::mt19937 rng(11);
  for (int it = 0; it < 60; ++it) {
    auto nfa = random_nfa(rng, 2 + it % 5, 2, 0.3, it % 2 == 0);
    auto lang = as_set(enumerate(nfa, 8));
    auto d = determinize(nfa);
    CHECK(d.structurally_deterministic());
    CHECK(as_set(enumerate(d, 8)) == lang);
    auto m = minimal_dfa(nfa);
    CHECK(m.complete());
    CHECK(as_set(enumerate(m, 8)) == lang);
    CHECK(as_set(enumerate(trim_minimize(d), 8)) == lang);
    CHECK(minimal_dfa(m).num_states() == m.num_states());
  }
}

TEST_CASE("product modes match set operations") {
  std::mt19937 rng(12);
  for (int it = 0; it < 50; ++it) {
    auto a = minimal_dfa(random_nfa(rng, 3, 2, 0.35, false));
    auto b = minimal_dfa(random_nfa(rng, 3, 2, 0.35, true));
    auto la = as_set(enumerate(a, 7)), lb = as_set(enumerate(b, 7));
    std::set<Word> i, u, d;
    for (auto& w : all_words(2, 7)) {
      bool x = la.count(w), y = lb.count(w);
      if (x && y) i.insert(w);
      if (x || y) u.insert(w);
      if (x && !y) d.insert(w);
    }
    CHECK(as_set(enumerate(product(a, b, ProductMode::And), 7)) == i);
    CHECK(as_set(enumerate(product(a, b, ProductMode::Or), 7)) == u);
    CHECK(as_set(enumerate(product(a, b, ProductMode::Diff), 7)) == d);
  }
}

TEST_CASE("substitution replaces every letter by its image") {
  std::mt19937 rng(13);
  Alphabet target({"x", "y"});
  for (int it = 0; it < 40; ++it) {
    auto nfa = random_nfa(rng, 3, 2, 0.35, true);
    std::map<std::string, std::vector<std::string>> img{{"a", {"x", "y"}}, {"b", {}}};
    if (it % 2) img["b"] = {"y", "y", "x"};
    auto s = substitute(nfa, img, target);
    std::set<Word> expect;
    for (auto& w : enumerate(nfa, 8).words) {
      Word out;
      for (int c : w)
        for (auto& sym : img[nfa.alphabet.name(c)]) out.push_back(target.index(sym));
      if (out.size() <= 8) expect.insert(out);
    }
    std::set<Word> got;
    for (auto& w : enumerate(s, 8).words) got.insert(w);
    // images of words longer than 8 may be short when b is erased
    for (auto& w : expect) CHECK(got.count(w));
    for (auto& w : got) {
      bool found = expect.count(w) > 0;
      if (!found) {
        for (auto& v : enumerate(nfa, 16).words) {
          Word out;
          for (int c : v)
            for (auto& sym : img[nfa.alphabet.name(c)]) out.push_back(target.index(sym));
          if (out == w) {
            found = true;
            break;
          }
        }
      }
      CHECK(found);
    }
  }
}

TEST_CASE("enumerate lists words in canonical order") {
  auto fa = parse_regex("(a+b)*", Alphabet({"a", "b"}));
  auto w = enumerate(fa, 3).words;
  REQUIRE(w.size() == 15);
  for (size_t i = 1; i < w.size(); ++i) CHECK(canonical_less(w[i - 1], w[i]));
}

TEST_CASE("state budget stops an exponential subset construction") {
  // the n-th letter from the end is a
  Alphabet ab({"a", "b"});
  auto fa = parse_regex("(a+b)*a(a+b)(a+b)(a+b)(a+b)(a+b)(a+b)(a+b)(a+b)(a+b)", ab);
  CHECK_THROWS_AS(determinize(fa, 100), BudgetExceeded);
  CHECK(determinize(fa).num_states() >= 1024);
}
