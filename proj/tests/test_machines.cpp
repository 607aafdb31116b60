#include <doctest.h>

#include "countreg/ntm_witness.hpp"
#include "helpers.hpp"

using namespace countreg;
using namespace testing_util;

TEST_CASE("counter machine simulation matches a reference search") {
  std::mt19937 rng(31);
  for (int it = 0; it < 80; ++it) {
    auto m = random_ncm(rng, 2 + it % 3, 1 + it % 2, 2);
    auto got = as_set(enumerate_lang(m, 6));
    // a run on a word of length 6 never needs a counter above the step bound
    auto ref = brute_language([&](const Word& w) { return reference_accepts(m, w, 24); }, 2, 6);
    CHECK(got == ref);
  }
}

TEST_CASE("fixtures parse and round trip through text") {
  for (auto name : {"anbn.dcm", "l3.dcm", "l5.ncm", "l_eq.ncm", "two_piece.ncm", "intro_l.dcm"}) {
    auto m = counter(name);
    auto back = parse_counter_machine(counter_machine_to_text(m));
    CHECK(counter_machine_to_text(back) == counter_machine_to_text(m));
    CHECK(as_set(enumerate_lang(back, 7)) == as_set(enumerate_lang(m, 7)));
  }
  for (auto name : {"anbn.pda", "s1.pda", "l_bal.pda"}) {
    auto p = *load(name).pda;
    auto back = parse_pushdown(pushdown_to_text(p));
    CHECK(as_set(enumerate_lang(back, 8)) == as_set(enumerate_lang(p, 8)));
  }
  CHECK(counter("anbn.dcm").is_deterministic());
  CHECK_FALSE(counter("l5.ncm").is_deterministic());
}

TEST_CASE("parse errors name the offending line") {
  std::string bad = "type dcm\nalphabet a\ncounters 1\nreversals 1\nstates q\ninitial q\naccepting q\ntrans q a z q -1\n";
  try {
    parse_counter_machine(bad);
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 8);
  }
  CHECK_THROWS_AS(parse_counter_machine("type dcm\nalphabet a\ncounters 2\nreversals 1\n"), ParseError);
}

TEST_CASE("the pushdown fixtures count what they should") {
  // balanced brackets: Catalan numbers at even lengths
  auto bal = machine_counts(*load("l_bal.pda").pda, 10);
  std::vector<BigInt> cat{1, 0, 1, 0, 2, 0, 5, 0, 14, 0, 42};
  CHECK(bal == cat);
  auto p = *load("anbn.pda").pda;
  auto ref = brute_language(
      [](const Word& w) {
        size_t h = w.size() / 2;
        if (w.size() % 2) return false;
        for (size_t i = 0; i < w.size(); ++i)
          if (w[i] != (i < h ? 0 : 1)) return false;
        return true;
      },
      2, 10);
  CHECK(as_set(enumerate_lang(p, 10)) == ref);
}

TEST_CASE("ambiguity counts accepting runs") {
  auto r = ambiguity(counter("l5.ncm"), 6);
  CHECK(r.max_ambiguity == 2);
  CHECK(ambiguity(counter("l3.dcm"), 8).max_ambiguity == 1);
  CHECK(ambiguity(*load("anbn.pda").pda, 8).max_ambiguity == 1);
}

TEST_CASE("product with a regular language and phase normalization preserve languages") {
  std::mt19937 rng(32);
  for (int it = 0; it < 40; ++it) {
    auto m = random_ncm(rng, 3, 1 + it % 2, 2);
    auto d = minimal_dfa(random_nfa(rng, 3, 2, 0.4, false));
    auto lm = as_set(enumerate_lang(m, 6));
    std::set<Word> inter;
    for (auto& w : lm)
      if (fa_accepts(d, w)) inter.insert(w);
    CHECK(as_set(enumerate_lang(product_regular(m, d), 6)) == inter);
    CHECK(as_set(enumerate_lang(normalize_phases(m), 6)) == lm);
    CHECK(as_set(enumerate_lang(to_final_state(m), 6)) == lm);
  }
}

TEST_CASE("machine union and intersection") {
  std::mt19937 rng(33);
  for (int it = 0; it < 30; ++it) {
    auto a = random_ncm(rng, 3, 1, 2), b = random_ncm(rng, 3, 1, 2);
    auto la = as_set(enumerate_lang(a, 6)), lb = as_set(enumerate_lang(b, 6));
    std::set<Word> i, u = la;
    u.insert(lb.begin(), lb.end());
    for (auto& w : la)
      if (lb.count(w)) i.insert(w);
    CHECK(as_set(enumerate_lang(machine_intersection(a, b), 6)) == i);
    CHECK(as_set(enumerate_lang(machine_union(a, b), 6)) == u);
  }
  auto fa = automaton("table.dfa");
  CHECK(as_set(enumerate_lang(machine_from_automaton(fa), 8)) == as_set(enumerate(fa, 8)));
}

TEST_CASE("worktape machines") {
  auto w = dcm_to_ntm(counter("anbn.dcm"));
  auto back = parse_worktape(worktape_to_text(w));
  CHECK(as_set(enumerate_lang(back, 8)) == as_set(enumerate_lang(counter("anbn.dcm"), 8)));
  CHECK(machine_counts(w, 8) == machine_counts(counter("anbn.dcm"), 8));
}
