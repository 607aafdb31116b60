#include <doctest.h>

#include "helpers.hpp"

using namespace countreg;
using namespace testing_util;

namespace {

void check_counterexample(const SlenderVerdict& v, const std::function<bool(const Word&)>& member) {
  REQUIRE(static_cast<int>(v.counterexample.size()) == v.k + 1);
  std::set<Word> distinct(v.counterexample.begin(), v.counterexample.end());
  CHECK(static_cast<int>(distinct.size()) == v.k + 1);
  for (auto& w : v.counterexample) {
    CHECK(w.size() == v.counterexample[0].size());
    CHECK(member(w));
  }
}

// thin random languages: unions of a few words and a few u v* w patterns
FiniteAutomaton random_slender(std::mt19937& rng) {
  Alphabet ab({"a", "b"});
  std::string re;
  int parts = 1 + static_cast<int>(rng() % 3);
  auto word = [&](int maxlen) {
    std::string w;
    int n = static_cast<int>(rng() % (maxlen + 1));
    for (int i = 0; i < n; ++i) w += rng() % 2 ? 'a' : 'b';
    return w.empty() ? std::string("eps") : w;
  };
  for (int i = 0; i < parts; ++i) {
    if (i) re += "+";
    std::string loop = word(2);
    if (loop == "eps") loop = "a";
    re += "(" + word(2) + ")(" + loop + ")*(" + word(2) + ")";
  }
  return minimal_dfa(parse_regex(re, ab));
}

}  // namespace

TEST_CASE("the DFA decider agrees with the counting sequence") {
  std::mt19937 rng(91);
  for (int it = 0; it < 120; ++it) {
    auto d = it % 2 ? random_slender(rng) : minimal_dfa(random_nfa(rng, 2 + it % 4, 2, 0.25, false));
    for (int k = 1; k <= 3; ++k) {
      auto v = dfa_k_slender(d, k);
      auto seq = counting_sequence(d, d.num_states() * (k + 2)).terms;
      bool brute = std::all_of(seq.begin(), seq.end(), [&](const BigInt& x) { return x <= k; });
      CHECK(v.slender == brute);
      if (!v.slender) {
        check_counterexample(v, [&](const Word& w) { return fa_accepts(d, w); });
        // shortest length where the bound fails
        size_t n = v.counterexample[0].size();
        CHECK(seq[n] > k);
        for (size_t m = 0; m < n; ++m) CHECK(seq[m] <= k);
      }
    }
  }
}

TEST_CASE("slender-effective automata from DFAs") {
  std::mt19937 rng(92);
  for (int it = 0; it < 60; ++it) {
    auto d = random_slender(rng);
    int k = 3;
    auto ca = slender_effective_dfa(d, k);
    auto seq = counting_sequence(d, 40).terms;
    for (int n = 0; n <= 40; ++n) CHECK(ca.value(n) == std::min<long>(static_cast<long>(seq[n]), k + 1));
    auto back = parse_counting_automaton(counting_automaton_to_text(ca));
    for (int n = 0; n <= 40; ++n) CHECK(back.value(n) == ca.value(n));
    if (!ca.overflow_reachable()) {
      auto w = k_counting_witness(ca);
      auto ws = counting_sequence(w, 40).terms;
      for (int n = 0; n <= 40; ++n) CHECK(ws[n] == ca.value(n));
    }
  }
}

TEST_CASE("counter machine deciders") {
  auto an = counter("anbn.dcm");
  CHECK(ncm_k_slender(an, 1).slender);
  auto leq = counter("l_eq.ncm");
  auto v = ncm_k_slender(leq, 1);
  CHECK_FALSE(v.slender);
  check_counterexample(v, [&](const Word& w) { return accepts(leq, w); });
  CHECK(v.counterexample[0].size() == 2);
  CHECK(ncm_k_slender(counter("abn_cn.dcm"), 1).slender);
  CHECK(ncm_k_slender(counter("anbncm.dcm"), 5).slender == false);

  // the exact procedure alone reaches the same verdicts
  auto exact = ncm_k_slender(leq, 1, false);
  CHECK_FALSE(exact.slender);
  CHECK(exact.counterexample[0].size() == 2);
  CHECK(ncm_k_slender(an, 1, false).slender);
  auto tp = ncm_k_slender(counter("two_piece.ncm"), 1, false);
  CHECK_FALSE(tp.slender);
  check_counterexample(tp, [&](const Word& w) { return accepts(counter("two_piece.ncm"), w); });

  auto ca = ncm_slender_effective(an, 1);
  auto brute = machine_counts(an, 16);
  for (int n = 0; n <= 16; ++n) CHECK(ca.value(n) == brute[n]);
  CHECK_THROWS_AS(ncm_slender_effective(leq, 1), PreconditionError);
}

TEST_CASE("set operations agree with brute force") {
  std::mt19937 rng(93);
  std::vector<CounterMachine> langs{counter("anbn.dcm"), counter("two_piece.ncm"), counter("abn_cn.dcm")};
  for (int i = 0; i < 5; ++i) langs.push_back(machine_from_automaton(random_slender(rng)));
  auto up_to = [](const CounterMachine& m, const Alphabet& sigma) {
    std::set<std::vector<std::string>> out;
    for (auto& w : enumerate_lang(m, 8).words) {
      std::vector<std::string> s;
      for (int c : w) s.push_back(m.alphabet.name(c));
      (void)sigma;
      out.insert(s);
    }
    return out;
  };
  for (size_t i = 0; i < langs.size(); ++i)
    for (size_t j = 0; j < langs.size(); j += 2) {
      const auto& a = langs[i];
      const auto& b = langs[j];
      auto la = up_to(a, a.alphabet), lb = up_to(b, b.alphabet);
      bool brute_sub = std::includes(lb.begin(), lb.end(), la.begin(), la.end());
      bool brute_common = false;
      for (auto& w : la) brute_common = brute_common || lb.count(w);
      auto c = slender_containment(a, b, 2);
      if (c.contained) CHECK(brute_sub);
      if (!brute_sub) CHECK_FALSE(c.contained);
      if (!c.contained) {
        REQUIRE(c.witness.has_value());
        CHECK(accepts(a, *c.witness));
      }
      bool dis = slender_disjoint(a, b, 2);
      if (brute_common) CHECK_FALSE(dis);
      if (i == j) CHECK(c.contained);

      auto d = slender_difference(a, b, 2);
      std::set<std::vector<std::string>> diff;
      for (auto& w : la)
        if (!lb.count(w)) diff.insert(w);
      CHECK(up_to(d, d.alphabet) == diff);
    }
}
