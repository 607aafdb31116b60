#include <doctest.h>

#include "countreg/ntm_witness.hpp"
#include "helpers.hpp"

using namespace countreg;
using namespace testing_util;

namespace {

WorktapeMachine random_tape_machine(std::mt19937& rng, bool det) {
  WorktapeMachine m;
  m.alphabet = Alphabet({"a", "b"});
  m.tape_symbols = {"_", "A"};
  int n = 2 + static_cast<int>(rng() % 2);
  for (int q = 0; q < n; ++q) m.add_state("q" + std::to_string(q));
  m.initial = 0;
  m.reversals = 1 + static_cast<int>(rng() % 3);
  for (int q = 0; q < n; ++q)
    if (rng() % 2) m.accepting.push_back(q);
  for (int q = 0; q < n; ++q)
    for (int x = 0; x < 2; ++x) {
      int kind = static_cast<int>(rng() % 4);
      auto mk = [&](int lab) {
        int w = static_cast<int>(rng() % 2);
        Move mv = Move(rng() % 3);
        m.trans.push_back({q, lab, x, w, mv, static_cast<int>(rng() % n)});
      };
      if (kind == 0) continue;
      if (kind == 1) {
        mk(kEps);
        if (!det && rng() % 2) mk(0);
      } else {
        for (int a = 0; a < 2; ++a)
          if (rng() % 3) {
            mk(a);
            if (!det && rng() % 4 == 0) mk(a);
          }
      }
    }
  m.validate();
  return m;
}

}  // namespace

TEST_CASE("normal form keeps the language") {
  for (auto name : {"anbn.dcm", "l3.dcm", "l4.dcm", "intro_l.dcm"}) {
    auto m = dcm_to_ntm(counter(name));
    CHECK(machine_counts(normal_form(m), 8) == machine_counts(counter(name), 8));
  }
  auto p = pda_to_ntm(*load("s1.pda").pda);
  CHECK(as_set(enumerate_lang(p, 8)) == as_set(enumerate_lang(*load("s1.pda").pda, 8)));
}

TEST_CASE("witnesses for the adapter fixtures") {
  for (auto name : {"l3.dcm", "l4.dcm", "anbn.dcm", "anbn.pda", "s1.pda"}) {
    auto r = counting_witness(as_worktape(load(name)), 10);
    CHECK_MESSAGE(r.verified, name);
    CHECK(r.witness_counts == artifact_counts(load(name), 10));
    CHECK(counting_sequence(r.witness, 10).terms == r.witness_counts);
  }
}

TEST_CASE("ambiguous machines are refused") {
  try {
    counting_witness(dcm_to_ntm(counter("l5.ncm")), 10);
    FAIL("expected a refusal");
  } catch (const AmbiguityDetected& e) {
    CHECK(e.report.max_ambiguity == 2);
    CHECK(accepts(counter("l5.ncm"), e.report.witness));
  }
}

TEST_CASE("code words decode to accepted inputs and witnesses match on random machines") {
  std::mt19937 rng(71);
  int verified = 0;
  for (int it = 0; it < 160; ++it) {
    auto m = random_tape_machine(rng, it % 2 == 0);
    CodeAutomaton code;
    try {
      code = build_code_nfa(normal_form(m));
    } catch (const BudgetExceeded&) {
      continue;
    }
    if (code.nfa.num_states() > 1500) continue;
    // random machines may loop on epsilon moves, capped or with infinitely many runs
    try {
      if (ambiguity(m, 7).max_ambiguity >= 2) continue;
    } catch (const Error&) {
      continue;
    }
    for (auto& w : enumerate(code.nfa, 4).words) CHECK(accepts(m, decode_code_word(code, w)));
    auto r = counting_witness(m, 7);
    CHECK(r.verified);
    ++verified;
  }
  CHECK(verified > 40);
}

TEST_CASE("projection is length preserving") {
  auto code = build_code_nfa(normal_form(dcm_to_ntm(counter("l3.dcm"))));
  auto w = project_witness(code);
  CHECK(w.alphabet.contains("$"));
  CHECK(counting_sequence(w, 9).terms == machine_counts(counter("l3.dcm"), 9));
}
