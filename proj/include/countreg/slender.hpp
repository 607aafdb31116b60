#pragma once

#include <optional>
#include <string>
#include <vector>

#include "countreg/machines.hpp"
#include "countreg/semilinear.hpp"

namespace countreg {

// unary automaton over {1}; label[q] is f(n) for the state reached by 1^n,
// with k+1 standing for "more than k"
struct CountingAutomaton {
  FiniteAutomaton dfa;
  int k = 0;
  std::vector<int> label;

  int state_after(long n) const;
  int value(long n) const { return label[state_after(n)]; }
  bool overflow_reachable() const;
};

std::string counting_automaton_to_text(const CountingAutomaton& ca);
CountingAutomaton parse_counting_automaton(const std::string& text);

struct SlenderVerdict {
  bool slender = true;
  int k = 0;
  std::vector<Word> counterexample;  // k+1 distinct accepted words of one length
};

SlenderVerdict dfa_k_slender(const FiniteAutomaton& dfa, int k);
CountingAutomaton slender_effective_dfa(const FiniteAutomaton& dfa, int k);
// DFA over {1, #1..#k} accepting 1^(n-1) #s for 1 <= s <= f(n), and the empty word when f(0) = 1
FiniteAutomaton k_counting_witness(const CountingAutomaton& ca);

// enumerate_first tries short lengths by enumeration before the exact procedure
SlenderVerdict ncm_k_slender(const CounterMachine& m, int k, bool enumerate_first = true);
// throws PreconditionError when the language is not k-slender
CountingAutomaton ncm_slender_effective(const CounterMachine& m, int k);

struct ContainmentResult {
  bool contained = true;
  std::optional<Word> witness;  // a word of l1 outside l2
};

ContainmentResult slender_containment(const CounterMachine& l1, const CounterMachine& l2, int k);
CounterMachine slender_difference(const CounterMachine& l1, const CounterMachine& l2, int k);
bool slender_disjoint(const CounterMachine& l1, const CounterMachine& l2, int k);

// f(n) as a tail-plus-cycle table from the unary sets {n : f(n) >= j}, j = 1..levels.size()
CountingAutomaton counting_from_levels(const std::vector<SemilinearSet>& levels, int k);

}  // namespace countreg
