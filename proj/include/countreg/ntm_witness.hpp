#pragma once

#include <string>
#include <vector>

#include "countreg/machines.hpp"

namespace countreg {

class AmbiguityDetected : public Error {
 public:
  AmbiguityDetected(const std::string& msg, AmbiguityReport r) : Error(msg), report(std::move(r)) {}
  AmbiguityReport report;
};

// (p, a, p', d): a transition out of p on input a (or kEps) into p' leaving d in the cell
struct TrackTuple {
  int from, label, to, write;
  bool operator<(const TrackTuple& o) const {
    return std::tie(from, label, to, write) < std::tie(o.from, o.label, o.to, o.write);
  }
};

// kind 0 is a full letter with one entry per track (-1 blank); kind i >= 1
// carries a single tuple on track i
struct TrackLetter {
  int kind;
  std::vector<int> tuples;
};

struct CodeAutomaton {
  FiniteAutomaton nfa;  // over the track letters listed below
  int tracks = 0;
  Alphabet input;
  std::vector<TrackTuple> tuples;
  std::vector<TrackLetter> letters;
};

// only the first move made on arriving at a cell may change its content
WorktapeMachine normal_form(const WorktapeMachine& m);

CodeAutomaton build_code_nfa(const WorktapeMachine& normal);
// the input word encoded by a code word (odd tracks forward, even tracks reversed)
Word decode_code_word(const CodeAutomaton& code, const Word& w);
// length-preserving image over the used track letters plus "$", minimized
FiniteAutomaton project_witness(const CodeAutomaton& code);

struct WitnessResult {
  FiniteAutomaton witness;
  int horizon = 0;
  bool verified = false;
  int first_disagreement = -1;
  std::vector<BigInt> source_counts;
  std::vector<BigInt> witness_counts;
};

// throws AmbiguityDetected when two accepting runs are seen up to the horizon
WitnessResult counting_witness(const WorktapeMachine& m, int N, const RunCaps& caps = {});

WorktapeMachine dcm_to_ntm(const CounterMachine& m);
WorktapeMachine pda_to_ntm(const PushdownMachine& m);

}  // namespace countreg
