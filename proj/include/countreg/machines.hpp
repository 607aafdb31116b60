#pragma once

#include <optional>
#include <string>
#include <vector>

#include "countreg/automata.hpp"
#include "countreg/counting.hpp"

namespace countreg {

enum class Guard { Zero, NonZero, Any };
enum class AcceptMode { FinalState, FinalZero };

struct CounterTransition {
  int from;
  int label;  // symbol or kEps
  std::vector<Guard> guard;
  int to;
  std::vector<int> delta;  // -1, 0, +1 per counter
};

struct CounterMachine {
  Alphabet alphabet;
  std::vector<std::string> states;
  int initial = 0;
  std::vector<int> accepting;
  int counters = 1;
  std::vector<int> reversals;
  std::vector<CounterTransition> trans;
  AcceptMode mode = AcceptMode::FinalState;

  int num_states() const { return static_cast<int>(states.size()); }
  int add_state(const std::string& name);
  bool is_accepting(int q) const;
  // checks ranges and the guard/delta invariant, sorts accepting
  void validate();
  // at most one applicable transition in every configuration
  bool is_deterministic() const;
};

enum class StackOp { Push, Pop, Stay };

struct PushdownTransition {
  int from;
  int label;
  int top;
  StackOp op;
  std::vector<int> push;  // push[0] becomes the new top
  int to;
};

struct PushdownMachine {
  Alphabet alphabet;
  std::vector<std::string> stack_symbols;  // index 0 is the bottom marker
  std::vector<std::string> states;
  int initial = 0;
  std::vector<int> accepting;
  std::vector<PushdownTransition> trans;
  int reversals = 1;

  int num_states() const { return static_cast<int>(states.size()); }
  bool is_accepting(int q) const;
  void validate();
};

enum class Move { L, R, S };

struct TapeTransition {
  int from;
  int label;
  int read;
  int write;
  Move move;
  int to;
  bool operator<(const TapeTransition& o) const;
  bool operator==(const TapeTransition& o) const;
};

struct WorktapeMachine {
  Alphabet alphabet;
  std::vector<std::string> tape_symbols;  // index 0 is the blank "_"
  std::vector<std::string> states;
  int initial = 0;
  std::vector<int> accepting;
  std::vector<TapeTransition> trans;
  int reversals = 1;

  int num_states() const { return static_cast<int>(states.size()); }
  int add_state(const std::string& name);
  int tape_index(const std::string& s) const;
  bool is_accepting(int q) const;
  void validate();
};

// zero fields are derived from the word length
struct RunCaps {
  long max_counter = 0;
  long max_eps_chain = 0;
  long max_tape_cells = 0;
  long max_steps = 0;
};

struct AmbiguityReport {
  BigInt max_ambiguity = 0;
  Word witness;
  int lengths_examined = 0;
};

CounterMachine parse_counter_machine(const std::string& text);
PushdownMachine parse_pushdown(const std::string& text);
WorktapeMachine parse_worktape(const std::string& text);
std::string counter_machine_to_text(const CounterMachine& m);
std::string pushdown_to_text(const PushdownMachine& m);
std::string worktape_to_text(const WorktapeMachine& m);

bool accepts(const CounterMachine& m, const Word& w, const RunCaps& caps = {});
bool accepts(const PushdownMachine& m, const Word& w, const RunCaps& caps = {});
bool accepts(const WorktapeMachine& m, const Word& w, const RunCaps& caps = {});

WordList enumerate_lang(const CounterMachine& m, int max_len, const RunCaps& caps = {});
WordList enumerate_lang(const PushdownMachine& m, int max_len, const RunCaps& caps = {});
WordList enumerate_lang(const WorktapeMachine& m, int max_len, const RunCaps& caps = {});

// words of length exactly n, in canonical order
WordList enumerate_length(const CounterMachine& m, int n, const RunCaps& caps = {});

AmbiguityReport ambiguity(const CounterMachine& m, int max_len, const RunCaps& caps = {});
AmbiguityReport ambiguity(const PushdownMachine& m, int max_len, const RunCaps& caps = {});
AmbiguityReport ambiguity(const WorktapeMachine& m, int max_len, const RunCaps& caps = {});

// counting sequence 0..N of a machine by enumeration
std::vector<BigInt> machine_counts(const CounterMachine& m, int N, const RunCaps& caps = {});
std::vector<BigInt> machine_counts(const PushdownMachine& m, int N, const RunCaps& caps = {});
std::vector<BigInt> machine_counts(const WorktapeMachine& m, int N, const RunCaps& caps = {});

CounterMachine product_regular(const CounterMachine& m, const FiniteAutomaton& dfa);
CounterMachine normalize_phases(const CounterMachine& m);

// same language with final-state acceptance: a zero-guarded epsilon move into a fresh accepting sink
CounterMachine to_final_state(const CounterMachine& m);
// re-express over a larger alphabet
CounterMachine widen_machine(const CounterMachine& m, const Alphabet& sigma);
// a machine accepting the language of a finite automaton (one idle counter)
CounterMachine machine_from_automaton(const FiniteAutomaton& fa);
// lockstep intersection; counters of b follow those of a
CounterMachine machine_intersection(const CounterMachine& a, const CounterMachine& b);
CounterMachine machine_union(const CounterMachine& a, const CounterMachine& b);

}  // namespace countreg
