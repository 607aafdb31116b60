#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "countreg/errors.hpp"

namespace countreg {

constexpr int kEps = -1;

using Word = std::vector<int>;

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols);

  int size() const { return static_cast<int>(syms_.size()); }
  const std::string& name(int i) const { return syms_.at(i); }
  int index(const std::string& s) const;
  bool contains(const std::string& s) const { return index(s) >= 0; }
  const std::vector<std::string>& symbols() const { return syms_; }
  // all symbols are one character long, so words print without separators
  bool compact() const;

  bool operator==(const Alphabet& o) const { return syms_ == o.syms_; }
  bool operator!=(const Alphabet& o) const { return !(*this == o); }

 private:
  std::vector<std::string> syms_;
  std::unordered_map<std::string, int> idx_;
};

std::string word_to_string(const Word& w, const Alphabet& sigma);
Word word_from_string(const std::string& s, const Alphabet& sigma);

// length first, then lexicographic by alphabet index
bool canonical_less(const Word& a, const Word& b);

struct Transition {
  int from;
  int label;  // symbol index or kEps
  int to;
  bool operator<(const Transition& o) const;
  bool operator==(const Transition& o) const {
    return from == o.from && label == o.label && to == o.to;
  }
};

struct FiniteAutomaton {
  Alphabet alphabet;
  std::vector<std::string> states;
  std::vector<int> initial;
  std::vector<int> accepting;
  std::vector<Transition> trans;
  bool deterministic = false;

  int num_states() const { return static_cast<int>(states.size()); }
  int add_state(const std::string& name);
  int add_state();
  void add_transition(int from, int label, int to) { trans.push_back({from, label, to}); }
  bool is_accepting(int q) const;
  int state_index(const std::string& name) const;

  // sorts and dedupes sets and transitions; throws on out-of-range indices or
  // when the deterministic flag is set but the structure is not deterministic
  void normalize();
  bool structurally_deterministic() const;
  bool complete() const;
};

// next[q][a] for a deterministic automaton, -1 where undefined
std::vector<std::vector<int>> dfa_table(const FiniteAutomaton& dfa);

struct WordList {
  std::vector<Word> words;
};

FiniteAutomaton parse_regex(const std::string& pattern, const Alphabet& sigma);
FiniteAutomaton determinize(const FiniteAutomaton& nfa, long budget = -1);
// adds a sink if needed; input must be deterministic
FiniteAutomaton complete_dfa(const FiniteAutomaton& dfa);

enum class ProductMode { And, Or, Diff };
FiniteAutomaton product(const FiniteAutomaton& a, const FiniteAutomaton& b, ProductMode mode);

// image words are given as symbol-name lists over `target`
FiniteAutomaton substitute(const FiniteAutomaton& nfa,
                           const std::map<std::string, std::vector<std::string>>& image,
                           const Alphabet& target);

WordList enumerate(const FiniteAutomaton& fa, int max_len);
bool fa_accepts(const FiniteAutomaton& fa, const Word& w);
FiniteAutomaton trim_minimize(const FiniteAutomaton& dfa);
// determinize, minimize, then complete with a sink
FiniteAutomaton minimal_dfa(const FiniteAutomaton& fa, long budget = -1);

// plain NFA operations used by the witness builders
FiniteAutomaton nfa_union(const FiniteAutomaton& a, const FiniteAutomaton& b);
FiniteAutomaton nfa_concat(const FiniteAutomaton& a, const FiniteAutomaton& b);
FiniteAutomaton nfa_star(const FiniteAutomaton& a);
// re-express over a larger alphabet that contains every symbol of a
FiniteAutomaton widen_alphabet(const FiniteAutomaton& a, const Alphabet& sigma);
FiniteAutomaton universal_dfa(const Alphabet& sigma);
FiniteAutomaton empty_dfa(const Alphabet& sigma);
bool language_empty(const FiniteAutomaton& fa);

FiniteAutomaton parse_automaton(const std::string& text);
std::string automaton_to_text(const FiniteAutomaton& fa);

std::vector<int> eps_closure(const FiniteAutomaton& fa, const std::vector<int>& set);

}  // namespace countreg
