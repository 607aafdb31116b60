#pragma once

#include <functional>
#include <random>
#include <set>
#include <string>

#include "countreg/artifacts.hpp"

namespace testing_util {

using namespace countreg;

inline std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }
inline Artifact load(const std::string& name) { return load_artifact(fixture(name)); }
inline CounterMachine counter(const std::string& name) { return *load(name).cm; }
inline FiniteAutomaton automaton(const std::string& name) { return *load(name).fa; }

// every word over sigma of length <= n
inline std::vector<Word> all_words(int letters, int n) {
  std::vector<Word> out{{}};
  std::vector<Word> layer{{}};
  for (int len = 1; len <= n; ++len) {
    std::vector<Word> next;
    for (auto& w : layer)
      for (int a = 0; a < letters; ++a) {
        Word x = w;
        x.push_back(a);
        next.push_back(x);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

inline std::set<Word> as_set(const WordList& w) { return {w.words.begin(), w.words.end()}; }

// language up to length n by direct membership tests
inline std::set<Word> brute_language(const std::function<bool(const Word&)>& member, int letters, int n) {
  std::set<Word> out;
  for (auto& w : all_words(letters, n))
    if (member(w)) out.insert(w);
  return out;
}

inline std::vector<BigInt> length_counts(const std::set<Word>& lang, int n) {
  std::vector<BigInt> c(n + 1, 0);
  for (auto& w : lang)
    if (static_cast<int>(w.size()) <= n) c[w.size()] += 1;
  return c;
}

inline FiniteAutomaton random_nfa(std::mt19937& rng, int states, int letters, double density, bool eps) {
  std::vector<std::string> syms;
  for (int a = 0; a < letters; ++a) syms.push_back(std::string(1, static_cast<char>('a' + a)));
  FiniteAutomaton fa;
  fa.alphabet = Alphabet(syms);
  for (int q = 0; q < states; ++q) fa.add_state("q" + std::to_string(q));
  fa.initial = {0};
  std::uniform_real_distribution<double> u(0, 1);
  for (int q = 0; q < states; ++q) {
    if (u(rng) < 0.4) fa.accepting.push_back(q);
    for (int a = eps ? -1 : 0; a < letters; ++a)
      for (int r = 0; r < states; ++r)
        if (u(rng) < (a < 0 ? density / 3 : density)) fa.add_transition(q, a, r);
  }
  fa.normalize();
  return fa;
}

inline FiniteAutomaton random_dfa(std::mt19937& rng, int states, int letters) {
  std::vector<std::string> syms;
  for (int a = 0; a < letters; ++a) syms.push_back(std::string(1, static_cast<char>('a' + a)));
  FiniteAutomaton fa;
  fa.alphabet = Alphabet(syms);
  fa.deterministic = true;
  for (int q = 0; q < states; ++q) fa.add_state("q" + std::to_string(q));
  fa.initial = {0};
  for (int q = 0; q < states; ++q) {
    if (rng() % 3 == 0) fa.accepting.push_back(q);
    for (int a = 0; a < letters; ++a)
      if (rng() % 6) fa.add_transition(q, a, static_cast<int>(rng() % states));
  }
  fa.normalize();
  return fa;
}

}  // namespace testing_util

namespace testing_util {

inline CounterMachine random_ncm(std::mt19937& rng, int states, int counters, int letters) {
  CounterMachine m;
  std::vector<std::string> syms;
  for (int a = 0; a < letters; ++a) syms.push_back(std::string(1, static_cast<char>('a' + a)));
  m.alphabet = Alphabet(syms);
  m.counters = counters;
  m.reversals.assign(counters, 1 + static_cast<int>(rng() % 2));
  m.mode = rng() % 2 ? AcceptMode::FinalZero : AcceptMode::FinalState;
  for (int q = 0; q < states; ++q) m.add_state("q" + std::to_string(q));
  m.initial = 0;
  for (int q = 0; q < states; ++q)
    if (rng() % 3 == 0) m.accepting.push_back(q);
  int ntrans = states * (letters + 1);
  for (int i = 0; i < ntrans; ++i) {
    CounterTransition t;
    t.from = static_cast<int>(rng() % states);
    t.to = static_cast<int>(rng() % states);
    t.label = rng() % 5 == 0 ? kEps : static_cast<int>(rng() % letters);
    for (int c = 0; c < counters; ++c) {
      int d = static_cast<int>(rng() % 3) - 1;
      // epsilon moves never increment, so no run pumps a counter without reading
      if (t.label == kEps && d > 0) d = 0;
      Guard g = d < 0 ? Guard::NonZero : Guard(rng() % 3);
      t.guard.push_back(g);
      t.delta.push_back(d);
    }
    m.trans.push_back(t);
  }
  m.validate();
  return m;
}

// independent acceptance check by search over (position, configuration)
inline bool reference_accepts(const CounterMachine& m, const Word& w, int cap) {
  struct Cfg {
    int q;
    size_t pos;
    std::vector<int> v, rev, dir;
    bool operator<(const Cfg& o) const { return std::tie(q, pos, v, rev, dir) < std::tie(o.q, o.pos, o.v, o.rev, o.dir); }
  };
  std::set<Cfg> seen;
  std::vector<Cfg> stack{{m.initial, 0, std::vector<int>(m.counters, 0), std::vector<int>(m.counters, 0),
                          std::vector<int>(m.counters, 0)}};
  while (!stack.empty()) {
    Cfg c = stack.back();
    stack.pop_back();
    if (!seen.insert(c).second) continue;
    if (c.pos == w.size() && m.is_accepting(c.q)) {
      bool zero = true;
      for (int x : c.v) zero = zero && x == 0;
      if (m.mode == AcceptMode::FinalState || zero) return true;
    }
    for (auto& t : m.trans) {
      if (t.from != c.q) continue;
      if (t.label != kEps && (c.pos >= w.size() || w[c.pos] != t.label)) continue;
      Cfg n = c;
      n.q = t.to;
      if (t.label != kEps) ++n.pos;
      bool ok = true;
      for (int i = 0; i < m.counters; ++i) {
        if (t.guard[i] == Guard::Zero && c.v[i] != 0) ok = false;
        if (t.guard[i] == Guard::NonZero && c.v[i] == 0) ok = false;
        if (t.delta[i] == 0) continue;
        int want = t.delta[i] > 0 ? 0 : 1;
        if (n.dir[i] != want) {
          n.dir[i] = want;
          if (++n.rev[i] > m.reversals[i]) ok = false;
        }
        n.v[i] += t.delta[i];
        if (n.v[i] < 0 || n.v[i] > cap) ok = false;
      }
      if (ok) stack.push_back(n);
    }
  }
  return false;
}

}  // namespace testing_util
