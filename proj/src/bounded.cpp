#include "countreg/bounded.hpp"

#include <map>

#include "countreg/parikh.hpp"

namespace countreg {

Alphabet shape_letters(int k) {
  std::vector<std::string> names;
  for (int i = 1; i <= k; ++i) names.push_back("a" + std::to_string(i));
  return Alphabet(names);
}

namespace {

std::string vec_text(const IntVec& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

// u1* u2* ... uk* over the original alphabet
FiniteAutomaton shape_language(const BoundedShape& shape, const Alphabet& sigma) {
  FiniteAutomaton fa;
  fa.alphabet = sigma;
  int k = static_cast<int>(shape.words.size());
  for (int i = 0; i < k; ++i) fa.add_state("h" + std::to_string(i));
  fa.initial = {0};
  for (int i = 0; i < k; ++i) {
    fa.accepting.push_back(i);
    if (i + 1 < k) fa.add_transition(i, kEps, i + 1);
    int prev = i;
    const Word& u = shape.words[i];
    for (size_t j = 0; j < u.size(); ++j) {
      int next = j + 1 == u.size() ? i : fa.add_state();
      fa.add_transition(prev, u[j], next);
      prev = next;
    }
  }
  fa.normalize();
  return fa;
}

}  // namespace

SemilinearSet ind_of(const CounterMachine& m, const BoundedShape& shape, int shape_horizon) {
  int k = static_cast<int>(shape.words.size());
  if (k == 0) throw PreconditionError("shape must have at least one word");
  for (auto& u : shape.words)
    if (u.empty()) throw PreconditionError("shape words must be non-empty");
  FiniteAutomaton bound = shape_language(shape, m.alphabet);
  for (auto& w : enumerate_lang(m, shape_horizon).words)
    if (!fa_accepts(bound, w))
      throw PreconditionError("shape violation: '" + word_to_string(w, m.alphabet) + "' is not in " +
                              shape_to_text(shape, m.alphabet));

  // a_i reads u_i: mode (i, j) means u_i is consumed up to position j
  CounterMachine sim;
  sim.alphabet = shape_letters(k);
  sim.counters = m.counters;
  sim.reversals = m.reversals;
  sim.mode = m.mode;
  std::map<std::tuple<int, int, int>, int> ids;
  auto state = [&](int q, int i, int j) {
    auto key = std::make_tuple(q, i, j);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    std::string name = m.states[q];
    if (i >= 0) name += "@" + std::to_string(i) + ":" + std::to_string(j);
    int id = sim.add_state(name);
    ids[key] = id;
    return id;
  };
  for (int q = 0; q < m.num_states(); ++q) state(q, -1, 0);
  sim.initial = state(m.initial, -1, 0);
  for (int q : m.accepting) sim.accepting.push_back(state(q, -1, 0));
  for (int q = 0; q < m.num_states(); ++q) {
    for (auto& t : m.trans) {
      if (t.from != q) continue;
      if (t.label == kEps) {
        sim.trans.push_back({state(q, -1, 0), kEps, t.guard, state(t.to, -1, 0), t.delta});
        for (int i = 0; i < k; ++i)
          for (int j = 1; j < static_cast<int>(shape.words[i].size()); ++j)
            sim.trans.push_back({state(q, i, j), kEps, t.guard, state(t.to, i, j), t.delta});
        continue;
      }
      for (int i = 0; i < k; ++i) {
        const Word& u = shape.words[i];
        int len = static_cast<int>(u.size());
        for (int j = 0; j < len; ++j) {
          if (u[j] != t.label) continue;
          int to = j + 1 == len ? state(t.to, -1, 0) : state(t.to, i, j + 1);
          if (j == 0) sim.trans.push_back({state(q, -1, 0), i, t.guard, to, t.delta});
          else sim.trans.push_back({state(q, i, j), kEps, t.guard, to, t.delta});
        }
      }
    }
  }
  sim.validate();

  // restrict to a1* ... ak*
  FiniteAutomaton order;
  order.alphabet = sim.alphabet;
  for (int i = 0; i < k; ++i) order.add_state("o" + std::to_string(i));
  order.initial = {0};
  for (int i = 0; i < k; ++i) {
    order.accepting.push_back(i);
    for (int j = i; j < k; ++j) order.add_transition(i, j, j);
  }
  order.deterministic = true;
  order.normalize();
  return ncm_parikh(product_regular(sim, order));
}

BoundedWitness bounded_witness(const SemilinearSet& s, const BoundedShape& shape, int injectivity_horizon) {
  int k = static_cast<int>(shape.words.size());
  if (s.dim != k) throw PreconditionError("semilinear dimension does not match the shape");
  for (size_t c = 0; c < s.comps.size(); ++c)
    if (!verify_simple(s.comps[c])) throw PreconditionError("component " + std::to_string(c) + " is not simple");
  for (size_t a = 0; a < s.comps.size(); ++a)
    for (size_t b = a + 1; b < s.comps.size(); ++b)
      if (!verify_disjoint(s.comps[a], s.comps[b]))
        throw PreconditionError("components " + std::to_string(a) + " and " + std::to_string(b) + " intersect");
  InjectivityReport inj = verify_injective(s, shape, injectivity_horizon);
  if (!inj.injective)
    throw PreconditionError("phi is not injective: " + vec_text(inj.first) + " and " + vec_text(inj.second) +
                            " have the same image");

  Alphabet letters = shape_letters(k);
  auto canonical = [&](const IntVec& v) {
    FiniteAutomaton fa;
    fa.alphabet = letters;
    int prev = fa.add_state();
    fa.initial = {prev};
    for (int i = 0; i < k; ++i)
      for (long r = 0; r < v[i]; ++r) {
        int next = fa.add_state();
        fa.add_transition(prev, i, next);
        prev = next;
      }
    fa.accepting = {prev};
    fa.normalize();
    return fa;
  };
  FiniteAutomaton all = empty_dfa(letters);
  for (auto& ls : s.comps) {
    FiniteAutomaton part = canonical(ls.base);
    for (auto& p : ls.periods) part = nfa_concat(part, nfa_star(canonical(p)));
    all = nfa_union(all, part);
  }
  std::map<std::string, std::vector<std::string>> chi;
  for (int i = 0; i < k; ++i)
    chi[letters.name(i)] = std::vector<std::string>(shape.words[i].size(), letters.name(i));
  BoundedWitness out;
  out.witness = minimal_dfa(substitute(all, chi, letters));
  out.injectivity_horizon = injectivity_horizon;
  return out;
}

std::optional<BoundedShape> find_shape(const CounterMachine& m, int max_factors, int max_word, int horizon) {
  auto sample = enumerate_lang(m, horizon).words;
  std::vector<Word> pieces;
  std::vector<Word> layer{{}};
  for (int len = 1; len <= max_word; ++len) {
    std::vector<Word> grown;
    for (auto& w : layer)
      for (int a = 0; a < m.alphabet.size(); ++a) {
        Word v = w;
        v.push_back(a);
        grown.push_back(v);
      }
    pieces.insert(pieces.end(), grown.begin(), grown.end());
    layer = grown;
  }
  auto fits = [&](const BoundedShape& sh) {
    FiniteAutomaton fa = shape_language(sh, m.alphabet);
    for (auto& w : sample)
      if (!fa_accepts(fa, w)) return false;
    return true;
  };
  for (int k = 1; k <= max_factors; ++k) {
    std::vector<size_t> idx(k, 0);
    for (;;) {
      BoundedShape sh;
      for (size_t i : idx) sh.words.push_back(pieces[i]);
      if (fits(sh)) return sh;
      int pos = k - 1;
      while (pos >= 0 && ++idx[pos] == pieces.size()) idx[pos--] = 0;
      if (pos < 0) break;
    }
  }
  return std::nullopt;
}

}  // namespace countreg
