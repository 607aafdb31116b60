#include "countreg/automata.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace countreg {

long default_state_budget() {
  static const long budget = [] {
    const char* env = std::getenv("COUNTREG_BUDGET");
    if (env && *env) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end && *end == '\0' && v > 0) return v;
    }
    return 1L << 16;
  }();
  return budget;
}

Alphabet::Alphabet(std::vector<std::string> symbols) : syms_(std::move(symbols)) {
  for (int i = 0; i < size(); ++i) {
    if (syms_[i].empty()) throw Error("empty symbol name");
    if (syms_[i] == "eps") throw Error("'eps' is reserved and cannot be a symbol");
    if (!idx_.emplace(syms_[i], i).second) throw Error("duplicate symbol '" + syms_[i] + "'");
  }
}

int Alphabet::index(const std::string& s) const {
  auto it = idx_.find(s);
  return it == idx_.end() ? -1 : it->second;
}

bool Alphabet::compact() const {
  for (auto& s : syms_)
    if (s.size() != 1) return false;
  return true;
}

std::string word_to_string(const Word& w, const Alphabet& sigma) {
  if (w.empty()) return "eps";
  std::string s;
  bool compact = sigma.compact();
  for (size_t i = 0; i < w.size(); ++i) {
    if (!compact && i) s += '.';
    s += sigma.name(w[i]);
  }
  return s;
}

Word word_from_string(const std::string& s, const Alphabet& sigma) {
  Word w;
  if (s == "eps" || s.empty()) return w;
  if (sigma.compact()) {
    for (char c : s) {
      int i = sigma.index(std::string(1, c));
      if (i < 0) throw Error(std::string("unknown symbol '") + c + "' in word '" + s + "'");
      w.push_back(i);
    }
    return w;
  }
  for (auto& part : detail::split_on(s, '.')) {
    int i = sigma.index(part);
    if (i < 0) throw Error("unknown symbol '" + part + "' in word '" + s + "'");
    w.push_back(i);
  }
  return w;
}

bool canonical_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

bool Transition::operator<(const Transition& o) const {
  if (from != o.from) return from < o.from;
  if (label != o.label) return label < o.label;
  return to < o.to;
}

int FiniteAutomaton::add_state(const std::string& name) {
  states.push_back(name);
  return num_states() - 1;
}

int FiniteAutomaton::add_state() { return add_state("q" + std::to_string(num_states())); }

bool FiniteAutomaton::is_accepting(int q) const {
  return std::binary_search(accepting.begin(), accepting.end(), q);
}

int FiniteAutomaton::state_index(const std::string& name) const {
  for (int i = 0; i < num_states(); ++i)
    if (states[i] == name) return i;
  return -1;
}

static void sort_unique(std::vector<int>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void FiniteAutomaton::normalize() {
  sort_unique(initial);
  sort_unique(accepting);
  std::sort(trans.begin(), trans.end());
  trans.erase(std::unique(trans.begin(), trans.end()), trans.end());
  int n = num_states();
  auto bad = [n](int q) { return q < 0 || q >= n; };
  for (int q : initial)
    if (bad(q)) throw Error("initial state out of range");
  for (int q : accepting)
    if (bad(q)) throw Error("accepting state out of range");
  for (auto& t : trans) {
    if (bad(t.from) || bad(t.to)) throw Error("transition state out of range");
    if (t.label != kEps && (t.label < 0 || t.label >= alphabet.size()))
      throw Error("transition label out of range");
  }
  if (deterministic && !structurally_deterministic())
    throw Error("automaton is flagged dfa but is not deterministic");
}

bool FiniteAutomaton::structurally_deterministic() const {
  if (initial.size() != 1) return false;
  std::set<std::pair<int, int>> seen;
  for (auto& t : trans) {
    if (t.label == kEps) return false;
    if (!seen.insert({t.from, t.label}).second) return false;
  }
  return true;
}

bool FiniteAutomaton::complete() const {
  if (!structurally_deterministic()) return false;
  std::set<std::pair<int, int>> seen;
  for (auto& t : trans) seen.insert({t.from, t.label});
  return static_cast<long>(seen.size()) == static_cast<long>(num_states()) * alphabet.size();
}

std::vector<std::vector<int>> dfa_table(const FiniteAutomaton& dfa) {
  std::vector<std::vector<int>> next(dfa.num_states(), std::vector<int>(dfa.alphabet.size(), -1));
  for (auto& t : dfa.trans) {
    if (t.label == kEps) throw Error("epsilon transition in deterministic automaton");
    if (next[t.from][t.label] != -1 && next[t.from][t.label] != t.to)
      throw Error("automaton is not deterministic");
    next[t.from][t.label] = t.to;
  }
  return next;
}

std::vector<int> eps_closure(const FiniteAutomaton& fa, const std::vector<int>& set) {
  std::vector<std::vector<int>> eps(fa.num_states());
  for (auto& t : fa.trans)
    if (t.label == kEps) eps[t.from].push_back(t.to);
  std::vector<char> in(fa.num_states(), 0);
  std::vector<int> stack;
  for (int q : set)
    if (!in[q]) {
      in[q] = 1;
      stack.push_back(q);
    }
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int r : eps[q])
      if (!in[r]) {
        in[r] = 1;
        stack.push_back(r);
      }
  }
  std::vector<int> out;
  for (int q = 0; q < fa.num_states(); ++q)
    if (in[q]) out.push_back(q);
  return out;
}

// ---------------------------------------------------------------- regex

namespace {

struct Frag {
  int start;
  int end;
};

class RegexParser {
 public:
  RegexParser(const std::string& p, const Alphabet& sigma) : p_(p), sigma_(sigma) {
    fa_.alphabet = sigma;
  }

  FiniteAutomaton run() {
    skip();
    Frag f;
    if (pos_ >= p_.size()) {
      throw ParseError("empty pattern", 0, 0);
    }
    f = expr();
    skip();
    if (pos_ < p_.size()) throw ParseError(std::string("unexpected '") + p_[pos_] + "'", 0, pos_);
    fa_.initial = {f.start};
    fa_.accepting = {f.end};
    fa_.normalize();
    return fa_;
  }

 private:
  void skip() {
    while (pos_ < p_.size() && std::isspace(static_cast<unsigned char>(p_[pos_]))) ++pos_;
  }

  Frag expr() {
    Frag f = term();
    skip();
    while (pos_ < p_.size() && (p_[pos_] == '+' || p_[pos_] == '|')) {
      ++pos_;
      Frag g = term();
      int s = fa_.add_state(), e = fa_.add_state();
      fa_.add_transition(s, kEps, f.start);
      fa_.add_transition(s, kEps, g.start);
      fa_.add_transition(f.end, kEps, e);
      fa_.add_transition(g.end, kEps, e);
      f = {s, e};
      skip();
    }
    return f;
  }

  bool at_factor_start() {
    skip();
    if (pos_ >= p_.size()) return false;
    char c = p_[pos_];
    return c != '+' && c != '|' && c != ')' && c != '*';
  }

  Frag term() {
    if (!at_factor_start()) {
      if (pos_ >= p_.size()) throw ParseError("unexpected end of pattern", 0, pos_);
      throw ParseError(std::string("unexpected '") + p_[pos_] + "'", 0, pos_);
    }
    Frag f = factor();
    while (at_factor_start()) {
      Frag g = factor();
      fa_.add_transition(f.end, kEps, g.start);
      f = {f.start, g.end};
    }
    return f;
  }

  Frag factor() {
    Frag f = atom();
    for (;;) {
      skip();
      if (pos_ < p_.size() && p_[pos_] == '^' && pos_ + 1 < p_.size() && p_[pos_ + 1] == '*') ++pos_;
      if (pos_ < p_.size() && p_[pos_] == '*') {
        ++pos_;
        int s = fa_.add_state(), e = fa_.add_state();
        fa_.add_transition(s, kEps, f.start);
        fa_.add_transition(s, kEps, e);
        fa_.add_transition(f.end, kEps, f.start);
        fa_.add_transition(f.end, kEps, e);
        f = {s, e};
      } else {
        return f;
      }
    }
  }

  Frag atom() {
    skip();
    size_t at = pos_;
    if (p_[pos_] == '(') {
      ++pos_;
      Frag f = expr();
      skip();
      if (pos_ >= p_.size() || p_[pos_] != ')') throw ParseError("missing ')'", 0, pos_);
      ++pos_;
      return f;
    }
    if (p_.compare(pos_, 3, "eps") == 0 && !sigma_.contains("e")) {
      pos_ += 3;
      int s = fa_.add_state(), e = fa_.add_state();
      fa_.add_transition(s, kEps, e);
      return {s, e};
    }
    // longest symbol name matching here
    int best = -1;
    size_t best_len = 0;
    for (int i = 0; i < sigma_.size(); ++i) {
      auto& n = sigma_.name(i);
      if (n.size() > best_len && p_.compare(pos_, n.size(), n) == 0) {
        best = i;
        best_len = n.size();
      }
    }
    if (best < 0) {
      if (p_.compare(pos_, 3, "eps") == 0) {
        pos_ += 3;
        int s = fa_.add_state(), e = fa_.add_state();
        fa_.add_transition(s, kEps, e);
        return {s, e};
      }
      throw ParseError(std::string("unknown symbol '") + p_[at] + "'", 0, at);
    }
    pos_ += best_len;
    int s = fa_.add_state(), e = fa_.add_state();
    fa_.add_transition(s, best, e);
    return {s, e};
  }

  const std::string& p_;
  const Alphabet& sigma_;
  size_t pos_ = 0;
  FiniteAutomaton fa_;
};

}  // namespace

FiniteAutomaton parse_regex(const std::string& pattern, const Alphabet& sigma) {
  return RegexParser(pattern, sigma).run();
}

// ---------------------------------------------------------------- determinize

FiniteAutomaton determinize(const FiniteAutomaton& nfa, long budget) {
  if (budget < 0) budget = default_state_budget();
  int k = nfa.alphabet.size();
  std::vector<std::vector<std::vector<int>>> out(nfa.num_states(), std::vector<std::vector<int>>(k));
  for (auto& t : nfa.trans)
    if (t.label != kEps) out[t.from][t.label].push_back(t.to);

  FiniteAutomaton d;
  d.alphabet = nfa.alphabet;
  d.deterministic = true;
  std::map<std::vector<int>, int> id;
  std::deque<std::vector<int>> queue;
  auto intern = [&](const std::vector<int>& s) {
    auto it = id.find(s);
    if (it != id.end()) return it->second;
    if (static_cast<long>(id.size()) >= budget)
      throw BudgetExceeded("determinization exceeded the state budget of " + std::to_string(budget));
    int q = d.add_state("d" + std::to_string(id.size()));
    id.emplace(s, q);
    queue.push_back(s);
    for (int x : s)
      if (nfa.is_accepting(x)) {
        d.accepting.push_back(q);
        break;
      }
    return q;
  };
  d.initial = {intern(eps_closure(nfa, nfa.initial))};
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    int from = id[s];
    for (int a = 0; a < k; ++a) {
      std::vector<int> next;
      for (int x : s)
        for (int y : out[x][a]) next.push_back(y);
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      next = eps_closure(nfa, next);
      d.add_transition(from, a, intern(next));
    }
  }
  d.normalize();
  return d;
}

FiniteAutomaton complete_dfa(const FiniteAutomaton& dfa) {
  if (!dfa.structurally_deterministic()) throw PreconditionError("automaton is not deterministic");
  if (dfa.complete()) {
    FiniteAutomaton c = dfa;
    c.deterministic = true;
    return c;
  }
  FiniteAutomaton c = dfa;
  c.deterministic = true;
  auto next = dfa_table(dfa);
  int sink = c.add_state("sink");
  for (int q = 0; q < dfa.num_states(); ++q)
    for (int a = 0; a < dfa.alphabet.size(); ++a)
      if (next[q][a] < 0) c.add_transition(q, a, sink);
  for (int a = 0; a < dfa.alphabet.size(); ++a) c.add_transition(sink, a, sink);
  c.normalize();
  return c;
}

// ---------------------------------------------------------------- product

FiniteAutomaton product(const FiniteAutomaton& a, const FiniteAutomaton& b, ProductMode mode) {
  if (a.alphabet != b.alphabet) throw PreconditionError("product: alphabet mismatch");
  if (!a.complete() || !b.complete())
    throw PreconditionError("product: both inputs must be deterministic and complete");
  auto ta = dfa_table(a), tb = dfa_table(b);
  int k = a.alphabet.size();
  FiniteAutomaton p;
  p.alphabet = a.alphabet;
  p.deterministic = true;
  std::map<std::pair<int, int>, int> id;
  std::deque<std::pair<int, int>> queue;
  auto intern = [&](int x, int y) {
    auto key = std::make_pair(x, y);
    auto it = id.find(key);
    if (it != id.end()) return it->second;
    int q = p.add_state("(" + a.states[x] + "," + b.states[y] + ")");
    id.emplace(key, q);
    queue.push_back(key);
    bool fa = a.is_accepting(x), fb = b.is_accepting(y);
    bool acc = mode == ProductMode::And ? (fa && fb) : mode == ProductMode::Or ? (fa || fb) : (fa && !fb);
    if (acc) p.accepting.push_back(q);
    return q;
  };
  p.initial = {intern(a.initial[0], b.initial[0])};
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    int from = id[{x, y}];
    for (int s = 0; s < k; ++s) p.add_transition(from, s, intern(ta[x][s], tb[y][s]));
  }
  p.normalize();
  return p;
}

// ---------------------------------------------------------------- substitute

FiniteAutomaton substitute(const FiniteAutomaton& nfa,
                           const std::map<std::string, std::vector<std::string>>& image,
                           const Alphabet& target) {
  FiniteAutomaton out;
  out.alphabet = target;
  out.states = nfa.states;
  out.initial = nfa.initial;
  out.accepting = nfa.accepting;
  std::vector<Word> img(nfa.alphabet.size());
  for (int a = 0; a < nfa.alphabet.size(); ++a) {
    auto it = image.find(nfa.alphabet.name(a));
    if (it == image.end()) throw PreconditionError("substitute: unmapped symbol '" + nfa.alphabet.name(a) + "'");
    for (auto& s : it->second) {
      int i = target.index(s);
      if (i < 0) throw PreconditionError("substitute: image symbol '" + s + "' not in target alphabet");
      img[a].push_back(i);
    }
  }
  for (auto& t : nfa.trans) {
    if (t.label == kEps || img[t.label].empty()) {
      out.add_transition(t.from, kEps, t.to);
      continue;
    }
    const Word& w = img[t.label];
    int prev = t.from;
    for (size_t i = 0; i + 1 < w.size(); ++i) {
      int mid = out.add_state();
      out.add_transition(prev, w[i], mid);
      prev = mid;
    }
    out.add_transition(prev, w.back(), t.to);
  }
  out.normalize();
  return out;
}

// ---------------------------------------------------------------- enumerate

WordList enumerate(const FiniteAutomaton& fa, int max_len) {
  WordList out;
  if (max_len < 0) return out;
  int k = fa.alphabet.size();
  std::vector<std::vector<std::vector<int>>> step(fa.num_states(), std::vector<std::vector<int>>(k));
  for (auto& t : fa.trans)
    if (t.label != kEps) step[t.from][t.label].push_back(t.to);
  auto accepting = [&](const std::vector<int>& s) {
    for (int q : s)
      if (fa.is_accepting(q)) return true;
    return false;
  };
  std::vector<std::pair<Word, std::vector<int>>> level;
  auto start = eps_closure(fa, fa.initial);
  if (!start.empty()) level.push_back({{}, start});
  for (int len = 0; len <= max_len && !level.empty(); ++len) {
    std::vector<std::pair<Word, std::vector<int>>> next;
    for (auto& [w, s] : level) {
      if (accepting(s)) out.words.push_back(w);
      if (len == max_len) continue;
      for (int a = 0; a < k; ++a) {
        std::vector<int> t;
        for (int q : s)
          for (int r : step[q][a]) t.push_back(r);
        if (t.empty()) continue;
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
        Word w2 = w;
        w2.push_back(a);
        next.push_back({std::move(w2), eps_closure(fa, t)});
      }
    }
    level = std::move(next);
  }
  return out;
}

bool fa_accepts(const FiniteAutomaton& fa, const Word& w) {
  auto cur = eps_closure(fa, fa.initial);
  for (int a : w) {
    std::vector<int> nxt;
    for (auto& t : fa.trans)
      if (t.label == a && std::binary_search(cur.begin(), cur.end(), t.from)) nxt.push_back(t.to);
    sort_unique(nxt);
    cur = eps_closure(fa, nxt);
    if (cur.empty()) return false;
  }
  for (int q : cur)
    if (fa.is_accepting(q)) return true;
  return false;
}

// ---------------------------------------------------------------- minimize

FiniteAutomaton trim_minimize(const FiniteAutomaton& dfa) {
  if (!dfa.structurally_deterministic()) throw PreconditionError("trim_minimize: input must be deterministic");
  int n = dfa.num_states(), k = dfa.alphabet.size();
  auto next = dfa_table(dfa);
  std::vector<char> reach(n, 0), coreach(n, 0);
  std::vector<int> stack = {dfa.initial[0]};
  reach[dfa.initial[0]] = 1;
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int a = 0; a < k; ++a) {
      int r = next[q][a];
      if (r >= 0 && !reach[r]) {
        reach[r] = 1;
        stack.push_back(r);
      }
    }
  }
  std::vector<std::vector<int>> rev(n);
  for (int q = 0; q < n; ++q)
    for (int a = 0; a < k; ++a)
      if (next[q][a] >= 0) rev[next[q][a]].push_back(q);
  for (int q : dfa.accepting)
    if (reach[q]) {
      coreach[q] = 1;
      stack.push_back(q);
    }
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int p : rev[q])
      if (reach[p] && !coreach[p]) {
        coreach[p] = 1;
        stack.push_back(p);
      }
  }
  std::vector<int> live;
  for (int q = 0; q < n; ++q)
    if (reach[q] && coreach[q]) live.push_back(q);

  FiniteAutomaton m;
  m.alphabet = dfa.alphabet;
  m.deterministic = true;
  if (live.empty()) {
    m.add_state("m0");
    m.initial = {0};
    m.normalize();
    return m;
  }
  // Moore refinement; -1 stands for the implicit sink
  std::vector<int> cls(n, -1);
  for (int q : live) cls[q] = dfa.is_accepting(q) ? 1 : 0;
  int num = 0;
  for (;;) {
    std::map<std::vector<int>, int> sig;
    std::vector<int> ncls(n, -1);
    for (int q : live) {
      std::vector<int> s = {cls[q]};
      for (int a = 0; a < k; ++a) {
        int r = next[q][a];
        s.push_back(r >= 0 ? cls[r] : -1);
      }
      auto it = sig.emplace(s, static_cast<int>(sig.size())).first;
      ncls[q] = it->second;
    }
    int nnum = static_cast<int>(sig.size());
    cls = ncls;
    if (nnum == num) break;
    num = nnum;
  }
  // number classes in BFS order from the initial state for a canonical result
  std::vector<int> order(num, -1);
  std::vector<int> rep(num, -1);
  for (int q : live)
    if (rep[cls[q]] < 0) rep[cls[q]] = q;
  int cnt = 0;
  std::deque<int> bfs = {cls[dfa.initial[0]]};
  order[bfs.front()] = cnt++;
  while (!bfs.empty()) {
    int c = bfs.front();
    bfs.pop_front();
    for (int a = 0; a < k; ++a) {
      int r = next[rep[c]][a];
      if (r < 0 || cls[r] < 0) continue;
      if (order[cls[r]] < 0) {
        order[cls[r]] = cnt++;
        bfs.push_back(cls[r]);
      }
    }
  }
  for (int i = 0; i < cnt; ++i) m.add_state("m" + std::to_string(i));
  for (int c = 0; c < num; ++c) {
    if (order[c] < 0) continue;
    int q = rep[c];
    if (dfa.is_accepting(q)) m.accepting.push_back(order[c]);
    for (int a = 0; a < k; ++a) {
      int r = next[q][a];
      if (r >= 0 && cls[r] >= 0) m.add_transition(order[c], a, order[cls[r]]);
    }
  }
  m.initial = {order[cls[dfa.initial[0]]]};
  m.normalize();
  return m;
}

FiniteAutomaton minimal_dfa(const FiniteAutomaton& fa, long budget) {
  if (fa.structurally_deterministic()) return complete_dfa(trim_minimize(fa));
  return complete_dfa(trim_minimize(determinize(fa, budget)));
}

// ---------------------------------------------------------------- nfa combinators

static FiniteAutomaton disjoint_copy(const FiniteAutomaton& a, FiniteAutomaton& into, int& offset,
                                     const std::string& prefix) {
  offset = into.num_states();
  for (auto& s : a.states) into.add_state(prefix + s);
  for (auto& t : a.trans) into.add_transition(t.from + offset, t.label, t.to + offset);
  return into;
}

FiniteAutomaton nfa_union(const FiniteAutomaton& a, const FiniteAutomaton& b) {
  if (a.alphabet != b.alphabet) throw PreconditionError("union: alphabet mismatch");
  FiniteAutomaton u;
  u.alphabet = a.alphabet;
  int oa, ob;
  disjoint_copy(a, u, oa, "L.");
  disjoint_copy(b, u, ob, "R.");
  for (int q : a.initial) u.initial.push_back(q + oa);
  for (int q : b.initial) u.initial.push_back(q + ob);
  for (int q : a.accepting) u.accepting.push_back(q + oa);
  for (int q : b.accepting) u.accepting.push_back(q + ob);
  u.normalize();
  return u;
}

FiniteAutomaton nfa_concat(const FiniteAutomaton& a, const FiniteAutomaton& b) {
  if (a.alphabet != b.alphabet) throw PreconditionError("concat: alphabet mismatch");
  FiniteAutomaton u;
  u.alphabet = a.alphabet;
  int oa, ob;
  disjoint_copy(a, u, oa, "L.");
  disjoint_copy(b, u, ob, "R.");
  for (int q : a.initial) u.initial.push_back(q + oa);
  for (int q : b.accepting) u.accepting.push_back(q + ob);
  for (int f : a.accepting)
    for (int s : b.initial) u.add_transition(f + oa, kEps, s + ob);
  u.normalize();
  return u;
}

FiniteAutomaton nfa_star(const FiniteAutomaton& a) {
  FiniteAutomaton u;
  u.alphabet = a.alphabet;
  int hub = u.add_state("star");
  int oa;
  disjoint_copy(a, u, oa, "S.");
  u.initial = {hub};
  u.accepting = {hub};
  for (int q : a.initial) u.add_transition(hub, kEps, q + oa);
  for (int q : a.accepting) u.add_transition(q + oa, kEps, hub);
  u.normalize();
  return u;
}

FiniteAutomaton widen_alphabet(const FiniteAutomaton& a, const Alphabet& sigma) {
  FiniteAutomaton w = a;
  w.alphabet = sigma;
  for (auto& t : w.trans) {
    if (t.label == kEps) continue;
    int i = sigma.index(a.alphabet.name(t.label));
    if (i < 0) throw PreconditionError("symbol '" + a.alphabet.name(t.label) + "' missing from wider alphabet");
    t.label = i;
  }
  w.normalize();
  return w;
}

FiniteAutomaton universal_dfa(const Alphabet& sigma) {
  FiniteAutomaton u;
  u.alphabet = sigma;
  u.deterministic = true;
  u.add_state("u");
  u.initial = {0};
  u.accepting = {0};
  for (int a = 0; a < sigma.size(); ++a) u.add_transition(0, a, 0);
  u.normalize();
  return u;
}

FiniteAutomaton empty_dfa(const Alphabet& sigma) {
  FiniteAutomaton u = universal_dfa(sigma);
  u.accepting.clear();
  return u;
}

bool language_empty(const FiniteAutomaton& fa) {
  std::vector<char> seen(fa.num_states(), 0);
  std::vector<int> stack;
  for (int q : fa.initial)
    if (!seen[q]) {
      seen[q] = 1;
      stack.push_back(q);
    }
  std::vector<std::vector<int>> out(fa.num_states());
  for (auto& t : fa.trans) out[t.from].push_back(t.to);
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    if (fa.is_accepting(q)) return false;
    for (int r : out[q])
      if (!seen[r]) {
        seen[r] = 1;
        stack.push_back(r);
      }
  }
  return true;
}

// ---------------------------------------------------------------- text format

FiniteAutomaton parse_automaton(const std::string& text) {
  FiniteAutomaton fa;
  bool have_type = false, have_alpha = false, have_states = false;
  std::map<std::string, int> sid;
  auto state = [&](const std::string& s, int line) {
    auto it = sid.find(s);
    if (it == sid.end()) throw ParseError("unknown state '" + s + "'", line);
    return it->second;
  };
  for (auto& ln : detail::tokenize_lines(text)) {
    auto& t = ln.tokens;
    const std::string& d = t[0];
    if (d == "type") {
      if (t.size() != 2 || (t[1] != "nfa" && t[1] != "dfa")) throw ParseError("type must be nfa or dfa", ln.number);
      fa.deterministic = t[1] == "dfa";
      have_type = true;
    } else if (d == "alphabet") {
      try {
        fa.alphabet = Alphabet(std::vector<std::string>(t.begin() + 1, t.end()));
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw ParseError(e.what(), ln.number);
      }
      have_alpha = true;
    } else if (d == "states") {
      for (size_t i = 1; i < t.size(); ++i) {
        if (!sid.emplace(t[i], fa.num_states()).second) throw ParseError("duplicate state '" + t[i] + "'", ln.number);
        fa.add_state(t[i]);
      }
      have_states = true;
    } else if (d == "initial") {
      for (size_t i = 1; i < t.size(); ++i) fa.initial.push_back(state(t[i], ln.number));
    } else if (d == "accepting") {
      for (size_t i = 1; i < t.size(); ++i) fa.accepting.push_back(state(t[i], ln.number));
    } else if (d == "trans") {
      if (t.size() != 4) throw ParseError("trans expects: trans <from> <symbol|eps> <to>", ln.number);
      int label = kEps;
      if (t[2] != "eps") {
        label = fa.alphabet.index(t[2]);
        if (label < 0) throw ParseError("unknown symbol '" + t[2] + "'", ln.number);
      }
      fa.add_transition(state(t[1], ln.number), label, state(t[3], ln.number));
    } else if (d == "labels") {
      // counting-automaton annotation; ignored by the plain reader
    } else {
      throw ParseError("unknown directive '" + d + "'", ln.number);
    }
  }
  if (!have_type || !have_alpha || !have_states) throw ParseError("missing type, alphabet or states directive");
  try {
    fa.normalize();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  return fa;
}

std::string automaton_to_text(const FiniteAutomaton& fa) {
  std::ostringstream o;
  FiniteAutomaton c = fa;
  c.normalize();
  o << "type " << (c.deterministic ? "dfa" : "nfa") << "\n";
  o << "alphabet";
  for (auto& s : c.alphabet.symbols()) o << ' ' << s;
  o << "\nstates";
  for (auto& s : c.states) o << ' ' << s;
  o << "\ninitial";
  for (int q : c.initial) o << ' ' << c.states[q];
  o << "\naccepting";
  for (int q : c.accepting) o << ' ' << c.states[q];
  o << "\n";
  for (auto& t : c.trans)
    o << "trans " << c.states[t.from] << ' ' << (t.label == kEps ? "eps" : c.alphabet.name(t.label)) << ' '
      << c.states[t.to] << "\n";
  return o.str();
}

}  // namespace countreg
