#include "countreg/slender.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>

#include "countreg/parikh.hpp"
#include "text_util.hpp"

namespace countreg {

// ---------------------------------------------------------------- counting automata

int CountingAutomaton::state_after(long n) const {
  auto next = dfa_table(dfa);
  int q = dfa.initial.at(0);
  // unary: follow the single successor, jumping around the cycle once found
  std::vector<long> seen(dfa.num_states(), -1);
  for (long i = 0; i < n; ++i) {
    if (seen[q] >= 0) {
      long cyc = i - seen[q];
      long rest = (n - i) % cyc;
      for (long j = 0; j < rest; ++j) q = next[q][0];
      return q;
    }
    seen[q] = i;
    q = next[q][0];
  }
  return q;
}

bool CountingAutomaton::overflow_reachable() const {
  auto next = dfa_table(dfa);
  std::vector<char> seen(dfa.num_states(), 0);
  for (int q = dfa.initial.at(0); q >= 0 && !seen[q]; q = next[q][0]) {
    seen[q] = 1;
    if (label[q] > k) return true;
  }
  return false;
}

namespace {

std::string label_name(int v, int k) { return v > k ? "s>" + std::to_string(k) : "s" + std::to_string(v); }

// minimal unary automaton for a labeled successor function starting at 0
CountingAutomaton build_unary(const std::vector<int>& next, const std::vector<int>& lab, int k) {
  int n = static_cast<int>(next.size());
  std::vector<int> cls(lab.begin(), lab.end());
  for (;;) {
    std::map<std::pair<int, int>, int> sig;
    std::vector<int> nc(n);
    for (int q = 0; q < n; ++q) nc[q] = sig.emplace(std::make_pair(cls[q], cls[next[q]]), sig.size()).first->second;
    int before = static_cast<int>(std::set<int>(cls.begin(), cls.end()).size());
    cls = nc;
    if (static_cast<int>(sig.size()) == before) break;
  }
  // renumber in order of first visit from state 0
  std::map<int, int> order;
  std::vector<int> rep;
  for (int q = 0; !order.count(cls[q]); q = next[q]) {
    order[cls[q]] = static_cast<int>(rep.size());
    rep.push_back(q);
  }
  CountingAutomaton ca;
  ca.k = k;
  ca.dfa.alphabet = Alphabet({"1"});
  for (size_t i = 0; i < rep.size(); ++i) {
    ca.dfa.add_state("q" + std::to_string(i));
    ca.label.push_back(lab[rep[i]]);
  }
  ca.dfa.initial = {0};
  for (size_t i = 0; i < rep.size(); ++i) ca.dfa.add_transition(static_cast<int>(i), 0, order.at(cls[next[rep[i]]]));
  ca.dfa.deterministic = true;
  ca.dfa.normalize();
  return ca;
}

// unary sets as explicit n-tables: preperiod and period from bases and periods
struct UnaryTable {
  long tail = 0, period = 1;
};

UnaryTable unary_bounds(const SemilinearSet& s) {
  UnaryTable t;
  for (auto& c : s.comps) {
    long b = c.base.at(0), g = 0, mx = 0;
    for (auto& p : c.periods)
      if (p[0] > 0) {
        g = std::gcd(g, p[0]);
        mx = std::max(mx, p[0]);
      }
    if (g == 0) t.tail = std::max(t.tail, b + 1);
    else {
      t.tail = std::max(t.tail, b + mx * mx);
      t.period = std::lcm(t.period, g);
    }
  }
  return t;
}

std::vector<char> unary_members(const SemilinearSet& s, long limit) {
  std::vector<char> in(limit, 0);
  for (auto& c : s.comps) {
    long b = c.base.at(0);
    if (b >= limit) continue;
    std::vector<char> reach(limit - b, 0);
    reach[0] = 1;
    for (auto& p : c.periods)
      if (p[0] > 0)
        for (long x = p[0]; x < limit - b; ++x)
          if (reach[x - p[0]]) reach[x] = 1;
    for (long x = 0; x < limit - b; ++x)
      if (reach[x]) in[b + x] = 1;
  }
  return in;
}

SemilinearSet unary_set_of(const CountingAutomaton& ca, int r) {
  auto next = dfa_table(ca.dfa);
  std::map<int, long> first;
  SemilinearSet s;
  s.dim = 1;
  long i = 0;
  int q = ca.dfa.initial.at(0);
  std::vector<int> path;
  while (!first.count(q)) {
    first[q] = i++;
    path.push_back(q);
    q = next[q][0];
  }
  long tail = first.at(q), cyc = i - tail;
  for (long n = 0; n < i; ++n) {
    if (ca.label[path[n]] != r) continue;
    if (n < tail) s.comps.push_back({{n}, {}});
    else s.comps.push_back({{n}, {{cyc}}});
  }
  return s;
}

Alphabet merged(const Alphabet& a, const Alphabet& b) {
  std::vector<std::string> s = a.symbols();
  for (auto& x : b.symbols())
    if (!a.contains(x)) s.push_back(x);
  return Alphabet(s);
}

// ---------------------------------------------------------------- distinct tuples

struct Copy {
  const SemilinearSet* img;
  MarkLayout lay;
};

int mark_letter(const LinearSet& c, const MarkLayout& lay, int mark) {
  int found = -1;
  for (int s = 0; s < lay.letters; ++s) {
    for (auto& p : c.periods)
      if (p[lay.ev(mark, s)] != 0) throw Error("annotated image has a varying mark letter");
    if (c.base[lay.ev(mark, s)] == 1) found = s;
  }
  return found;
}

// slot used by copy c for its partner j
int slot(int c, int j) { return j < c ? j : j - 1; }

// a joined prefix of copies: coordinates are n followed by the pending pairs
// (i, j), i already joined and j not yet, each with copy i's letter at it
struct Partial {
  LinearSet ls;
  std::vector<int> letters;
  bool operator<(const Partial& o) const { return std::tie(ls.base, ls.periods, letters) < std::tie(o.ls.base, o.ls.periods, o.letters); }
};

LinearSet project_one(const LinearSet& c, const std::vector<int>& keep) {
  SemilinearSet one{c.dim(), {c}};
  SemilinearSet p = project(one, keep);
  return p.comps.at(0);
}

// lengths n admitting pairwise distinct x_0..x_{K-1} of length n, x_c drawn
// from copy c, with n in `unary` when given. Copies are joined one at a time,
// projecting away each pair once both of its ends are in.
SemilinearSet distinct_lengths(const std::vector<Copy>& copies, const SemilinearSet* unary, bool first_only) {
  int K = static_cast<int>(copies.size());
  // each copy reduced to (n, pre of every slot) plus its slot letters
  std::vector<std::vector<Partial>> reduced(K);
  for (int c = 0; c < K; ++c) {
    const MarkLayout& lay = copies[c].lay;
    std::vector<int> keep{lay.n()};
    for (int m = 0; m < lay.marks; ++m) keep.push_back(lay.pre(m));
    std::set<Partial> uniq;
    for (auto& comp : copies[c].img->comps) {
      Partial p{project_one(comp, keep), {}};
      for (int m = 0; m < lay.marks; ++m) p.letters.push_back(mark_letter(comp, lay, m));
      uniq.insert(p);
    }
    reduced[c].assign(uniq.begin(), uniq.end());
  }
  long solves = 0, limit = default_state_budget() * 16;
  auto count = [&]() {
    if (++solves > limit) throw MachineTooLarge("too many component combinations in the tuple system");
  };
  // pending pairs after joining copies 0..c
  auto pending = [&](int c) {
    std::vector<std::pair<int, int>> ps;
    for (int i = 0; i <= c; ++i)
      for (int j = c + 1; j < K; ++j) ps.push_back({i, j});
    return ps;
  };
  std::vector<Partial> cur;
  {
    auto ps = pending(0);
    for (auto& r : reduced[0]) {
      Partial p = r;  // slots of copy 0 are exactly the pairs (0, j) in order
      (void)ps;
      cur.push_back(p);
    }
  }
  for (int c = 1; c < K; ++c) {
    auto before = pending(c - 1), after = pending(c);
    std::set<Partial> next;
    for (auto& P : cur)
      for (auto& X : reduced[c]) {
        bool ok = true;
        for (size_t q = 0; q < before.size() && ok; ++q)
          if (before[q].second == c) ok = P.letters[q] != X.letters[slot(c, before[q].first)];
        if (!ok) continue;
        int dp = P.ls.dim(), D = dp + X.ls.dim();
        std::vector<DimRow> rows;
        IntVec r(D, 0);
        r[0] = 1;
        r[dp] = -1;
        rows.push_back({r, Rel::Eq, 0});
        for (size_t q = 0; q < before.size(); ++q) {
          if (before[q].second != c) continue;
          IntVec e(D, 0);
          e[1 + q] = 1;
          e[dp + 1 + slot(c, before[q].first)] = -1;
          rows.push_back({e, Rel::Eq, 0});
        }
        std::vector<int> keep{0};
        std::vector<int> letters;
        for (auto& pr : after) {
          if (pr.first < c) {
            size_t q = std::find(before.begin(), before.end(), pr) - before.begin();
            keep.push_back(1 + static_cast<int>(q));
            letters.push_back(P.letters[q]);
          } else {
            keep.push_back(dp + 1 + slot(c, pr.second));
            letters.push_back(X.letters[slot(c, pr.second)]);
          }
        }
        count();
        bool last = c == K - 1 && !unary;
        IntVec pt;
        SemilinearSet res = solve_joint({&P.ls, &X.ls}, rows, keep, last && first_only ? &pt : nullptr);
        for (auto& comp : res.comps) next.insert(Partial{comp, letters});
        if (last && first_only && !next.empty()) break;
      }
    cur.assign(next.begin(), next.end());
    if (cur.empty()) break;
  }
  SemilinearSet out;
  out.dim = 1;
  for (auto& P : cur) {
    if (!unary) {
      out.comps.push_back(project_one(P.ls, {0}));
      continue;
    }
    for (auto& u : unary->comps) {
      count();
      IntVec r{1, -1};
      IntVec pt;
      SemilinearSet res = solve_joint({&P.ls, &u}, {{r, Rel::Eq, 0}}, {0}, first_only ? &pt : nullptr);
      out.comps.insert(out.comps.end(), res.comps.begin(), res.comps.end());
      if (first_only && !out.comps.empty()) break;
    }
    if (first_only && !out.comps.empty()) break;
  }
  simplify(out);
  return out;
}

long min_member(const SemilinearSet& s) {
  long best = -1;
  for (auto& c : s.comps)
    if (best < 0 || c.base[0] < best) best = c.base[0];
  return best;
}

}  // namespace

std::string counting_automaton_to_text(const CountingAutomaton& ca) {
  std::string s = automaton_to_text(ca.dfa);
  s += "labels";
  for (int q = 0; q < ca.dfa.num_states(); ++q) s += " " + label_name(ca.label[q], ca.k) + ":" + ca.dfa.states[q];
  return s + "\n";
}

CountingAutomaton parse_counting_automaton(const std::string& text) {
  std::string rest;
  std::vector<std::string> labels;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto t = detail::split_ws(line);
    if (!t.empty() && t[0] == "labels") labels.insert(labels.end(), t.begin() + 1, t.end());
    else rest += line + "\n";
  }
  CountingAutomaton ca;
  ca.dfa = parse_automaton(rest);
  if (ca.dfa.alphabet.size() != 1 || !ca.dfa.structurally_deterministic() || !ca.dfa.complete())
    throw ParseError("counting automaton must be a complete unary DFA");
  ca.label.assign(ca.dfa.num_states(), -1);
  int over = -1;
  for (auto& tok : labels) {
    auto colon = tok.find(':');
    if (colon == std::string::npos || tok.size() < 2 || tok[0] != 's') throw ParseError("bad label '" + tok + "'");
    std::string v = tok.substr(1, colon - 1), st = tok.substr(colon + 1);
    int q = ca.dfa.state_index(st);
    if (q < 0) throw ParseError("unknown state '" + st + "' in labels");
    if (!v.empty() && v[0] == '>') {
      int k = std::stoi(v.substr(1));
      if (over >= 0 && over != k) throw ParseError("inconsistent overflow label");
      over = k;
      ca.label[q] = -2;
    } else {
      ca.label[q] = std::stoi(v);
    }
  }
  int mx = 0;
  for (int q = 0; q < ca.dfa.num_states(); ++q) {
    if (ca.label[q] == -1) throw ParseError("state '" + ca.dfa.states[q] + "' has no label");
    mx = std::max(mx, ca.label[q]);
  }
  ca.k = over >= 0 ? over : mx;
  for (auto& l : ca.label)
    if (l == -2) l = ca.k + 1;
  return ca;
}

// ---------------------------------------------------------------- regular case

SlenderVerdict dfa_k_slender(const FiniteAutomaton& dfa0, int k) {
  if (k < 1) throw PreconditionError("k must be at least 1");
  if (!dfa0.structurally_deterministic()) throw PreconditionError("dfa_k_slender: automaton must be deterministic");
  FiniteAutomaton dfa = dfa0;
  dfa.normalize();
  int K = k + 1, S = dfa.alphabet.size(), Q = dfa.num_states();
  auto next = dfa_table(dfa);
  // states that can still reach acceptance
  std::vector<char> live(Q, 0);
  for (int q : dfa.accepting) live[q] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& t : dfa.trans)
      if (live[t.to] && !live[t.from]) live[t.from] = changed = true;
  }
  SlenderVerdict v;
  v.k = k;
  if (dfa.initial.empty() || !live[dfa.initial[0]]) return v;
  // words kept in strictly increasing lexicographic order; bit i records x_i < x_{i+1}
  using Key = std::vector<int>;
  std::map<Key, int> id;
  std::vector<Key> keys;
  std::vector<std::pair<int, std::vector<int>>> parent;
  std::deque<int> work;
  long budget = default_state_budget();
  auto intern = [&](const Key& key, int from, const std::vector<int>& lets) {
    if (id.count(key)) return;
    if (static_cast<long>(keys.size()) >= budget) throw BudgetExceeded("slenderness product exceeds the state budget");
    id[key] = static_cast<int>(keys.size());
    keys.push_back(key);
    parent.push_back({from, lets});
    work.push_back(id[key]);
  };
  Key start(K, dfa.initial[0]);
  start.push_back(0);
  intern(start, -1, {});
  int full = (1 << k) - 1;
  std::vector<int> lets(K);
  while (!work.empty()) {
    int cur = work.front();
    work.pop_front();
    Key key = keys[cur];
    bool goal = key[K] == full;
    for (int i = 0; i < K && goal; ++i) goal = dfa.is_accepting(key[i]);
    if (goal) {
      v.slender = false;
      std::vector<Word> words(K);
      for (int s = cur; parent[s].first >= 0; s = parent[s].first)
        for (int i = 0; i < K; ++i) words[i].push_back(parent[s].second[i]);
      for (auto& w : words) std::reverse(w.begin(), w.end());
      v.counterexample = words;
      return v;
    }
    auto rec = [&](auto&& self, int i, int bits) -> void {
      if (i == K) {
        Key nk(K + 1);
        for (int j = 0; j < K; ++j) nk[j] = next[key[j]][lets[j]];
        nk[K] = bits;
        intern(nk, cur, lets);
        return;
      }
      for (int a = 0; a < S; ++a) {
        int to = next[key[i]][a];
        if (to < 0 || !live[to]) continue;
        int b = bits;
        if (i > 0 && !(key[K] >> (i - 1) & 1)) {
          if (a < lets[i - 1]) continue;
          if (a > lets[i - 1]) b |= 1 << (i - 1);
        }
        lets[i] = a;
        self(self, i + 1, b);
      }
    };
    rec(rec, 0, key[K]);
  }
  return v;
}

CountingAutomaton slender_effective_dfa(const FiniteAutomaton& dfa0, int k) {
  if (!dfa0.structurally_deterministic()) throw PreconditionError("slender_effective_dfa: automaton must be deterministic");
  FiniteAutomaton dfa = complete_dfa(dfa0);
  int Q = dfa.num_states();
  auto next = dfa_table(dfa);
  std::map<std::vector<int>, int> id;
  std::vector<std::vector<int>> profiles;
  std::vector<int> succ, lab;
  long budget = default_state_budget();
  auto intern = [&](const std::vector<int>& p) {
    auto it = id.find(p);
    if (it != id.end()) return it->second;
    if (static_cast<long>(profiles.size()) >= budget) throw BudgetExceeded("count profiles exceed the state budget");
    int i = static_cast<int>(profiles.size());
    id[p] = i;
    profiles.push_back(p);
    int l = 0;
    for (int q : dfa.accepting) l = std::min(k + 1, l + p[q]);
    lab.push_back(l);
    succ.push_back(-1);
    return i;
  };
  std::vector<int> p0(Q, 0);
  if (!dfa.initial.empty()) p0[dfa.initial[0]] = 1;
  intern(p0);
  for (size_t i = 0; i < profiles.size(); ++i) {
    std::vector<int> np(Q, 0);
    for (int q = 0; q < Q; ++q)
      if (profiles[i][q])
        for (int a = 0; a < dfa.alphabet.size(); ++a) {
          int& c = np[next[q][a]];
          c = std::min(k + 1, c + profiles[i][q]);
        }
    int j = intern(np);
    succ[i] = j;
  }
  return build_unary(succ, lab, k);
}

FiniteAutomaton k_counting_witness(const CountingAutomaton& ca) {
  if (ca.overflow_reachable()) throw PreconditionError("counting automaton reaches the overflow state");
  std::vector<std::string> names{"1"};
  for (int s = 1; s <= ca.k; ++s) names.push_back("#" + std::to_string(s));
  FiniteAutomaton w;
  w.alphabet = Alphabet(names);
  auto next = dfa_table(ca.dfa);
  int n = ca.dfa.num_states();
  for (int q = 0; q < n; ++q) w.add_state(ca.dfa.states[q]);
  int acc = w.add_state("done");
  // a separate start state, since the cycle may return to the initial one
  int start = w.add_state("start");
  int q0 = ca.dfa.initial.at(0);
  w.initial = {start};
  w.accepting = {acc};
  if (ca.label[q0] == 1) w.accepting.push_back(start);
  for (int q = 0; q < n; ++q) {
    int to = next[q][0];
    w.add_transition(q, 0, to);
    if (q == q0) w.add_transition(start, 0, to);
    for (int s = 1; s <= ca.k; ++s)
      if (s <= ca.label[to]) {
        w.add_transition(q, s, acc);
        if (q == q0) w.add_transition(start, s, acc);
      }
  }
  w.deterministic = true;
  w.normalize();
  return trim_minimize(w);
}

// ---------------------------------------------------------------- counter machines

CountingAutomaton counting_from_levels(const std::vector<SemilinearSet>& levels, int k) {
  UnaryTable t;
  for (auto& s : levels) {
    UnaryTable u = unary_bounds(s);
    t.tail = std::max(t.tail, u.tail);
    t.period = std::lcm(t.period, u.period);
  }
  long total = t.tail + t.period;
  if (total > default_state_budget() * 16) throw MachineTooLarge("unary table too long");
  std::vector<int> lab(total, 0), next(total);
  for (auto& s : levels) {
    auto in = unary_members(s, total);
    for (long n = 0; n < total; ++n) lab[n] += in[n];
  }
  for (long n = 0; n < total; ++n) next[n] = n + 1 < total ? static_cast<int>(n + 1) : static_cast<int>(t.tail);
  // levels are nested, so the number of levels containing n is f(n) capped
  return build_unary(next, lab, k);
}

namespace {

// short lengths by enumeration first; more than k words there already settles it
std::optional<WordList> crowded_length(const CounterMachine& m, int k) {
  const int upto = 12;
  for (int n = 0; n <= upto; ++n) {
    WordList w;
    try {
      w = enumerate_length(m, n);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (static_cast<int>(w.words.size()) > k) return w;
  }
  return std::nullopt;
}

}  // namespace

SlenderVerdict ncm_k_slender(const CounterMachine& m, int k, bool enumerate_first) {
  if (k < 1) throw PreconditionError("k must be at least 1");
  if (auto w = enumerate_first ? crowded_length(m, k) : std::nullopt) {
    SlenderVerdict v;
    v.k = k;
    v.slender = false;
    v.counterexample.assign(w->words.begin(), w->words.begin() + k + 1);
    return v;
  }
  SemilinearSet img = annotated_image(m, k);
  MarkLayout lay{m.alphabet.size(), k};
  std::vector<Copy> copies(k + 1, Copy{&img, lay});
  SemilinearSet lens = distinct_lengths(copies, nullptr, false);
  SlenderVerdict v;
  v.k = k;
  if (lens.empty()) return v;
  v.slender = false;
  long n = min_member(lens);
  WordList words = enumerate_length(m, static_cast<int>(n));
  if (static_cast<int>(words.words.size()) <= k)
    throw Error("length " + std::to_string(n) + " has fewer than k+1 words by enumeration");
  v.counterexample.assign(words.words.begin(), words.words.begin() + k + 1);
  return v;
}

CountingAutomaton ncm_slender_effective(const CounterMachine& m, int k) {
  if (auto w = crowded_length(m, k))
    throw PreconditionError("language is not " + std::to_string(k) + "-slender (length " +
                            std::to_string(w->words.at(0).size()) + ")");
  std::vector<SemilinearSet> levels;
  for (int j = 1; j <= k + 1; ++j) {
    SemilinearSet img = annotated_image(m, j - 1);
    std::vector<Copy> copies(j, Copy{&img, MarkLayout{m.alphabet.size(), j - 1}});
    SemilinearSet lens = distinct_lengths(copies, nullptr, j == k + 1);
    if (j == k + 1) {
      if (!lens.empty())
        throw PreconditionError("language is not " + std::to_string(k) + "-slender (length " +
                                std::to_string(min_member(lens)) + ")");
      break;
    }
    levels.push_back(lens);
  }
  return counting_from_levels(levels, k);
}

ContainmentResult slender_containment(const CounterMachine& l1_0, const CounterMachine& l2_0, int k) {
  Alphabet sigma = merged(l1_0.alphabet, l2_0.alphabet);
  CounterMachine l1 = widen_machine(l1_0, sigma), l2 = widen_machine(l2_0, sigma);
  CountingAutomaton f2 = ncm_slender_effective(l2, k);
  ContainmentResult res;
  for (int r = 0; r <= k; ++r) {
    SemilinearSet rr = unary_set_of(f2, r);
    if (rr.empty()) continue;
    SemilinearSet img1 = annotated_image(l1, r);
    SemilinearSet img2 = r > 0 ? annotated_image(l2, r) : SemilinearSet{};
    MarkLayout lay{sigma.size(), r};
    std::vector<Copy> copies{Copy{&img1, lay}};
    for (int i = 0; i < r; ++i) copies.push_back(Copy{&img2, lay});
    SemilinearSet lens = distinct_lengths(copies, &rr, true);
    if (lens.empty()) continue;
    res.contained = false;
    int n = static_cast<int>(min_member(lens));
    for (auto& w : enumerate_length(l1, n).words)
      if (!accepts(l2, w)) {
        res.witness = w;
        break;
      }
    return res;
  }
  return res;
}

CounterMachine slender_difference(const CounterMachine& l1_0, const CounterMachine& l2_0, int k) {
  Alphabet sigma = merged(l1_0.alphabet, l2_0.alphabet);
  CounterMachine a = to_final_state(widen_machine(l1_0, sigma));
  CounterMachine b = to_final_state(widen_machine(l2_0, sigma));
  CountingAutomaton f2 = ncm_slender_effective(b, k);
  auto unext = dfa_table(f2.dfa);
  int ca = a.counters, cb = b.counters;
  CounterMachine out;
  out.alphabet = sigma;
  out.counters = ca + k * cb;
  out.reversals = a.reversals;
  for (int i = 0; i < k; ++i) out.reversals.insert(out.reversals.end(), b.reversals.begin(), b.reversals.end());
  if (out.counters == 0) {
    out.counters = 1;
    out.reversals = {0};
  }
  int C = out.counters;
  int start = out.add_state("start");
  out.initial = start;
  std::vector<std::vector<int>> from_b(b.num_states()), from_a(a.num_states());
  for (size_t i = 0; i < a.trans.size(); ++i) from_a[a.trans[i].from].push_back(static_cast<int>(i));
  for (size_t i = 0; i < b.trans.size(); ++i) from_b[b.trans[i].from].push_back(static_cast<int>(i));
  long budget = default_state_budget();

  // x runs on a, y_1 < ... < y_r run on copies of b in lockstep; bit i of dx: x != y_i,
  // bit i of lt: y_i < y_{i+1}; the unary state tracks f2 at the current length
  for (int r = 0; r <= k; ++r) {
    using Key = std::vector<int>;  // qa, qb_1..qb_r, u, dx, lt
    std::map<Key, int> id;
    std::deque<Key> work;
    auto intern = [&](const Key& key) {
      auto it = id.find(key);
      if (it != id.end()) return it->second;
      if (static_cast<long>(id.size()) >= budget) throw MachineTooLarge("difference machine exceeds the state budget");
      std::string name = "r" + std::to_string(r) + "(" + a.states[key[0]];
      for (int i = 0; i < r; ++i) name += "," + b.states[key[1 + i]];
      name += ",u" + std::to_string(key[r + 1]) + "," + std::to_string(key[r + 2]) + "," + std::to_string(key[r + 3]) + ")";
      int s = out.add_state(name);
      id.emplace(key, s);
      work.push_back(key);
      bool acc = a.is_accepting(key[0]) && f2.label[key[r + 1]] == r && key[r + 2] == (1 << r) - 1 &&
                 key[r + 3] == (r > 0 ? (1 << (r - 1)) - 1 : 0);
      for (int i = 0; i < r && acc; ++i) acc = b.is_accepting(key[1 + i]);
      if (acc) out.accepting.push_back(s);
      return s;
    };
    Key init{a.initial};
    for (int i = 0; i < r; ++i) init.push_back(b.initial);
    init.push_back(f2.dfa.initial[0]);
    init.push_back(0);
    init.push_back(0);
    std::vector<Guard> any(C, Guard::Any);
    std::vector<int> none(C, 0);
    out.trans.push_back({start, kEps, any, intern(init), none});
    while (!work.empty()) {
      Key key = work.front();
      work.pop_front();
      int from = id.at(key);
      auto put = [&](std::vector<Guard>& g, std::vector<int>& d, int off, const CounterTransition& t) {
        for (size_t c = 0; c < t.guard.size(); ++c) {
          g[off + c] = t.guard[c];
          d[off + c] = t.delta[c];
        }
      };
      // epsilon moves of a single component
      for (int ti : from_a[key[0]]) {
        auto& t = a.trans[ti];
        if (t.label != kEps) continue;
        auto g = any;
        auto d = none;
        put(g, d, 0, t);
        Key nk = key;
        nk[0] = t.to;
        out.trans.push_back({from, kEps, g, intern(nk), d});
      }
      for (int i = 0; i < r; ++i)
        for (int ti : from_b[key[1 + i]]) {
          auto& t = b.trans[ti];
          if (t.label != kEps) continue;
          auto g = any;
          auto d = none;
          put(g, d, ca + i * cb, t);
          Key nk = key;
          nk[1 + i] = t.to;
          out.trans.push_back({from, kEps, g, intern(nk), d});
        }
      // a letter step: every component reads one letter
      int unew = unext[key[r + 1]][0];
      for (int ta : from_a[key[0]]) {
        auto& t = a.trans[ta];
        if (t.label == kEps) continue;
        std::vector<int> pick(r);
        auto rec = [&](auto&& self, int i, int dx, int lt, int prev) -> void {
          if (i == r) {
            auto g = any;
            auto d = none;
            put(g, d, 0, t);
            Key nk = key;
            nk[0] = t.to;
            for (int j = 0; j < r; ++j) {
              auto& tb = b.trans[pick[j]];
              put(g, d, ca + j * cb, tb);
              nk[1 + j] = tb.to;
            }
            nk[r + 1] = unew;
            nk[r + 2] = dx;
            nk[r + 3] = lt;
            out.trans.push_back({from, t.label, g, intern(nk), d});
            return;
          }
          for (int tb : from_b[key[1 + i]]) {
            int y = b.trans[tb].label;
            if (y == kEps) continue;
            int nlt = lt;
            if (i > 0 && !(key[r + 3] >> (i - 1) & 1)) {
              if (y < prev) continue;
              if (y > prev) nlt |= 1 << (i - 1);
            }
            pick[i] = tb;
            self(self, i + 1, dx | (y != t.label ? 1 << i : 0), nlt, y);
          }
        };
        rec(rec, 0, key[r + 2], key[r + 3], -1);
      }
    }
  }
  out.validate();
  return out;
}

bool slender_disjoint(const CounterMachine& l1, const CounterMachine& l2, int /*k*/) {
  return ncm_emptiness(machine_intersection(l1, l2)).empty;
}

}  // namespace countreg
