#include "countreg/parikh.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace countreg {

namespace {

constexpr long kComponentBudget = 20000;

struct VecNFA {
  int states = 0;
  int start = 0;
  int dim = 0;
  std::vector<int> finals;
  struct Edge {
    int from, to, letter;
    IntVec v;
  };
  std::vector<Edge> edges;
};

// ------------------------------------------------------------ set algebra

void check_size(const SemilinearSet& s) {
  if (static_cast<long>(s.comps.size()) > kComponentBudget)
    throw MachineTooLarge("semilinear expression exceeds " + std::to_string(kComponentBudget) + " components");
}

SemilinearSet sl_sum(const SemilinearSet& a, const SemilinearSet& b) {
  SemilinearSet r;
  r.dim = a.dim;
  for (auto& x : a.comps)
    for (auto& y : b.comps) {
      LinearSet l = x;
      for (int d = 0; d < r.dim; ++d) l.base[d] += y.base[d];
      l.periods.insert(l.periods.end(), y.periods.begin(), y.periods.end());
      r.comps.push_back(std::move(l));
    }
  check_size(r);
  simplify(r);
  return r;
}

SemilinearSet sl_star(const SemilinearSet& s) {
  SemilinearSet r;
  r.dim = s.dim;
  r.comps.push_back({IntVec(s.dim, 0), {}});
  for (auto& c : s.comps) {
    SemilinearSet one;
    one.dim = s.dim;
    bool zero_base = std::all_of(c.base.begin(), c.base.end(), [](long x) { return x == 0; });
    if (zero_base) {
      one.comps.push_back({c.base, c.periods});
    } else {
      one.comps.push_back({IntVec(s.dim, 0), {}});
      auto p = c.periods;
      p.push_back(c.base);
      one.comps.push_back({c.base, p});
    }
    r = sl_sum(r, one);
  }
  return r;
}

void sl_add(SemilinearSet& into, const SemilinearSet& x) {
  into.comps.insert(into.comps.end(), x.comps.begin(), x.comps.end());
  check_size(into);
}

// ------------------------------------------------------------ path image

std::vector<char> useful_states(const VecNFA& a) {
  std::vector<std::vector<int>> fw(a.states), bw(a.states);
  for (auto& e : a.edges) {
    fw[e.from].push_back(e.to);
    bw[e.to].push_back(e.from);
  }
  auto reach = [&](const std::vector<std::vector<int>>& g, std::vector<int> seeds) {
    std::vector<char> seen(a.states, 0);
    for (int s : seeds) seen[s] = 1;
    while (!seeds.empty()) {
      int v = seeds.back();
      seeds.pop_back();
      for (int w : g[v])
        if (!seen[w]) {
          seen[w] = 1;
          seeds.push_back(w);
        }
    }
    return seen;
  };
  auto f = reach(fw, {a.start});
  auto b = reach(bw, a.finals);
  std::vector<char> u(a.states);
  for (int i = 0; i < a.states; ++i) u[i] = f[i] && b[i];
  return u;
}

SemilinearSet singleton(const IntVec& v) {
  SemilinearSet s;
  s.dim = static_cast<int>(v.size());
  s.comps.push_back({v, {}});
  return s;
}

// Parikh image of the emission vectors along start-to-final paths, by state elimination
SemilinearSet path_image(const VecNFA& a) {
  SemilinearSet empty;
  empty.dim = a.dim;
  if (a.states == 0) return empty;
  auto useful = useful_states(a);
  if (!useful[a.start]) return empty;
  int n = a.states, S = n, T = n + 1;
  std::vector<std::map<int, SemilinearSet>> out(n + 2);
  std::vector<std::set<int>> in(n + 2);
  auto add = [&](int u, int v, const SemilinearSet& lab) {
    auto it = out[u].find(v);
    if (it == out[u].end()) {
      out[u].emplace(v, lab);
      in[v].insert(u);
    } else {
      sl_add(it->second, lab);
    }
  };
  IntVec zero(a.dim, 0);
  add(S, a.start, singleton(zero));
  for (int f : a.finals)
    if (useful[f]) add(f, T, singleton(zero));
  for (auto& e : a.edges)
    if (useful[e.from] && useful[e.to]) add(e.from, e.to, singleton(e.v));
  for (int u = 0; u < n + 2; ++u)
    for (auto& [v, lab] : out[u]) simplify(lab);

  std::set<int> remaining;
  for (int i = 0; i < n; ++i)
    if (useful[i]) remaining.insert(i);
  while (!remaining.empty()) {
    int best = -1;
    long bestcost = -1;
    for (int x : remaining) {
      long ins = static_cast<long>(in[x].size()) - (in[x].count(x) ? 1 : 0);
      long outs = static_cast<long>(out[x].size()) - (out[x].count(x) ? 1 : 0);
      long cost = ins * outs;
      if (best < 0 || cost < bestcost) {
        best = x;
        bestcost = cost;
      }
    }
    int x = best;
    remaining.erase(x);
    SemilinearSet loop = singleton(zero);
    if (out[x].count(x)) {
      loop = sl_star(out[x][x]);
      out[x].erase(x);
      in[x].erase(x);
    }
    std::vector<int> preds(in[x].begin(), in[x].end());
    std::vector<std::pair<int, SemilinearSet>> succs(out[x].begin(), out[x].end());
    for (int u : preds) {
      SemilinearSet head = sl_sum(out[u][x], loop);
      for (auto& [v, lab] : succs) {
        add(u, v, sl_sum(head, lab));
        simplify(out[u][v]);
      }
    }
    for (int u : preds) out[u].erase(x);
    for (auto& [v, lab] : succs) in[v].erase(x);
    out[x].clear();
    in[x].clear();
  }
  auto it = out[S].find(T);
  if (it == out[S].end()) return empty;
  SemilinearSet r = it->second;
  simplify(r);
  return r;
}

// ------------------------------------------------------------ machine abstraction

enum IncStatus { kNone = 0, kInc = 1 };
enum DecStatus { kFree = 0, kPending = 1, kCommitted = 2, kZero = 3 };

struct Abstraction {
  VecNFA nfa;
  int letters = 0;
  std::vector<std::vector<int>> mag;            // [counter][phase] -> dim
  std::vector<std::vector<int>> evz, evp;       // [counter][phase] -> dim, -1 on increasing phases
  int event_base = 0;
};

struct CounterOpt {
  int ph, st, mag_dim, ev_dim;
};

void guard_options(const Abstraction& A, int i, int ph, int st, Guard g, int delta,
                   std::vector<std::pair<int, int>>& out) {
  out.clear();
  if (ph % 2 == 0) {
    if (g == Guard::Zero && st != kNone) return;
    if (g == Guard::NonZero && st == kNone) return;
    out.push_back({st, -1});
    return;
  }
  if (g == Guard::Any) {
    out.push_back({st, -1});
  } else if (g == Guard::Zero) {
    if (st == kFree) out.push_back({kZero, A.evz[i][ph]});
    else if (st == kZero) out.push_back({kZero, -1});
  } else if (delta == -1) {
    if (st == kFree || st == kPending) out.push_back({st, -1});
  } else {
    // a nonzero test is justified by a later decrement in this phase, or the
    // value stays positive until the phase ends
    if (st == kFree) {
      out.push_back({kPending, -1});
      out.push_back({kCommitted, A.evp[i][ph]});
    } else if (st == kPending || st == kCommitted) {
      out.push_back({st, -1});
    }
  }
}

void counter_options(const CounterMachine& m, const Abstraction& A, int i, int ph, int st, Guard g, int delta,
                     std::vector<CounterOpt>& out) {
  out.clear();
  std::vector<std::pair<int, int>> gs;
  guard_options(A, i, ph, st, g, delta, gs);
  int t = m.reversals[i];
  for (auto [s, ev] : gs) {
    if (delta == 0) {
      out.push_back({ph, s, -1, ev});
    } else if (ph % 2 == 0) {
      if (delta > 0) out.push_back({ph, kInc, A.mag[i][ph], ev});
      else if (ph + 1 <= t) out.push_back({ph + 1, kFree, A.mag[i][ph + 1], ev});
    } else {
      if (delta < 0) out.push_back({ph, kFree, A.mag[i][ph], ev});
      else if (s != kPending && ph + 1 <= t) out.push_back({ph + 1, kInc, A.mag[i][ph + 1], ev});
    }
  }
}

// returns false when the run cannot end here; otherwise ev is the event dim set (or -1)
bool final_option(const CounterMachine& m, const Abstraction& A, int i, int ph, int st, int& ev) {
  ev = -1;
  bool dec = ph % 2 == 1;
  if (m.mode == AcceptMode::FinalZero) {
    if (!dec) return st == kNone;
    if (st == kFree) ev = A.evz[i][ph];
    return st == kFree || st == kZero;
  }
  return !(dec && st == kPending);
}

// key layout: q, then (phase, status) per counter, then the event mask
using Key = std::vector<long>;

Abstraction abstract_ncm(const CounterMachine& m) {
  Abstraction A;
  int L = m.alphabet.size(), k = m.counters;
  A.letters = L;
  int d = L;
  A.mag.resize(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j <= m.reversals[i]; ++j) A.mag[i].push_back(d++);
  A.event_base = d;
  A.evz.resize(k);
  A.evp.resize(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j <= m.reversals[i]; ++j) {
      A.evz[i].push_back(j % 2 ? d++ : -1);
      A.evp[i].push_back(j % 2 ? d++ : -1);
    }
  int events = d - A.event_base;
  if (events > 62) throw MachineTooLarge("too many counter phases for the abstraction");
  A.nfa.dim = d;

  long budget = default_state_budget();
  std::map<Key, int> id;
  std::vector<Key> keys;
  std::deque<int> queue;
  const int acc = 0;
  keys.push_back({});
  A.nfa.states = 1;
  A.nfa.finals = {acc};
  auto intern = [&](const Key& key) {
    auto it = id.find(key);
    if (it != id.end()) return it->second;
    int s = static_cast<int>(keys.size());
    if (s > budget) throw MachineTooLarge("counter abstraction exceeds the state budget of " + std::to_string(budget));
    id.emplace(key, s);
    keys.push_back(key);
    queue.push_back(s);
    return s;
  };
  Key init(2 + 2 * k, 0);
  init[0] = m.initial;
  A.nfa.start = intern(init);

  std::vector<std::vector<int>> by_state(m.num_states());
  for (size_t ti = 0; ti < m.trans.size(); ++ti) by_state[m.trans[ti].from].push_back(static_cast<int>(ti));
  std::vector<std::vector<CounterOpt>> opts(k);
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    Key key = keys[s];
    long mask = key[1 + 2 * k];
    for (int ti : by_state[key[0]]) {
      auto& t = m.trans[ti];
      bool dead = false;
      for (int i = 0; i < k && !dead; ++i) {
        counter_options(m, A, i, static_cast<int>(key[1 + 2 * i]), static_cast<int>(key[2 + 2 * i]), t.guard[i],
                        t.delta[i], opts[i]);
        if (opts[i].empty()) dead = true;
      }
      if (dead) continue;
      std::vector<size_t> pick(k, 0);
      while (true) {
        Key nk = key;
        nk[0] = t.to;
        IntVec v(A.nfa.dim, 0);
        if (t.label != kEps) v[t.label] = 1;
        long nmask = mask;
        for (int i = 0; i < k; ++i) {
          auto& o = opts[i][pick[i]];
          nk[1 + 2 * i] = o.ph;
          nk[2 + 2 * i] = o.st;
          if (o.mag_dim >= 0) v[o.mag_dim] += 1;
          if (o.ev_dim >= 0) {
            long bit = 1L << (o.ev_dim - A.event_base);
            if (!(nmask & bit)) {
              nmask |= bit;
              v[o.ev_dim] = 1;
            }
          }
        }
        nk[1 + 2 * k] = nmask;
        int to = intern(nk);
        A.nfa.edges.push_back({s, to, t.label, v});
        int c = 0;
        while (c < k && ++pick[c] == opts[c].size()) pick[c++] = 0;
        if (c == k) break;
      }
    }
    if (m.is_accepting(static_cast<int>(key[0]))) {
      IntVec v(A.nfa.dim, 0);
      bool ok = true;
      for (int i = 0; i < k && ok; ++i) {
        int ev;
        ok = final_option(m, A, i, static_cast<int>(key[1 + 2 * i]), static_cast<int>(key[2 + 2 * i]), ev);
        if (ok && ev >= 0 && !(mask & (1L << (ev - A.event_base)))) v[ev] = 1;
      }
      if (ok) A.nfa.edges.push_back({s, acc, kEps, v});
    }
  }
  A.nfa.states = static_cast<int>(keys.size());
  return A;
}

std::vector<DimRow> abstraction_rows(const Abstraction& A, const CounterMachine& m, const IntVec& base) {
  std::vector<DimRow> rows;
  for (int i = 0; i < m.counters; ++i)
    for (int j = 1; j <= m.reversals[i]; j += 2) {
      IntVec row(base.size(), 0);
      for (int l = 0; l <= j; ++l) row[A.mag[i][l]] = l % 2 ? -1 : 1;
      rows.push_back({row, Rel::Ge, 0});
      if (base[A.evz[i][j]]) rows.push_back({row, Rel::Eq, 0});
      if (base[A.evp[i][j]]) rows.push_back({row, Rel::Ge, 1});
    }
  return rows;
}

// product with the mark-placing automaton
VecNFA annotate(const VecNFA& a, int letters, int marks) {
  int extra = 1 + marks * (1 + letters);
  int masks = 1 << marks, full = masks - 1;
  VecNFA r;
  r.dim = a.dim + extra;
  r.states = a.states * masks;
  r.start = a.start * masks;
  for (int f : a.finals) r.finals.push_back(f * masks + full);
  for (auto& e : a.edges) {
    for (int U = 0; U < masks; ++U) {
      IntVec v = e.v;
      v.resize(r.dim, 0);
      if (e.letter == kEps) {
        r.edges.push_back({e.from * masks + U, e.to * masks + U, kEps, v});
        continue;
      }
      int free = full & ~U;
      // every subset T of the unplaced marks, including the empty one
      for (int T = free;; T = (T - 1) & free) {
        IntVec w = v;
        w[a.dim] = 1;
        for (int mk = 0; mk < marks; ++mk) {
          if (!((U | T) >> mk & 1)) w[a.dim + 1 + mk] = 1;
          if (T >> mk & 1) w[a.dim + 1 + marks + mk * letters + e.letter] = 1;
        }
        r.edges.push_back({e.from * masks + U, e.to * masks + (U | T), e.letter, w});
        if (T == 0) break;
      }
    }
  }
  return r;
}

IntVec row_dot(const std::vector<DimRow>& rows, const IntVec& v) {
  IntVec out;
  for (auto& r : rows) {
    long s = 0;
    for (size_t d = 0; d < v.size(); ++d) s += r.coeff[d] * v[d];
    out.push_back(s);
  }
  return out;
}

}  // namespace

SemilinearSet solve_joint(const std::vector<const LinearSet*>& parts, const std::vector<DimRow>& rows,
                          const std::vector<int>& keep, IntVec* point) {
  std::vector<int> offset;
  int D = 0;
  for (auto* p : parts) {
    offset.push_back(D);
    D += p->dim();
  }
  IntVec base(D, 0);
  std::vector<IntVec> vars, free;
  std::set<IntVec> seen;
  for (size_t k = 0; k < parts.size(); ++k) {
    for (int d = 0; d < parts[k]->dim(); ++d) base[offset[k] + d] = parts[k]->base[d];
    for (auto& p : parts[k]->periods) {
      IntVec v(D, 0);
      for (int d = 0; d < parts[k]->dim(); ++d) v[offset[k] + d] = p[d];
      auto sig = row_dot(rows, v);
      bool touches = std::any_of(sig.begin(), sig.end(), [](long x) { return x != 0; });
      // periods equal on the rows and on the kept dimensions are interchangeable
      IntVec tag = sig;
      for (int k : keep) tag.push_back(v[k]);
      tag.push_back(touches);
      if (seen.insert(tag).second) (touches ? vars : free).push_back(v);
    }
  }
  LinearSystem sys;
  sys.vars = static_cast<int>(vars.size());
  auto bdot = row_dot(rows, base);
  std::vector<IntVec> vsig;
  for (auto& v : vars) vsig.push_back(row_dot(rows, v));
  for (size_t r = 0; r < rows.size(); ++r) {
    IntVec row(sys.vars);
    for (int j = 0; j < sys.vars; ++j) row[j] = vsig[j][r];
    sys.add(row, rows[r].rel, rows[r].rhs - bdot[r]);
  }
  auto sol = solve_nat(sys, point != nullptr);
  auto combine = [&](const IntVec& start, const IntVec& coef) {
    IntVec x = start;
    for (int j = 0; j < sys.vars; ++j)
      if (coef[j])
        for (int d = 0; d < D; ++d) x[d] += coef[j] * vars[j][d];
    return x;
  };
  auto proj = [&](const IntVec& x) {
    IntVec y;
    for (int k : keep) y.push_back(x[k]);
    return y;
  };
  SemilinearSet out;
  out.dim = static_cast<int>(keep.size());
  if (point) {
    if (sol.minimal.empty()) return out;
    *point = combine(base, sol.minimal[0]);
    out.comps.push_back({proj(*point), {}});
    return out;
  }
  std::vector<IntVec> periods;
  for (auto& h : sol.hilbert) periods.push_back(proj(combine(IntVec(D, 0), h)));
  for (auto& f : free) periods.push_back(proj(f));
  for (auto& m : sol.minimal) out.comps.push_back({proj(combine(base, m)), periods});
  simplify(out);
  return out;
}

SemilinearSet annotated_image(const CounterMachine& m, int marks) {
  Abstraction A = abstract_ncm(m);
  int L = A.letters;
  VecNFA v = annotate(A.nfa, L, marks);
  SemilinearSet img = path_image(v);
  std::vector<int> keep;
  for (int s = 0; s < L; ++s) keep.push_back(s);
  for (int d = A.nfa.dim; d < v.dim; ++d) keep.push_back(d);
  SemilinearSet out;
  out.dim = static_cast<int>(keep.size());
  for (auto& c : img.comps) {
    auto rows = abstraction_rows(A, m, c.base);
    sl_add(out, solve_joint({&c}, rows, keep));
  }
  simplify(out);
  return out;
}

SemilinearSet ncm_parikh(const CounterMachine& m) {
  std::vector<int> keep;
  for (int s = 0; s < m.alphabet.size(); ++s) keep.push_back(s);
  return project(annotated_image(m, 0), keep);
}

SemilinearSet ncm_length_set(const CounterMachine& m) {
  return project(annotated_image(m, 0), {m.alphabet.size()});
}

EmptinessResult ncm_emptiness(const CounterMachine& m) {
  Abstraction A = abstract_ncm(m);
  SemilinearSet img = path_image(A.nfa);
  EmptinessResult r;
  for (auto& c : img.comps) {
    IntVec pt;
    auto rows = abstraction_rows(A, m, c.base);
    std::vector<int> keep;
    for (int d = 0; d < A.nfa.dim; ++d) keep.push_back(d);
    if (solve_joint({&c}, rows, keep, &pt).empty()) continue;
    r.empty = false;
    r.parikh.assign(pt.begin(), pt.begin() + A.letters);
    long moves = 0;
    for (auto& row : A.mag)
      for (int d : row) moves += pt[d];
    RunCaps caps;
    caps.max_counter = moves + 1;
    caps.max_eps_chain = 1000000;
    // the witness is the first word in canonical order with this Parikh vector
    IntVec left = r.parikh;
    Word w;
    long len = 0;
    for (long x : left) len += x;
    std::function<bool()> dfs = [&]() {
      if (static_cast<long>(w.size()) == len) {
        try {
          return accepts(m, w, caps);
        } catch (const CapExceeded&) {
          return false;
        }
      }
      for (int s = 0; s < A.letters; ++s) {
        if (!left[s]) continue;
        --left[s];
        w.push_back(s);
        if (dfs()) return true;
        w.pop_back();
        ++left[s];
      }
      return false;
    };
    if (!dfs()) throw Error("internal: no word realizes the emptiness certificate");
    r.witness = w;
    return r;
  }
  return r;
}

}  // namespace countreg
