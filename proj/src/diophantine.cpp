#include "countreg/diophantine.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "countreg/errors.hpp"

namespace countreg {

void LinearSystem::add(IntVec row, Rel r, long b) {
  row.resize(vars, 0);
  coeffs.push_back(std::move(row));
  rel.push_back(r);
  rhs.push_back(b);
}

namespace {

bool dominates(const IntVec& y, const IntVec& b) {
  for (size_t i = 0; i < y.size(); ++i)
    if (y[i] < b[i]) return false;
  return true;
}

struct Budget {
  long left;
  void spend(long n = 1) {
    left -= n;
    if (left < 0) throw MachineTooLarge("linear system too large: candidate budget exhausted");
  }
};

// minimal nonzero y >= 0 with sum c_i y_i = 0 (all c_i nonzero), by completion
std::vector<IntVec> single_row_basis(const IntVec& c, Budget& budget) {
  int g = static_cast<int>(c.size());
  std::vector<IntVec> found;
  std::map<IntVec, long> frontier;
  for (int j = 0; j < g; ++j) {
    IntVec y(g, 0);
    y[j] = 1;
    frontier.emplace(y, c[j]);
  }
  while (!frontier.empty()) {
    std::map<IntVec, long> next;
    for (auto& [y, v] : frontier) {
      for (int j = 0; j < g; ++j) {
        if (v * c[j] >= 0) continue;
        budget.spend();
        IntVec z = y;
        ++z[j];
        bool pruned = false;
        for (auto& b : found)
          if (dominates(z, b)) {
            pruned = true;
            break;
          }
        if (pruned) continue;
        long w = v + c[j];
        if (w == 0) {
          found.push_back(z);
          continue;
        }
        next.emplace(std::move(z), w);
      }
    }
    // found solutions of this level may dominate candidates generated before them
    for (auto it = next.begin(); it != next.end();) {
      bool dom = false;
      for (auto& b : found)
        if (dominates(it->first, b)) {
          dom = true;
          break;
        }
      it = dom ? next.erase(it) : std::next(it);
    }
    frontier = std::move(next);
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  return found;
}

// Hilbert basis of [A | -slack | -b] x = 0, one row at a time: the current
// generators are recombined by the basis of the next single equation over
// them. Generators with the homogenizing coordinate above 1 never contribute
// to a solution and are dropped.
NatSolutions solve_rowwise(const LinearSystem& sys, Budget& budget) {
  int n = sys.vars;
  int rows = static_cast<int>(sys.coeffs.size());
  std::vector<int> slack_row;
  for (int r = 0; r < rows; ++r)
    if (sys.rel[r] == Rel::Ge) slack_row.push_back(r);
  int cols = n + static_cast<int>(slack_row.size()) + 1;
  int x0 = cols - 1;
  std::vector<IntVec> mat(rows, IntVec(cols, 0));
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < n; ++j) mat[r][j] = sys.coeffs[r][j];
    mat[r][x0] = -sys.rhs[r];
  }
  for (size_t s = 0; s < slack_row.size(); ++s) mat[slack_row[s]][n + s] = -1;

  std::vector<IntVec> gens;
  for (int j = 0; j < cols; ++j) {
    IntVec e(cols, 0);
    e[j] = 1;
    gens.push_back(e);
  }
  std::vector<char> done(rows, 0);
  for (int step = 0; step < rows; ++step) {
    // next row: the one with the fewest sign-opposed generator pairs
    int best = -1;
    long best_cost = -1;
    std::vector<long> best_vals;
    for (int r = 0; r < rows; ++r) {
      if (done[r]) continue;
      std::vector<long> vals;
      long pos = 0, neg = 0;
      for (auto& gv : gens) {
        long v = 0;
        for (int j = 0; j < cols; ++j) v += mat[r][j] * gv[j];
        vals.push_back(v);
        pos += v > 0;
        neg += v < 0;
      }
      long cost = pos * neg + (pos == 0 || neg == 0 ? 0 : 1);
      if (best < 0 || cost < best_cost) {
        best = r;
        best_cost = cost;
        best_vals = vals;
      }
    }
    done[best] = 1;
    std::vector<IntVec> next;
    std::vector<int> active;
    IntVec coef;
    for (size_t i = 0; i < gens.size(); ++i) {
      if (best_vals[i] == 0) next.push_back(gens[i]);
      else {
        active.push_back(static_cast<int>(i));
        coef.push_back(best_vals[i]);
      }
    }
    if (!active.empty())
      for (auto& y : single_row_basis(coef, budget)) {
        IntVec x(cols, 0);
        for (size_t a = 0; a < active.size(); ++a)
          if (y[a])
            for (int j = 0; j < cols; ++j) x[j] += y[a] * gens[active[a]][j];
        if (x[x0] <= 1) next.push_back(std::move(x));
      }
    // keep the minimal elements
    std::sort(next.begin(), next.end(), [](const IntVec& a, const IntVec& b) {
      long sa = 0, sb = 0;
      for (long v : a) sa += v;
      for (long v : b) sb += v;
      return sa != sb ? sa < sb : a < b;
    });
    next.erase(std::unique(next.begin(), next.end()), next.end());
    gens.clear();
    for (auto& x : next) {
      bool dom = false;
      for (auto& g : gens)
        if (dominates(x, g)) {
          dom = true;
          break;
        }
      if (!dom) gens.push_back(x);
    }
    budget.spend(static_cast<long>(gens.size()));
  }

  NatSolutions out;
  std::set<IntVec> mins, hb;
  for (auto& x : gens) {
    IntVec v(x.begin(), x.begin() + n);
    if (x[x0] == 1) mins.insert(v);
    else if (std::any_of(v.begin(), v.end(), [](long e) { return e != 0; })) hb.insert(v);
  }
  out.minimal.assign(mins.begin(), mins.end());
  out.hilbert.assign(hb.begin(), hb.end());
  return out;
}

// Contejean-Devie completion over the homogenized system [A | -slack | -b],
// with the homogenizing column capped at 1
NatSolutions solve_whole(const LinearSystem& sys, bool first_only, long budget) {
  int n = sys.vars;
  int rows = static_cast<int>(sys.coeffs.size());
  std::vector<int> slack_row;
  for (int r = 0; r < rows; ++r)
    if (sys.rel[r] == Rel::Ge) slack_row.push_back(r);
  int cols = n + static_cast<int>(slack_row.size()) + 1;
  int x0 = cols - 1;
  std::vector<IntVec> col(cols, IntVec(rows, 0));
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < n; ++j) col[j][r] = sys.coeffs[r][j];
    col[x0][r] = -sys.rhs[r];
  }
  for (size_t s = 0; s < slack_row.size(); ++s) col[n + s][slack_row[s]] = -1;

  NatSolutions out;
  std::vector<IntVec> found;
  std::set<std::pair<IntVec, IntVec>> frontier;
  for (int j = 0; j < cols; ++j) {
    IntVec x(cols, 0);
    x[j] = 1;
    frontier.emplace(x, col[j]);
  }
  long generated = cols;
  auto record = [&](const IntVec& x) {
    found.push_back(x);
    IntVec v(x.begin(), x.begin() + n);
    if (x[x0] == 1) out.minimal.push_back(v);
    else out.hilbert.push_back(v);
  };
  while (!frontier.empty()) {
    std::vector<const std::pair<IntVec, IntVec>*> open;
    for (auto& c : frontier) {
      bool zero = true;
      for (long v : c.second)
        if (v != 0) zero = false;
      if (zero) {
        record(c.first);
        if (first_only && c.first[x0] == 1) return out;
      } else {
        open.push_back(&c);
      }
    }
    std::set<std::pair<IntVec, IntVec>> next;
    for (auto* c : open) {
      const IntVec& x = c->first;
      const IntVec& ax = c->second;
      for (int j = 0; j < cols; ++j) {
        if (j == x0 && x[x0] >= 1) continue;
        long dot = 0;
        for (int r = 0; r < rows; ++r) dot += ax[r] * col[j][r];
        if (dot >= 0) continue;
        IntVec y = x;
        ++y[j];
        bool pruned = false;
        for (auto& b : found)
          if (dominates(y, b)) {
            pruned = true;
            break;
          }
        if (pruned) continue;
        IntVec ay = ax;
        for (int r = 0; r < rows; ++r) ay[r] += col[j][r];
        next.emplace(std::move(y), std::move(ay));
        if (++generated > budget)
          throw MachineTooLarge("linear system too large: candidate budget exhausted");
      }
    }
    frontier = std::move(next);
  }
  // slack-only homogeneous solutions project to zero
  std::set<IntVec> seen;
  std::vector<IntVec> hb;
  for (auto& h : out.hilbert) {
    bool nz = false;
    for (long v : h)
      if (v) nz = true;
    if (nz && seen.insert(h).second) hb.push_back(h);
  }
  out.hilbert = hb;
  std::set<IntVec> ms(out.minimal.begin(), out.minimal.end());
  out.minimal.assign(ms.begin(), ms.end());
  return out;
}

// The row-wise completion is fast when the rows are sparse and the solution
// monoid is small; the whole-system completion copes better with dense rows
// whose intermediate single-row bases explode. Try the first on a small
// budget, then the second.
NatSolutions solve_distinct(const LinearSystem& sys, bool first_only, long budget) {
  try {
    Budget b{std::min(budget, 50000L)};
    NatSolutions out = solve_rowwise(sys, b);
    if (first_only && out.minimal.size() > 1) out.minimal.resize(1);
    return out;
  } catch (const MachineTooLarge&) {
  }
  return solve_whole(sys, first_only, budget);
}

// every way of distributing y[g] units over the members of group g
void splits(const IntVec& y, const std::vector<std::vector<int>>& groups, int vars, long& budget,
            std::vector<IntVec>& out) {
  IntVec x(vars, 0);
  std::function<void(size_t, size_t, long)> rec = [&](size_t g, size_t m, long left) {
    if (g == groups.size()) {
      if (--budget < 0) throw MachineTooLarge("linear system too large: too many split solutions");
      out.push_back(x);
      return;
    }
    const auto& mem = groups[g];
    if (m + 1 == mem.size()) {
      x[mem[m]] = left;
      rec(g + 1, 0, g + 1 < groups.size() ? y[g + 1] : 0);
      x[mem[m]] = 0;
      return;
    }
    for (long v = left; v >= 0; --v) {
      x[mem[m]] = v;
      rec(g, m + 1, left - v);
    }
    x[mem[m]] = 0;
  };
  if (groups.empty()) {
    out.push_back(x);
    return;
  }
  rec(0, 0, y[0]);
}

}  // namespace

// Columns equal in every row are interchangeable: solve over the distinct
// columns and split each solution over the copies.
NatSolutions solve_nat(const LinearSystem& sys, bool first_only, long budget) {
  if (budget < 0) budget = 4000000;
  int rows = static_cast<int>(sys.coeffs.size());
  std::map<IntVec, int> index;
  std::vector<std::vector<int>> groups;
  for (int j = 0; j < sys.vars; ++j) {
    IntVec c(rows);
    for (int r = 0; r < rows; ++r) c[r] = sys.coeffs[r][j];
    auto [it, fresh] = index.emplace(c, static_cast<int>(groups.size()));
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(j);
  }
  if (static_cast<int>(groups.size()) == sys.vars) return solve_distinct(sys, first_only, budget);
  LinearSystem red;
  red.vars = static_cast<int>(groups.size());
  for (int r = 0; r < rows; ++r) {
    IntVec row(red.vars);
    for (int g = 0; g < red.vars; ++g) row[g] = sys.coeffs[r][groups[g][0]];
    red.add(row, sys.rel[r], sys.rhs[r]);
  }
  NatSolutions s = solve_distinct(red, first_only, budget);
  NatSolutions out;
  long left = budget;
  for (auto& m : s.minimal) {
    splits(m, groups, sys.vars, left, out.minimal);
    if (first_only) {
      out.minimal.resize(1);
      break;
    }
  }
  for (auto& h : s.hilbert) splits(h, groups, sys.vars, left, out.hilbert);
  return out;
}

}  // namespace countreg
