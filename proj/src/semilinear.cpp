#include "countreg/semilinear.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace countreg {

namespace {

using Rational = boost::multiprecision::cpp_rational;

bool is_zero(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](long x) { return x == 0; });
}

struct MemberSearch {
  const std::vector<IntVec>& periods;
  std::set<std::pair<size_t, IntVec>> failed;

  bool run(size_t i, const IntVec& rem) {
    if (is_zero(rem)) return true;
    if (i == periods.size()) return false;
    if (failed.count({i, rem})) return false;
    const IntVec& p = periods[i];
    long most = -1;
    for (size_t d = 0; d < p.size(); ++d)
      if (p[d] > 0) most = most < 0 ? rem[d] / p[d] : std::min(most, rem[d] / p[d]);
    if (most < 0) most = 0;
    for (long m = most; m >= 0; --m) {
      IntVec r = rem;
      for (size_t d = 0; d < p.size(); ++d) r[d] -= m * p[d];
      if (run(i + 1, r)) return true;
    }
    failed.insert({i, rem});
    return false;
  }
};

bool in_monoid(const IntVec& v, const std::vector<IntVec>& periods) {
  for (long x : v)
    if (x < 0) return false;
  MemberSearch s{periods, {}};
  return s.run(0, v);
}

void tidy_periods(LinearSet& ls) {
  auto& P = ls.periods;
  P.erase(std::remove_if(P.begin(), P.end(), is_zero), P.end());
  std::sort(P.begin(), P.end());
  P.erase(std::unique(P.begin(), P.end()), P.end());
  // a period generated by the others is redundant; test larger ones first
  std::vector<IntVec> order = P;
  std::sort(order.begin(), order.end(), [](const IntVec& a, const IntVec& b) {
    long sa = 0, sb = 0;
    for (long x : a) sa += x;
    for (long x : b) sb += x;
    return sa != sb ? sa > sb : a > b;
  });
  for (auto& p : order) {
    std::vector<IntVec> rest;
    for (auto& q : P)
      if (q != p) rest.push_back(q);
    if (rest.size() != P.size() && in_monoid(p, rest)) P = rest;
  }
}

bool subsumed(const LinearSet& a, const LinearSet& b) {
  if (!linear_member(a.base, b)) return false;
  for (auto& p : a.periods)
    if (!in_monoid(p, b.periods)) return false;
  return true;
}

IntVec parse_vec(const std::string& s, int line) {
  IntVec v;
  for (auto& part : detail::split_on(s, ',')) {
    auto t = detail::split_ws(part);
    if (t.size() != 1) throw ParseError("bad vector '" + s + "'", line);
    long x = detail::parse_long(t[0], line);
    if (x < 0) throw ParseError("vector entries must be non-negative", line);
    v.push_back(x);
  }
  return v;
}

std::string vec_text(const IntVec& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

bool linear_member(const IntVec& v, const LinearSet& ls) {
  if (v.size() != ls.base.size()) throw Error("dimension mismatch in membership test");
  IntVec rem(v.size());
  for (size_t d = 0; d < v.size(); ++d) rem[d] = v[d] - ls.base[d];
  return in_monoid(rem, ls.periods);
}

bool semilinear_member(const IntVec& v, const SemilinearSet& s) {
  if (static_cast<int>(v.size()) != s.dim) throw Error("dimension mismatch in membership test");
  for (auto& c : s.comps)
    if (linear_member(v, c)) return true;
  return false;
}

void simplify(SemilinearSet& s) {
  for (auto& c : s.comps) tidy_periods(c);
  auto by_key = [](const LinearSet& a, const LinearSet& b) {
    return std::tie(a.base, a.periods) < std::tie(b.base, b.periods);
  };
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(s.comps.begin(), s.comps.end(), by_key);
    s.comps.erase(std::unique(s.comps.begin(), s.comps.end()), s.comps.end());
    for (size_t i = 0; i < s.comps.size() && !changed; ++i)
      for (size_t j = 0; j < s.comps.size() && !changed; ++j) {
        if (i == j) continue;
        if (subsumed(s.comps[i], s.comps[j])) {
          s.comps.erase(s.comps.begin() + i);
          changed = true;
        }
      }
    // <b;P> u <b+d;P+{d}> = <b;P+{d}>
    for (size_t i = 0; i < s.comps.size() && !changed; ++i)
      for (size_t j = 0; j < s.comps.size() && !changed; ++j) {
        if (i == j) continue;
        auto& a = s.comps[i];
        auto& b = s.comps[j];
        if (b.periods.size() != a.periods.size() + 1) continue;
        IntVec d(a.dim());
        bool ok = true;
        for (int k = 0; k < a.dim(); ++k) {
          d[k] = b.base[k] - a.base[k];
          if (d[k] < 0) ok = false;
        }
        if (!ok || is_zero(d)) continue;
        auto with = a.periods;
        with.push_back(d);
        std::sort(with.begin(), with.end());
        if (with != b.periods) continue;
        LinearSet merged{a.base, with};
        tidy_periods(merged);
        s.comps[i] = merged;
        s.comps.erase(s.comps.begin() + j);
        changed = true;
      }
  }
}

SemilinearSet project(const SemilinearSet& s, const std::vector<int>& keep) {
  SemilinearSet r;
  r.dim = static_cast<int>(keep.size());
  for (auto& c : s.comps) {
    LinearSet l;
    for (int k : keep) l.base.push_back(c.base.at(k));
    for (auto& p : c.periods) {
      IntVec q;
      for (int k : keep) q.push_back(p.at(k));
      l.periods.push_back(q);
    }
    r.comps.push_back(l);
  }
  simplify(r);
  return r;
}

std::vector<IntVec> members_up_to(const SemilinearSet& s, const IntVec& weight, long max_weight) {
  auto wt = [&](const IntVec& v) {
    long x = 0;
    for (size_t i = 0; i < v.size(); ++i) x += weight.at(i) * v[i];
    return x;
  };
  std::set<IntVec> out;
  for (auto& c : s.comps) {
    long bw = wt(c.base);
    if (bw > max_weight) continue;
    std::vector<long> pw;
    for (auto& p : c.periods) {
      pw.push_back(wt(p));
      if (pw.back() <= 0) throw Error("members_up_to: period without positive weight");
    }
    IntVec cur = c.base;
    std::function<void(size_t, long)> rec = [&](size_t i, long w) {
      if (i == c.periods.size()) {
        out.insert(cur);
        return;
      }
      rec(i + 1, w);
      long m = 0;
      while (w + pw[i] <= max_weight) {
        w += pw[i];
        ++m;
        for (size_t d = 0; d < cur.size(); ++d) cur[d] += c.periods[i][d];
        rec(i + 1, w);
      }
      for (size_t d = 0; d < cur.size(); ++d) cur[d] -= m * c.periods[i][d];
    };
    rec(0, bw);
  }
  return {out.begin(), out.end()};
}

bool verify_simple(const LinearSet& ls) {
  int rows = static_cast<int>(ls.periods.size());
  if (rows == 0) return true;
  int cols = ls.dim();
  std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m[i][j] = ls.periods[i][j];
  int rank = 0;
  for (int j = 0; j < cols && rank < rows; ++j) {
    int piv = -1;
    for (int i = rank; i < rows; ++i)
      if (m[i][j] != 0) piv = i;
    if (piv < 0) continue;
    std::swap(m[piv], m[rank]);
    for (int i = 0; i < rows; ++i) {
      if (i == rank || m[i][j] == 0) continue;
      Rational f = m[i][j] / m[rank][j];
      for (int k = j; k < cols; ++k) m[i][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank == rows;
}

bool verify_disjoint(const LinearSet& a, const LinearSet& b) {
  if (a.dim() != b.dim()) throw Error("dimension mismatch in disjointness test");
  LinearSystem sys;
  int na = static_cast<int>(a.periods.size()), nb = static_cast<int>(b.periods.size());
  sys.vars = na + nb;
  for (int d = 0; d < a.dim(); ++d) {
    IntVec row(sys.vars);
    for (int i = 0; i < na; ++i) row[i] = a.periods[i][d];
    for (int i = 0; i < nb; ++i) row[na + i] = -b.periods[i][d];
    sys.add(row, Rel::Eq, b.base[d] - a.base[d]);
  }
  return solve_nat(sys, true).minimal.empty();
}

SemilinearSet parse_semilinear(const std::string& text) {
  SemilinearSet s;
  bool have_dim = false;
  for (auto& ln : detail::tokenize_lines(text)) {
    auto& t = ln.tokens;
    if (t[0] == "semilinear") {
      if (t.size() != 3 || t[1] != "dim") throw ParseError("expected: semilinear dim <m>", ln.number);
      s.dim = static_cast<int>(detail::parse_long(t[2], ln.number));
      if (s.dim < 1) throw ParseError("dimension must be positive", ln.number);
      have_dim = true;
    } else if (t[0] == "linear") {
      if (!have_dim) throw ParseError("linear before semilinear header", ln.number);
      if (t.size() < 3 || t[1] != "base") throw ParseError("expected: linear base <v> [periods <v> | ...]", ln.number);
      LinearSet l;
      l.base = parse_vec(t[2], ln.number);
      if (t.size() > 3) {
        if (t[3] != "periods") throw ParseError("expected 'periods'", ln.number);
        std::string rest;
        for (size_t i = 4; i < t.size(); ++i) rest += t[i] + " ";
        if (!detail::split_ws(rest).empty())
          for (auto& part : detail::split_on(rest, '|')) l.periods.push_back(parse_vec(part, ln.number));
      }
      if (l.dim() != s.dim) throw ParseError("base has wrong dimension", ln.number);
      for (auto& p : l.periods)
        if (static_cast<int>(p.size()) != s.dim) throw ParseError("period has wrong dimension", ln.number);
      s.comps.push_back(l);
    } else {
      throw ParseError("unknown directive '" + t[0] + "'", ln.number);
    }
  }
  if (!have_dim) throw ParseError("missing semilinear header");
  return s;
}

std::string semilinear_to_text(const SemilinearSet& s) {
  std::ostringstream o;
  o << "semilinear dim " << s.dim << "\n";
  for (auto& c : s.comps) {
    o << "linear base " << vec_text(c.base);
    if (!c.periods.empty()) {
      o << " periods";
      for (size_t i = 0; i < c.periods.size(); ++i) o << (i ? " | " : " ") << vec_text(c.periods[i]);
    }
    o << "\n";
  }
  return o.str();
}

BoundedShape parse_shape(const std::string& text, const Alphabet& sigma) {
  BoundedShape sh;
  auto lines = detail::tokenize_lines(text);
  if (lines.size() != 1 || lines[0].tokens[0] != "shape" || lines[0].tokens.size() < 2)
    throw ParseError("expected one line: shape <u1> <u2> ...");
  for (size_t i = 1; i < lines[0].tokens.size(); ++i) {
    Word w;
    try {
      w = word_from_string(lines[0].tokens[i], sigma);
    } catch (const Error& e) {
      throw ParseError(e.what(), lines[0].number);
    }
    if (w.empty()) throw ParseError("shape words must be non-empty", lines[0].number);
    sh.words.push_back(w);
  }
  return sh;
}

std::string shape_to_text(const BoundedShape& shape, const Alphabet& sigma) {
  std::string s = "shape";
  for (auto& w : shape.words) s += " " + word_to_string(w, sigma);
  return s + "\n";
}

Word phi_apply(const IntVec& tuple, const BoundedShape& shape) {
  if (tuple.size() != shape.words.size()) throw Error("tuple dimension differs from shape length");
  Word w;
  for (size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] < 0) throw Error("tuple entries must be non-negative");
    for (long r = 0; r < tuple[i]; ++r) w.insert(w.end(), shape.words[i].begin(), shape.words[i].end());
  }
  return w;
}

InjectivityReport verify_injective(const SemilinearSet& s, const BoundedShape& shape, int N) {
  if (static_cast<size_t>(s.dim) != shape.words.size()) throw Error("set dimension differs from shape length");
  IntVec weight;
  for (auto& w : shape.words) weight.push_back(static_cast<long>(w.size()));
  InjectivityReport r;
  r.horizon = N;
  std::map<Word, IntVec> seen;
  for (auto& v : members_up_to(s, weight, N)) {
    auto [it, fresh] = seen.emplace(phi_apply(v, shape), v);
    if (!fresh) {
      r.injective = false;
      r.first = it->second;
      r.second = v;
      return r;
    }
  }
  return r;
}

}  // namespace countreg
