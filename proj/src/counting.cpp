#include "countreg/counting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace countreg {

using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------- polynomials

void Poly::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<BigInt> r(std::max(a.c.size(), b.c.size()));
  for (size_t i = 0; i < r.size(); ++i) r[i] = a.at(static_cast<int>(i)) + b.at(static_cast<int>(i));
  return Poly(std::move(r));
}

Poly operator-(const Poly& a, const Poly& b) {
  std::vector<BigInt> r(std::max(a.c.size(), b.c.size()));
  for (size_t i = 0; i < r.size(); ++i) r[i] = a.at(static_cast<int>(i)) - b.at(static_cast<int>(i));
  return Poly(std::move(r));
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.zero() || b.zero()) return Poly();
  std::vector<BigInt> r(a.c.size() + b.c.size() - 1);
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
  }
  return Poly(std::move(r));
}

static Poly scale(const Poly& a, const BigInt& k) {
  std::vector<BigInt> r = a.c;
  for (auto& x : r) x *= k;
  return Poly(std::move(r));
}

Poly exact_div(const Poly& a, const Poly& b) {
  if (b.zero()) throw Error("polynomial division by zero");
  if (a.zero()) return Poly();
  std::vector<BigInt> rem = a.c;
  int db = b.degree();
  int dq = a.degree() - db;
  if (dq < 0) throw Error("inexact polynomial division");
  std::vector<BigInt> q(dq + 1);
  const BigInt& lb = b.c.back();
  for (int i = dq; i >= 0; --i) {
    const BigInt& top = rem[i + db];
    if (top == 0) continue;
    if (top % lb != 0) throw Error("inexact polynomial division");
    BigInt f = top / lb;
    q[i] = f;
    for (int j = 0; j <= db; ++j) rem[i + j] -= f * b.c[j];
  }
  for (auto& x : rem)
    if (x != 0) throw Error("inexact polynomial division");
  return Poly(std::move(q));
}

BigInt content(const Poly& p) {
  BigInt g = 0;
  for (auto& x : p.c) g = boost::multiprecision::gcd(g, x);
  return g;
}

Poly primitive_part(const Poly& p) {
  if (p.zero()) return p;
  BigInt g = content(p);
  if (p.c.back() < 0) g = -g;
  std::vector<BigInt> r = p.c;
  for (auto& x : r) x /= g;
  return Poly(std::move(r));
}

static Poly pseudo_rem(Poly a, const Poly& b) {
  const BigInt& lb = b.c.back();
  while (!a.zero() && a.degree() >= b.degree()) {
    int shift = a.degree() - b.degree();
    BigInt la = a.c.back();
    std::vector<BigInt> sb(shift, 0);
    sb.insert(sb.end(), b.c.begin(), b.c.end());
    a = scale(a, lb) - scale(Poly(sb), la);
    a = primitive_part(a);
  }
  return a;
}

Poly poly_gcd(const Poly& a0, const Poly& b0) {
  Poly a = primitive_part(a0), b = primitive_part(b0);
  if (a.zero()) return b;
  if (b.zero()) return a;
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.zero()) {
    Poly r = pseudo_rem(a, b);
    a = b;
    b = r;
  }
  return primitive_part(a);
}

Poly derivative(const Poly& p) {
  std::vector<BigInt> r;
  for (size_t i = 1; i < p.c.size(); ++i) r.push_back(p.c[i] * static_cast<long>(i));
  return Poly(std::move(r));
}

// ---------------------------------------------------------------- counting

static void require_deterministic(const FiniteAutomaton& a, const char* what) {
  if (!a.structurally_deterministic())
    throw PreconditionError(std::string(what) + ": automaton must be deterministic");
}

CountingSequence counting_sequence(const FiniteAutomaton& dfa, int N) {
  require_deterministic(dfa, "counting_sequence");
  CountingSequence s;
  s.source = "dfa";
  if (N < 0) return s;
  int n = dfa.num_states();
  std::vector<BigInt> cur(n, 0), next(n);
  cur[dfa.initial[0]] = 1;
  for (int len = 0; len <= N; ++len) {
    BigInt total = 0;
    for (int q : dfa.accepting) total += cur[q];
    s.terms.push_back(total);
    if (len == N) break;
    std::fill(next.begin(), next.end(), BigInt(0));
    for (auto& t : dfa.trans)
      if (cur[t.from] != 0) next[t.to] += cur[t.from];
    std::swap(cur, next);
  }
  return s;
}

BigInt count_words(const FiniteAutomaton& dfa, int n) {
  if (n < 0) return 0;
  return counting_sequence(dfa, n).terms.back();
}

int counting_equal_horizon(const FiniteAutomaton& a, const FiniteAutomaton& b) {
  return a.num_states() + b.num_states();
}

bool counting_equal(const FiniteAutomaton& a, const FiniteAutomaton& b) {
  require_deterministic(a, "counting_equal");
  require_deterministic(b, "counting_equal");
  int h = counting_equal_horizon(a, b);
  return counting_sequence(a, h - 1).terms == counting_sequence(b, h - 1).terms;
}

// ---------------------------------------------------------------- generating function

static Poly bareiss_det(std::vector<std::vector<Poly>> m) {
  int n = static_cast<int>(m.size());
  if (n == 0) return Poly::constant(1);
  int sign = 1;
  Poly prev = Poly::constant(1);
  for (int k = 0; k + 1 < n; ++k) {
    if (m[k][k].zero()) {
      int r = k + 1;
      while (r < n && m[r][k].zero()) ++r;
      if (r == n) return Poly();
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) m[i][j] = exact_div(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
      m[i][k] = Poly();
    }
    prev = m[k][k];
  }
  Poly d = m[n - 1][n - 1];
  return sign < 0 ? scale(d, -1) : d;
}

// states that are reachable and can reach acceptance; they alone carry counts
static std::vector<int> useful_states(const FiniteAutomaton& a) {
  int n = a.num_states();
  std::vector<std::vector<int>> out(n), in(n);
  for (auto& t : a.trans) {
    out[t.from].push_back(t.to);
    in[t.to].push_back(t.from);
  }
  auto sweep = [n](const std::vector<int>& seeds, const std::vector<std::vector<int>>& g) {
    std::vector<char> seen(n, 0);
    std::vector<int> st;
    for (int s : seeds)
      if (!seen[s]) {
        seen[s] = 1;
        st.push_back(s);
      }
    while (!st.empty()) {
      int q = st.back();
      st.pop_back();
      for (int r : g[q])
        if (!seen[r]) {
          seen[r] = 1;
          st.push_back(r);
        }
    }
    return seen;
  };
  auto fwd = sweep(a.initial, out), bwd = sweep(a.accepting, in);
  std::vector<int> keep;
  for (int q = 0; q < n; ++q)
    if (fwd[q] && bwd[q]) keep.push_back(q);
  return keep;
}

RationalGF reduce_gf(const RationalGF& gf) {
  if (gf.den.zero() || gf.den.at(0) == 0) throw Error("generating function denominator vanishes at z = 0");
  RationalGF r = gf;
  if (r.num.zero()) return {Poly(), Poly::constant(1)};
  Poly g = poly_gcd(r.num, r.den);
  if (g.degree() > 0) {
    r.num = exact_div(r.num, g);
    r.den = exact_div(r.den, g);
  }
  // remove the common integer content, then fix the sign so den(0) > 0
  BigInt cg = boost::multiprecision::gcd(content(r.num), content(r.den));
  if (cg > 1) {
    r.num = exact_div(r.num, Poly::constant(cg));
    r.den = exact_div(r.den, Poly::constant(cg));
  }
  if (r.den.at(0) < 0) {
    r.num = scale(r.num, -1);
    r.den = scale(r.den, -1);
  }
  return r;
}

RationalGF generating_function(const FiniteAutomaton& dfa) {
  require_deterministic(dfa, "generating_function");
  auto keep = useful_states(dfa);
  int n = static_cast<int>(keep.size());
  if (n == 0) return {Poly(), Poly::constant(1)};
  std::vector<int> pos(dfa.num_states(), -1);
  for (int i = 0; i < n; ++i) pos[keep[i]] = i;
  std::vector<std::vector<long>> mult(n, std::vector<long>(n, 0));
  for (auto& t : dfa.trans)
    if (pos[t.from] >= 0 && pos[t.to] >= 0) ++mult[pos[t.from]][pos[t.to]];
  std::vector<std::vector<Poly>> a(n, std::vector<Poly>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<BigInt> c = {BigInt(i == j ? 1 : 0), BigInt(-mult[i][j])};
      a[i][j] = Poly(c);
    }
  std::vector<int> u(n, 0), v(n, 0);
  for (int q : dfa.initial)
    if (pos[q] >= 0) u[pos[q]] = 1;
  for (int q : dfa.accepting)
    if (pos[q] >= 0) v[pos[q]] = 1;
  Poly q = bareiss_det(a);
  // u^T adj(A) v = det(A + v u^T) - det(A)
  auto b = a;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (v[i] && u[j]) b[i][j] = b[i][j] + Poly::constant(1);
  Poly p = bareiss_det(b) - q;
  return reduce_gf({p, q});
}

std::vector<BigInt> gf_series(const RationalGF& gf, int N) {
  if (gf.den.zero() || gf.den.at(0) == 0) throw Error("generating function denominator vanishes at z = 0");
  std::vector<BigInt> s;
  BigInt d0 = gf.den.at(0);
  for (int n = 0; n <= N; ++n) {
    BigInt v = gf.num.at(n);
    for (int i = 1; i <= std::min(n, gf.den.degree()); ++i) v -= gf.den.c[i] * s[n - i];
    if (v % d0 != 0) throw Error("series has non-integer coefficients");
    s.push_back(v / d0);
  }
  return s;
}

static std::string poly_to_string(const Poly& p) {
  if (p.zero()) return "0";
  std::ostringstream o;
  bool first = true;
  for (int i = 0; i <= p.degree(); ++i) {
    BigInt c = p.c[i];
    if (c == 0) continue;
    BigInt mag = c < 0 ? BigInt(-c) : c;
    if (first) {
      if (c < 0) o << "-";
    } else {
      o << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0 || mag != 1) o << mag;
    if (i >= 1) o << "z";
    if (i >= 2) o << "^" << i;
  }
  return o.str();
}

std::string gf_to_string(const RationalGF& gf) {
  return "gf: (" + poly_to_string(gf.num) + ") / (" + poly_to_string(gf.den) + ")";
}

namespace {

class GfParser {
 public:
  explicit GfParser(std::string s) : s_(std::move(s)) {}

  RationalGF run() {
    skip();
    if (s_.compare(pos_, 3, "gf:") == 0) pos_ += 3;
    Poly num = expr();
    Poly den = Poly::constant(1);
    skip();
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      den = expr();
    }
    skip();
    if (pos_ < s_.size()) fail();
    if (den.zero()) throw ParseError("zero denominator");
    return {num, den};
  }

 private:
  [[noreturn]] void fail() {
    throw ParseError(std::string("unexpected '") + s_[pos_] + "' in generating function", 0,
                     static_cast<int>(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }
  // a parenthesized polynomial or a bare polynomial
  Poly expr() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      Poly p = poly();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') throw ParseError("missing ')' in generating function");
      ++pos_;
      skip();
      if (pos_ < s_.size() && s_[pos_] == '^') {
        // a power of a parenthesized group is only rational for an integer exponent
        ++pos_;
        skip();
        size_t st = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (st == pos_) throw ParseError("not rational: non-integer exponent");
        skip();
        if (pos_ < s_.size() && (s_[pos_] == '/' || s_[pos_] == '.') && pos_ + 1 < s_.size() &&
            std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))
          throw ParseError("not rational: fractional exponent");
        long e = std::stol(s_.substr(st, pos_ - st));
        Poly r = Poly::constant(1);
        for (long i = 0; i < e; ++i) r = r * p;
        return r;
      }
      return p;
    }
    return poly();
  }
  Poly poly() {
    Poly acc;
    bool any = false;
    for (;;) {
      skip();
      int sign = 1;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
        if (s_[pos_] == '-') sign = -1;
        ++pos_;
        skip();
      } else if (any) {
        break;
      }
      if (pos_ >= s_.size()) throw ParseError("unexpected end of generating function");
      BigInt coef = 1;
      bool have_coef = false;
      size_t st = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ > st) {
        coef = BigInt(s_.substr(st, pos_ - st));
        have_coef = true;
      }
      skip();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        skip();
      }
      int power = 0;
      if (pos_ < s_.size() && s_[pos_] == 'z') {
        ++pos_;
        power = 1;
        skip();
        if (pos_ < s_.size() && s_[pos_] == '^') {
          ++pos_;
          skip();
          size_t ps = pos_;
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
          if (ps == pos_) throw ParseError("not rational: non-integer exponent");
          power = std::stoi(s_.substr(ps, pos_ - ps));
        }
      } else if (!have_coef) {
        if (pos_ < s_.size()) fail();
        throw ParseError("unexpected end of generating function");
      }
      std::vector<BigInt> c(power + 1, 0);
      c[power] = coef * sign;
      acc = acc + Poly(c);
      any = true;
    }
    return acc;
  }

  std::string s_;
  size_t pos_ = 0;
};

std::string normalize_gf_text(const std::string& in) {
  std::string s;
  for (size_t i = 0; i < in.size(); ++i) {
    unsigned char c = in[i];
    if (c == '\t' || c == '\n' || c == '\r') {
      s += ' ';
      continue;
    }
    if (c < 0x80) {
      s += static_cast<char>(c);
      continue;
    }
    // a few common non-ASCII spellings: minus sign, superscripts and the radical
    std::string rest = in.substr(i);
    auto starts = [&](const char* u) { return rest.rfind(u, 0) == 0; };
    if (starts("−")) {
      s += '-';
      i += 2;
    } else if (starts("²")) {
      s += "^2";
      i += 1;
    } else if (starts("³")) {
      s += "^3";
      i += 1;
    } else if (starts("√")) {
      throw ParseError("not rational: square root");
    } else {
      throw ParseError("unsupported character in generating function");
    }
  }
  return s;
}

}  // namespace

RationalGF parse_gf(const std::string& text) {
  std::string s = normalize_gf_text(text);
  std::string lower = s;
  std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
  for (const char* bad : {"sqrt", "exp", "log", "root"})
    if (lower.find(bad) != std::string::npos) throw ParseError(std::string("not rational: contains ") + bad);
  RationalGF gf = GfParser(s).run();
  if (gf.den.at(0) == 0) throw ParseError("denominator vanishes at z = 0; no power series expansion");
  return reduce_gf(gf);
}

// ---------------------------------------------------------------- growth

namespace {

struct Scc {
  std::vector<int> comp;
  int count = 0;
};

Scc tarjan(int n, const std::vector<std::vector<int>>& adj) {
  Scc r;
  r.comp.assign(n, -1);
  std::vector<int> idx(n, -1), low(n, 0), st;
  std::vector<char> on(n, 0);
  int counter = 0;
  std::function<void(int)> dfs = [&](int v) {
    idx[v] = low[v] = counter++;
    st.push_back(v);
    on[v] = 1;
    for (int w : adj[v]) {
      if (idx[w] < 0) {
        dfs(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], idx[w]);
      }
    }
    if (low[v] == idx[v]) {
      for (;;) {
        int w = st.back();
        st.pop_back();
        on[w] = 0;
        r.comp[w] = r.count;
        if (w == v) break;
      }
      ++r.count;
    }
  };
  for (int v = 0; v < n; ++v)
    if (idx[v] < 0) dfs(v);
  return r;
}

}  // namespace

GrowthClass classify_growth(const FiniteAutomaton& input) {
  FiniteAutomaton m = trim_minimize(input.structurally_deterministic() ? input : determinize(input));
  int n = m.num_states();
  if (m.accepting.empty()) return {GrowthKind::Constant, 0};
  std::vector<std::vector<int>> adj(n);
  for (auto& t : m.trans) adj[t.from].push_back(t.to);
  Scc scc = tarjan(n, adj);
  std::vector<long> size(scc.count, 0), inner(scc.count, 0);
  for (int q = 0; q < n; ++q) ++size[scc.comp[q]];
  for (auto& t : m.trans)
    if (scc.comp[t.from] == scc.comp[t.to]) ++inner[scc.comp[t.from]];
  for (int c = 0; c < scc.count; ++c)
    if (inner[c] > size[c]) return {GrowthKind::Exponential, 0};
  // longest chain of cyclic components; Tarjan numbers components in reverse topological order
  std::vector<int> best(scc.count, 0);
  std::vector<std::vector<int>> cadj(scc.count);
  for (auto& t : m.trans)
    if (scc.comp[t.from] != scc.comp[t.to]) cadj[scc.comp[t.from]].push_back(scc.comp[t.to]);
  for (int c = 0; c < scc.count; ++c) {
    int b = 0;
    for (int d : cadj[c]) b = std::max(b, best[d]);
    best[c] = b + (inner[c] > 0 ? 1 : 0);
  }
  int cycles = best[scc.comp[m.initial[0]]];
  if (cycles >= 2) return {GrowthKind::Polynomial, cycles - 1};
  long period = 1;
  for (int c = 0; c < scc.count; ++c)
    if (inner[c] > 0) period = std::lcm(period, size[c]);
  int horizon = n + static_cast<int>(std::min<long>(period, 1L << 20));
  auto seq = counting_sequence(m, horizon);
  BigInt mx = 0;
  for (auto& v : seq.terms) mx = std::max(mx, v);
  return {GrowthKind::Constant, static_cast<long>(mx)};
}

std::string growth_to_string(const GrowthClass& g) {
  switch (g.kind) {
    case GrowthKind::Constant:
      return "constant(c=" + std::to_string(g.parameter) + ")";
    case GrowthKind::Polynomial:
      return "polynomial(k=" + std::to_string(g.parameter) + ")";
    case GrowthKind::Exponential:
      return "exponential";
  }
  return "";
}

// ---------------------------------------------------------------- poles

namespace {

std::vector<std::complex<double>> numeric_roots(const Poly& p) {
  int d = p.degree();
  std::vector<std::complex<double>> out;
  if (d < 1) return out;
  double lead = p.c.back().convert_to<double>();
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -p.c[i].convert_to<double>() / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  auto ev = es.eigenvalues();
  for (int i = 0; i < d; ++i) out.emplace_back(ev(i).real(), ev(i).imag());
  return out;
}

// (squarefree factor, multiplicity) pairs
std::vector<std::pair<Poly, int>> squarefree_factors(const Poly& q) {
  std::vector<Poly> g = {primitive_part(q)};
  while (g.back().degree() > 0) g.push_back(poly_gcd(g.back(), derivative(g.back())));
  // s[i] = product of factors with multiplicity > i
  std::vector<Poly> s;
  for (size_t i = 0; i + 1 < g.size(); ++i) s.push_back(primitive_part(exact_div(g[i], g[i + 1])));
  std::vector<std::pair<Poly, int>> out;
  for (size_t i = 0; i < s.size(); ++i) {
    Poly f = i + 1 < s.size() ? primitive_part(exact_div(s[i], s[i + 1])) : s[i];
    if (f.degree() > 0) out.push_back({f, static_cast<int>(i + 1)});
  }
  return out;
}

std::vector<PoleRoot> roots_with_multiplicity(const Poly& q) {
  std::vector<PoleRoot> out;
  for (auto& [f, mult] : squarefree_factors(q))
    for (auto z : numeric_roots(f)) out.push_back({z, mult, std::abs(z)});
  std::sort(out.begin(), out.end(), [](const PoleRoot& a, const PoleRoot& b) {
    if (a.modulus != b.modulus) return a.modulus < b.modulus;
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return out;
}

// minimal connection polynomial of a sequence over Q
std::vector<Rational> berlekamp_massey(const std::vector<BigInt>& s) {
  std::vector<Rational> c = {1}, b = {1};
  int l = 0, m = 1;
  Rational bd = 1;
  for (size_t n = 0; n < s.size(); ++n) {
    Rational d = 0;
    for (int i = 0; i <= l && i < static_cast<int>(c.size()); ++i) d += c[i] * Rational(s[n - i]);
    if (d == 0) {
      ++m;
      continue;
    }
    std::vector<Rational> t = c;
    Rational coef = d / bd;
    if (c.size() < b.size() + m) c.resize(b.size() + m, 0);
    for (size_t i = 0; i < b.size(); ++i) c[i + m] -= coef * b[i];
    if (2 * l <= static_cast<int>(n)) {
      l = static_cast<int>(n) + 1 - l;
      b = t;
      bd = d;
      m = 1;
    } else {
      ++m;
    }
  }
  c.resize(l + 1, 0);
  return c;
}

Poly integer_poly(const std::vector<Rational>& c) {
  BigInt den = 1;
  for (auto& x : c) den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(x));
  std::vector<BigInt> r;
  for (auto& x : c) r.push_back(boost::multiprecision::numerator(x) * (den / boost::multiprecision::denominator(x)));
  return Poly(std::move(r));
}

}  // namespace

std::string dominance_name(Dominance d) {
  switch (d) {
    case Dominance::Yes:
      return "true";
    case Dominance::No:
      return "false";
    case Dominance::Indeterminate:
      return "indeterminate";
  }
  return "";
}

PoleReport pole_report(const RationalGF& gf, int merge_period, double tolerance) {
  if (gf.den.zero()) throw Error("pole_report: zero denominator polynomial");
  if (merge_period < 1) throw PreconditionError("pole_report: merge period must be at least 1");
  RationalGF r = reduce_gf(gf);
  PoleReport rep;
  rep.merge_period = merge_period;
  rep.roots = roots_with_multiplicity(r.den);
  int complexity = std::max(r.den.degree(), r.num.degree() + 1);
  int per_class = 2 * complexity + 4;
  auto series = gf_series(r, merge_period * per_class + merge_period);
  for (int res = 0; res < merge_period; ++res) {
    std::vector<BigInt> sub;
    for (int m = 0; m < per_class; ++m) sub.push_back(series[m * merge_period + res]);
    Poly conn = integer_poly(berlekamp_massey(sub));
    ResidueReport cr{res, Dominance::No, ""};
    auto roots = roots_with_multiplicity(conn);
    if (roots.empty()) {
      cr.note = "no poles";
    } else if (roots.size() >= 2 && roots[1].modulus - roots[0].modulus <= tolerance * std::max(1.0, roots[0].modulus)) {
      cr.dominating = Dominance::Indeterminate;
      cr.note = "minimum modulus shared within tolerance";
    } else if (roots[0].multiplicity > 1) {
      cr.note = "minimum-modulus pole has multiplicity " + std::to_string(roots[0].multiplicity);
    } else {
      cr.dominating = Dominance::Yes;
      std::ostringstream o;
      o << "dominating pole at modulus " << roots[0].modulus;
      cr.note = o.str();
    }
    rep.classes.push_back(cr);
  }
  return rep;
}

// ---------------------------------------------------------------- witness combinators

CombineMode parse_combine_mode(const std::string& s) {
  if (s == "marked_union" || s == "marked-union") return CombineMode::MarkedUnion;
  if (s == "marked_concat" || s == "marked-concat") return CombineMode::MarkedConcat;
  if (s == "marked_star" || s == "marked-star") return CombineMode::MarkedStar;
  if (s == "tag_concat_prefixcode" || s == "tag-concat-prefixcode") return CombineMode::TagConcatPrefixCode;
  if (s == "tag_star_code" || s == "tag-star-code") return CombineMode::TagStarCode;
  throw Error("unknown combine mode '" + s + "'");
}

namespace {

FiniteAutomaton single_letter(const Alphabet& sigma, const std::string& sym) {
  FiniteAutomaton f;
  f.alphabet = sigma;
  f.add_state("s");
  f.add_state("t");
  f.initial = {0};
  f.accepting = {1};
  f.add_transition(0, sigma.index(sym), 1);
  f.normalize();
  return f;
}

std::string primed(const std::string& s) { return s + "'"; }

}  // namespace

FiniteAutomaton witness_combine(CombineMode mode, const FiniteAutomaton& r1, const FiniteAutomaton* r2) {
  bool binary = mode == CombineMode::MarkedUnion || mode == CombineMode::MarkedConcat ||
                mode == CombineMode::TagConcatPrefixCode;
  if (binary && !r2) throw PreconditionError("witness_combine: this mode needs two automata");
  std::vector<std::string> syms = r1.alphabet.symbols();
  if (r2)
    for (auto& s : r2->alphabet.symbols())
      if (!r1.alphabet.contains(s)) syms.push_back(s);
  auto check_fresh = [&](const std::string& m) {
    if (std::find(syms.begin(), syms.end(), m) != syms.end())
      throw PreconditionError("witness_combine: marker symbol '" + m + "' already in the alphabet");
  };

  if (mode == CombineMode::MarkedUnion || mode == CombineMode::MarkedConcat || mode == CombineMode::MarkedStar) {
    check_fresh("$");
    if (mode == CombineMode::MarkedUnion) check_fresh("#");
    syms.push_back("$");
    if (mode == CombineMode::MarkedUnion) syms.push_back("#");
    Alphabet sigma(syms);
    FiniteAutomaton a = widen_alphabet(r1, sigma);
    FiniteAutomaton dollar = single_letter(sigma, "$");
    FiniteAutomaton out;
    if (mode == CombineMode::MarkedUnion) {
      FiniteAutomaton b = widen_alphabet(*r2, sigma);
      out = nfa_union(nfa_concat(dollar, a), nfa_concat(single_letter(sigma, "#"), b));
    } else if (mode == CombineMode::MarkedConcat) {
      FiniteAutomaton b = widen_alphabet(*r2, sigma);
      out = nfa_concat(nfa_concat(a, dollar), b);
    } else {
      out = nfa_star(nfa_concat(a, dollar));
    }
    return minimal_dfa(out);
  }

  // tagging: the primed copies of the source letters mark a factor boundary
  const FiniteAutomaton& src = r1;
  std::vector<std::string> tagged = syms;
  for (auto& s : src.alphabet.symbols()) {
    check_fresh(primed(s));
    tagged.push_back(primed(s));
  }
  Alphabet sigma(tagged);
  FiniteAutomaton a = widen_alphabet(src, sigma);
  auto prime_of = [&](int label) { return sigma.index(primed(a.alphabet.name(label))); };
  bool has_eps = fa_accepts(src, {});

  FiniteAutomaton t;
  t.alphabet = sigma;
  t.states = a.states;
  t.trans = a.trans;
  if (mode == CombineMode::TagConcatPrefixCode) {
    // last letter primed; epsilon kept through a fresh start state
    int fin = t.add_state("tagged");
    int start = t.add_state("start");
    for (auto& tr : a.trans)
      if (tr.label != kEps && a.is_accepting(tr.to)) t.add_transition(tr.from, prime_of(tr.label), fin);
    for (int q : a.initial) t.add_transition(start, kEps, q);
    t.initial = {start};
    t.accepting = {fin};
    if (has_eps) t.accepting.push_back(start);
    t.normalize();
    FiniteAutomaton b = widen_alphabet(*r2, sigma);
    return minimal_dfa(nfa_concat(t, b));
  }
  // first letter primed, epsilon dropped, then starred
  int start = t.add_state("start");
  auto init = eps_closure(a, a.initial);
  for (auto& tr : a.trans)
    if (tr.label != kEps && std::binary_search(init.begin(), init.end(), tr.from))
      t.add_transition(start, prime_of(tr.label), tr.to);
  t.initial = {start};
  t.accepting = a.accepting;
  t.normalize();
  return minimal_dfa(nfa_star(t));
}

}  // namespace countreg
