#include <doctest.h>

#include <functional>
#include <random>
#include <set>

#include "countreg/diophantine.hpp"
#include "countreg/errors.hpp"

using namespace countreg;

namespace {

bool satisfies(const LinearSystem& s, const IntVec& x) {
  for (size_t r = 0; r < s.coeffs.size(); ++r) {
    long d = 0;
    for (int j = 0; j < s.vars; ++j) d += s.coeffs[r][j] * x[j];
    if (s.rel[r] == Rel::Eq ? d != s.rhs[r] : d < s.rhs[r]) return false;
  }
  return true;
}

long total(const IntVec& v) {
  long s = 0;
  for (long e : v) s += e;
  return s;
}

// every solution with entry sum <= B, directly and from the returned description
void compare(const LinearSystem& s, const NatSolutions& sol, int B) {
  std::set<IntVec> brute, gen;
  IntVec x(s.vars, 0);
  std::function<void(int, int)> rec = [&](int j, int left) {
    if (j == s.vars) {
      if (satisfies(s, x)) brute.insert(x);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      x[j] = v;
      rec(j + 1, left - v);
    }
    x[j] = 0;
  };
  rec(0, B);
  std::vector<IntVec> st(sol.minimal.begin(), sol.minimal.end());
  std::set<IntVec> seen;
  while (!st.empty()) {
    IntVec v = st.back();
    st.pop_back();
    if (total(v) > B || !seen.insert(v).second) continue;
    gen.insert(v);
    for (auto& h : sol.hilbert) {
      IntVec w = v;
      for (int j = 0; j < s.vars; ++j) w[j] += h[j];
      st.push_back(w);
    }
  }
  for (auto& v : gen) CHECK(satisfies(s, v));
  CHECK(gen == brute);
}

}  // namespace

TEST_CASE("small systems by hand") {
  LinearSystem s;
  s.vars = 2;
  s.add({1, -1}, Rel::Eq, 0);
  auto sol = solve_nat(s);
  CHECK(sol.minimal == std::vector<IntVec>{{0, 0}});
  CHECK(sol.hilbert == std::vector<IntVec>{{1, 1}});

  LinearSystem t;
  t.vars = 2;
  t.add({2, -3}, Rel::Eq, 1);
  auto st = solve_nat(t);
  CHECK(st.minimal == std::vector<IntVec>{{2, 1}});
  CHECK(st.hilbert == std::vector<IntVec>{{3, 2}});

  LinearSystem none;
  none.vars = 1;
  none.add({2}, Rel::Eq, 1);
  CHECK(solve_nat(none).minimal.empty());
}

TEST_CASE("random systems agree with brute force") {
  std::mt19937 rng(41);
  int solved = 0;
  for (int it = 0; it < 1500; ++it) {
    LinearSystem s;
    s.vars = 2 + static_cast<int>(rng() % 4);
    int rows = 1 + static_cast<int>(rng() % 3);
    for (int r = 0; r < rows; ++r) {
      IntVec row(s.vars);
      for (auto& x : row) x = static_cast<long>(rng() % 7) - 3;
      s.add(row, rng() % 3 ? Rel::Eq : Rel::Ge, static_cast<long>(rng() % 5) - 1);
    }
    NatSolutions sol;
    try {
      sol = solve_nat(s);
    } catch (const MachineTooLarge&) {
      continue;
    }
    ++solved;
    compare(s, sol, 7);
  }
  CHECK(solved > 1400);
}

TEST_CASE("repeated columns are split back over their copies") {
  std::mt19937 rng(42);
  for (int it = 0; it < 300; ++it) {
    LinearSystem s;
    int distinct = 2 + static_cast<int>(rng() % 2);
    std::vector<IntVec> cols;
    int rows = 1 + static_cast<int>(rng() % 2);
    for (int c = 0; c < distinct; ++c) {
      IntVec col(rows);
      for (auto& x : col) x = static_cast<long>(rng() % 7) - 3;
      cols.push_back(col);
    }
    std::vector<int> pick;
    for (int j = 0; j < 5; ++j) pick.push_back(static_cast<int>(rng() % distinct));
    s.vars = 5;
    for (int r = 0; r < rows; ++r) {
      IntVec row;
      for (int j : pick) row.push_back(cols[j][r]);
      s.add(row, Rel::Eq, static_cast<long>(rng() % 4) - 1);
    }
    compare(s, solve_nat(s), 6);
  }
}

TEST_CASE("the first-solution mode returns a solution") {
  LinearSystem s;
  s.vars = 3;
  s.add({3, -2, 1}, Rel::Eq, 4);
  auto sol = solve_nat(s, true);
  REQUIRE(sol.minimal.size() == 1);
  CHECK(satisfies(s, sol.minimal[0]));
}

TEST_CASE("an exhausted candidate budget is reported") {
  LinearSystem s;
  s.vars = 6;
  s.add({7, 11, -13, -17, 5, -3}, Rel::Eq, 1);
  s.add({-5, 9, 2, -7, 3, -11}, Rel::Eq, 2);
  CHECK_THROWS_AS(solve_nat(s, false, 50), MachineTooLarge);
}
