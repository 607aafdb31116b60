#include <doctest.h>

#include <functional>
#include <algorithm>
#include <random>
#include <set>

#include "countreg/semilinear.hpp"

using namespace countreg;

namespace {

std::set<IntVec> members_brute(const SemilinearSet& s, long bound) {
  std::set<IntVec> out;
  IntVec x(s.dim, 0);
  std::function<void(int, long)> rec = [&](int j, long left) {
    if (j == s.dim) {
      if (semilinear_member(x, s)) out.insert(x);
      return;
    }
    for (long v = 0; v <= left; ++v) {
      x[j] = v;
      rec(j + 1, left - v);
    }
    x[j] = 0;
  };
  rec(0, bound);
  return out;
}

SemilinearSet random_set(std::mt19937& rng, int dim) {
  SemilinearSet s;
  s.dim = dim;
  int comps = 1 + static_cast<int>(rng() % 3);
  for (int c = 0; c < comps; ++c) {
    LinearSet ls;
    for (int d = 0; d < dim; ++d) ls.base.push_back(static_cast<long>(rng() % 3));
    int p = static_cast<int>(rng() % 3);
    for (int i = 0; i < p; ++i) {
      IntVec v(dim);
      for (auto& x : v) x = static_cast<long>(rng() % 3);
      ls.periods.push_back(v);
    }
    s.comps.push_back(ls);
  }
  return s;
}

}  // namespace

TEST_CASE("membership") {
  LinearSet ls{{1, 0}, {{1, 1}, {2, 0}}};
  CHECK(linear_member({1, 0}, ls));
  CHECK(linear_member({4, 1}, ls));
  CHECK_FALSE(linear_member({2, 0}, ls));
  CHECK_FALSE(linear_member({0, 0}, ls));
}

TEST_CASE("text format round trip") {
  auto s = parse_semilinear("semilinear dim 2\nlinear base 0,0 periods 1,1 | 2,0\nlinear base 1,0 periods 0,1\n");
  CHECK(s.dim == 2);
  CHECK(s.comps.size() == 2);
  CHECK(semilinear_to_text(parse_semilinear(semilinear_to_text(s))) == semilinear_to_text(s));
  CHECK_THROWS_AS(parse_semilinear("semilinear dim 2\nlinear base 0 periods 1,1\n"), ParseError);
}

TEST_CASE("simplify and project keep the described set") {
  std::mt19937 rng(51);
  for (int it = 0; it < 150; ++it) {
    auto s = random_set(rng, 2 + it % 2);
    auto before = members_brute(s, 7);
    SemilinearSet t = s;
    simplify(t);
    CHECK(members_brute(t, 7) == before);

    auto p = project(s, {0});
    // first coordinates up to 5: periods with a positive first entry are used at most 5 times
    std::set<IntVec> proj;
    for (auto& c : s.comps) {
      std::vector<IntVec> ps;
      for (auto& q : c.periods)
        if (q[0] > 0) ps.push_back(q);
      std::function<void(size_t, long)> rec = [&](size_t i, long x) {
        if (x > 5) return;
        if (i == ps.size()) {
          proj.insert({x});
          return;
        }
        for (long t = 0; x + t * ps[i][0] <= 5; ++t) rec(i + 1, x + t * ps[i][0]);
      };
      rec(0, c.base[0]);
    }
    std::set<IntVec> got;
    for (auto& v : members_brute(p, 5)) got.insert(v);
    CHECK(got == proj);
  }
}

TEST_CASE("members up to a weight") {
  std::mt19937 rng(52);
  for (int it = 0; it < 80; ++it) {
    auto s = random_set(rng, 2);
    for (auto& c : s.comps)
      for (auto& p : c.periods)
        if (p[0] + p[1] == 0) p[0] = 1;
    IntVec w{1, 2};
    std::set<IntVec> brute;
    for (auto& v : members_brute(s, 10))
      if (v[0] + 2 * v[1] <= 10) brute.insert(v);
    auto got = members_up_to(s, w, 10);
    CHECK(std::set<IntVec>(got.begin(), got.end()) == brute);
    CHECK(std::is_sorted(got.begin(), got.end()));
  }
}

TEST_CASE("simple and disjoint linear sets") {
  CHECK(verify_simple({{0, 0}, {{1, 0}, {0, 1}}}));
  CHECK_FALSE(verify_simple({{0, 0}, {{1, 0}, {2, 0}}}));
  CHECK_FALSE(verify_simple({{0}, {{2}, {3}}}));
  CHECK(verify_disjoint({{0}, {{2}}}, {{1}, {{2}}}));
  CHECK_FALSE(verify_disjoint({{0}, {{2}}}, {{0}, {{3}}}));
}

TEST_CASE("shapes and the tuple map") {
  Alphabet sig({"a", "b", "c"});
  BoundedShape shape = parse_shape("shape ab c", sig);
  CHECK(shape_to_text(shape, sig) == "shape ab c\n");
  CHECK(phi_apply({2, 1}, shape) == Word{0, 1, 0, 1, 2});
  CHECK_THROWS(parse_shape("shape ad", sig));

  SemilinearSet s = parse_semilinear("semilinear dim 2\nlinear base 0,0 periods 1,1\n");
  CHECK(verify_injective(s, shape, 12).injective);
  // a* a*: (1,0) and (0,1) both give "a"
  BoundedShape aa = parse_shape("shape a a", sig);
  SemilinearSet all = parse_semilinear("semilinear dim 2\nlinear base 0,0 periods 1,0 | 0,1\n");
  auto r = verify_injective(all, aa, 6);
  CHECK_FALSE(r.injective);
  CHECK(phi_apply(r.first, aa) == phi_apply(r.second, aa));
}
