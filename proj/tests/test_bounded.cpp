#include <doctest.h>

#include <functional>

#include "countreg/bounded.hpp"
#include "helpers.hpp"

using namespace countreg;
using namespace testing_util;

namespace {

// tuples whose image has length <= N, counted by image length
std::vector<BigInt> image_counts(const std::function<bool(const IntVec&)>& in, const BoundedShape& sh, int N) {
  int k = static_cast<int>(sh.words.size());
  std::vector<BigInt> c(N + 1, 0);
  IntVec x(k, 0);
  std::function<void(int, int)> rec = [&](int j, int len) {
    if (j == k) {
      if (in(x)) c[len] += 1;
      return;
    }
    int w = static_cast<int>(sh.words[j].size());
    for (int v = 0; len + v * w <= N; ++v) {
      x[j] = v;
      rec(j + 1, len + v * w);
    }
    x[j] = 0;
  };
  rec(0, 0);
  return c;
}

}  // namespace

TEST_CASE("tuple preimages of bounded machines") {
  struct Case {
    const char* file;
    const char* shape;
  };
  for (auto c : {Case{"anbn.dcm", "shape a b"}, Case{"anbncm.dcm", "shape a b c"}, Case{"abn_cn.dcm", "shape ab c"}}) {
    auto m = counter(c.file);
    auto sh = parse_shape(c.shape, m.alphabet);
    auto s = ind_of(m, sh);
    int k = static_cast<int>(sh.words.size());
    IntVec x(k, 0);
    std::function<void(int, int)> rec = [&](int j, int left) {
      if (j == k) {
        CHECK(semilinear_member(x, s) == accepts(m, phi_apply(x, sh)));
        return;
      }
      for (int v = 0; v <= left; ++v) {
        x[j] = v;
        rec(j + 1, left - v);
      }
      x[j] = 0;
    };
    rec(0, 7);
  }
  // l_eq has words outside a*b*
  CHECK_THROWS_AS(ind_of(counter("l_eq.ncm"), parse_shape("shape a b", counter("l_eq.ncm").alphabet), 4),
                  PreconditionError);
}

TEST_CASE("bounded witnesses count the tuple images") {
  struct Case {
    const char* file;
    const char* shape;
  };
  for (auto c : {Case{"anbn.dcm", "shape a b"}, Case{"anbncm.dcm", "shape a b c"}, Case{"abn_cn.dcm", "shape ab c"}}) {
    auto m = counter(c.file);
    auto sh = parse_shape(c.shape, m.alphabet);
    auto w = bounded_witness(ind_of(m, sh), sh);
    auto brute = image_counts([&](const IntVec& x) { return accepts(m, phi_apply(x, sh)); }, sh, 12);
    CHECK(counting_sequence(w.witness, 12).terms == brute);
    CHECK(w.injectivity_horizon == 12);
  }
}

TEST_CASE("random simple sets over a multi-letter shape") {
  std::mt19937 rng(81);
  Alphabet sig({"a", "b", "c"});
  auto sh = parse_shape("shape ab c ba", sig);
  int built = 0;
  for (int it = 0; it < 120; ++it) {
    SemilinearSet s;
    s.dim = 3;
    int comps = 1 + static_cast<int>(rng() % 2);
    for (int i = 0; i < comps; ++i) {
      LinearSet ls;
      for (int d = 0; d < 3; ++d) ls.base.push_back(static_cast<long>(rng() % 3));
      int p = static_cast<int>(rng() % 3);
      for (int j = 0; j < p; ++j) {
        IntVec v(3, 0);
        v[rng() % 3] = 1 + static_cast<long>(rng() % 2);
        if (rng() % 2) v[rng() % 3] += 1;
        ls.periods.push_back(v);
      }
      s.comps.push_back(ls);
    }
    BoundedWitness w;
    try {
      w = bounded_witness(s, sh);
    } catch (const PreconditionError&) {
      continue;
    }
    ++built;
    auto brute = image_counts([&](const IntVec& x) { return semilinear_member(x, s); }, sh, 12);
    CHECK(counting_sequence(w.witness, 12).terms == brute);
  }
  CHECK(built > 20);
}

TEST_CASE("inputs that break the preconditions are rejected") {
  Alphabet sig({"a", "b"});
  auto sh = parse_shape("shape a b", sig);
  CHECK_THROWS_AS(bounded_witness(parse_semilinear("semilinear dim 2\nlinear base 0,0 periods 1,0 | 2,0\n"), sh),
                  PreconditionError);
  CHECK_THROWS_AS(bounded_witness(parse_semilinear("semilinear dim 2\nlinear base 0,0 periods 1,0\nlinear base 2,0\n"), sh),
                  PreconditionError);
  auto aa = parse_shape("shape a a", sig);
  CHECK_THROWS_AS(bounded_witness(parse_semilinear("semilinear dim 2\nlinear base 0,0 periods 1,0 | 0,1\n"), aa),
                  PreconditionError);
  CHECK(shape_letters(3).symbols() == std::vector<std::string>{"a1", "a2", "a3"});
}

TEST_CASE("shape search on bounded and unbounded fixtures") {
  CounterMachine m = counter("abn_cn.dcm");
  auto sh = find_shape(m, 3, 2, 8);
  REQUIRE(sh.has_value());
  CHECK(sh->words.size() == 2);
  CHECK(shape_to_text(*sh, m.alphabet) == "shape ab c\n");
  CHECK_FALSE(find_shape(m, 1, 2, 8).has_value());
  // x#y with x free over {a,b} is not bounded
  CHECK_FALSE(find_shape(counter("intro_l.dcm"), 3, 2, 6).has_value());
}
