#include <doctest.h>

#include "countreg/parikh.hpp"
#include "helpers.hpp"

using namespace countreg;
using namespace testing_util;

namespace {

IntVec parikh_of(const Word& w, int letters) {
  IntVec v(letters, 0);
  for (int c : w) ++v[c];
  return v;
}

// words up to length 8 give exactly the members of total size <= 8
void check_parikh(const CounterMachine& m) {
  int L = m.alphabet.size();
  SemilinearSet img = ncm_parikh(m);
  std::set<IntVec> seen;
  for (auto& w : enumerate_lang(m, 8).words) seen.insert(parikh_of(w, L));
  IntVec ones(L, 1);
  std::set<IntVec> members;
  // zero periods are not allowed by members_up_to; simplify drops them
  simplify(img);
  for (auto& v : members_up_to(img, ones, 8)) members.insert(v);
  CHECK(members == seen);
}

}  // namespace

TEST_CASE("Parikh images of the fixtures") {
  for (auto name : {"anbn.dcm", "anbncm.dcm", "l3.dcm", "l4.dcm", "l5.ncm", "l6.dcm", "l_eq.ncm", "l_maj.ncm",
                    "two_piece.ncm", "intro_l.dcm", "abn_cn.dcm", "l_rcm.ncm"})
    check_parikh(counter(name));
  auto s = ncm_parikh(counter("anbn.dcm"));
  CHECK(semilinear_member({3, 3}, s));
  CHECK_FALSE(semilinear_member({3, 2}, s));
}

TEST_CASE("Parikh images of random machines") {
  std::mt19937 rng(61);
  for (int it = 0; it < 60; ++it) {
    auto m = random_ncm(rng, 2 + it % 3, 1 + it % 2, 2);
    try {
      check_parikh(m);
    } catch (const MachineTooLarge&) {
    }
  }
}

TEST_CASE("emptiness with witnesses") {
  std::mt19937 rng(62);
  for (int it = 0; it < 80; ++it) {
    auto m = random_ncm(rng, 2 + it % 3, 1 + it % 2, 2);
    EmptinessResult e;
    try {
      e = ncm_emptiness(m);
    } catch (const MachineTooLarge&) {
      continue;
    }
    auto words = enumerate_lang(m, 8).words;
    if (!words.empty()) CHECK_FALSE(e.empty);
    if (!e.empty) CHECK(accepts(m, e.witness));
  }
  auto ab = machine_from_automaton(parse_regex("aa*bb*", Alphabet({"a", "b"})));
  auto hit = ncm_emptiness(machine_intersection(counter("anbn.dcm"), ab));
  CHECK_FALSE(hit.empty);
  CHECK(hit.witness.size() % 2 == 0);
  auto odd = machine_from_automaton(parse_regex("a(aa)*", Alphabet({"a", "b"})));
  CHECK(ncm_emptiness(machine_intersection(counter("anbn.dcm"), odd)).empty);
}

TEST_CASE("length sets") {
  auto s = ncm_length_set(counter("two_piece.ncm"));
  for (long n = 0; n <= 30; ++n) CHECK(semilinear_member({n}, s) == (n >= 2 && (n % 2 == 0 || n % 3 == 0)));
}
