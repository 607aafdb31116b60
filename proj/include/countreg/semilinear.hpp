#pragma once

#include <string>
#include <vector>

#include "countreg/automata.hpp"
#include "countreg/diophantine.hpp"

namespace countreg {

struct LinearSet {
  IntVec base;
  std::vector<IntVec> periods;

  int dim() const { return static_cast<int>(base.size()); }
  bool operator==(const LinearSet& o) const { return base == o.base && periods == o.periods; }
};

struct SemilinearSet {
  int dim = 0;
  std::vector<LinearSet> comps;

  bool empty() const { return comps.empty(); }
};

bool linear_member(const IntVec& v, const LinearSet& ls);
bool semilinear_member(const IntVec& v, const SemilinearSet& s);

// drops zero and redundant periods, subsumed components, and merges
// <b;P> with <b+p;P+{p}>; the set described is unchanged
void simplify(SemilinearSet& s);
SemilinearSet project(const SemilinearSet& s, const std::vector<int>& keep);

// members v with sum_i weight[i] * v[i] <= max_weight, sorted and distinct;
// every period must have positive weight
std::vector<IntVec> members_up_to(const SemilinearSet& s, const IntVec& weight, long max_weight);

bool verify_simple(const LinearSet& ls);
bool verify_disjoint(const LinearSet& a, const LinearSet& b);

SemilinearSet parse_semilinear(const std::string& text);
std::string semilinear_to_text(const SemilinearSet& s);

struct BoundedShape {
  std::vector<Word> words;
};

// one line "shape u1 u2 ..."; each word is split into symbols of sigma
BoundedShape parse_shape(const std::string& text, const Alphabet& sigma);
std::string shape_to_text(const BoundedShape& shape, const Alphabet& sigma);
Word phi_apply(const IntVec& tuple, const BoundedShape& shape);

struct InjectivityReport {
  bool injective = true;
  int horizon = 0;
  IntVec first, second;  // a colliding pair when not injective
};

InjectivityReport verify_injective(const SemilinearSet& s, const BoundedShape& shape, int N);

}  // namespace countreg
