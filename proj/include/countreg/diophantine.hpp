#pragma once

#include <vector>

namespace countreg {

using IntVec = std::vector<long>;

enum class Rel { Eq, Ge };

// rows: coeffs . x  (= or >=)  rhs, unknowns in the naturals
struct LinearSystem {
  int vars = 0;
  std::vector<IntVec> coeffs;
  std::vector<Rel> rel;
  IntVec rhs;

  void add(IntVec row, Rel r, long b);
};

struct NatSolutions {
  std::vector<IntVec> minimal;  // minimal solutions of the system
  std::vector<IntVec> hilbert;  // minimal nonzero solutions of the homogeneous system
};

// every solution is some minimal + a natural combination of hilbert.
// first_only stops at the first minimal solution (hilbert is then incomplete).
// budget bounds the number of candidate vectors; exceeding it throws MachineTooLarge
NatSolutions solve_nat(const LinearSystem& sys, bool first_only = false, long budget = -1);

}  // namespace countreg
