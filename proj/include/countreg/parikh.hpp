#pragma once

#include <functional>
#include <vector>

#include "countreg/machines.hpp"
#include "countreg/semilinear.hpp"

namespace countreg {

// linear constraint over the dimensions of a vector
struct DimRow {
  IntVec coeff;
  Rel rel;
  long rhs;
};

// Solves rows jointly over one linear set per part, where rows range over the
// concatenation of the parts' dimensions. The result is projected to `keep`
// (indices into the concatenation). With `point`, stops at the first solution
// and stores the full concatenated vector there.
SemilinearSet solve_joint(const std::vector<const LinearSet*>& parts, const std::vector<DimRow>& rows,
                          const std::vector<int>& keep, IntVec* point = nullptr);

// layout of the annotated image: Parikh vector, length, and for each mark the
// number of letters before it and a letter indicator
struct MarkLayout {
  int letters = 0;
  int marks = 0;

  int n() const { return letters; }
  int pre(int m) const { return letters + 1 + m; }
  int ev(int m, int s) const { return letters + 1 + marks + m * letters + s; }
  int dim() const { return letters + 1 + marks * (1 + letters); }
};

// exact set of (psi(w), |w|, pre_m, [w at mark m = s]) over accepted w and
// every placement of `marks` marks on letter positions of w
SemilinearSet annotated_image(const CounterMachine& m, int marks);

SemilinearSet ncm_parikh(const CounterMachine& m);
// unary set of word lengths
SemilinearSet ncm_length_set(const CounterMachine& m);

struct EmptinessResult {
  bool empty = true;
  Word witness;
  IntVec parikh;
};

EmptinessResult ncm_emptiness(const CounterMachine& m);

}  // namespace countreg
