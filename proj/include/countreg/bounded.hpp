#pragma once

#include <optional>

#include "countreg/machines.hpp"
#include "countreg/semilinear.hpp"

namespace countreg {

// {(l1..lk) : u1^l1 ... uk^lk in L(m)}; the shape is checked on words up to shape_horizon
SemilinearSet ind_of(const CounterMachine& m, const BoundedShape& shape, int shape_horizon = 8);

struct BoundedWitness {
  FiniteAutomaton witness;  // over a1..ak
  int injectivity_horizon = 0;
};

// rejects inputs that are not simple, not pairwise disjoint, or where phi collides up to the horizon
BoundedWitness bounded_witness(const SemilinearSet& s, const BoundedShape& shape, int injectivity_horizon = 12);

// the letters a1..ak
Alphabet shape_letters(int k);

// smallest u1..uk (k <= max_factors, |ui| <= max_word) whose u1*...uk* holds every
// accepted word up to horizon; only evidence of boundedness, never a proof
std::optional<BoundedShape> find_shape(const CounterMachine& m, int max_factors, int max_word, int horizon);

}  // namespace countreg
