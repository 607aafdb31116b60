#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "countreg/automata.hpp"

namespace countreg {

using BigInt = boost::multiprecision::cpp_int;

struct CountingSequence {
  std::vector<BigInt> terms;
  std::string source;
};

// integer polynomial, coefficients in ascending order, no trailing zeros
struct Poly {
  std::vector<BigInt> c;

  Poly() = default;
  explicit Poly(std::vector<BigInt> coeffs) : c(std::move(coeffs)) { trim(); }
  static Poly constant(const BigInt& v) { return Poly(std::vector<BigInt>{v}); }

  int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
  bool zero() const { return c.empty(); }
  BigInt at(int i) const { return i >= 0 && i < static_cast<int>(c.size()) ? c[i] : BigInt(0); }
  void trim();
  bool operator==(const Poly& o) const { return c == o.c; }
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
// exact division; throws if b does not divide a over the integers
Poly exact_div(const Poly& a, const Poly& b);
BigInt content(const Poly& p);
Poly primitive_part(const Poly& p);
// primitive gcd with positive leading coefficient
Poly poly_gcd(const Poly& a, const Poly& b);
Poly derivative(const Poly& p);

struct RationalGF {
  Poly num;
  Poly den;
};

BigInt count_words(const FiniteAutomaton& dfa, int n);
CountingSequence counting_sequence(const FiniteAutomaton& dfa, int N);

RationalGF generating_function(const FiniteAutomaton& dfa);
// reduce by the gcd and normalize den(0) = 1; throws if den(0) = 0
RationalGF reduce_gf(const RationalGF& gf);
std::vector<BigInt> gf_series(const RationalGF& gf, int N);
std::string gf_to_string(const RationalGF& gf);
// accepts the serialization above (optionally prefixed by "gf:"); anything
// else, e.g. a square root, is rejected as not rational
RationalGF parse_gf(const std::string& text);

bool counting_equal(const FiniteAutomaton& a, const FiniteAutomaton& b);
// number of leading terms counting_equal compares
int counting_equal_horizon(const FiniteAutomaton& a, const FiniteAutomaton& b);

enum class GrowthKind { Constant, Polynomial, Exponential };

struct GrowthClass {
  GrowthKind kind;
  long parameter = 0;  // the bound c, or the degree k; 0 for exponential
};

GrowthClass classify_growth(const FiniteAutomaton& dfa);
std::string growth_to_string(const GrowthClass& g);

enum class Dominance { Yes, No, Indeterminate };

struct PoleRoot {
  std::complex<double> value;
  int multiplicity;
  double modulus;
};

struct ResidueReport {
  int residue;
  Dominance dominating;
  std::string note;
};

struct PoleReport {
  std::vector<PoleRoot> roots;
  int merge_period = 1;
  std::vector<ResidueReport> classes;
};

PoleReport pole_report(const RationalGF& gf, int merge_period, double tolerance = 1e-9);
std::string dominance_name(Dominance d);

enum class CombineMode { MarkedUnion, MarkedConcat, MarkedStar, TagConcatPrefixCode, TagStarCode };

CombineMode parse_combine_mode(const std::string& s);
FiniteAutomaton witness_combine(CombineMode mode, const FiniteAutomaton& r1, const FiniteAutomaton* r2);

}  // namespace countreg
