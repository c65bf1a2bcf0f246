#pragma once

// Exact integer/rational tools for edge-coloured digraph families: mu/tau
// vectors, uniform-scalar lattice generators, positive-span feasibility, and
// the averaged type vectors behind the GDD existence arguments.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "chromdesign/verify.hpp"

namespace chromdesign::lattice {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using IntVector = std::vector<Int>;
using RationalVector = std::vector<Rational>;
using FVector = std::vector<int>;

enum class FamilyVariant {
  two_sided,  // both halves G1, G2 get at least one vertex
  one_three,  // k = 4, g even, half sums are {1,3}
};

// All compositions f of k into g parts meeting the variant's constraint, in
// lexicographic order. G1 = first floor(g/2) parts, G2 = the next floor(g/2).
std::vector<FVector> enumerate_family(int k, int g, FamilyVariant variant);

// g*g entries, index i*g + j.
IntVector mu_of(const FVector& f);

// 2*g*g entries, index (i*g + j)*2 + s with s = 0 for in, 1 for out.
// part is 0-based and needs f[part] >= 1.
IntVector tau_of(const FVector& f, int part);

// Every tau_of(f, l) with f[l] >= 1, one per part (not per vertex).
std::vector<IntVector> tau_family(const std::vector<FVector>& fam);
std::vector<IntVector> mu_family(const std::vector<FVector>& fam);

// Least m > 0 with m * 1_dim in the integer span; nullopt if none.
std::optional<Int> minimal_uniform_scalar(const std::vector<IntVector>& vectors, std::size_t dim);

// Integer coefficients over the given generators reproducing target, or
// nullopt when target is outside the lattice.
std::optional<IntVector> solve_integral_combination(const std::vector<IntVector>& vectors,
                                                     const IntVector& target);

struct DualCheck {
  Verdict verdict;
  bool member = false;
  IntVector coefficients;  // filled when member
};

// ok when target is shown to be in the lattice (coefficients re-checked) or
// witness_y pairs integrally with every generator but not with target.
DualCheck integral_combination_dual_check(const std::vector<IntVector>& vectors, const IntVector& target,
                                          const RationalVector& witness_y);

// Strictly positive rational coefficients c with sum c_j v_j = 1, by exact
// two-phase simplex maximising the least coefficient; nullopt if none.
std::optional<RationalVector> allowability_check(const std::vector<IntVector>& vectors);

RationalVector average(const std::vector<IntVector>& vectors);

// Class of (i,j) for the type tuples: 0 diagonal in G1 u G2, 1 same half,
// 2 across halves, and for odd g 3 = (g,g), 4 = touching the last part.
int type_class(int i, int j, int g);

// The (z1..z5) or (z1..z3) tuple; ShapeViolation when avg is not constant
// on a class.
RationalVector type_vector_of(const RationalVector& avg, int g);

// Odd g = 2l+1 >= 2k-1: sub-families F1..F5 (index 1-based) and their
// printed average types a..e.
std::vector<FVector> odd_large_subfamily(int k, int l, int index);
RationalVector odd_large_closed_form(int k, int l, int index);
// x2, x3 closed forms.
std::array<Rational, 2> odd_large_x(int k, int l);

struct DeltaReport {
  Rational delta1;
  Rational delta2;
  bool both_positive = false;
  // Simplified printed forms (parity of k picks the pair).
  Rational delta1_simplified;
  Rational delta2_simplified;
  // b, c, x2, x3 agree with averages over the enumerated sub-families.
  bool enumeration_agrees = false;
};

// k >= 5, l >= k-1; InvalidArgument otherwise.
DeltaReport check_delta_positivity(int k, int l, bool cross_check = true);

// k = 4, g = 2l even >= 6: l/(6|F1|) sum F1 + l/(2|F2|) sum F2 +
// l(l-2)/(3|F3|) sum F3 over the one_three family.
RationalVector k4_combination(int g);

std::string to_string(const Rational& q);
std::string to_string(const RationalVector& v);

}  // namespace chromdesign::lattice
