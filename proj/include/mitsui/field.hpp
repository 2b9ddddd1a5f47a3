#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "mitsui/util.hpp"
#include "mitsui/zmat.hpp"

namespace mitsui {

// Fractional ideal: row i of `basis` divided by `den` is the i-th basis
// vector with respect to the integral basis. `basis` is always the canonical
// HNF (upper triangular, positive diagonal, entries above each pivot reduced
// into [0, pivot)) and gcd(content(basis), den) = 1, so equal ideals have
// bit-identical representations.
struct FracIdeal {
  ZMat basis;
  Z den = 1;
  bool operator==(const FracIdeal& o) const { return den == o.den && basis == o.basis; }
  bool operator!=(const FracIdeal& o) const { return !(*this == o); }
};

// Field element: integer coordinates over a shared positive denominator,
// relative to the integral basis. Elements of O_K have den = 1. The ambient
// module is passed explicitly to the operations that need it.
struct Elem {
  std::vector<i64> c;
  i64 den = 1;
  bool operator==(const Elem& o) const { return den == o.den && c == o.c; }
};

// Point of K (x) R as one coordinate per archimedean place, real places first.
struct EmbPt {
  std::vector<std::complex<double>> s;
  double abs(int i) const { return std::abs(s[i]); }
};

struct NumberFieldSpec {
  std::string name;
  std::vector<i64> poly;  // monic, constant term first, length n+1
  std::optional<QMat> basis_change;  // column k = power-basis coords of integral basis elt
  std::vector<std::vector<i64>> fundamental_units;
  std::vector<i64> torsion_generator;
  int torsion_order = 2;
  int class_number = 1;
  std::vector<FracIdeal> class_representatives;  // may be empty => {O_K}
  std::optional<double> regulator_reference;
};

struct NormPair {
  i64 signed_norm;
  u64 abs_norm;
};

class NumberField {
 public:
  NumberFieldSpec spec;
  int n = 0, r1 = 0, r2 = 0;
  // roots of the defining polynomial: real ascending, then one representative
  // (Im > 0) per conjugate pair ordered by (Re, Im)
  std::vector<std::complex<double>> roots;
  // emb[i][k] = sigma_i(w_k) for the integral basis w_0..w_{n-1}
  std::vector<std::vector<std::complex<double>>> emb;
  // mult[i][j] = integral-basis coordinates of w_i * w_j
  std::vector<std::vector<std::vector<i64>>> mult;
  Z discriminant;
  double regulator = 1.0;
  std::vector<Elem> units;      // fundamental units (possibly computed)
  Elem torsion;                 // torsion generator
  int w = 2;                    // torsion order
  int h = 1;                    // class number
  std::vector<FracIdeal> class_reps;
  // Sieving data: an element omega with Z[omega] = O_K, its characteristic
  // polynomial, and the transition matrix (column k = integral coords of
  // omega^k). Absent when no such omega was found among the search set.
  bool sievable = false;
  std::vector<i64> sieve_poly;
  ZMat sieve_transition;
  std::vector<i64> sieve_gen_coords;
  Elem one_cache;

  int unit_rank() const { return r1 + r2 - 1; }
  Elem one() const { return one_cache; }
  Elem zero() const { return Elem{std::vector<i64>(n, 0), 1}; }
};

NumberField load_field(const NumberFieldSpec& spec);
NumberFieldSpec parse_field_spec_json(const std::string& json_text);
NumberField load_field_file(const std::string& path);

// --- element operations ------------------------------------------------

Elem element_add(const NumberField& K, const Elem& x, const Elem& y);
Elem element_sub(const NumberField& K, const Elem& x, const Elem& y);
Elem element_neg(const Elem& x);
Elem element_mul(const NumberField& K, const Elem& x, const Elem& y);
Elem element_pow(const NumberField& K, const Elem& x, i64 e);  // e >= 0
// Inverse of a unit (integral result); throws for non-units.
Elem unit_inverse(const NumberField& K, const Elem& u);
bool is_zero(const Elem& x);
void canonicalize_element(Elem& x);  // sign/gcd normalization of (coords, den)

NormPair field_norm(const NumberField& K, const Elem& x);  // requires den == 1
Q field_norm_q(const NumberField& K, const Elem& x);       // exact, any den
i64 element_trace(const NumberField& K, const Elem& x);    // requires den == 1

EmbPt minkowski_embed(const NumberField& K, const Elem& x);

// --- ideal operations ----------------------------------------------------

FracIdeal unit_ideal(const NumberField& K);
FracIdeal ideal_from_generators(const NumberField& K, const std::vector<Elem>& gens,
                                const Q& scale = Q(1));
FracIdeal principal_ideal(const NumberField& K, const Elem& g);
Q ideal_norm(const NumberField& K, const FracIdeal& a);
FracIdeal ideal_mul(const NumberField& K, const FracIdeal& a, const FracIdeal& b);
// coordinates of x in a's basis when x is a member
std::optional<std::vector<i64>> ideal_coords(const NumberField& K, const FracIdeal& a,
                                             const Elem& x);
bool ideal_contains(const NumberField& K, const FracIdeal& a, const Elem& x);
Elem ideal_basis_vector(const NumberField& K, const FracIdeal& a, int i);
// element of a with given coordinates in a's basis
Elem from_ideal_coords(const NumberField& K, const FracIdeal& a, const std::vector<i64>& z);
// throws config_error if the matrix rows do not span an O_K-module
void validate_module(const NumberField& K, const FracIdeal& a);

// Number of unit classes of O_K / q (brute-force coset count; desk scale).
Z totient_ideal(const NumberField& K, const FracIdeal& q);

// Shared helper for the regulator (used by load_field and lattice_domain).
double regulator_from_units(const NumberField& K);

}  // namespace mitsui
