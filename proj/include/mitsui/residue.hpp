#pragma once

#include <unordered_map>

#include "mitsui/field.hpp"

namespace mitsui {

// Residue structure a/qa with canonical coset representatives (coordinates
// relative to a's basis, reduced against the HNF of q*a) and the subset of
// classes that generate a/qa as an O_K-module. For ambient O_K the cyclic
// group structure of (O_K/q)^x is computed by generator search + Smith
// normal form on the relation matrix. Brute-force throughout; the modulus
// norm is capped at 1e5.
class ResidueRing {
 public:
  const NumberField* field = nullptr;
  FracIdeal ambient, modulus;
  ZMat M;                  // q*a in a-coordinates (row HNF)
  std::vector<i64> diag;   // pivots of M
  std::vector<u64> stride; // mixed-radix strides
  u64 count = 0;           // N(q)

  std::vector<i64> reduce(std::vector<i64> z) const;  // canonical rep
  u64 index_of(const std::vector<i64>& rep) const;    // mixed-radix rank
  std::vector<i64> rep_of_index(u64 idx) const;
  std::vector<i64> reduce_to_class(const Elem& x) const;  // x must lie in a
  std::vector<i64> class_of_index(u64 idx) const { return rep_of_index(idx); }
  u64 class_index(const std::vector<i64>& rep) const { return index_of(rep); }
  std::vector<i64> class_mul(const std::vector<i64>& a, const std::vector<i64>& b) const;
  Elem lift(const std::vector<i64>& rep) const;  // representative element in a

  bool is_unit_class(const std::vector<i64>& rep) const;
  std::vector<u64> unit_indices;                    // sorted
  std::unordered_map<u64, u64> unit_ordinal;        // index -> position
  u64 count_u64() const { return count; }
  u64 phi() const { return unit_indices.size(); }

  // cyclic decomposition of the unit group (ambient O_K only)
  std::vector<std::vector<i64>> gens;  // new generators, one per cyclic factor
  std::vector<i64> orders;             // d_1 | d_2 | ... (all > 1)
  std::unordered_map<u64, std::vector<i64>> dlog;  // unit index -> exponents

  // torsor trivialization: first unit class in canonical enumeration order
  std::vector<i64> trivialization;
  // unit ordinal in a/qa -> unit index in the reference (O_K/q)^x ring
  std::vector<u64> torsor_to_reference;
};

ResidueRing residue_units(const NumberField& K, const FracIdeal& a, const FracIdeal& q);

struct CongruenceClass {
  FracIdeal modulus;
  FracIdeal ambient;
  std::vector<i64> rep;  // canonical representative in ambient coordinates
};

CongruenceClass make_congruence_class(const NumberField& K, const FracIdeal& a,
                                      const FracIdeal& q, const Elem& representative);

}  // namespace mitsui
