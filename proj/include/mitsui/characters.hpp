#pragma once

#include <complex>
#include <unordered_map>

#include "mitsui/lattice.hpp"
#include "mitsui/residue.hpp"

namespace mitsui {

// Component group of C(q)/R_+: the finite group {+-1}^{r1} x (O_K/q)^x
// modulo the image of the units, with transversal and discrete-log tables.
// Raw element = (sign mask, unit-class ordinal); key = mask * phi + ordinal.
class ComponentGroup {
 public:
  const NumberField* field = nullptr;
  FracIdeal q;
  ResidueRing ring;  // O_K / q
  u64 raw_size = 0;  // 2^{r1} * phi

  u64 raw_key(u64 mask, u64 ordinal) const { return mask * ring.phi() + ordinal; }
  u64 raw_mul(u64 a, u64 b) const;
  u64 raw_identity = 0;
  u64 raw_of_unit_elem(const Elem& u) const;  // image of a unit of O_K
  u64 raw_of(const EmbPt& x, u64 ref_ordinal) const;  // (signs of x, ordinal)

  // image of the unit group (torsion generator first, then fundamental units)
  std::vector<u64> unit_gen_images;
  std::vector<u64> unit_image_keys;  // the subgroup, sorted
  // preimage exponent vectors over (torsion, units) for each subgroup element
  std::unordered_map<u64, std::vector<i64>> unit_image_pre;

  // quotient
  u64 quotient_order = 0;
  std::unordered_map<u64, u64> coset_of;  // raw key -> coset id
  std::vector<u64> transversal;           // coset id -> raw key
  std::vector<i64> q_orders;              // cyclic decomposition d_1 | d_2 | ...
  std::vector<u64> q_gens;                // coset ids
  std::unordered_map<u64, std::vector<i64>> q_dlog;  // coset id -> exponents

  // raw group cyclic structure (for character extension bookkeeping)
  std::vector<i64> raw_orders;
  std::vector<u64> raw_gens;
  std::unordered_map<u64, std::vector<i64>> raw_dlog;

  bool class_resolved = true;  // false when h_K > 1 (Cl_K factor unresolved)
};

ComponentGroup component_group(const NumberField& K, const FracIdeal& q);

struct FiniteCharacter {
  int label = 0;                // position in enumeration; 0 = trivial
  std::vector<i64> exponents;   // w.r.t. q_orders
  bool real = true;
  std::complex<double> on_coset(const ComponentGroup& cg, u64 coset) const;
};

std::vector<FiniteCharacter> enumerate_finite_characters(const ComponentGroup& cg);

// psi(x; alpha): finite character evaluated at (sign vector of x, alpha
// transported to (O_K/q)^x through the torsor trivialization of ring_a).
std::complex<double> evaluate_finite(const ComponentGroup& cg, const FiniteCharacter& psi,
                                     const EmbPt& x, const ResidueRing& ring_a,
                                     const std::vector<i64>& alpha_rep);

// Angular (infinite-order) character: integer frequency label over the dual
// basis of the unit-kernel lattice, angular windings at the complex places,
// and a compensating twist on the raw finite group making the whole thing
// unit-invariant. Values on the kernel lattice are exact roots of unity.
struct AngularCharacter {
  std::vector<i64> h_freq_label;   // length r (dual-basis integer coordinates)
  std::vector<i64> angular_freq;   // length r2
  std::vector<double> h_freq_eff;  // effective frequency vector in unit-exponent coords
  std::unordered_map<u64, double> twist_turns;  // raw key -> angle in turns
  int finite_label = 0;            // which quotient character was tensored on
  bool is_finite_only() const;
};

std::vector<AngularCharacter> angular_characters_up_to(const NumberField& K,
                                                       const FracIdeal& q, int Y);

std::complex<double> evaluate_angular(const ComponentGroup& cg, const FundamentalDomain& fd,
                                      const AngularCharacter& psi, const EmbPt& x,
                                      const ResidueRing& ring_a,
                                      const std::vector<i64>& alpha_rep);

// A resolved character for the prime sums: trivial, finite, or angular.
struct CharacterHandle {
  enum class Kind { Trivial, Finite, Angular } kind = Kind::Trivial;
  const ComponentGroup* cg = nullptr;
  const FundamentalDomain* fd = nullptr;
  FiniteCharacter fin;
  AngularCharacter ang;
  std::complex<double> value(const EmbPt& x, const ResidueRing& ring_a,
                             const std::vector<i64>& alpha_rep) const;
};

// Chart of a point: ideal class, fundamental-domain representative, residue
// class of the representative in (a_lambda / q a_lambda)^x.
struct ChartPoint {
  int class_index = 0;
  Elem domain_rep;
  CongruenceClass residue;
};

ChartPoint chart(const NumberField& K, const FracIdeal& q, const Elem& pi,
                 int class_index = 0);

}  // namespace mitsui
