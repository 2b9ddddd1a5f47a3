#pragma once

#include "mitsui/field.hpp"

namespace mitsui {

// Logarithmic embedding with the |z|^2 convention at complex places, so the
// coordinate sum is log |N(x)|.
struct LogEmbedding {
  std::vector<double> v;       // length r1+r2
  double norm_part;            // sum of coordinates = log |N(x)|
  std::vector<double> h_part;  // v - norm_part * u, lies in H
};

LogEmbedding log_embed_point(const NumberField& K, const EmbPt& p);
LogEmbedding log_embed(const NumberField& K, const Elem& x);

// Orthonormal basis of the hyperplane H (coordinate sum zero), fixed
// deterministically; rows are the basis vectors in R^{r1+r2}.
std::vector<std::vector<double>> h_orthonormal_basis(const NumberField& K);

// Unit-lattice fundamental domain: the preimage of the half-open unit box in
// fundamental-unit exponent coordinates, crossed with a half-open torsion
// sector (angular sector of width 2*pi/w at the first complex place, or the
// positive-first-coordinate sign orbit for totally real fields).
class FundamentalDomain {
 public:
  explicit FundamentalDomain(const NumberField& K);

  // exponent coordinates of the H-part over the fundamental-unit log vectors
  std::vector<double> unit_coords(const EmbPt& p) const;
  bool contains(const EmbPt& p) const;
  // representative = unit^{-1} x in the domain; x = unit * representative
  std::pair<Elem, Elem> reduce(const Elem& x) const;
  // angle of p in the torsion sector coordinate, in turns
  double torsion_angle_turns(const EmbPt& p) const;

  const NumberField* field;
  std::vector<std::vector<double>> unit_logs;  // r x (r1+r2) h-parts
  std::vector<std::vector<double>> gram_inv;   // r x r
  std::vector<Elem> unit_inv;                  // inverses of fundamental units
  Elem torsion_inv;
};

double compute_regulator(const NumberField& K);

// Integer lattice; columns of `basis` are the generators.
struct IntegerLattice {
  ZMat basis;
  int dim() const { return basis.rows; }
};

// Basis of the same lattice with every entry bounded by |det| in absolute
// value (gcd-reduce the first row, recurse on the minor, then reduce the
// first-column remainders).
IntegerLattice bounded_basis(const IntegerLattice& lat);
Z lattice_index(const IntegerLattice& lat);  // |det|
ZMat lattice_hnf(const IntegerLattice& lat);  // canonical row HNF of generators

// Sublattice of fundamental-unit exponent vectors whose unit is trivial in
// {+-1}^{r1} x (O_K/q)^x; returned through bounded_basis.
IntegerLattice unit_kernel_lattice(const NumberField& K, const FracIdeal& q);

// (vol of (K(x)R)^x / O_K^x R_+, vol of C(q)/R_+): closed forms
// 2^{r1} (2 pi)^{r2} R sqrt(r1+r2) / w  and  phi(q) h_K times that.
std::pair<double, double> torus_volumes(const NumberField& K, const FracIdeal& q);

}  // namespace mitsui
