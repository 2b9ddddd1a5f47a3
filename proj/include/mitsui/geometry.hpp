#pragma once

#include <optional>

#include "mitsui/characters.hpp"
#include "mitsui/qmc.hpp"

namespace mitsui {

struct AnnulusSectorData {
  std::vector<double> a;       // r1+r2 radial offsets
  double radial_width = 0;     // uniform per-place width
  std::vector<double> theta;   // r2 angular offsets (radians)
  double angular_width = 0;    // radians
  u32 sign_mask = 0;           // bit i set = sigma_i negative (real places)
  std::vector<i64> grid;       // partition indices; distinct tuples <=> disjoint
};

struct ThinConeData {
  std::vector<double> h_lo, h_hi;      // cube in the fixed orthonormal H basis
  std::vector<double> ang_lo, ang_hi;  // angular cube in turns
  u32 sign_mask = 0;
  double norm_lo = 0, norm_hi = 0;     // absolute norm range [N', N)
};

// Membership-and-volume oracle for the region kinds. Membership follows
// half-open conventions per kind; near-boundary decisions within 1e-9 are
// counted in near_boundary_events().
struct Region {
  enum class Kind { Box, Ball, Polytope, AnnulusSector, ThinCone } kind = Kind::Box;
  const NumberField* field = nullptr;

  std::vector<double> box_bounds;  // Box: |x|_{sigma_i} < X_i

  std::vector<double> center;  // Ball: flat R^n coordinates
  double radius = 0;

  std::vector<std::vector<double>> normals;  // Polytope: n . x <= c
  std::vector<double> offsets;
  std::vector<double> poly_bound_abs;  // required bounding |x|_sigma per place

  AnnulusSectorData sector;
  ThinConeData cone;
  std::vector<std::vector<double>> h_basis;  // cached for ThinCone

  bool contains(const EmbPt& p) const;
  std::vector<double> bounding_abs() const;  // per-place |x| bound
};

Region make_box(const NumberField& K, const std::vector<double>& bounds);
Region make_ball(const NumberField& K, const std::vector<double>& center, double radius);
Region make_polytope(const NumberField& K, const std::vector<std::vector<double>>& normals,
                     const std::vector<double>& offsets, const std::vector<double>& bound_abs);
Region make_annulus_sector(const NumberField& K, const AnnulusSectorData& d);
Region make_thin_cone(const NumberField& K, const ThinConeData& d);

// flat R^n coordinates (reals, then Re/Im pairs) <-> embedded points
EmbPt embpt_from_flat(const NumberField& K, const double* x);
void flat_from_embpt(const NumberField& K, const EmbPt& p, double* out);

double region_volume(const Region& r, QmcResult* qmc_info = nullptr);
QmcResult region_volume_qmc(const Region& r, u64 npoints, bool parallel = true);

struct SectorCover {
  std::vector<Region> sectors;
  double count_constant = 0;  // count / Y^n
  int radial_count = 0, angular_count = 0;
};

// Disjoint annulus sectors tiling (K(x)R)_{<X} minus the near-axis region
// {some |x|_i < 1}.
SectorCover cover_with_annulus_sectors(const NumberField& K, double X, int Y);

struct InteriorSelection {
  std::vector<int> inside;  // indices into the cover
  double deficit_volume = 0;
};

InteriorSelection select_interior_sectors(const Region& C, const SectorCover& cover);

// Integral of 1 - psi(-;alpha) N((-)a^{-1})^{beta-1} over C. Without Siegel
// data this is vol(C). psi must be real-valued.
struct SiegelData {
  const ComponentGroup* cg = nullptr;
  const ResidueRing* ring_a = nullptr;
  FiniteCharacter psi;
  std::vector<i64> alpha_rep;
  double beta = 1.0;
};

double secondary_integral(const NumberField& K, const Region& C, const FracIdeal& a,
                          const std::optional<SiegelData>& siegel);

}  // namespace mitsui
