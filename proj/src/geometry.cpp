#include "mitsui/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "mitsui/lattice.hpp"

namespace mitsui {

// v < hi, with the 1e-9 band (scaled) resolved toward exclusion
static bool lt_excl(double v, double hi, double scale = 1.0) {
  double tol = kTieTolerance * std::max(1.0, scale);
  if (std::abs(v - hi) < tol) {
    near_boundary_events().fetch_add(1, std::memory_order_relaxed);
    return false;
  }
  return v < hi;
}
// v >= lo, ties included (lower face belongs to the set)
static bool ge_incl(double v, double lo, double scale = 1.0) {
  double tol = kTieTolerance * std::max(1.0, scale);
  if (std::abs(v - lo) < tol) {
    near_boundary_events().fetch_add(1, std::memory_order_relaxed);
    return true;
  }
  return v >= lo;
}

EmbPt embpt_from_flat(const NumberField& K, const double* x) {
  EmbPt p;
  p.s.resize(K.r1 + K.r2);
  for (int i = 0; i < K.r1; ++i) p.s[i] = x[i];
  for (int j = 0; j < K.r2; ++j)
    p.s[K.r1 + j] = std::complex<double>(x[K.r1 + 2 * j], x[K.r1 + 2 * j + 1]);
  return p;
}

void flat_from_embpt(const NumberField& K, const EmbPt& p, double* out) {
  for (int i = 0; i < K.r1; ++i) out[i] = p.s[i].real();
  for (int j = 0; j < K.r2; ++j) {
    out[K.r1 + 2 * j] = p.s[K.r1 + j].real();
    out[K.r1 + 2 * j + 1] = p.s[K.r1 + j].imag();
  }
}

static double abs_norm_of_point(const NumberField& K, const EmbPt& p) {
  double v = 1;
  for (int i = 0; i < K.r1 + K.r2; ++i) {
    double a = std::abs(p.s[i]);
    v *= (i < K.r1) ? a : a * a;
  }
  return v;
}

bool Region::contains(const EmbPt& p) const {
  const NumberField& K = *field;
  switch (kind) {
    case Kind::Box: {
      for (int i = 0; i < K.r1 + K.r2; ++i)
        if (!lt_excl(p.abs(i), box_bounds[i], box_bounds[i])) return false;
      return true;
    }
    case Kind::Ball: {
      double fl[8];
      flat_from_embpt(K, p, fl);
      double d2 = 0;
      for (int i = 0; i < K.n; ++i) d2 += (fl[i] - center[i]) * (fl[i] - center[i]);
      return lt_excl(std::sqrt(d2), radius, radius);
    }
    case Kind::Polytope: {
      double fl[8];
      flat_from_embpt(K, p, fl);
      for (size_t r = 0; r < normals.size(); ++r) {
        double dot = 0;
        for (int i = 0; i < K.n; ++i) dot += normals[r][i] * fl[i];
        if (!lt_excl(dot, offsets[r], std::abs(offsets[r]) + 1)) return false;
      }
      return true;
    }
    case Kind::AnnulusSector: {
      for (int i = 0; i < K.r1; ++i) {
        bool neg = (sector.sign_mask >> i) & 1;
        double v = p.s[i].real();
        if (neg ? (v >= 0) : (v <= 0)) return false;
      }
      for (int i = 0; i < K.r1 + K.r2; ++i) {
        double v = p.abs(i);
        if (!ge_incl(v, sector.a[i], sector.a[i]) ||
            !lt_excl(v, sector.a[i] + sector.radial_width, sector.a[i] + sector.radial_width))
          return false;
      }
      for (int j = 0; j < K.r2; ++j) {
        double ang = std::arg(p.s[K.r1 + j]) - sector.theta[j];
        ang -= 2 * M_PI * std::floor(ang / (2 * M_PI));
        if (!lt_excl(ang, sector.angular_width)) return false;
        // lower face included by the mod reduction
      }
      return true;
    }
    case Kind::ThinCone: {
      for (int i = 0; i < K.r1; ++i) {
        bool neg = (cone.sign_mask >> i) & 1;
        double v = p.s[i].real();
        if (neg ? (v >= 0) : (v <= 0)) return false;
      }
      double nm = abs_norm_of_point(K, p);
      if (!ge_incl(nm, cone.norm_lo, cone.norm_lo) || !lt_excl(nm, cone.norm_hi, cone.norm_hi))
        return false;
      LogEmbedding le = log_embed_point(K, p);
      for (size_t k = 0; k < h_basis.size(); ++k) {
        double c = 0;
        for (int i = 0; i < K.r1 + K.r2; ++i) c += h_basis[k][i] * le.h_part[i];
        if (!ge_incl(c, cone.h_lo[k]) || !lt_excl(c, cone.h_hi[k])) return false;
      }
      for (int j = 0; j < K.r2; ++j) {
        double t = std::arg(p.s[K.r1 + j]) / (2 * M_PI);
        t -= std::floor(t);
        if (!ge_incl(t, cone.ang_lo[j]) || !lt_excl(t, cone.ang_hi[j])) return false;
      }
      return true;
    }
  }
  return false;
}

std::vector<double> Region::bounding_abs() const {
  const NumberField& K = *field;
  int m = K.r1 + K.r2;
  std::vector<double> b(m, 0.0);
  switch (kind) {
    case Kind::Box:
      return box_bounds;
    case Kind::Ball: {
      for (int i = 0; i < K.r1; ++i) b[i] = std::abs(center[i]) + radius;
      for (int j = 0; j < K.r2; ++j) {
        double cx = center[K.r1 + 2 * j], cy = center[K.r1 + 2 * j + 1];
        b[K.r1 + j] = std::hypot(cx, cy) + radius;
      }
      return b;
    }
    case Kind::Polytope:
      if (poly_bound_abs.empty())
        throw domain_error("polytope region requires an explicit bounding box");
      return poly_bound_abs;
    case Kind::AnnulusSector: {
      for (int i = 0; i < m; ++i) b[i] = sector.a[i] + sector.radial_width;
      return b;
    }
    case Kind::ThinCone: {
      // log|x|_i = s*u_i + h_i with s <= log(norm_hi); h bounded over the cube
      double smax = std::log(std::max(cone.norm_hi, 1e-300));
      for (int i = 0; i < m; ++i) {
        double hmax = 0;
        for (size_t k = 0; k < h_basis.size(); ++k)
          hmax += std::max(cone.h_lo[k] * h_basis[k][i], cone.h_hi[k] * h_basis[k][i]);
        double ui = (i < K.r1 ? 1.0 : 2.0) / double(K.n);
        double li = std::max(smax, 0.0) * ui + hmax;
        b[i] = (i < K.r1) ? std::exp(li) : std::exp(li / 2.0);
      }
      return b;
    }
  }
  return b;
}

Region make_box(const NumberField& K, const std::vector<double>& bounds) {
  Region r;
  r.kind = Region::Kind::Box;
  r.field = &K;
  r.box_bounds = bounds;
  if (int(bounds.size()) != K.r1 + K.r2) throw domain_error("box bounds: wrong length");
  return r;
}

Region make_ball(const NumberField& K, const std::vector<double>& center, double radius) {
  Region r;
  r.kind = Region::Kind::Ball;
  r.field = &K;
  r.center = center;
  r.radius = radius;
  if (int(center.size()) != K.n) throw domain_error("ball center: wrong length");
  return r;
}

Region make_polytope(const NumberField& K, const std::vector<std::vector<double>>& normals,
                     const std::vector<double>& offsets, const std::vector<double>& bound_abs) {
  Region r;
  r.kind = Region::Kind::Polytope;
  r.field = &K;
  r.normals = normals;
  r.offsets = offsets;
  r.poly_bound_abs = bound_abs;
  return r;
}

Region make_annulus_sector(const NumberField& K, const AnnulusSectorData& d) {
  Region r;
  r.kind = Region::Kind::AnnulusSector;
  r.field = &K;
  r.sector = d;
  return r;
}

Region make_thin_cone(const NumberField& K, const ThinConeData& d) {
  Region r;
  r.kind = Region::Kind::ThinCone;
  r.field = &K;
  r.cone = d;
  r.h_basis = h_orthonormal_basis(K);
  return r;
}

QmcResult region_volume_qmc(const Region& r, u64 npoints, bool parallel) {
  const NumberField& K = *r.field;
  auto babs = r.bounding_abs();
  std::vector<double> lo, hi;
  for (int i = 0; i < K.r1; ++i) {
    lo.push_back(-babs[i]);
    hi.push_back(babs[i]);
  }
  for (int j = 0; j < K.r2; ++j) {
    lo.push_back(-babs[K.r1 + j]);
    hi.push_back(babs[K.r1 + j]);
    lo.push_back(-babs[K.r1 + j]);
    hi.push_back(babs[K.r1 + j]);
  }
  auto f = [&](const double* x) {
    EmbPt p = embpt_from_flat(K, x);
    return r.contains(p) ? 1.0 : 0.0;
  };
  return qmc_integrate(f, lo, hi, npoints, parallel);
}

static double gamma_half_int(int n) {  // Gamma(n/2 + 1)
  if (n % 2 == 0) {
    double v = 1;
    for (int k = 2; k <= n / 2; ++k) v *= k;
    return v;
  }
  double v = std::sqrt(M_PI);
  for (double x = 0.5; x <= n / 2.0; x += 1.0) v *= x;
  return v;
}

double region_volume(const Region& r, QmcResult* qmc_info) {
  const NumberField& K = *r.field;
  switch (r.kind) {
    case Region::Kind::Box: {
      double v = 1;
      for (int i = 0; i < K.r1; ++i) v *= 2 * r.box_bounds[i];
      for (int j = 0; j < K.r2; ++j) v *= M_PI * r.box_bounds[K.r1 + j] * r.box_bounds[K.r1 + j];
      return v;
    }
    case Region::Kind::Ball:
      return std::pow(M_PI, K.n / 2.0) / gamma_half_int(K.n) * std::pow(r.radius, K.n);
    case Region::Kind::AnnulusSector: {
      double v = 1;
      for (int i = 0; i < K.r1; ++i) v *= r.sector.radial_width;
      for (int j = 0; j < K.r2; ++j) {
        double a = r.sector.a[K.r1 + j], w = r.sector.radial_width;
        v *= r.sector.angular_width * ((a + w) * (a + w) - a * a) / 2.0;
      }
      return v;
    }
    case Region::Kind::ThinCone: {
      // vol_base(P) * (N - N') / (2^{r2} sqrt(r1+r2))
      double base = 1;
      for (size_t k = 0; k < r.cone.h_lo.size(); ++k) base *= (r.cone.h_hi[k] - r.cone.h_lo[k]);
      for (int j = 0; j < K.r2; ++j) base *= 2 * M_PI * (r.cone.ang_hi[j] - r.cone.ang_lo[j]);
      return base * (r.cone.norm_hi - r.cone.norm_lo) /
             (std::pow(2.0, K.r2) * std::sqrt(double(K.r1 + K.r2)));
    }
    case Region::Kind::Polytope: {
      QmcResult q = region_volume_qmc(r, 1u << 20);
      if (qmc_info) *qmc_info = q;
      return q.value;
    }
  }
  return 0;
}

SectorCover cover_with_annulus_sectors(const NumberField& K, double X, int Y) {
  if (Y < 2) throw domain_error("cover_with_annulus_sectors: Y must be >= 2");
  if (X <= 1) throw domain_error("cover_with_annulus_sectors: X must exceed 1");
  SectorCover cover;
  int m = K.r1 + K.r2;
  // radial partition of [1, X) into K_r half-open intervals of width <= X/Y
  int Kr = int(std::ceil((X - 1) / (X / double(Y))));
  double wr = (X - 1) / double(Kr);
  // angular partition into K_a arcs of width <= 1/Y radians
  int Ka = std::max(1, int(std::ceil(2 * M_PI * Y)));
  double wa = 2 * M_PI / double(Ka);
  cover.radial_count = Kr;
  cover.angular_count = Ka;

  std::vector<i64> idx(m + K.r2, 0);
  u64 total_masks = u64(1) << K.r1;
  while (true) {
    for (u64 mask = 0; mask < total_masks; ++mask) {
      AnnulusSectorData d;
      d.a.resize(m);
      for (int i = 0; i < m; ++i) d.a[i] = 1.0 + wr * double(idx[i]);
      d.radial_width = wr;
      d.theta.resize(K.r2);
      for (int j = 0; j < K.r2; ++j) d.theta[j] = wa * double(idx[m + j]);
      d.angular_width = wa;
      d.sign_mask = u32(mask);
      d.grid = idx;
      d.grid.push_back(i64(mask));
      cover.sectors.push_back(make_annulus_sector(K, d));
    }
    size_t i = 0;
    for (; i < idx.size(); ++i) {
      i64 limit = (i < size_t(m)) ? Kr : Ka;
      if (++idx[i] < limit) break;
      idx[i] = 0;
    }
    if (i == idx.size()) break;
  }
  cover.count_constant = double(cover.sectors.size()) / std::pow(double(Y), K.n);
  return cover;
}

// support of an arc-annulus at complex place value set {rho e^{i t}} under a
// linear functional (nx, ny): max over rho in [rlo, rhi], t in [tlo, thi]
static double arc_support(double rlo, double rhi, double tlo, double thi, double nx, double ny) {
  double nn = std::hypot(nx, ny);
  if (nn == 0) return 0;
  double phi = std::atan2(ny, nx);
  auto val = [&](double rho, double t) { return rho * (nx * std::cos(t) + ny * std::sin(t)); };
  double best = -1e300;
  for (double rho : {rlo, rhi})
    for (double t : {tlo, thi}) best = std::max(best, val(rho, t));
  // interior tangency at t = phi (curvature adjustment)
  double t = phi;
  while (t < tlo) t += 2 * M_PI;
  while (t > thi) t -= 2 * M_PI;
  if (t >= tlo && t <= thi) best = std::max(best, rhi * nn);
  return best;
}

// conservative containment certificate: sector corners + per-kind bounds
static bool sector_inside(const Region& C, const Region& s) {
  const NumberField& K = *C.field;
  const auto& d = s.sector;
  switch (C.kind) {
    case Region::Kind::Box: {
      for (int i = 0; i < K.r1 + K.r2; ++i)
        if (d.a[i] + d.radial_width > C.box_bounds[i]) return false;
      return true;
    }
    case Region::Kind::Ball: {
      double worst = 0;
      for (int i = 0; i < K.r1; ++i) {
        double c = C.center[i];
        double lo = ((d.sign_mask >> i) & 1) ? -(d.a[i] + d.radial_width) : d.a[i];
        double hi = ((d.sign_mask >> i) & 1) ? -d.a[i] : d.a[i] + d.radial_width;
        worst += std::max((lo - c) * (lo - c), (hi - c) * (hi - c));
      }
      for (int j = 0; j < K.r2; ++j) {
        double cx = C.center[K.r1 + 2 * j], cy = C.center[K.r1 + 2 * j + 1];
        // max |z - c| over the arc-annulus = support in direction -c plus |c| geometry;
        // bound via max over corner moduli and the farthest arc point from c
        double rlo = d.a[K.r1 + j], rhi = rlo + d.radial_width;
        double tlo = d.theta[j], thi = d.theta[j] + d.angular_width;
        double best = 0;
        for (double rho : {rlo, rhi})
          for (double t : {tlo, thi}) {
            double dx = rho * std::cos(t) - cx, dy = rho * std::sin(t) - cy;
            best = std::max(best, dx * dx + dy * dy);
          }
        // antipodal tangency
        double phi = std::atan2(-cy, -cx);
        double t = phi;
        while (t < tlo) t += 2 * M_PI;
        while (t > thi) t -= 2 * M_PI;
        if (t >= tlo && t <= thi) {
          double dx = rhi * std::cos(t) - cx, dy = rhi * std::sin(t) - cy;
          best = std::max(best, dx * dx + dy * dy);
        }
        worst += best;
      }
      return std::sqrt(worst) <= C.radius;
    }
    case Region::Kind::Polytope: {
      for (size_t rr = 0; rr < C.normals.size(); ++rr) {
        double sup = 0;
        for (int i = 0; i < K.r1; ++i) {
          double ni = C.normals[rr][i];
          double lo = ((d.sign_mask >> i) & 1) ? -(d.a[i] + d.radial_width) : d.a[i];
          double hi = ((d.sign_mask >> i) & 1) ? -d.a[i] : d.a[i] + d.radial_width;
          sup += std::max(ni * lo, ni * hi);
        }
        for (int j = 0; j < K.r2; ++j)
          sup += arc_support(d.a[K.r1 + j], d.a[K.r1 + j] + d.radial_width, d.theta[j],
                             d.theta[j] + d.angular_width, C.normals[rr][K.r1 + 2 * j],
                             C.normals[rr][K.r1 + 2 * j + 1]);
        if (sup > C.offsets[rr]) return false;
      }
      return true;
    }
    default:
      throw domain_error("select_interior_sectors: unsupported body kind");
  }
}

InteriorSelection select_interior_sectors(const Region& C, const SectorCover& cover) {
  InteriorSelection sel;
  double inside_vol = 0;
  for (size_t i = 0; i < cover.sectors.size(); ++i) {
    if (sector_inside(C, cover.sectors[i])) {
      sel.inside.push_back(int(i));
      inside_vol += region_volume(cover.sectors[i]);
    }
  }
  sel.deficit_volume = region_volume(C) - inside_vol;
  return sel;
}

// ------------------------------------------------- secondary integral

static double component_norm_integral(const NumberField& K, const Region& C, double beta) {
  // integral of N(x)^{beta-1} over C intersected with one sign component
  switch (C.kind) {
    case Region::Kind::Box: {
      double v = 1;
      for (int i = 0; i < K.r1; ++i) v *= std::pow(C.box_bounds[i], beta) / beta;
      for (int j = 0; j < K.r2; ++j) {
        double X = C.box_bounds[K.r1 + j];
        v *= 2 * M_PI * std::pow(X, 2 * beta) / (2 * beta);
      }
      return v;
    }
    case Region::Kind::AnnulusSector: {
      double v = 1;
      for (int i = 0; i < K.r1; ++i) {
        double a = C.sector.a[i], w = C.sector.radial_width;
        v *= (std::pow(a + w, beta) - std::pow(a, beta)) / beta;
      }
      for (int j = 0; j < K.r2; ++j) {
        double a = C.sector.a[K.r1 + j], w = C.sector.radial_width;
        v *= C.sector.angular_width * (std::pow(a + w, 2 * beta) - std::pow(a, 2 * beta)) /
             (2 * beta);
      }
      return v;
    }
    case Region::Kind::ThinCone: {
      double base = 1;
      for (size_t k = 0; k < C.cone.h_lo.size(); ++k) base *= (C.cone.h_hi[k] - C.cone.h_lo[k]);
      for (int j = 0; j < K.r2; ++j) base *= 2 * M_PI * (C.cone.ang_hi[j] - C.cone.ang_lo[j]);
      return base * (std::pow(C.cone.norm_hi, beta) - std::pow(C.cone.norm_lo, beta)) /
             (beta * std::pow(2.0, K.r2) * std::sqrt(double(K.r1 + K.r2)));
    }
    default:
      throw domain_error("component_norm_integral: use the QMC path for this kind");
  }
}

double secondary_integral(const NumberField& K, const Region& C, const FracIdeal& a,
                          const std::optional<SiegelData>& siegel) {
  if (!siegel) return region_volume(C);
  double beta = siegel->beta;
  if (!(beta > 0.0 && beta < 1.0) && beta != 1.0)
    throw domain_error("secondary_integral: beta must lie in (0,1]");
  double na = ideal_norm(K, a).get_d();
  double na_pow = std::pow(na, 1.0 - beta);

  // sign components touched by C, and psi's value there
  auto psi_on_mask = [&](u32 mask) {
    auto babs = C.bounding_abs();
    EmbPt sample;
    sample.s.resize(K.r1 + K.r2);
    for (int i = 0; i < K.r1; ++i) {
      double v = std::max(babs[i] * 0.5, 0.5);
      sample.s[i] = ((mask >> i) & 1) ? -v : v;
    }
    for (int j = 0; j < K.r2; ++j)
      sample.s[K.r1 + j] = std::polar(std::max(babs[K.r1 + j] * 0.5, 0.5), 0.1);
    auto v = evaluate_finite(*siegel->cg, siegel->psi, sample, *siegel->ring_a,
                             siegel->alpha_rep);
    if (std::abs(v.imag()) > 1e-9)
      throw domain_error("secondary_integral: character is not real-valued");
    return v.real() >= 0 ? 1.0 : -1.0;
  };

  switch (C.kind) {
    case Region::Kind::AnnulusSector:
    case Region::Kind::ThinCone: {
      u32 mask = (C.kind == Region::Kind::AnnulusSector) ? C.sector.sign_mask : C.cone.sign_mask;
      double s = psi_on_mask(mask);
      double vol = region_volume(C);
      double ni = component_norm_integral(K, C, beta) * na_pow;
      return vol - s * ni;
    }
    case Region::Kind::Box: {
      // all 2^{r1} components touched symmetrically
      double ssum = 0;
      double s0 = psi_on_mask(0);
      bool constant = true;
      for (u32 mask = 0; mask < (u32(1) << K.r1); ++mask) {
        double s = psi_on_mask(mask);
        constant = constant && (s == s0);
        ssum += s;
      }
      if (!constant && K.r1 > 0)
        throw domain_error(
            "secondary_integral: region touches the coordinate axes with nonconstant sign data");
      double vol = region_volume(C);
      double per_comp = component_norm_integral(K, C, beta) * na_pow;
      return vol - ssum * per_comp;
    }
    case Region::Kind::Ball:
    case Region::Kind::Polytope: {
      // components touched: both signs whenever the region straddles an axis
      double s0 = psi_on_mask(0);
      bool straddles = false;
      if (C.kind == Region::Kind::Ball) {
        for (int i = 0; i < K.r1; ++i)
          if (std::abs(C.center[i]) < C.radius) straddles = true;
      } else {
        straddles = (K.r1 > 0);
      }
      if (straddles) {
        bool constant = true;
        for (u32 mask = 0; mask < (u32(1) << K.r1); ++mask)
          constant = constant && (psi_on_mask(mask) == s0);
        if (!constant)
          throw domain_error(
              "secondary_integral: region touches the coordinate axes with nonconstant sign data");
      }
      // QMC of the full integrand (sign fixed per sample point)
      auto babs = C.bounding_abs();
      std::vector<double> lo, hi;
      for (int i = 0; i < K.r1; ++i) {
        lo.push_back(-babs[i]);
        hi.push_back(babs[i]);
      }
      for (int j = 0; j < K.r2; ++j)
        for (int t = 0; t < 2; ++t) {
          lo.push_back(-babs[K.r1 + j]);
          hi.push_back(babs[K.r1 + j]);
        }
      auto f = [&](const double* x) {
        EmbPt p = embpt_from_flat(K, x);
        if (!C.contains(p)) return 0.0;
        double nm = abs_norm_of_point(K, p);
        if (nm <= 0) return 0.0;
        u32 mask = 0;
        for (int i = 0; i < K.r1; ++i)
          if (p.s[i].real() < 0) mask |= (1u << i);
        double s = psi_on_mask(mask);
        return 1.0 - s * std::pow(nm / na, beta - 1.0);
      };
      return qmc_integrate(f, lo, hi, 1u << 20).value;
    }
  }
  return 0;
}

}  // namespace mitsui
