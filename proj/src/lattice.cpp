#include "mitsui/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mitsui/residue.hpp"

namespace mitsui {

LogEmbedding log_embed_point(const NumberField& K, const EmbPt& p) {
  int m = K.r1 + K.r2;
  LogEmbedding e;
  e.v.resize(m);
  double s = 0;
  for (int i = 0; i < m; ++i) {
    double a = std::abs(p.s[i]);
    if (a == 0.0) throw domain_error("log_embed: zero coordinate at an embedding");
    e.v[i] = (i < K.r1) ? std::log(a) : 2.0 * std::log(a);
    s += e.v[i];
  }
  e.norm_part = s;
  // u = (1/n)(1,..,1,2,..,2); v = s*u + h
  e.h_part.resize(m);
  for (int i = 0; i < m; ++i) {
    double ui = (i < K.r1 ? 1.0 : 2.0) / double(K.n);
    e.h_part[i] = e.v[i] - s * ui;
  }
  return e;
}

LogEmbedding log_embed(const NumberField& K, const Elem& x) {
  if (is_zero(x)) throw domain_error("log_embed: zero element");
  return log_embed_point(K, minkowski_embed(K, x));
}

std::vector<std::vector<double>> h_orthonormal_basis(const NumberField& K) {
  int m = K.r1 + K.r2;
  std::vector<std::vector<double>> basis;
  // Gram-Schmidt of e_1 - e_{i+1} style spanning vectors of H
  for (int i = 0; i + 1 < m; ++i) {
    std::vector<double> v(m, 0.0);
    v[i] = 1.0;
    v[i + 1] = -1.0;
    for (const auto& b : basis) {
      double d = 0;
      for (int k = 0; k < m; ++k) d += v[k] * b[k];
      for (int k = 0; k < m; ++k) v[k] -= d * b[k];
    }
    double nn = 0;
    for (int k = 0; k < m; ++k) nn += v[k] * v[k];
    nn = std::sqrt(nn);
    for (int k = 0; k < m; ++k) v[k] /= nn;
    basis.push_back(v);
  }
  return basis;
}

FundamentalDomain::FundamentalDomain(const NumberField& K) : field(&K) {
  int r = K.unit_rank(), m = K.r1 + K.r2;
  unit_logs.resize(r);
  for (int u = 0; u < r; ++u) {
    LogEmbedding le = log_embed(K, K.units[u]);
    if (std::abs(le.norm_part) > 1e-8)
      throw config_error("unit log vector is not in H");
    unit_logs[u] = le.h_part;
  }
  // inverse Gram
  if (r > 0) {
    std::vector<std::vector<double>> g(r, std::vector<double>(r, 0.0));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        for (int k = 0; k < m; ++k) g[i][j] += unit_logs[i][k] * unit_logs[j][k];
    // invert by Gauss-Jordan
    gram_inv.assign(r, std::vector<double>(r, 0.0));
    for (int i = 0; i < r; ++i) gram_inv[i][i] = 1.0;
    for (int k = 0; k < r; ++k) {
      int p = k;
      for (int i = k + 1; i < r; ++i)
        if (std::abs(g[i][k]) > std::abs(g[p][k])) p = i;
      std::swap(g[p], g[k]);
      std::swap(gram_inv[p], gram_inv[k]);
      if (g[k][k] == 0) throw config_error("rank-deficient unit lattice");
      double piv = g[k][k];
      for (int j = 0; j < r; ++j) {
        g[k][j] /= piv;
        gram_inv[k][j] /= piv;
      }
      for (int i = 0; i < r; ++i) {
        if (i == k) continue;
        double f = g[i][k];
        if (f == 0) continue;
        for (int j = 0; j < r; ++j) {
          g[i][j] -= f * g[k][j];
          gram_inv[i][j] -= f * gram_inv[k][j];
        }
      }
    }
  }
  for (int u = 0; u < r; ++u) unit_inv.push_back(unit_inverse(K, K.units[u]));
  torsion_inv = unit_inverse(K, K.torsion);
}

std::vector<double> FundamentalDomain::unit_coords(const EmbPt& p) const {
  const NumberField& K = *field;
  int r = K.unit_rank(), m = K.r1 + K.r2;
  LogEmbedding le = log_embed_point(K, p);
  std::vector<double> rhs(r, 0.0), c(r, 0.0);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < m; ++k) rhs[i] += unit_logs[i][k] * le.h_part[k];
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) c[i] += gram_inv[i][j] * rhs[j];
  return c;
}

double FundamentalDomain::torsion_angle_turns(const EmbPt& p) const {
  const NumberField& K = *field;
  if (K.r2 > 0) {
    double a = std::arg(p.s[K.r1]);
    double t = a / (2 * M_PI);
    t -= std::floor(t);
    return t;
  }
  return p.s[0].real() > 0 ? 0.0 : 0.5;
}

bool FundamentalDomain::contains(const EmbPt& p) const {
  const NumberField& K = *field;
  auto c = unit_coords(p);
  for (double ci : c)
    if (!in_half_open(ci, 0.0, 1.0)) return false;
  if (K.r2 == 0) return p.s[0].real() > 0.0;
  return in_half_open(torsion_angle_turns(p), 0.0, 1.0 / K.w);
}

std::pair<Elem, Elem> FundamentalDomain::reduce(const Elem& x) const {
  const NumberField& K = *field;
  if (is_zero(x)) throw domain_error("reduce: zero element");
  int r = K.unit_rank();
  auto c = unit_coords(minkowski_embed(K, x));
  Elem rep = x;
  Elem unit = K.one();
  for (int i = 0; i < r; ++i) {
    // snap to the tie band so face points land in the cell whose lower face
    // they are (matching the half-open membership rule)
    i64 k = i64(std::floor(c[i] + kTieTolerance));
    if (k == 0) continue;
    Elem step = (k > 0) ? unit_inv[i] : K.units[i];
    rep = element_mul(K, rep, element_pow(K, step, std::abs(k)));
    Elem ustep = (k > 0) ? K.units[i] : unit_inv[i];
    unit = element_mul(K, unit, element_pow(K, ustep, std::abs(k)));
  }
  // torsion scan: exactly one of zeta^m * rep lies in the sector
  for (int m = 0; m < K.w; ++m) {
    Elem cand = (m == 0) ? rep : element_mul(K, element_pow(K, K.torsion, m), rep);
    if (contains(minkowski_embed(K, cand))) {
      Elem u = element_mul(K, unit, element_pow(K, torsion_inv, m));
      return {u, cand};
    }
  }
  throw domain_error("reduce: no associate landed in the fundamental domain");
}

double compute_regulator(const NumberField& K) { return regulator_from_units(K); }

Z lattice_index(const IntegerLattice& lat) {
  Z d = det(lat.basis);
  if (d == 0) throw domain_error("lattice_index: rank-deficient lattice");
  return d < 0 ? Z(-d) : d;
}

ZMat lattice_hnf(const IntegerLattice& lat) {
  // rows = generators for the HNF routine
  ZMat rows(lat.basis.cols, lat.basis.rows);
  for (int i = 0; i < lat.basis.rows; ++i)
    for (int j = 0; j < lat.basis.cols; ++j) rows.at(j, i) = lat.basis.at(i, j);
  return hnf_square(rows);
}

// Reduce column `target` of A below the sublattice spanned by the other
// columns restricted to rows [row0, d): subtract lattice vectors so that the
// remaining entries lie in [0, pivot_i) of that sublattice's HNF.
static void reduce_tail_column(ZMat& A, int row0, int target) {
  int d = A.rows;
  int k = d - row0;  // tail dimension
  if (k <= 0) return;
  // tail block: columns row0..d-1, rows row0..d-1
  ZMat sub(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) sub.at(i, j) = A.at(row0 + i, row0 + j);
  // column-style HNF with transform: H = sub * U
  ZMat H, U;
  hnf_columns_with_transform(sub, H, U);
  // H columns are lattice generators, lower-triangular by construction of the
  // transpose trick: H^T is the row HNF, so H is upper-triangular with
  // positive pivots H[i][i] at column i.
  for (int i = 0; i < k; ++i) {
    const Z& piv = H.at(i, i);
    if (piv == 0) throw domain_error("bounded_basis: rank-deficient tail");
    Z q;
    mpz_fdiv_q(q.get_mpz_t(), A.at(row0 + i, target).get_mpz_t(), piv.get_mpz_t());
    if (q == 0) continue;
    // column(target) -= q * (sub * U e_i) = q * H e_i; express through the
    // original columns: H e_i = sum_j U[j][i] * column(row0+j)
    for (int j = 0; j < k; ++j) {
      Z f = q * U.at(j, i);
      if (f == 0) continue;
      for (int rr = 0; rr < d; ++rr) A.at(rr, target) -= f * A.at(rr, row0 + j);
    }
  }
}

static void bounded_basis_rec(ZMat& A, int t) {
  int d = A.rows;
  if (t >= d) return;
  // gcd-reduce row t over columns t..d-1 to (d1, 0, ..., 0)
  while (true) {
    int nz = -1;
    for (int j = t + 1; j < d; ++j)
      if (A.at(t, j) != 0) { nz = j; break; }
    if (nz < 0) break;
    if (A.at(t, t) == 0) {
      for (int rr = 0; rr < d; ++rr) std::swap(A.at(rr, t), A.at(rr, nz));
      continue;
    }
    // column nz -= q * column t (Euclid on the row-t entries)
    Z q = A.at(t, nz) / A.at(t, t);
    for (int rr = 0; rr < d; ++rr) A.at(rr, nz) -= q * A.at(rr, t);
    if (A.at(t, nz) != 0)
      for (int rr = 0; rr < d; ++rr) std::swap(A.at(rr, t), A.at(rr, nz));
  }
  if (A.at(t, t) < 0)
    for (int rr = 0; rr < d; ++rr) A.at(rr, t) = -A.at(rr, t);
  bounded_basis_rec(A, t + 1);
  reduce_tail_column(A, t + 1, t);
}

IntegerLattice bounded_basis(const IntegerLattice& lat) {
  if (lat.basis.rows != lat.basis.cols)
    throw domain_error("bounded_basis: square generator matrix required");
  Z D = lattice_index(lat);  // throws on rank deficiency
  IntegerLattice out{lat.basis};
  bounded_basis_rec(out.basis, 0);
  for (const Z& v : out.basis.a)
    if (abs(v) > D) throw domain_error("bounded_basis: entry bound violated");
  return out;
}

// --------------------------------------------------- unit kernel lattice

IntegerLattice unit_kernel_lattice(const NumberField& K, const FracIdeal& q) {
  int r = K.unit_rank();
  ResidueRing ring = residue_units(K, unit_ideal(K), q);
  // finite group element = (sign mask, residue index); key packs both
  auto elt_key = [&](u64 mask, u64 idx) { return mask * ring.count_u64() + idx; };
  auto embed_sign_mask = [&](const Elem& x) {
    EmbPt p = minkowski_embed(K, x);
    u64 mask = 0;
    for (int i = 0; i < K.r1; ++i)
      if (p.s[i].real() < 0) mask |= (u64(1) << i);
    return mask;
  };
  struct FElt { u64 mask; std::vector<i64> rep; };
  auto image_of = [&](const Elem& u) {
    FElt e;
    e.mask = embed_sign_mask(u);
    e.rep = ring.reduce_to_class(u);
    return e;
  };
  auto mul_felt = [&](const FElt& a, const FElt& b) {
    FElt c;
    c.mask = a.mask ^ b.mask;
    c.rep = ring.class_mul(a.rep, b.rep);
    return c;
  };
  auto key_of = [&](const FElt& e) { return elt_key(e.mask, ring.class_index(e.rep)); };

  FElt ident{0, ring.reduce_to_class(K.one())};
  // incremental kernel: subgroup H with preimage exponent vectors
  std::map<u64, std::vector<i64>> H;
  H[key_of(ident)] = std::vector<i64>(r, 0);
  std::vector<std::vector<Z>> kernel_cols;
  for (int j = 0; j < r; ++j) {
    FElt gj = image_of(K.units[j]);
    // smallest t >= 1 with gj^t in H
    FElt pw = gj;
    i64 t = 1;
    while (H.find(key_of(pw)) == H.end()) {
      pw = mul_felt(pw, gj);
      ++t;
      if (t > i64(ring.count_u64()) * (i64(1) << K.r1))
        throw domain_error("unit_kernel_lattice: order search overflow");
    }
    std::vector<i64> v = H[key_of(pw)];  // gj^t = prod_{i<j} g_i^{v_i}
    std::vector<Z> col(r, Z(0));
    for (int i = 0; i < j; ++i) col[i] = z_of(-v[i]);
    col[j] = z_of(t);
    kernel_cols.push_back(col);
    // extend H by gj: new elements h * gj^s, s in [1, t)
    std::map<u64, std::vector<i64>> newH = H;
    FElt step = gj;
    for (i64 s = 1; s < t; ++s) {
      for (const auto& [hk, hv] : H) {
        FElt he{hk / ring.count_u64(), ring.class_of_index(hk % ring.count_u64())};
        FElt ne = mul_felt(he, step);
        std::vector<i64> nv = hv;
        nv[j] += s;
        newH.emplace(key_of(ne), nv);
      }
      step = mul_felt(step, gj);
    }
    H = std::move(newH);
  }
  IntegerLattice lat;
  lat.basis = ZMat(r, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < r; ++i) lat.basis.at(i, j) = kernel_cols[j][i];
  if (r == 0) return lat;
  return bounded_basis(lat);
}

std::pair<double, double> torus_volumes(const NumberField& K, const FracIdeal& q) {
  double base = std::pow(2.0, K.r1) * std::pow(2 * M_PI, K.r2) * K.regulator *
                std::sqrt(double(K.r1 + K.r2)) / double(K.w);
  Z phi = totient_ideal(K, q);
  double idele = phi.get_d() * double(K.h) * base;
  return {base, idele};
}

}  // namespace mitsui
