#include "mitsui/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace mitsui {

using cplx = std::complex<double>;
using cplxl = std::complex<long double>;

// ---------------------------------------------------------------- roots

static std::vector<cplxl> durand_kerner(const std::vector<i64>& poly) {
  int n = int(poly.size()) - 1;
  std::vector<cplxl> coeff(poly.size());
  for (size_t i = 0; i < poly.size(); ++i) coeff[i] = (long double)poly[i];
  auto eval = [&](cplxl x) {
    cplxl v = 0;
    for (int i = n; i >= 0; --i) v = v * x + coeff[i];
    return v;
  };
  long double scale = 0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, fabsl((long double)poly[i]));
  long double radius = 1 + scale;
  const long double PIL = 3.141592653589793238462643383279502884L;
  std::vector<cplxl> z(n);
  for (int i = 0; i < n; ++i) {
    long double ang = 2 * PIL * i / n + 0.3L;
    z[i] = radius * cplxl(cosl(ang), sinl(ang)) * 0.7L;
  }
  for (int iter = 0; iter < 500; ++iter) {
    long double move = 0;
    for (int i = 0; i < n; ++i) {
      cplxl num = eval(z[i]), den = 1;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= (z[i] - z[j]);
      cplxl delta = num / den;
      z[i] -= delta;
      move = std::max(move, std::abs(delta));
    }
    if (move < 1e-24L) break;
  }
  // Newton polish
  std::vector<cplxl> dcoeff(n);
  for (int i = 1; i <= n; ++i) dcoeff[i - 1] = coeff[i] * (long double)i;
  auto deval = [&](cplxl x) {
    cplxl v = 0;
    for (int i = n - 1; i >= 0; --i) v = v * x + dcoeff[i];
    return v;
  };
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < 8; ++k) {
      cplxl d = deval(z[i]);
      if (std::abs(d) == 0) break;
      z[i] -= eval(z[i]) / d;
    }
  return z;
}

// ------------------------------------------------------- polynomial utils

static Z poly_resultant(const std::vector<Z>& f, const std::vector<Z>& g) {
  // Sylvester determinant
  int m = int(f.size()) - 1, n = int(g.size()) - 1;
  if (m < 0 || n < 0) return 0;
  ZMat s(m + n, m + n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) s.at(i, i + j) = f[m - j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) s.at(n + i, i + j) = g[n - j];
  return det(s);
}

static Z poly_discriminant(const std::vector<i64>& poly) {
  int n = int(poly.size()) - 1;
  if (n <= 1) return 1;
  std::vector<Z> f(poly.size()), df(poly.size() - 1);
  for (size_t i = 0; i < poly.size(); ++i) f[i] = z_of(poly[i]);
  for (int i = 1; i <= n; ++i) df[i - 1] = z_of(poly[i]) * i;
  Z res = poly_resultant(f, df);
  // disc = (-1)^{n(n-1)/2} res / lc; monic so lc = 1
  if (((n * (n - 1) / 2) % 2) == 1) res = -res;
  return res;
}

static i64 poly_eval_i64(const std::vector<i64>& poly, i64 x) {
  i64 v = 0;
  for (int i = int(poly.size()) - 1; i >= 0; --i) v = checked_add(checked_mul(v, x), poly[i]);
  return v;
}

static void check_irreducible(const std::vector<i64>& poly) {
  int n = int(poly.size()) - 1;
  if (n < 1) throw config_error("defining polynomial must have degree >= 1");
  if (poly[n] != 1) throw config_error("defining polynomial must be monic");
  if (n == 1) return;
  if (poly_discriminant(poly) == 0)
    throw config_error("defining polynomial is not squarefree");
  i64 a0 = poly[0];
  if (a0 == 0) throw config_error("defining polynomial is divisible by x");
  // rational root test
  for (i64 d = 1; d * d <= std::abs(a0); ++d) {
    if (std::abs(a0) % d != 0) continue;
    for (i64 r : {d, std::abs(a0) / d})
      for (i64 s : {r, -r})
        if (poly_eval_i64(poly, s) == 0)
          throw config_error("defining polynomial has a rational root");
  }
  if (n == 4) {
    // bounded trial over monic quadratic factors x^2 + b x + c with c | a0
    i64 cb = 2;
    for (i64 v : poly) cb += std::abs(v);
    for (i64 d = 1; d * d <= std::abs(a0); ++d) {
      if (std::abs(a0) % d != 0) continue;
      for (i64 c : {d, std::abs(a0) / d, -d, -std::abs(a0) / d})
        for (i64 b = -cb; b <= cb; ++b) {
          // divide poly by x^2 + b x + c and test zero remainder
          i64 q2 = poly[4];
          i64 q1 = poly[3] - b * q2;
          i64 q0 = poly[2] - b * q1 - c * q2;
          i64 r1m = poly[1] - b * q0 - c * q1;
          i64 r0 = poly[0] - c * q0;
          if (r1m == 0 && r0 == 0) throw config_error("defining polynomial factors");
        }
    }
  }
}

// ------------------------------------------------- multiplication table

// Powers of theta modulo f, as integer coefficient vectors (monic f).
static std::vector<std::vector<Z>> theta_powers(const std::vector<i64>& poly, int upto) {
  int n = int(poly.size()) - 1;
  std::vector<std::vector<Z>> pw;
  std::vector<Z> cur(n, Z(0));
  cur[0] = 1;
  pw.push_back(cur);
  for (int k = 1; k <= upto; ++k) {
    std::vector<Z> nxt(n, Z(0));
    Z top = cur[n - 1];
    for (int i = n - 1; i >= 1; --i) nxt[i] = cur[i - 1];
    nxt[0] = 0;
    if (top != 0)
      for (int i = 0; i < n; ++i) nxt[i] -= top * z_of(poly[i]);
    pw.push_back(nxt);
    cur = nxt;
  }
  return pw;
}

struct TableBuild {
  std::vector<std::vector<std::vector<i64>>> mult;
  QMat basis_in_power;   // column k = power coords of w_k
  QMat power_in_basis;   // inverse
};

static TableBuild build_mult_table(const std::vector<i64>& poly, const QMat& C) {
  int n = int(poly.size()) - 1;
  TableBuild out;
  out.basis_in_power = C;
  out.power_in_basis = qmat_inverse(C);
  auto pw = theta_powers(poly, 2 * n - 2);
  out.mult.assign(n, std::vector<std::vector<i64>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // power coords of w_i and w_j
      std::vector<Q> pi(n), pj(n);
      for (int k = 0; k < n; ++k) {
        pi[k] = C.at(k, i);
        pj[k] = C.at(k, j);
      }
      // convolution then reduction through theta powers
      std::vector<Q> prod(n, Q(0));
      for (int a = 0; a < n; ++a) {
        if (pi[a] == 0) continue;
        for (int b = 0; b < n; ++b) {
          if (pj[b] == 0) continue;
          Q coef = pi[a] * pj[b];
          for (int k = 0; k < n; ++k)
            if (pw[a + b][k] != 0) prod[k] += coef * Q(pw[a + b][k]);
        }
      }
      // back to integral basis
      std::vector<Q> x(n);
      for (int r = 0; r < n; ++r) {
        Q acc(0);
        for (int c = 0; c < n; ++c) acc += out.power_in_basis.at(r, c) * prod[c];
        acc.canonicalize();
        x[r] = acc;
      }
      std::vector<i64> xi(n);
      for (int r = 0; r < n; ++r) {
        if (x[r].get_den() != 1)
          throw config_error("integral basis is not multiplicatively closed");
        xi[r] = z_to_i64(x[r].get_num());
      }
      out.mult[i][j] = xi;
    }
  return out;
}

// ------------------------------------------------------- element algebra

static void normalize_elem(Elem& x) {
  if (x.den < 0) {
    x.den = -x.den;
    for (auto& v : x.c) v = -v;
  }
  i64 g = x.den;
  for (i64 v : x.c) g = gcd_ll(g, v);
  if (g > 1) {
    x.den /= g;
    for (auto& v : x.c) v /= g;
  }
  if (x.den == 0) throw domain_error("element denominator is zero");
}

void canonicalize_element(Elem& x) { normalize_elem(x); }

bool is_zero(const Elem& x) {
  for (i64 v : x.c)
    if (v != 0) return false;
  return true;
}

Elem element_add(const NumberField& K, const Elem& x, const Elem& y) {
  (void)K;
  Elem r;
  i64 g = gcd_ll(x.den, y.den);
  i64 lx = y.den / g, ly = x.den / g;
  r.den = checked_mul(x.den, lx);
  r.c.resize(x.c.size());
  for (size_t i = 0; i < x.c.size(); ++i)
    r.c[i] = checked_add(checked_mul(x.c[i], lx), checked_mul(y.c[i], ly));
  normalize_elem(r);
  return r;
}

Elem element_neg(const Elem& x) {
  Elem r = x;
  for (auto& v : r.c) v = -v;
  return r;
}

Elem element_sub(const NumberField& K, const Elem& x, const Elem& y) {
  return element_add(K, x, element_neg(y));
}

Elem element_mul(const NumberField& K, const Elem& x, const Elem& y) {
  int n = K.n;
  std::vector<i128> acc(n, 0);
  for (int i = 0; i < n; ++i) {
    if (x.c[i] == 0) continue;
    for (int j = 0; j < n; ++j) {
      if (y.c[j] == 0) continue;
      i128 prod = i128(x.c[i]) * y.c[j];
      const auto& m = K.mult[i][j];
      for (int k = 0; k < n; ++k)
        if (m[k] != 0) acc[k] += prod * m[k];
    }
  }
  Elem r;
  r.den = checked_mul(x.den, y.den);
  r.c.resize(n);
  for (int k = 0; k < n; ++k) r.c[k] = narrow_i128(acc[k]);
  normalize_elem(r);
  return r;
}

Elem element_pow(const NumberField& K, const Elem& x, i64 e) {
  if (e < 0) throw domain_error("element_pow: negative exponent");
  Elem r = K.one(), b = x;
  while (e > 0) {
    if (e & 1) r = element_mul(K, r, b);
    e >>= 1;
    if (e > 0) b = element_mul(K, b, b);
  }
  return r;
}

static void mul_matrix(const NumberField& K, const Elem& x, std::vector<i64>& out);

Elem unit_inverse(const NumberField& K, const Elem& u) {
  // solve M_u y = one over Q; integral for units
  if (u.den != 1 || field_norm(K, u).abs_norm != 1)
    throw domain_error("unit_inverse: element is not a unit of O_K");
  int n = K.n;
  std::vector<i64> m;
  mul_matrix(K, u, m);
  QMat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A.at(i, j) = q_of(m[size_t(i) * n + j]);
  auto y = solve_q(A, to_q(K.one().c));
  Elem r;
  r.den = 1;
  r.c.resize(n);
  for (int i = 0; i < n; ++i) {
    if (y[i].get_den() != 1) throw domain_error("unit_inverse: non-integral inverse");
    r.c[i] = z_to_i64(y[i].get_num());
  }
  return r;
}

// multiplication-by-x matrix in the integral basis (x integral)
static void mul_matrix(const NumberField& K, const Elem& x, std::vector<i64>& out) {
  int n = K.n;
  out.assign(size_t(n) * n, 0);
  for (int j = 0; j < n; ++j) {  // column j = coords of x * w_j
    std::vector<i128> acc(n, 0);
    for (int i = 0; i < n; ++i) {
      if (x.c[i] == 0) continue;
      const auto& m = K.mult[i][j];
      for (int k = 0; k < n; ++k)
        if (m[k] != 0) acc[k] += i128(x.c[i]) * m[k];
    }
    for (int k = 0; k < n; ++k) out[size_t(k) * n + j] = narrow_i128(acc[k]);
  }
}

// exact determinant of a small integer matrix; i128 cofactor expansion with
// an mpz fallback when intermediates get large
static bool det_i128(const std::vector<i64>& m, int n, i128& out) {
  auto get = [&](int i, int j) { return i128(m[size_t(i) * n + j]); };
  const i128 LIM = (i128(1) << 120);
  switch (n) {
    case 1:
      out = get(0, 0);
      return true;
    case 2:
      out = get(0, 0) * get(1, 1) - get(0, 1) * get(1, 0);
      return true;
    case 3: {
      i128 a = get(0, 0), b = get(0, 1), c = get(0, 2);
      i128 d = get(1, 0), e = get(1, 1), f = get(1, 2);
      i128 g = get(2, 0), h = get(2, 1), i = get(2, 2);
      out = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
      return out < LIM && out > -LIM;
    }
    case 4: {
      i128 total = 0;
      std::vector<i64> minor(9);
      for (int c0 = 0; c0 < 4; ++c0) {
        int cc = 0;
        for (int j = 0; j < 4; ++j) {
          if (j == c0) continue;
          for (int i = 1; i < 4; ++i) minor[size_t(i - 1) * 3 + cc] = m[size_t(i) * 4 + j];
          ++cc;
        }
        i128 sub;
        if (!det_i128(minor, 3, sub)) return false;
        i128 term = get(0, c0) * sub;
        total += (c0 % 2 == 0) ? term : -term;
        if (total > LIM || total < -LIM) return false;
      }
      out = total;
      return true;
    }
    default:
      return false;
  }
}

static Z det_exact(const std::vector<i64>& m, int n) {
  i128 d;
  if (det_i128(m, n, d)) {
    bool neg = d < 0;
    i128 a = neg ? -d : d;
    Z hi = z_of_u(u64(a >> 64));
    Z lo = z_of_u(u64(a & ~u64(0)));
    Z r = (hi << 64) + lo;
    return neg ? Z(-r) : r;
  }
  ZMat zm(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) zm.at(i, j) = z_of(m[size_t(i) * n + j]);
  return det(zm);
}

NormPair field_norm(const NumberField& K, const Elem& x) {
  if (x.den != 1) throw domain_error("field_norm requires an integral element");
  std::vector<i64> m;
  mul_matrix(K, x, m);
  Z d = det_exact(m, K.n);
  i64 s = z_to_i64(d);
  return NormPair{s, u64(s < 0 ? -s : s)};
}

Q field_norm_q(const NumberField& K, const Elem& x) {
  Elem num{x.c, 1};
  std::vector<i64> m;
  mul_matrix(K, num, m);
  Z d = det_exact(m, K.n);
  Q r(d);
  Z dp = 1;
  for (int i = 0; i < K.n; ++i) dp *= z_of(x.den);
  r /= Q(dp);
  r.canonicalize();
  return r;
}

i64 element_trace(const NumberField& K, const Elem& x) {
  if (x.den != 1) throw domain_error("element_trace requires an integral element");
  std::vector<i64> m;
  mul_matrix(K, x, m);
  i64 t = 0;
  for (int i = 0; i < K.n; ++i) t = checked_add(t, m[size_t(i) * K.n + i]);
  return t;
}

EmbPt minkowski_embed(const NumberField& K, const Elem& x) {
  EmbPt p;
  p.s.resize(K.r1 + K.r2);
  for (int i = 0; i < K.r1 + K.r2; ++i) {
    cplx acc = 0;
    for (int k = 0; k < K.n; ++k)
      if (x.c[k] != 0) acc += double(x.c[k]) * K.emb[i][k];
    p.s[i] = acc / double(x.den);
  }
  return p;
}

// ------------------------------------------------------------ ideals

static void canonicalize_ideal(FracIdeal& a) {
  Z g = a.den;
  for (const Z& v : a.basis.a) g = gcd(g, v);
  if (g > 1) {
    for (Z& v : a.basis.a) v /= g;
    a.den /= g;
  }
}

FracIdeal unit_ideal(const NumberField& K) {
  // O_K in the integral basis is the identity lattice
  FracIdeal a;
  a.basis = ZMat::identity(K.n);
  a.den = 1;
  return a;
}

FracIdeal ideal_from_generators(const NumberField& K, const std::vector<Elem>& gens,
                                const Q& scale) {
  if (gens.empty()) throw domain_error("ideal_from_generators: empty generator list");
  bool allzero = true;
  for (const auto& g : gens) allzero = allzero && is_zero(g);
  if (allzero) throw domain_error("ideal_from_generators: all generators are zero");
  int n = K.n;
  // common denominator over all products g * w_k and the scale
  std::vector<Elem> rows;
  rows.reserve(gens.size() * n);
  Z den = scale.get_den();
  for (const auto& g : gens) {
    for (int k = 0; k < n; ++k) {
      Elem wk = K.zero();
      wk.c[k] = 1;
      Elem prod = element_mul(K, g, wk);
      rows.push_back(prod);
      den = lcm(den, z_of(prod.den));
    }
  }
  ZMat m(int(rows.size()), n);
  for (size_t r = 0; r < rows.size(); ++r) {
    Z f = (den / z_of(rows[r].den)) * scale.get_num();
    for (int c = 0; c < n; ++c) m.at(int(r), c) = z_of(rows[r].c[c]) * f;
  }
  FracIdeal out;
  out.basis = hnf(m);
  if (out.basis.rows != n) throw domain_error("ideal_from_generators: rank-deficient module");
  out.den = den;
  if (scale.get_num() < 0)
    throw domain_error("ideal_from_generators: scale must be positive");
  canonicalize_ideal(out);
  return out;
}

FracIdeal principal_ideal(const NumberField& K, const Elem& g) {
  return ideal_from_generators(K, {g});
}

Q ideal_norm(const NumberField& K, const FracIdeal& a) {
  Z d = 1;
  for (int i = 0; i < K.n; ++i) d *= a.basis.at(i, i);
  Z dp = 1;
  for (int i = 0; i < K.n; ++i) dp *= a.den;
  Q r(d, dp);
  r.canonicalize();
  return r;
}

Elem ideal_basis_vector(const NumberField& K, const FracIdeal& a, int i) {
  Elem e;
  e.c.resize(K.n);
  for (int j = 0; j < K.n; ++j) e.c[j] = z_to_i64(a.basis.at(i, j));
  e.den = z_to_i64(a.den);
  normalize_elem(e);
  return e;
}

FracIdeal ideal_mul(const NumberField& K, const FracIdeal& a, const FracIdeal& b) {
  std::vector<Elem> gens;
  for (int i = 0; i < K.n; ++i)
    for (int j = 0; j < K.n; ++j)
      gens.push_back(element_mul(K, ideal_basis_vector(K, a, i), ideal_basis_vector(K, b, j)));
  return ideal_from_generators(K, gens);
}

std::optional<std::vector<i64>> ideal_coords(const NumberField& K, const FracIdeal& a,
                                             const Elem& x) {
  // solve z * basis/den = x  => basis^T z = x.c * den / x.den
  int n = K.n;
  QMat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A.at(i, j) = Q(a.basis.at(j, i));
  std::vector<Q> b(n);
  for (int i = 0; i < n; ++i) b[i] = q_of(x.c[i]) * Q(a.den) / q_of(x.den);
  auto z = solve_q(A, b);
  std::vector<i64> out(n);
  for (int i = 0; i < n; ++i) {
    if (z[i].get_den() != 1) return std::nullopt;
    out[i] = z_to_i64(z[i].get_num());
  }
  return out;
}

bool ideal_contains(const NumberField& K, const FracIdeal& a, const Elem& x) {
  return ideal_coords(K, a, x).has_value();
}

Elem from_ideal_coords(const NumberField& K, const FracIdeal& a, const std::vector<i64>& z) {
  Elem acc = K.zero();
  for (int i = 0; i < K.n; ++i) {
    if (z[i] == 0) continue;
    Elem row = ideal_basis_vector(K, a, i);
    for (auto& v : row.c) v = checked_mul(v, z[i]);
    acc = element_add(K, acc, row);
  }
  return acc;
}

void validate_module(const NumberField& K, const FracIdeal& a) {
  // closure under multiplication by each integral-basis element
  for (int i = 0; i < K.n; ++i) {
    Elem bi = ideal_basis_vector(K, a, i);
    for (int k = 0; k < K.n; ++k) {
      Elem wk = K.zero();
      wk.c[k] = 1;
      if (!ideal_contains(K, a, element_mul(K, bi, wk)))
        throw config_error("matrix rows do not span an O_K-module");
    }
  }
  // canonical HNF check
  FracIdeal re = a;
  std::vector<Elem> gens;
  for (int i = 0; i < K.n; ++i) gens.push_back(ideal_basis_vector(K, a, i));
  FracIdeal canon = ideal_from_generators(K, gens);
  if (!(canon == a)) throw config_error("ideal basis is not in canonical HNF");
  (void)re;
}

Z totient_ideal(const NumberField& K, const FracIdeal& q) {
  // coset representatives of O_K/q from the HNF diagonal; a class is a unit
  // iff (alpha) + q = O_K
  Z nq_z = ideal_norm(K, q).get_num();
  if (ideal_norm(K, q).get_den() != 1)
    throw domain_error("totient_ideal: modulus must be an integral ideal");
  if (nq_z > 100000) throw domain_error("totient_ideal: modulus too large for brute force");
  if (nq_z == 1) return 1;  // a/qa = 0 has exactly one (generating) class
  u64 nq = nq_z.get_ui();
  int n = K.n;
  std::vector<i64> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = z_to_i64(q.basis.at(i, i));
  Z count = 0;
  std::vector<i64> z(n, 0);
  FracIdeal one = unit_ideal(K);
  for (u64 idx = 0; idx < nq; ++idx) {
    u64 t = idx;
    for (int i = 0; i < n; ++i) {
      z[i] = i64(t % u64(diag[i]));
      t /= u64(diag[i]);
    }
    Elem alpha{z, 1};
    if (is_zero(alpha)) continue;
    // (alpha) + q == O_K ?
    ZMat m(2 * n, n);
    std::vector<i64> mm;
    mul_matrix(K, alpha, mm);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m.at(r, c) = z_of(mm[size_t(c) * n + r]);  // row r = coords of alpha*w_r
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m.at(n + r, c) = q.basis.at(r, c);
    ZMat h = hnf(m);
    bool isone = (h.rows == n);
    if (isone)
      for (int i = 0; i < n && isone; ++i) isone = (h.at(i, i) == 1);
    if (isone) count += 1;
  }
  return count;
}

// ------------------------------------------------- real-quadratic units

// Continued fraction of the second integral-basis element with exact (P,Q)
// state; the matrix collected over one period of the cycle fixes the
// quadratic irrational and yields the fundamental unit of O_K.
static std::optional<Elem> real_quadratic_unit(const NumberField& K) {
  if (K.n != 2 || K.r1 != 2) return std::nullopt;
  Elem w1 = K.zero();
  w1.c[1] = 1;
  std::vector<i64> mm;
  mul_matrix(K, w1, mm);
  i64 t = mm[0 * 2 + 0] + mm[1 * 2 + 1];  // trace of M_w1
  i64 nm = field_norm(K, w1).signed_norm;
  i64 D = t * t - 4 * nm;  // discriminant of w1 = (t + sqrt(D))/2
  if (D <= 0) return std::nullopt;

  auto lt_sqrt = [&](i128 x) { return x < 0 || x * x < i128(D); };       // x < sqrt(D)
  auto gt_sqrt = [&](i128 x) { return x > 0 && x * x > i128(D); };      // x > sqrt(D)
  auto cf_floor = [&](i64 P, i64 Qd) {
    long double est = ((long double)P + sqrtl((long double)D)) / (long double)Qd;
    i64 a = (i64)floorl(est) - 2;
    auto le = [&](i64 v) {  // v <= (P + sqrt D)/Qd
      i128 num = i128(v) * Qd - P;
      return Qd > 0 ? lt_sqrt(num) : gt_sqrt(num);
    };
    while (le(a + 1)) ++a;
    while (!le(a)) --a;
    return a;
  };

  struct State { i64 P, Q; bool operator==(const State& o) const { return P == o.P && Q == o.Q; } };
  std::vector<State> seen;
  std::vector<i64> partials;
  State s{t, 2};
  for (int iter = 0; iter < 20000; ++iter) {
    for (size_t k = 0; k < seen.size(); ++k) {
      if (seen[k] == s) {
        // pure period over steps [k, iter): matrix product of the partials
        i64 m00 = 1, m01 = 0, m10 = 0, m11 = 1;
        for (size_t j = k; j < partials.size(); ++j) {
          i64 a = partials[j];
          i64 n00 = checked_add(checked_mul(a, m00), m10);
          i64 n01 = checked_add(checked_mul(a, m01), m11);
          m10 = m00; m11 = m01;
          m00 = n00; m01 = n01;
        }
        // beta = (P_k + sqrt D)/Q_k is fixed by the Moebius action, so
        // u = m10*beta + m11 is a unit. beta = (P_k - t)/Q_k + (2/Q_k)*w1.
        i64 Pk = seen[k].P, Qk = seen[k].Q;
        if (Qk == 0) return std::nullopt;
        i64 num_a = checked_mul(m10, checked_sub(Pk, t));
        i64 num_b = checked_mul(2, m10);
        if (num_a % Qk != 0 || num_b % Qk != 0) return std::nullopt;
        i64 ua = checked_add(num_a / Qk, m11), ub = num_b / Qk;
        Elem unit = K.zero();
        for (int i = 0; i < 2; ++i) unit.c[i] = checked_mul(ua, K.one().c[i]);
        unit.c[1] = checked_add(unit.c[1], ub);
        if (field_norm(K, unit).abs_norm != 1) return std::nullopt;
        // normalize to the representative > 1
        EmbPt e = minkowski_embed(K, unit);
        if (std::abs(e.s[0]) < 1.0) unit = unit_inverse(K, unit);
        e = minkowski_embed(K, unit);
        if (e.s[0].real() < 0) unit = element_neg(unit);
        return unit;
      }
    }
    seen.push_back(s);
    i64 a = cf_floor(s.P, s.Q);
    partials.push_back(a);
    i64 Pn = a * s.Q - s.P;
    i64 Qn = (D - Pn * Pn) / s.Q;
    s = State{Pn, Qn};
  }
  return std::nullopt;
}

// ------------------------------------------------- sieve generator search

static std::vector<i64> charpoly_int(const NumberField& K, const Elem& x) {
  // char poly of M_x by interpolation at k = 0..n (monic degree n)
  int n = K.n;
  std::vector<i64> m;
  mul_matrix(K, x, m);
  // det(kI - M) for k = 0..n
  std::vector<Z> vals(n + 1);
  for (int k = 0; k <= n; ++k) {
    ZMat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a.at(i, j) = (i == j ? Z(k) : Z(0)) - z_of(m[size_t(i) * n + j]);
    vals[k] = det(a);
  }
  // solve for coefficients of p(x) = x^n + c_{n-1}x^{n-1} + ... + c_0
  QMat A(n + 1, n + 1);
  std::vector<Q> b(n + 1);
  for (int k = 0; k <= n; ++k) {
    Z pw = 1;
    for (int j = 0; j <= n; ++j) {
      A.at(k, j) = Q(pw);
      pw *= k;
    }
    b[k] = Q(vals[k]);
  }
  auto c = solve_q(A, b);
  std::vector<i64> out(n + 1);
  for (int j = 0; j <= n; ++j) {
    if (c[j].get_den() != 1) throw domain_error("charpoly interpolation failed");
    out[j] = z_to_i64(c[j].get_num());
  }
  return out;
}

static void find_sieve_generator(NumberField& K) {
  int n = K.n;
  std::vector<std::vector<i64>> candidates;
  if (n == 1) {
    candidates.push_back({0});  // omega = 0 works: charpoly x, every prime (p)
  } else {
    for (int k = 1; k < n; ++k) {
      std::vector<i64> v(n, 0);
      v[k] = 1;
      candidates.push_back(v);
    }
    std::vector<i64> s(n, 1);
    s[0] = 0;
    candidates.push_back(s);
    if (n >= 2) {
      std::vector<i64> v(n, 0);
      v[1] = 1;
      if (n >= 3) v[2] = 1;
      candidates.push_back(v);
    }
  }
  for (const auto& cand : candidates) {
    Elem omega{cand, 1};
    // transition T: column k = integral coords of omega^k
    ZMat T(n, n);
    Elem pw = K.one();
    bool ok = true;
    for (int k = 0; k < n; ++k) {
      if (pw.den != 1) { ok = false; break; }
      for (int r = 0; r < n; ++r) T.at(r, k) = z_of(pw.c[r]);
      if (k + 1 < n) pw = element_mul(K, pw, omega);
    }
    if (!ok) continue;
    Z d = det(T);
    if (d == 1 || d == -1) {
      K.sievable = true;
      K.sieve_transition = T;
      K.sieve_poly = (n == 1) ? std::vector<i64>{0, 1} : charpoly_int(K, omega);
      K.sieve_gen_coords = cand;
      return;
    }
  }
  K.sievable = false;
}

// ------------------------------------------------------------ regulator

double regulator_from_units(const NumberField& K) {
  int r = K.unit_rank();
  if (r == 0) return 1.0;
  int m = K.r1 + K.r2;
  std::vector<std::vector<double>> logs(r, std::vector<double>(m));
  for (int u = 0; u < r; ++u) {
    EmbPt p = minkowski_embed(K, K.units[u]);
    for (int i = 0; i < m; ++i) {
      double a = std::abs(p.s[i]);
      logs[u][i] = (i < K.r1) ? std::log(a) : 2.0 * std::log(a);
    }
  }
  // Gram determinant in H (log vectors already have coordinate sum ~ 0)
  std::vector<std::vector<double>> g(r, std::vector<double>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      double s = 0;
      for (int k = 0; k < m; ++k) s += logs[i][k] * logs[j][k];
      g[i][j] = s;
    }
  // determinant by Gaussian elimination
  double detg = 1.0;
  for (int k = 0; k < r; ++k) {
    int p = k;
    for (int i = k + 1; i < r; ++i)
      if (std::abs(g[i][k]) > std::abs(g[p][k])) p = i;
    if (p != k) {
      std::swap(g[p], g[k]);
      detg = -detg;
    }
    if (g[k][k] == 0) throw config_error("rank-deficient unit lattice");
    detg *= g[k][k];
    for (int i = k + 1; i < r; ++i) {
      double f = g[i][k] / g[k][k];
      for (int j = k; j < r; ++j) g[i][j] -= f * g[k][j];
    }
  }
  return std::sqrt(std::abs(detg)) / std::sqrt(double(K.r1 + K.r2));
}

// ------------------------------------------------------------ load_field

NumberField load_field(const NumberFieldSpec& spec) {
  NumberField K;
  K.spec = spec;
  K.n = int(spec.poly.size()) - 1;
  check_irreducible(spec.poly);
  int n = K.n;

  QMat C = spec.basis_change ? *spec.basis_change : QMat::identity(n);
  if (C.rows != n || C.cols != n) throw config_error("basis_change must be n x n");

  // roots and signature
  auto z = durand_kerner(spec.poly);
  std::vector<long double> realroots;
  std::vector<cplxl> cplxroots;
  for (auto& zz : z) {
    long double imtol = 1e-12L * (1 + fabsl(zz.real()));
    if (fabsl(zz.imag()) < imtol) realroots.push_back(zz.real());
    else if (zz.imag() > 0) cplxroots.push_back(zz);
  }
  std::sort(realroots.begin(), realroots.end());
  std::sort(cplxroots.begin(), cplxroots.end(), [](cplxl a, cplxl b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  K.r1 = int(realroots.size());
  K.r2 = int(cplxroots.size());
  if (K.r1 + 2 * K.r2 != n) throw config_error("embedding classification failed (r1+2r2 != n)");
  for (auto v : realroots) K.roots.push_back(cplx(double(v), 0.0));
  for (auto v : cplxroots) K.roots.push_back(cplx(double(v.real()), double(v.imag())));

  // residual check |f(sigma)| <= 1e-10 * coefficient scale
  double scale = 0;
  for (i64 c : spec.poly) scale = std::max(scale, std::abs(double(c)));
  for (auto& root : K.roots) {
    cplx v = 0;
    for (int i = n; i >= 0; --i) v = v * root + double(spec.poly[i]);
    if (std::abs(v) > 1e-10 * std::max(1.0, scale))
      throw config_error("embedding residual too large");
  }

  // embeddings of the integral basis
  K.emb.assign(K.r1 + K.r2, std::vector<cplx>(n));
  for (int i = 0; i < K.r1 + K.r2; ++i) {
    cplx th = K.roots[i];
    std::vector<cplx> pw(n);
    pw[0] = 1.0;
    for (int k = 1; k < n; ++k) pw[k] = pw[k - 1] * th;
    for (int k = 0; k < n; ++k) {
      cplx acc = 0;
      for (int j = 0; j < n; ++j) {
        const Q& q = C.at(j, k);
        if (q != 0) acc += pw[j] * q.get_d();
      }
      K.emb[i][k] = acc;
    }
  }

  // multiplication table and coordinates of 1
  auto tb = build_mult_table(spec.poly, C);
  K.mult = tb.mult;
  {
    std::vector<Q> e0(n, Q(0));
    e0[0] = 1;  // power coords of 1
    std::vector<Q> onec(n);
    for (int r = 0; r < n; ++r) {
      Q acc(0);
      for (int c = 0; c < n; ++c) acc += tb.power_in_basis.at(r, c) * e0[c];
      acc.canonicalize();
      if (acc.get_den() != 1) throw config_error("1 is not in the integral basis span");
      onec[r] = acc;
    }
    Elem one;
    one.c.resize(n);
    one.den = 1;
    for (int r = 0; r < n; ++r) one.c[r] = z_to_i64(onec[r].get_num());
    K.one_cache = one;
  }

  // discriminant: det of the trace form
  {
    std::vector<i64> basis_traces(n);
    for (int k = 0; k < n; ++k) {
      Elem wk = K.zero();
      wk.c[k] = 1;
      basis_traces[k] = element_trace(K, wk);
    }
    ZMat tf(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        i128 acc = 0;
        for (int k = 0; k < n; ++k) acc += i128(K.mult[i][j][k]) * basis_traces[k];
        tf.at(i, j) = z_of(narrow_i128(acc));
      }
    K.discriminant = det(tf);
  }

  // torsion
  if (spec.torsion_generator.size() != size_t(n))
    throw config_error("torsion_generator has wrong length");
  K.torsion = Elem{spec.torsion_generator, 1};
  K.w = spec.torsion_order;
  if (K.w < 1) throw config_error("torsion order must be positive");
  {
    if (field_norm(K, K.torsion).abs_norm != 1)
      throw config_error("torsion generator is not a unit");
    if (!(element_pow(K, K.torsion, K.w) == K.one()))
      throw config_error("torsion generator order mismatch");
    for (int d = 1; d < K.w; ++d)
      if (K.w % d == 0 && element_pow(K, K.torsion, d) == K.one())
        throw config_error("torsion generator order mismatch (smaller order)");
  }

  // units
  for (const auto& uc : spec.fundamental_units) {
    if (uc.size() != size_t(n)) throw config_error("unit coordinate vector has wrong length");
    Elem u{uc, 1};
    if (field_norm(K, u).abs_norm != 1) throw config_error("configured unit is not a unit");
    K.units.push_back(u);
  }
  if (int(K.units.size()) != K.unit_rank()) {
    if (K.units.empty() && K.n == 2 && K.r1 == 2) {
      auto u = real_quadratic_unit(K);
      if (!u) throw config_error("failed to compute real quadratic fundamental unit");
      K.units.push_back(*u);
    } else {
      throw config_error("wrong number of fundamental units for the signature");
    }
  }

  K.h = spec.class_number;
  if (K.h < 1) throw config_error("class number must be positive");

  // regulator + optional reference check
  K.regulator = regulator_from_units(K);
  if (spec.regulator_reference &&
      std::abs(K.regulator - *spec.regulator_reference) > 1e-6)
    throw config_error("regulator differs from configured reference");

  // class representatives
  if (spec.class_representatives.empty()) {
    if (K.h != 1) throw config_error("class representatives required when h_K > 1");
    K.class_reps.push_back(unit_ideal(K));
  } else {
    if (int(spec.class_representatives.size()) != K.h)
      throw config_error("need h_K class representatives");
    for (const auto& a : spec.class_representatives) {
      validate_module(K, a);
      K.class_reps.push_back(a);
    }
    if (!(K.class_reps[0] == unit_ideal(K)))
      throw config_error("class_representatives[0] must be the unit ideal");
  }

  // embedding/norm consistency spot check on the basis elements
  for (int k = 0; k < n; ++k) {
    Elem wk = K.zero();
    wk.c[k] = 1;
    double prod = 1;
    EmbPt p = minkowski_embed(K, wk);
    for (int i = 0; i < K.r1 + K.r2; ++i) {
      double a = std::abs(p.s[i]);
      prod *= (i < K.r1) ? a : a * a;
    }
    double exact = double(field_norm(K, wk).abs_norm);
    if (exact > 0 && std::abs(prod - exact) > 1e-8 * std::max(1.0, exact))
      throw config_error("embedding/norm consistency check failed");
  }

  find_sieve_generator(K);
  return K;
}

// --------------------------------------------------------------- config

using nlohmann::json;

static FracIdeal parse_ideal_json(const json& j) {
  FracIdeal a;
  auto rows = j.at("basis");
  int n = int(rows.size());
  a.basis = ZMat(n, n);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c) a.basis.at(i, c) = z_of(rows[i][c].get<i64>());
  a.den = z_of(j.value("den", i64(1)));
  return a;
}

NumberFieldSpec parse_field_spec_json(const std::string& text) {
  json j = json::parse(text);
  NumberFieldSpec s;
  s.name = j.value("name", std::string("unnamed"));
  for (auto& c : j.at("defining_polynomial")) s.poly.push_back(c.get<i64>());
  if (j.contains("basis_change") && !j["basis_change"].is_null()) {
    auto& bc = j["basis_change"];
    i64 den = bc.value("den", i64(1));
    auto& mat = bc.at("mat");
    int n = int(mat.size());
    QMat C(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        C.at(i, k) = q_of(mat[i][k].get<i64>()) / q_of(den);
        C.at(i, k).canonicalize();
      }
    s.basis_change = C;
  }
  if (j.contains("fundamental_units"))
    for (auto& u : j["fundamental_units"]) {
      std::vector<i64> v;
      for (auto& c : u) v.push_back(c.get<i64>());
      s.fundamental_units.push_back(v);
    }
  for (auto& c : j.at("torsion_generator")) s.torsion_generator.push_back(c.get<i64>());
  s.torsion_order = j.at("torsion_order").get<int>();
  s.class_number = j.value("class_number", 1);
  if (j.contains("class_representatives"))
    for (auto& a : j["class_representatives"]) s.class_representatives.push_back(parse_ideal_json(a));
  if (j.contains("regulator_reference") && !j["regulator_reference"].is_null())
    s.regulator_reference = j["regulator_reference"].get<double>();
  return s;
}

NumberField load_field_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open field config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_field(parse_field_spec_json(ss.str()));
}

}  // namespace mitsui
