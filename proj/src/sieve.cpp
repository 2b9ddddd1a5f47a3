#include "mitsui/sieve.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mitsui/lattice.hpp"

namespace mitsui {

// ----------------------------------------------------- mod-p arithmetic

static u64 mulmod(u64 a, u64 b, u64 p) { return (unsigned __int128)(a) * b % p; }
static u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}
static int legendre(u64 a, u64 p) {  // odd p
  a %= p;
  if (a == 0) return 0;
  u64 t = powmod(a, (p - 1) / 2, p);
  return t == 1 ? 1 : -1;
}
static u64 sqrt_mod(u64 a, u64 p) {  // Tonelli-Shanks, p odd prime, a a QR
  a %= p;
  if (a == 0) return 0;
  if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
  u64 s = 0, q = p - 1;
  while ((q & 1) == 0) { q >>= 1; ++s; }
  u64 z = 2;
  while (legendre(z, p) != -1) ++z;
  u64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    u64 i = 0, tt = t;
    while (tt != 1) { tt = mulmod(tt, tt, p); ++i; }
    u64 b = powmod(c, u64(1) << (m - i - 1), p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

// dense polynomials over F_p, ascending coefficients, normalized (no top zeros)
using Poly = std::vector<u64>;

static void poly_trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}
static int poly_deg(const Poly& f) { return int(f.size()) - 1; }
static Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, u64 p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + mulmod(a[i], b[j], p)) % p;
  }
  // reduce mod (monic) f
  int df = poly_deg(f);
  for (int i = int(c.size()) - 1; i >= df; --i) {
    u64 t = c[i];
    if (t == 0) continue;
    c[i] = 0;
    for (int j = 0; j < df; ++j) c[i - df + j] = (c[i - df + j] + p - mulmod(t, f[j], p) % p) % p;
  }
  c.resize(df);
  poly_trim(c);
  return c;
}
static Poly poly_powmod(Poly base, u64 e, const Poly& f, u64 p) {
  Poly r{1};
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}
static Poly poly_mod(Poly a, const Poly& b, u64 p) {  // b monic-normalizable
  poly_trim(a);
  Poly bb = b;
  poly_trim(bb);
  u64 lead = bb.back();
  u64 inv = powmod(lead, p - 2, p);
  int db = poly_deg(bb);
  while (poly_deg(a) >= db) {
    u64 t = mulmod(a.back(), inv, p);
    int shift = poly_deg(a) - db;
    for (int j = 0; j <= db; ++j)
      a[shift + j] = (a[shift + j] + p - mulmod(t, bb[j], p) % p) % p;
    poly_trim(a);
    if (a.empty()) break;
  }
  return a;
}
static Poly poly_gcd(Poly a, Poly b, u64 p) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = b;
    b = r;
  }
  if (!a.empty()) {  // make monic
    u64 inv = powmod(a.back(), p - 2, p);
    for (auto& c : a) c = mulmod(c, inv, p);
  }
  return a;
}
static Poly poly_divexact(const Poly& a, const Poly& b, u64 p) {
  Poly q(std::max<size_t>(1, a.size() - b.size() + 1), 0);
  Poly r = a;
  u64 inv = powmod(b.back(), p - 2, p);
  int db = poly_deg(b);
  while (poly_deg(r) >= db && !r.empty()) {
    u64 t = mulmod(r.back(), inv, p);
    int shift = poly_deg(r) - db;
    q[shift] = t;
    for (int j = 0; j <= db; ++j) r[shift + j] = (r[shift + j] + p - mulmod(t, b[j], p) % p) % p;
    poly_trim(r);
  }
  return q;
}
static u64 poly_eval(const Poly& f, u64 x, u64 p) {
  u64 v = 0;
  for (int i = poly_deg(f); i >= 0; --i) v = (mulmod(v, x, p) + f[i]) % p;
  return v;
}

static u64 splitmix64(u64 x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

struct ModFactor {
  Poly g;
  int mult;
};

static void factor_mod_p(const Poly& f_in, u64 p, std::vector<ModFactor>& out);

// roots with multiplicity via repeated division; appends remaining rootless part
static void extract_roots_bruteforce(Poly f, u64 p, std::vector<ModFactor>& out) {
  for (u64 r = 0; r < p && poly_deg(f) >= 1; ++r) {
    int mult = 0;
    while (poly_deg(f) >= 1 && poly_eval(f, r, p) == 0) {
      f = poly_divexact(f, Poly{p - r ? (p - r) % p : 0, 1}, p);
      ++mult;
    }
    if (mult) out.push_back({Poly{(p - r) % p, 1}, mult});
  }
  if (poly_deg(f) >= 1) {
    // no roots left: degree 2 or 3 is irreducible; degree 4 may be two quadratics
    if (poly_deg(f) <= 3) {
      out.push_back({f, 1});
    } else {
      bool split = false;
      for (u64 u = 0; u < p && !split; ++u)
        for (u64 v = 0; v < p && !split; ++v) {
          Poly q{v, u, 1};
          Poly rem = poly_mod(f, q, p);
          if (rem.empty()) {
            Poly h = poly_divexact(f, q, p);
            if (h == q) {
              out.push_back({q, 2});
            } else {
              out.push_back({q, 1});
              out.push_back({h, 1});
            }
            split = true;
          }
        }
      if (!split) out.push_back({f, 1});
    }
  }
}

// extract all roots of a squarefree product of linear factors (deg >= 1)
static void split_linear_product(const Poly& g, u64 p, std::vector<u64>& roots, u64 salt) {
  if (poly_deg(g) <= 0) return;
  if (poly_deg(g) == 1) {
    u64 inv = powmod(g[1], p - 2, p);
    roots.push_back(mulmod((p - g[0]) % p, inv, p));
    return;
  }
  for (int tries = 0;; ++tries) {
    u64 a = splitmix64(p ^ salt ^ (u64(tries) << 32)) % p;
    // gcd((x+a)^{(p-1)/2} - 1, g)
    Poly xa{a, 1};
    Poly t = poly_powmod(xa, (p - 1) / 2, g, p);
    if (t.empty()) t = {0};
    t[0] = (t[0] + p - 1) % p;
    Poly h = poly_gcd(t, g, p);
    if (poly_deg(h) >= 1 && poly_deg(h) < poly_deg(g)) {
      split_linear_product(h, p, roots, salt + 1);
      split_linear_product(poly_divexact(g, h, p), p, roots, salt + 2);
      return;
    }
  }
}

// squarefree f, p odd > 50
static void factor_squarefree(const Poly& f, u64 p, std::vector<ModFactor>& out) {
  // distinct-degree: linear part
  Poly x{0, 1};
  Poly xp = poly_powmod(x, p, f, p);
  Poly tmp = xp;
  if (tmp.size() < 2) tmp.resize(2, 0);
  tmp[1] = (tmp[1] + p - 1) % p;  // x^p - x
  Poly g1 = poly_gcd(tmp, f, p);
  Poly rest = f;
  if (poly_deg(g1) >= 1) {
    std::vector<u64> roots;
    split_linear_product(g1, p, roots, 0x5eed);
    std::sort(roots.begin(), roots.end());
    for (u64 r : roots) out.push_back({Poly{(p - r) % p, 1}, 1});
    rest = poly_divexact(f, g1, p);
  }
  int dr = poly_deg(rest);
  if (dr <= 0) return;
  if (dr == 2 || dr == 3) {  // no linear factors left => irreducible
    out.push_back({rest, 1});
    return;
  }
  if (dr == 4) {
    // two quadratics or irreducible quartic: x^{p^2} - x test
    Poly xp2 = poly_powmod(xp, p, rest, p);  // (x^p)^p mod rest
    // note: x^{p^2} mod rest must be computed as Frobenius iterate; powmod of
    // xp to the p-th power equals x^{p^2} only modulo the same f, so redo:
    xp2 = poly_powmod(x, p, rest, p);
    Poly frob2 = {0};
    {
      // compose: (x^p mod rest) evaluated at x^p mod rest
      Poly base = xp2;
      Poly acc{1};
      frob2 = Poly{};
      for (size_t i = 0; i < base.size(); ++i) {
        if (base[i]) {
          Poly term = acc;
          for (auto& c2 : term) c2 = mulmod(c2, base[i], p);
          if (frob2.size() < term.size()) frob2.resize(term.size(), 0);
          for (size_t j = 0; j < term.size(); ++j) frob2[j] = (frob2[j] + term[j]) % p;
        }
        acc = poly_mulmod(acc, base, rest, p);
      }
      poly_trim(frob2);
    }
    Poly t2 = frob2;
    if (t2.size() < 2) t2.resize(2, 0);
    t2[1] = (t2[1] + p - 1) % p;
    Poly g2 = poly_gcd(t2, rest, p);
    if (poly_deg(g2) == 4) {
      // product of two quadratics: Cantor-Zassenhaus with e = (p^2-1)/2
      u64 e = (p * p - 1) / 2;  // p <= ~3e9 fits
      for (int tries = 0;; ++tries) {
        u64 a = splitmix64(p ^ 0xabcdef ^ (u64(tries) << 32)) % p;
        u64 b = splitmix64(p ^ 0x123457 ^ (u64(tries) << 32)) % p;
        Poly rnd{b, a, 1};
        Poly t = poly_powmod(rnd, e, rest, p);
        if (t.empty()) t = {0};
        t[0] = (t[0] + p - 1) % p;
        Poly h = poly_gcd(t, rest, p);
        if (poly_deg(h) == 2) {
          out.push_back({h, 1});
          out.push_back({poly_divexact(rest, h, p), 1});
          return;
        }
      }
    }
    out.push_back({rest, 1});
    return;
  }
  throw domain_error("factor_squarefree: degree > 4 not supported");
}

static void factor_mod_p(const Poly& f_in, u64 p, std::vector<ModFactor>& out) {
  Poly f = f_in;
  for (auto& c : f) c %= p;
  poly_trim(f);
  if (poly_deg(f) < 1) throw domain_error("factor_mod_p: constant polynomial");
  if (p <= 50) {
    extract_roots_bruteforce(f, p, out);
    return;
  }
  // derivative
  Poly df(f.size() - 1);
  for (size_t i = 1; i < f.size(); ++i) df[i - 1] = mulmod(f[i], i % p, p);
  poly_trim(df);
  Poly g = df.empty() ? f : poly_gcd(f, df, p);
  if (poly_deg(g) >= 1) {
    // repeated factors (p ramified): factor the squarefree quotient and g
    std::vector<ModFactor> part;
    factor_mod_p(poly_divexact(f, g, p), p, part);
    std::vector<ModFactor> gpart;
    factor_mod_p(g, p, gpart);
    for (auto& fac : part) {
      int extra = 0;
      for (auto& gfac : gpart)
        if (gfac.g == fac.g) extra += gfac.mult;
      fac.mult += extra;
      out.push_back(fac);
    }
    for (auto& gfac : gpart) {
      bool seen = false;
      for (auto& fac : part) seen = seen || (fac.g == gfac.g);
      if (!seen) out.push_back({gfac.g, gfac.mult});  // fully-repeated factor
    }
    return;
  }
  factor_squarefree(f, p, out);
}

// fast quadratic path
static void factor_quadratic(u64 b, u64 c, u64 p, std::vector<ModFactor>& out) {
  if (p == 2 || p <= 50) {
    extract_roots_bruteforce(Poly{c % p, b % p, 1}, p, out);
    return;
  }
  u64 D = (mulmod(b, b, p) + p - mulmod(4 % p, c, p) % p) % p;
  int ls = legendre(D, p);
  u64 inv2 = (p + 1) / 2;
  if (ls == 0) {
    u64 r = mulmod((p - b) % p, inv2, p);
    out.push_back({Poly{(p - r) % p, 1}, 2});
  } else if (ls == 1) {
    u64 s = sqrt_mod(D, p);
    u64 r1 = mulmod(((p - b) + s) % p, inv2, p);
    u64 r2 = mulmod(((p - b) + p - s) % p, inv2, p);
    if (r1 > r2) std::swap(r1, r2);
    out.push_back({Poly{(p - r1) % p, 1}, 1});
    out.push_back({Poly{(p - r2) % p, 1}, 1});
  } else {
    out.push_back({Poly{c % p, b % p, 1}, 1});
  }
}

// --------------------------------------------------- prime ideal assembly

static FracIdeal ideal_from_p_and_factor(const NumberField& K, u64 p, const Poly& g) {
  // ideal (p, g(omega)); g coefficients lifted to [0, p)
  int n = K.n;
  if (poly_deg(g) == n) {
    // inert: g is the whole polynomial mod p, so (p, g(omega)) = (p)
    Elem pe = K.zero();
    for (int r = 0; r < n; ++r) pe.c[r] = checked_mul(i64(p), K.one().c[r]);
    return ideal_from_generators(K, {pe});
  }
  std::vector<i64> gcoords(n, 0);
  for (size_t k = 0; k < g.size(); ++k) {
    if (g[k] == 0) continue;
    for (int r = 0; r < n; ++r)
      gcoords[r] = checked_add(gcoords[r],
                               checked_mul(i64(g[k]), z_to_i64(K.sieve_transition.at(r, k))));
  }
  std::vector<Elem> gens;
  Elem pe = K.zero();
  for (int r = 0; r < n; ++r) pe.c[r] = checked_mul(i64(p), K.one().c[r]);
  gens.push_back(pe);
  if (!is_zero(Elem{gcoords, 1})) gens.push_back(Elem{gcoords, 1});
  return ideal_from_generators(K, gens);
}

// exact positive-definite integer quadratic form for 2-dimensional reduction:
// imaginary quadratic: |N|; real quadratic: Tr(x^2)
struct ExactForm2 {
  i64 q00, q01, q11;  // Q(x,y) = q00 x^2 + 2 q01 xy + q11 y^2 (doubled form kept integral)
  i128 eval(i64 x, i64 y) const {
    return i128(q00) * x * x + 2 * i128(q01) * x * y + i128(q11) * y * y;
  }
  i128 bilin(i64 x1, i64 y1, i64 x2, i64 y2) const {
    return i128(q00) * x1 * x2 + i128(q01) * (i128(x1) * y2 + i128(x2) * y1) +
           i128(q11) * y1 * y2;
  }
};

static ExactForm2 definite_form(const NumberField& K) {
  ExactForm2 f{};
  auto w0 = K.zero(), w1 = K.zero();
  w0.c[0] = 1;
  w1.c[1] = 1;
  if (K.r2 > 0) {  // imaginary quadratic: Q = N
    i64 A = field_norm(K, w0).signed_norm;
    i64 C = field_norm(K, w1).signed_norm;
    i64 AB = field_norm(K, element_add(K, w0, w1)).signed_norm;
    f.q00 = A;
    f.q11 = C;
    f.q01 = (AB - A - C) / 2;
  } else {  // real quadratic: Q = Tr(x^2)
    f.q00 = element_trace(K, element_mul(K, w0, w0));
    f.q11 = element_trace(K, element_mul(K, w1, w1));
    f.q01 = element_trace(K, element_mul(K, w0, w1));
  }
  return f;
}

// norm form coefficients N(x w0 + y w1) for n = 2
struct NormForm2 {
  i64 A, B, C;
  i128 eval(i64 x, i64 y) const { return i128(A) * x * x + i128(B) * x * y + i128(C) * y * y; }
};
static NormForm2 norm_form2(const NumberField& K) {
  auto w0 = K.zero(), w1 = K.zero();
  w0.c[0] = 1;
  w1.c[1] = 1;
  i64 A = field_norm(K, w0).signed_norm;
  i64 C = field_norm(K, w1).signed_norm;
  i64 AB = field_norm(K, element_add(K, w0, w1)).signed_norm;
  return {A, AB - A - C, C};
}

// find a generator of the prime ideal (h_K = 1): shortest-vector search in
// the ideal lattice under an exact definite form, then norm check
static std::optional<Elem> principal_generator(const NumberField& K, const FracIdeal& ideal,
                                               u64 norm) {
  int n = K.n;
  if (n == 1) {
    Elem g = K.zero();
    g.c[0] = checked_mul(i64(norm), K.one().c[0]);
    return g;
  }
  std::vector<std::vector<i64>> rows(n, std::vector<i64>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rows[i][j] = z_to_i64(ideal.basis.at(i, j));
  if (n == 2) {
    ExactForm2 Qf = definite_form(K);
    NormForm2 Nf = norm_form2(K);
    // Lagrange-reduce (v1, v2) given as z-coefficient pairs over the rows
    i64 a0 = rows[0][0], a1 = rows[0][1];
    i64 b0 = rows[1][0], b1 = rows[1][1];
    auto Q = [&](i64 x0, i64 x1) { return Qf.eval(x0, x1); };
    for (int it = 0; it < 64; ++it) {
      if (Q(a0, a1) < Q(b0, b1)) {
        std::swap(a0, b0);
        std::swap(a1, b1);
      }
      i128 bb = Qf.bilin(a0, a1, b0, b1);
      i128 qq = Q(b0, b1);
      i64 mu = i64((2 * bb + (bb >= 0 ? qq : -qq)) / (2 * qq));
      if (mu == 0) break;
      a0 = checked_sub(a0, checked_mul(mu, b0));
      a1 = checked_sub(a1, checked_mul(mu, b1));
    }
    for (i64 x = -6; x <= 6; ++x)
      for (i64 y = -6; y <= 6; ++y) {
        if (x == 0 && y == 0) continue;
        i64 c0 = checked_add(checked_mul(x, a0), checked_mul(y, b0));
        i64 c1 = checked_add(checked_mul(x, a1), checked_mul(y, b1));
        i128 nv = Nf.eval(c0, c1);
        if (nv < 0) nv = -nv;
        if (nv == i128(norm)) return Elem{{c0, c1}, 1};
      }
    return std::nullopt;
  }
  // small fields of higher degree: bounded coefficient search over the HNF basis
  std::vector<i64> e(n, -4);
  while (true) {
    Elem cand = K.zero();
    bool nonzero = false;
    for (int i = 0; i < n; ++i) {
      if (e[i] == 0) continue;
      nonzero = true;
      for (int j = 0; j < n; ++j)
        cand.c[j] = checked_add(cand.c[j], checked_mul(e[i], rows[i][j]));
    }
    if (nonzero && field_norm(K, cand).abs_norm == norm) return cand;
    int i = 0;
    for (; i < n; ++i) {
      if (++e[i] <= 4) break;
      e[i] = -4;
    }
    if (i == n) break;
  }
  return std::nullopt;
}

// ------------------------------------------------------------- sieving

static std::vector<uint8_t> eratosthenes(u64 bound) {
  std::vector<uint8_t> is(bound, 1);
  if (bound > 0) is[0] = 0;
  if (bound > 1) is[1] = 0;
  for (u64 i = 2; i * i < bound; ++i)
    if (is[i])
      for (u64 j = i * i; j < bound; j += i) is[j] = 0;
  return is;
}

static void primes_for_p(const NumberField& K, const FundamentalDomain* fd, u64 p, u64 bound,
                         bool with_gens, std::vector<PrimeIdeal>& out) {
  if (!K.sievable)
    throw domain_error("field is not monogenic w.r.t. its supplied basis; cannot sieve");
  std::vector<ModFactor> facs;
  int n = K.n;
  if (n == 1) {
    facs.push_back({Poly{0, 1}, 1});
  } else if (n == 2) {
    u64 b = u64(mod_floor(K.sieve_poly[1], i64(p)));
    u64 c = u64(mod_floor(K.sieve_poly[0], i64(p)));
    factor_quadratic(b, c, p, facs);
  } else {
    Poly f(K.sieve_poly.size());
    for (size_t i = 0; i < f.size(); ++i) f[i] = u64(mod_floor(K.sieve_poly[i], i64(p)));
    factor_mod_p(f, p, facs);
  }
  for (const auto& fac : facs) {
    int fdeg = poly_deg(fac.g);
    // norm p^fdeg; overflow-guard the power
    u64 nrm = 1;
    bool over = false;
    for (int t = 0; t < fdeg; ++t) {
      if (nrm > bound / p) { over = true; break; }
      nrm *= p;
    }
    if (over || nrm >= bound) continue;
    PrimeIdeal pi;
    pi.p = i64(p);
    pi.residue_degree = fdeg;
    pi.norm = nrm;
    pi.ideal = ideal_from_p_and_factor(K, p, fac.g);
    if (with_gens) {
      auto g = principal_generator(K, pi.ideal, nrm);
      if (!g) throw domain_error("generator search failed for a prime ideal");
      auto [unit, rep] = fd->reduce(*g);
      (void)unit;
      pi.generator = rep;
    }
    out.push_back(std::move(pi));
  }
}

static bool prime_ideal_less(const PrimeIdeal& a, const PrimeIdeal& b) {
  if (a.norm != b.norm) return a.norm < b.norm;
  if (a.p != b.p) return a.p < b.p;
  return a.ideal.basis.a < b.ideal.basis.a;
}

std::vector<PrimeIdeal> sieve_prime_ideals_serial(const NumberField& K, u64 bound,
                                                  const SieveOptions& opt) {
  if (bound < 2) throw domain_error("sieve bound must be >= 2");
  bool gens = opt.with_generators && K.h == 1;
  std::optional<FundamentalDomain> fd;
  if (gens) fd.emplace(K);
  auto bitmap = eratosthenes(bound);
  std::vector<PrimeIdeal> out;
  for (u64 p = 2; p < bound; ++p) {
    if (!bitmap[p]) continue;
    primes_for_p(K, gens ? &*fd : nullptr, p, bound, gens, out);
  }
  std::sort(out.begin(), out.end(), prime_ideal_less);
  return out;
}

std::vector<PrimeIdeal> sieve_prime_ideals(const NumberField& K, u64 bound,
                                           const SieveOptions& opt) {
  if (bound < 2) throw domain_error("sieve bound must be >= 2");
  if (!opt.parallel) return sieve_prime_ideals_serial(K, bound, opt);
  bool gens = opt.with_generators && K.h == 1;
  std::optional<FundamentalDomain> fd;
  if (gens) fd.emplace(K);
  auto bitmap = eratosthenes(bound);
  std::vector<u64> ps;
  for (u64 p = 2; p < bound; ++p)
    if (bitmap[p]) ps.push_back(p);
  const size_t chunk = 4096;
  size_t nchunks = (ps.size() + chunk - 1) / chunk;
  std::vector<std::vector<PrimeIdeal>> parts(nchunks);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long c = 0; c < (long long)nchunks; ++c) {
    size_t lo = size_t(c) * chunk, hi = std::min(ps.size(), lo + chunk);
    for (size_t i = lo; i < hi; ++i)
      primes_for_p(K, gens ? &*fd : nullptr, ps[i], bound, gens, parts[c]);
  }
  std::vector<PrimeIdeal> out;
  for (auto& part : parts)
    for (auto& pi : part) out.push_back(std::move(pi));
  std::sort(out.begin(), out.end(), prime_ideal_less);
  return out;
}

SieveTable build_sieve_table(const NumberField& K, u64 bound, const SieveOptions& opt) {
  SieveTable t;
  t.bound = bound;
  t.primes = sieve_prime_ideals(K, bound, opt);
  t.prime_bitmap = eratosthenes(bound);
  for (size_t i = 0; i < t.primes.size(); ++i)
    if (t.primes[i].residue_degree >= 2)
      t.prime_power_norms[t.primes[i].norm].push_back(int(i));
  return t;
}

bool is_prime_element(const NumberField& K, const FracIdeal& a, const Elem& x,
                      const SieveTable& table) {
  if (is_zero(x)) throw domain_error("is_prime_element: zero element");
  if (!ideal_contains(K, a, x)) throw domain_error("is_prime_element: element not in the ideal");
  Q qn = field_norm_q(K, x) / ideal_norm(K, a);
  qn.canonicalize();
  Q qabs = qn < 0 ? Q(-qn) : qn;
  if (qabs.get_den() != 1) return false;
  if (!qabs.get_num().fits_ulong_p()) throw domain_error("is_prime_element: norm too large");
  u64 q = qabs.get_num().get_ui();
  if (q < 2) return false;
  if (table.is_rational_prime(q)) return true;
  auto it = table.prime_power_norms.find(q);
  if (it == table.prime_power_norms.end()) return false;
  FracIdeal principal = principal_ideal(K, x);
  for (int idx : it->second) {
    FracIdeal prod = ideal_mul(K, table.primes[idx].ideal, a);
    if (prod == principal) return true;
  }
  return false;
}

// ----------------------------------------------------------- enumeration

struct EnumContext {
  const NumberField* K;
  const FracIdeal* a;
  const Region* region;
  const SieveTable* table;
  std::vector<std::vector<i64>> rows;  // integer numerators of a's basis
  double den;
  i64 den_i;
  i64 det_a;
  std::vector<std::vector<std::complex<double>>> row_emb;  // embedded basis rows (numerators)
  NormForm2 nf2{0, 0, 0};
  bool have_nf2 = false;
  // congruence data
  bool filter_cc = false;
  bool record_residues = false;
  ZMat Mqa;                 // q*a in a-coords
  std::vector<i64> cc_rep;
  std::function<bool(const EmbPt&)> extra;
  // cached p*a products for prime-power norms
  std::unordered_map<u64, std::vector<FracIdeal>> pa_products;
};

static std::vector<i64> reduce_mod(const ZMat& M, std::vector<i64> z) {
  int n = M.rows;
  for (int i = 0; i < n; ++i) {
    i64 d = z_to_i64(M.at(i, i));
    i64 k = floor_div(z[i], d);
    if (k == 0) continue;
    for (int j = i; j < n; ++j) z[j] = checked_sub(z[j], checked_mul(k, z_to_i64(M.at(i, j))));
  }
  return z;
}

static void scan_column(EnumContext& ctx, i64 z0, std::vector<WeightedElement>& out) {
  const NumberField& K = *ctx.K;
  int n = K.n;
  auto babs = ctx.region->bounding_abs();
  // per-place linear data: sigma(x) = z0*E0 + z1*E1 (+ z2*E2 ...)
  if (n == 1) {
    std::vector<i64> z{z0};
    Elem x{{checked_mul(z0, ctx.rows[0][0])}, 1};
    EmbPt p = minkowski_embed(K, x);
    p.s[0] /= ctx.den;
    if (!ctx.region->contains(p)) return;
    if (ctx.extra && !ctx.extra(p)) return;
    i128 nv = i128(x.c[0]);
    if (nv < 0) nv = -nv;
    if (nv % ctx.det_a != 0) return;
    u64 q = u64(nv / ctx.det_a);
    if (q < 2) return;
    if (q >= ctx.table->bound)
      throw domain_error("enumeration norm exceeds the sieve table bound");
    if (!ctx.table->prime_bitmap[q]) return;
    WeightedElement we;
    we.zcoords = z;
    u64 ridx = 0;
    if (ctx.filter_cc || ctx.record_residues) {
      auto r = reduce_mod(ctx.Mqa, z);
      if (ctx.filter_cc && r != ctx.cc_rep) return;
      u64 s = 1;
      for (int i = 0; i < n; ++i) {
        ridx += u64(r[i]) * s;
        s *= u64(z_to_i64(ctx.Mqa.at(i, i)));
      }
    }
    we.elem = Elem{x.c, ctx.den_i};
    canonicalize_element(we.elem);
    we.norm_q = q;
    we.log_weight = std::log(double(q));
    we.residue_index = ridx;
    out.push_back(std::move(we));
    return;
  }

  // z1 interval from per-place constraints (n == 2), conservative box otherwise
  double lo1 = -1e18, hi1 = 1e18;
  int m = K.r1 + K.r2;
  for (int i = 0; i < m; ++i) {
    std::complex<double> A = double(z0) * ctx.row_emb[0][i];
    std::complex<double> B = ctx.row_emb[1][i];
    double bnd = babs[i] * ctx.den;
    if (i < K.r1) {
      double a = A.real(), b = B.real();
      double l = (-bnd - a) / b, h = (bnd - a) / b;
      if (l > h) std::swap(l, h);
      lo1 = std::max(lo1, l);
      hi1 = std::min(hi1, h);
    } else {
      double bb = std::norm(B);
      double sb = 2 * (A.real() * B.real() + A.imag() * B.imag());
      double cc = std::norm(A) - bnd * bnd;
      double disc = sb * sb - 4 * bb * cc;
      if (disc <= 0) return;
      double sq = std::sqrt(disc);
      lo1 = std::max(lo1, (-sb - sq) / (2 * bb));
      hi1 = std::min(hi1, (-sb + sq) / (2 * bb));
    }
  }
  if (n > 2) {
    // conservative: reuse full z-box for inner coordinates via caller ranges
  }
  if (lo1 > hi1) return;

  auto process = [&](const std::vector<i64>& z) {
    Elem x = K.zero();
    for (int i = 0; i < n; ++i) {
      if (z[i] == 0) continue;
      for (int j = 0; j < n; ++j)
        x.c[j] = checked_add(x.c[j], checked_mul(z[i], ctx.rows[i][j]));
    }
    // numerator element: embedded point divided by den
    EmbPt p = minkowski_embed(K, x);
    for (auto& s : p.s) s /= ctx.den;
    if (!ctx.region->contains(p)) return;
    if (ctx.extra && !ctx.extra(p)) return;
    i128 nv;
    if (ctx.have_nf2 && n == 2) {
      // norm of numerator via the basis-row norm form in z-coordinates
      nv = ctx.nf2.eval(z[0], z[1]);
    } else {
      Z nz = field_norm_q(K, Elem{x.c, 1}).get_num();
      if (!nz.fits_slong_p()) throw overflow_error("norm exceeds 64 bits in enumeration");
      nv = i128(nz.get_si());
    }
    if (nv < 0) nv = -nv;
    if (nv % ctx.det_a != 0) return;
    u64 q = u64(nv / ctx.det_a);
    if (q < 2) return;
    bool prime = q < ctx.table->bound ? bool(ctx.table->prime_bitmap[q]) : false;
    if (q >= ctx.table->bound)
      throw domain_error("enumeration norm exceeds the sieve table bound");
    if (!prime) {
      auto it = ctx.table->prime_power_norms.find(q);
      if (it == ctx.table->prime_power_norms.end()) return;
      auto pit = ctx.pa_products.find(q);
      if (pit == ctx.pa_products.end()) return;
      Elem xe{x.c, i64(ctx.den)};
      FracIdeal principal = principal_ideal(K, xe);
      bool match = false;
      for (const auto& prod : pit->second) match = match || (prod == principal);
      if (!match) return;
    }
    u64 ridx = 0;
    if (ctx.filter_cc || ctx.record_residues) {
      auto r = reduce_mod(ctx.Mqa, z);
      if (ctx.filter_cc && r != ctx.cc_rep) return;
      u64 s = 1;
      for (int i = 0; i < n; ++i) {
        ridx += u64(r[i]) * s;
        s *= u64(z_to_i64(ctx.Mqa.at(i, i)));
      }
    }
    WeightedElement we;
    we.zcoords = z;
    we.elem = Elem{x.c, ctx.den_i};
    canonicalize_element(we.elem);
    we.norm_q = q;
    we.log_weight = std::log(double(q));
    we.residue_index = ridx;
    out.push_back(std::move(we));
  };

  if (n == 2) {
    for (i64 z1 = i64(std::ceil(lo1 - 1e-12)); z1 <= i64(std::floor(hi1 + 1e-12)); ++z1)
      process({z0, z1});
  } else {
    // generic: caller provides only z0; sweep the conservative in-box ranges
    throw domain_error("enumeration for degree > 2 uses enumerate_generic");
  }
}

// generic (small) enumeration for n >= 3
static void enumerate_generic(EnumContext& ctx, const std::vector<double>& zlo,
                              const std::vector<double>& zhi,
                              std::vector<WeightedElement>& out) {
  const NumberField& K = *ctx.K;
  int n = K.n;
  std::vector<i64> z(n);
  std::vector<i64> lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    lo[i] = i64(std::ceil(zlo[i] - 1e-9));
    hi[i] = i64(std::floor(zhi[i] + 1e-9));
    z[i] = lo[i];
  }
  auto babs = ctx.region->bounding_abs();
  while (true) {
    Elem x = K.zero();
    for (int i = 0; i < n; ++i) {
      if (z[i] == 0) continue;
      for (int j = 0; j < n; ++j)
        x.c[j] = checked_add(x.c[j], checked_mul(z[i], ctx.rows[i][j]));
    }
    bool any = false;
    for (i64 v : x.c) any = any || (v != 0);
    if (any) {
      EmbPt p = minkowski_embed(K, x);
      for (auto& s : p.s) s /= ctx.den;
      bool inside = ctx.region->contains(p) && (!ctx.extra || ctx.extra(p));
      if (inside) {
        Z nz = field_norm_q(K, Elem{x.c, 1}).get_num();
        Z av = nz < 0 ? Z(-nz) : nz;
        Z qz = av / z_of(ctx.det_a);
        if (av % z_of(ctx.det_a) == 0 && qz.fits_ulong_p()) {
          u64 q = qz.get_ui();
          if (q >= 2) {
            if (q >= ctx.table->bound)
              throw domain_error("enumeration norm exceeds the sieve table bound");
            bool prime = ctx.table->prime_bitmap[q];
            bool accept = prime;
            if (!prime && ctx.table->prime_power_norms.count(q)) {
              auto pit = ctx.pa_products.find(q);
              if (pit != ctx.pa_products.end()) {
                Elem xe{x.c, i64(ctx.den)};
                FracIdeal principal = principal_ideal(K, xe);
                for (const auto& prod : pit->second) accept = accept || (prod == principal);
              }
            }
            if (accept) {
              u64 ridx = 0;
              bool keep = true;
              if (ctx.filter_cc || ctx.record_residues) {
                auto r = reduce_mod(ctx.Mqa, z);
                if (ctx.filter_cc && r != ctx.cc_rep) keep = false;
                u64 s = 1;
                for (int i = 0; i < n; ++i) {
                  ridx += u64(r[i]) * s;
                  s *= u64(z_to_i64(ctx.Mqa.at(i, i)));
                }
              }
              if (keep) {
                WeightedElement we;
                we.zcoords = z;
                we.elem = Elem{x.c, ctx.den_i};
                canonicalize_element(we.elem);
                we.norm_q = q;
                we.log_weight = std::log(double(q));
                we.residue_index = ridx;
                out.push_back(std::move(we));
              }
            }
          }
        }
      }
    }
    int i = n - 1;
    for (; i >= 0; --i) {
      if (++z[i] <= hi[i]) break;
      z[i] = lo[i];
    }
    if (i < 0) break;
  }
  (void)babs;
}

static EnumContext make_context(const NumberField& K, const FracIdeal& a, const Region& region,
                                const std::optional<CongruenceClass>& cc,
                                const SieveTable& table, const EnumerateOptions& opt) {
  EnumContext ctx;
  ctx.K = &K;
  ctx.a = &a;
  ctx.region = &region;
  ctx.table = &table;
  ctx.extra = opt.extra_filter;
  ctx.record_residues = opt.record_residues;
  int n = K.n;
  ctx.rows.assign(n, std::vector<i64>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ctx.rows[i][j] = z_to_i64(a.basis.at(i, j));
  ctx.den = a.den.get_d();
  ctx.den_i = z_to_i64(a.den);
  Z da = det(a.basis);
  ctx.det_a = z_to_i64(da < 0 ? Z(-da) : da);
  ctx.row_emb.assign(n, {});
  for (int i = 0; i < n; ++i) {
    EmbPt p = minkowski_embed(K, Elem{ctx.rows[i], 1});
    ctx.row_emb[i] = p.s;
  }
  if (n == 2) {
    Elem b0{ctx.rows[0], 1}, b1{ctx.rows[1], 1};
    i64 A = field_norm(K, b0).signed_norm;
    i64 C = field_norm(K, b1).signed_norm;
    i64 AB = field_norm(K, element_add(K, b0, b1)).signed_norm;
    ctx.nf2 = {A, AB - A - C, C};
    ctx.have_nf2 = true;
  }
  if (cc) {
    if (!(cc->ambient == a))
      throw domain_error("enumerate_prime_elements: congruence ambient mismatch");
    ctx.filter_cc = true;
    ctx.cc_rep = cc->rep;
  }
  if (cc || opt.record_residues) {
    const FracIdeal& q = cc ? cc->modulus : unit_ideal(K);
    FracIdeal qa = ideal_mul(K, q, a);
    ZMat m(n, n);
    for (int i = 0; i < n; ++i) {
      auto zc = ideal_coords(K, a, ideal_basis_vector(K, qa, i));
      if (!zc) throw domain_error("enumerate: q*a not inside a");
      for (int c2 = 0; c2 < n; ++c2) m.at(i, c2) = z_of((*zc)[c2]);
    }
    ctx.Mqa = hnf_square(m);
  } else {
    ctx.Mqa = ZMat::identity(n);
  }
  // cache p*a products for prime-power norms
  for (const auto& [nrm, idxs] : table.prime_power_norms) {
    std::vector<FracIdeal> prods;
    for (int idx : idxs) prods.push_back(ideal_mul(K, table.primes[idx].ideal, a));
    ctx.pa_products[nrm] = std::move(prods);
  }
  return ctx;
}

// z0 range from the region bounding box through the inverse embedding matrix
static void z_box(const EnumContext& ctx, std::vector<double>& zlo, std::vector<double>& zhi) {
  const NumberField& K = *ctx.K;
  int n = K.n;
  auto babs = ctx.region->bounding_abs();
  // flat embedding matrix E (n x n): column k = flat coords of row k numerator
  std::vector<std::vector<double>> E(n, std::vector<double>(n));
  for (int k = 0; k < n; ++k) {
    EmbPt p;
    p.s = ctx.row_emb[k];
    double fl[8];
    flat_from_embpt(K, p, fl);
    for (int i = 0; i < n; ++i) E[i][k] = fl[i];
  }
  // invert E
  std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(E[i][k]) > std::abs(E[piv][k])) piv = i;
    std::swap(E[piv], E[k]);
    std::swap(inv[piv], inv[k]);
    double d = E[k][k];
    for (int j = 0; j < n; ++j) {
      E[k][j] /= d;
      inv[k][j] /= d;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      double f = E[i][k];
      if (f == 0) continue;
      for (int j = 0; j < n; ++j) {
        E[i][j] -= f * E[k][j];
        inv[i][j] -= f * inv[k][j];
      }
    }
  }
  // flat bound vector (scaled by den since rows are numerators)
  std::vector<double> fb(n);
  for (int i = 0; i < K.r1; ++i) fb[i] = babs[i] * ctx.den;
  for (int j = 0; j < K.r2; ++j) {
    fb[K.r1 + 2 * j] = babs[K.r1 + j] * ctx.den;
    fb[K.r1 + 2 * j + 1] = babs[K.r1 + j] * ctx.den;
  }
  zlo.assign(n, 0);
  zhi.assign(n, 0);
  for (int k = 0; k < n; ++k) {
    double b = 0;
    for (int i = 0; i < n; ++i) b += std::abs(inv[k][i]) * fb[i];
    zlo[k] = -b;
    zhi[k] = b;
  }
}

static std::vector<WeightedElement> enumerate_impl(const NumberField& K, const FracIdeal& a,
                                                   const Region& region,
                                                   const std::optional<CongruenceClass>& cc,
                                                   const SieveTable& table,
                                                   const EnumerateOptions& opt, bool parallel) {
  EnumContext ctx = make_context(K, a, region, cc, table, opt);
  int n = K.n;
  std::vector<double> zlo, zhi;
  z_box(ctx, zlo, zhi);
  for (double v : zhi)
    if (!(v < 4e18)) throw domain_error("enumerate: unbounded region");

  if (n >= 3) {
    std::vector<WeightedElement> out;
    enumerate_generic(ctx, zlo, zhi, out);
    return out;
  }

  i64 lo0 = i64(std::ceil(zlo[0] - 1e-9)), hi0 = i64(std::floor(zhi[0] + 1e-9));
  if (lo0 > hi0) return {};
  double est_per_col = (n == 2) ? std::max(1.0, zhi[1] - zlo[1]) : 1.0;
  i64 slab = std::max<i64>(1, i64(100000.0 / est_per_col));
  i64 nslabs = (hi0 - lo0) / slab + 1;
  std::vector<std::vector<WeightedElement>> parts(nslabs);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (long long s = 0; s < (long long)nslabs; ++s) {
    i64 a0 = lo0 + s * slab, b0 = std::min(hi0, a0 + slab - 1);
    for (i64 z0 = a0; z0 <= b0; ++z0) scan_column(ctx, z0, parts[s]);
  }
  (void)parallel;
  std::vector<WeightedElement> out;
  size_t total = 0;
  for (auto& p : parts) total += p.size();
  out.reserve(total);
  for (auto& p : parts)
    for (auto& e : p) out.push_back(std::move(e));
  return out;
}

std::vector<WeightedElement> enumerate_prime_elements(const NumberField& K, const FracIdeal& a,
                                                      const Region& region,
                                                      const std::optional<CongruenceClass>& cc,
                                                      const SieveTable& table,
                                                      const EnumerateOptions& opt) {
  return enumerate_impl(K, a, region, cc, table, opt, opt.parallel);
}

std::vector<WeightedElement> enumerate_prime_elements_serial(
    const NumberField& K, const FracIdeal& a, const Region& region,
    const std::optional<CongruenceClass>& cc, const SieveTable& table,
    const EnumerateOptions& opt) {
  return enumerate_impl(K, a, region, cc, table, opt, false);
}

// --------------------------------------------------------------- pit sums

static bool prime_divides_ideal(const NumberField& K, const PrimeIdeal& pi, const FracIdeal& q) {
  // p | q  <=>  q subset p
  for (int i = 0; i < K.n; ++i)
    if (!ideal_contains(K, pi.ideal, ideal_basis_vector(K, q, i))) return false;
  return true;
}

std::complex<double> pit_sum(const NumberField& K, const FracIdeal& q,
                             const CharacterHandle& psi, u64 N, const SieveTable& table) {
  if (N > table.bound) throw domain_error("pit_sum: sieve table not primed to N");
  if (psi.kind != CharacterHandle::Kind::Trivial && K.h != 1)
    throw domain_error("pit_sum: nontrivial characters require h_K = 1");
  Z nq = ideal_norm(K, q).get_num();
  bool q_trivial = (nq == 1);

  std::optional<ResidueRing> ring;
  if (psi.kind != CharacterHandle::Kind::Trivial)
    ring.emplace(residue_units(K, unit_ideal(K), q));

  Kahan re, im;
  for (const auto& pi : table.primes) {
    if (pi.norm >= N) break;  // sorted by norm
    if (!q_trivial && nq % z_of(pi.p) == 0 && prime_divides_ideal(K, pi, q)) continue;
    double w = std::log(double(pi.norm));
    if (psi.kind == CharacterHandle::Kind::Trivial) {
      re.add(w);
      continue;
    }
    if (!pi.generator) throw domain_error("pit_sum: sieve table lacks generators");
    const Elem& g = *pi.generator;
    auto alpha = ring->reduce_to_class(g);
    auto v = psi.value(minkowski_embed(K, g), *ring, alpha);
    re.add(v.real() * w);
    im.add(v.imag() * w);
  }
  return {re.value(), im.value()};
}

ClassSplitResult pit_class_split(const NumberField& K, const FracIdeal& q, u64 N,
                                 const SieveTable& table) {
  if (K.h != 1) throw domain_error("pit_class_split requires h_K = 1");
  ResidueRing ring = residue_units(K, unit_ideal(K), q);
  Z nq = ideal_norm(K, q).get_num();
  ClassSplitResult res;
  res.class_sums.assign(ring.phi(), FixedAcc{});
  res.class_counts.assign(ring.phi(), 0);
  for (const auto& pi : table.primes) {
    if (pi.norm >= N) break;
    if (nq % z_of(pi.p) == 0 && prime_divides_ideal(K, pi, q)) continue;
    if (!pi.generator) throw domain_error("pit_class_split: sieve table lacks generators");
    auto rep = ring.reduce_to_class(*pi.generator);
    auto it = ring.unit_ordinal.find(ring.index_of(rep));
    if (it == ring.unit_ordinal.end())
      throw domain_error("pit_class_split: generator residue is not a unit class");
    double w = std::log(double(pi.norm));
    res.class_sums[it->second].add(w);
    res.class_counts[it->second] += 1;
    res.total_count += 1;
  }
  for (const auto& acc : res.class_sums) res.total.merge(acc);
  return res;
}

}  // namespace mitsui
