#include "mitsui/characters.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace mitsui {

u64 ComponentGroup::raw_mul(u64 a, u64 b) const {
  u64 phi = ring.phi();
  u64 ma = a / phi, oa = a % phi;
  u64 mb = b / phi, ob = b % phi;
  auto prod = ring.class_mul(ring.rep_of_index(ring.unit_indices[oa]),
                             ring.rep_of_index(ring.unit_indices[ob]));
  u64 oc = ring.unit_ordinal.at(ring.index_of(prod));
  return raw_key(ma ^ mb, oc);
}

u64 ComponentGroup::raw_of_unit_elem(const Elem& u) const {
  const NumberField& K = *field;
  EmbPt p = minkowski_embed(K, u);
  u64 mask = 0;
  for (int i = 0; i < K.r1; ++i)
    if (p.s[i].real() < 0) mask |= (u64(1) << i);
  auto rep = ring.reduce_to_class(u);
  auto it = ring.unit_ordinal.find(ring.index_of(rep));
  if (it == ring.unit_ordinal.end())
    throw domain_error("component_group: unit is not coprime to the modulus");
  return raw_key(mask, it->second);
}

u64 ComponentGroup::raw_of(const EmbPt& x, u64 ref_ordinal) const {
  u64 mask = 0;
  for (int i = 0; i < field->r1; ++i)
    if (x.s[i].real() < 0) mask |= (u64(1) << i);
  return raw_key(mask, ref_ordinal);
}

// cyclic structure of an abstract finite abelian group given by keys
struct GroupView {
  std::vector<u64> elements;  // sorted keys
  u64 identity;
  std::function<u64(u64, u64)> mul;
};

static void abelian_structure(const GroupView& g, std::vector<u64>& gens,
                              std::vector<i64>& orders,
                              std::unordered_map<u64, std::vector<i64>>& dlog) {
  std::unordered_map<u64, std::vector<i64>> H;
  H[g.identity] = {};
  std::vector<u64> raw_gens;
  std::vector<i64> rel_t;
  std::vector<std::vector<i64>> rel_v;
  for (u64 cand : g.elements) {
    if (H.size() >= g.elements.size()) break;
    if (H.count(cand)) continue;
    int j = int(raw_gens.size());
    u64 pw = cand;
    i64 t = 1;
    while (!H.count(pw)) {
      pw = g.mul(pw, cand);
      ++t;
    }
    std::vector<i64> v = H[pw];
    v.resize(j, 0);
    raw_gens.push_back(cand);
    rel_t.push_back(t);
    rel_v.push_back(v);
    std::unordered_map<u64, std::vector<i64>> nH = H;
    u64 step = cand;
    for (i64 s = 1; s < t; ++s) {
      for (const auto& [hk, hv] : H) {
        std::vector<i64> nv = hv;
        nv.resize(j, 0);
        nv.push_back(s);
        nH.emplace(g.mul(hk, step), std::move(nv));
      }
      step = g.mul(step, cand);
    }
    for (auto& [hk, hv] : nH) hv.resize(j + 1, 0);
    H = std::move(nH);
  }
  int k = int(raw_gens.size());
  gens.clear();
  orders.clear();
  dlog.clear();
  if (k == 0) {
    dlog[g.identity] = {};
    return;
  }
  ZMat R(k, k);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < int(rel_v[j].size()); ++i) R.at(j, i) = z_of(-rel_v[j][i]);
    R.at(j, j) = z_of(rel_t[j]);
  }
  std::vector<Z> d;
  ZMat V;
  snf_with_v(R, d, V);
  std::vector<i64> raw_order(k);
  for (int i = 0; i < k; ++i) {
    u64 pw = raw_gens[i];
    i64 o = 1;
    while (pw != g.identity) {
      pw = g.mul(pw, raw_gens[i]);
      ++o;
    }
    raw_order[i] = o;
  }
  auto pow_key = [&](u64 b, i64 e, i64 ord) {
    e %= ord;
    if (e < 0) e += ord;
    u64 r = g.identity;
    u64 bb = b;
    while (e > 0) {
      if (e & 1) r = g.mul(r, bb);
      e >>= 1;
      if (e) bb = g.mul(bb, bb);
    }
    return r;
  };
  for (int j = 0; j < k; ++j) {
    i64 dj = z_to_i64(d[j]);
    if (dj <= 1) continue;
    u64 gj = g.identity;
    for (int i = 0; i < k; ++i)
      gj = g.mul(gj, pow_key(raw_gens[i], z_to_i64(V.at(i, j)), raw_order[i]));
    gens.push_back(gj);
    orders.push_back(dj);
  }
  std::vector<i64> e(gens.size(), 0);
  while (true) {
    u64 elt = g.identity;
    for (size_t i = 0; i < gens.size(); ++i) elt = g.mul(elt, pow_key(gens[i], e[i], orders[i]));
    dlog[elt] = e;
    size_t i = 0;
    for (; i < e.size(); ++i) {
      if (++e[i] < orders[i]) break;
      e[i] = 0;
    }
    if (i == e.size()) break;
  }
  if (dlog.size() != g.elements.size())
    throw domain_error("abelian_structure: discrete log enumeration mismatch");
}

ComponentGroup component_group(const NumberField& K, const FracIdeal& q) {
  ComponentGroup cg;
  cg.field = &K;
  cg.q = q;
  cg.ring = residue_units(K, unit_ideal(K), q);
  u64 phi = cg.ring.phi();
  cg.raw_size = (u64(1) << K.r1) * phi;
  cg.raw_identity = cg.raw_of_unit_elem(K.one());
  cg.class_resolved = (K.h == 1);

  // unit images: torsion first, then fundamental units
  cg.unit_gen_images.push_back(cg.raw_of_unit_elem(K.torsion));
  for (const auto& u : K.units) cg.unit_gen_images.push_back(cg.raw_of_unit_elem(u));

  // subgroup closure with preimage exponent vectors (torsion exponent first)
  int ng = int(cg.unit_gen_images.size());
  std::map<u64, std::vector<i64>> sub;
  sub[cg.raw_identity] = std::vector<i64>(ng, 0);
  for (int j = 0; j < ng; ++j) {
    u64 gj = cg.unit_gen_images[j];
    u64 pw = gj;
    i64 t = 1;
    while (!sub.count(pw)) {
      pw = cg.raw_mul(pw, gj);
      ++t;
    }
    std::map<u64, std::vector<i64>> nsub = sub;
    u64 step = gj;
    for (i64 s = 1; s < t; ++s) {
      for (const auto& [hk, hv] : sub) {
        std::vector<i64> nv = hv;
        nv[j] += s;
        nsub.emplace(cg.raw_mul(hk, step), std::move(nv));
      }
      step = cg.raw_mul(step, gj);
    }
    sub = std::move(nsub);
  }
  for (const auto& [k2, v] : sub) {
    cg.unit_image_keys.push_back(k2);
    cg.unit_image_pre[k2] = v;
  }
  std::sort(cg.unit_image_keys.begin(), cg.unit_image_keys.end());

  // cosets: sweep raw elements, label unmarked cosets by their minimal key
  u64 usz = cg.unit_image_keys.size();
  if (cg.raw_size % usz != 0)
    throw domain_error("component_group: unit image size does not divide raw size");
  cg.quotient_order = cg.raw_size / usz;
  for (u64 mask = 0; mask < (u64(1) << K.r1); ++mask)
    for (u64 o = 0; o < phi; ++o) {
      u64 key = cg.raw_key(mask, o);
      if (cg.coset_of.count(key)) continue;
      u64 id = cg.transversal.size();
      cg.transversal.push_back(key);
      for (u64 h : cg.unit_image_keys) cg.coset_of[cg.raw_mul(key, h)] = id;
    }
  if (cg.transversal.size() != cg.quotient_order)
    throw domain_error("component_group: coset enumeration mismatch");

  // quotient structure
  GroupView qv;
  qv.identity = cg.coset_of.at(cg.raw_identity);
  qv.elements.resize(cg.quotient_order);
  for (u64 i = 0; i < cg.quotient_order; ++i) qv.elements[i] = i;
  qv.mul = [&cg](u64 a, u64 b) {
    return cg.coset_of.at(cg.raw_mul(cg.transversal[a], cg.transversal[b]));
  };
  abelian_structure(qv, cg.q_gens, cg.q_orders, cg.q_dlog);

  // raw structure
  GroupView rv;
  rv.identity = cg.raw_identity;
  for (u64 mask = 0; mask < (u64(1) << K.r1); ++mask)
    for (u64 o = 0; o < phi; ++o) rv.elements.push_back(cg.raw_key(mask, o));
  std::sort(rv.elements.begin(), rv.elements.end());
  rv.mul = [&cg](u64 a, u64 b) { return cg.raw_mul(a, b); };
  abelian_structure(rv, cg.raw_gens, cg.raw_orders, cg.raw_dlog);
  return cg;
}

std::complex<double> FiniteCharacter::on_coset(const ComponentGroup& cg, u64 coset) const {
  const auto& e = cg.q_dlog.at(coset);
  double turns = 0;
  for (size_t i = 0; i < e.size(); ++i)
    turns += double(exponents[i]) * double(e[i]) / double(cg.q_orders[i]);
  return std::polar(1.0, 2 * M_PI * turns);
}

std::vector<FiniteCharacter> enumerate_finite_characters(const ComponentGroup& cg) {
  std::vector<FiniteCharacter> out;
  std::vector<i64> e(cg.q_orders.size(), 0);
  int label = 0;
  while (true) {
    FiniteCharacter ch;
    ch.label = label++;
    ch.exponents = e;
    ch.real = true;
    for (size_t i = 0; i < e.size(); ++i)
      if ((2 * e[i]) % cg.q_orders[i] != 0) ch.real = false;
    out.push_back(ch);
    size_t i = 0;
    for (; i < e.size(); ++i) {
      if (++e[i] < cg.q_orders[i]) break;
      e[i] = 0;
    }
    if (i == e.size() || e.empty()) break;
  }
  return out;
}

static u64 transported_ordinal(const ResidueRing& ring_a, const std::vector<i64>& alpha_rep) {
  auto it = ring_a.unit_ordinal.find(ring_a.index_of(alpha_rep));
  if (it == ring_a.unit_ordinal.end())
    throw domain_error("character evaluation: alpha is not a unit class");
  return ring_a.torsor_to_reference[it->second];
}

std::complex<double> evaluate_finite(const ComponentGroup& cg, const FiniteCharacter& psi,
                                     const EmbPt& x, const ResidueRing& ring_a,
                                     const std::vector<i64>& alpha_rep) {
  u64 key = cg.raw_of(x, transported_ordinal(ring_a, alpha_rep));
  return psi.on_coset(cg, cg.coset_of.at(key));
}

bool AngularCharacter::is_finite_only() const {
  for (i64 v : h_freq_label)
    if (v != 0) return false;
  for (i64 v : angular_freq)
    if (v != 0) return false;
  return true;
}

// exact angle (in turns, rational) of the torsion generator at each complex place
static std::vector<Q> torsion_angles_exact(const NumberField& K) {
  EmbPt p = minkowski_embed(K, K.torsion);
  std::vector<Q> out;
  for (int j = 0; j < K.r2; ++j) {
    double t = std::arg(p.s[K.r1 + j]) / (2 * M_PI);
    t -= std::floor(t);
    // angle must be a multiple of 1/w
    long num = std::lround(t * K.w);
    if (std::abs(t * K.w - double(num)) > 1e-6)
      throw domain_error("torsion angle is not an exact multiple of 1/w");
    Q a = q_of(num % K.w) / q_of(K.w);
    a.canonicalize();
    out.push_back(a);
  }
  return out;
}

// kernel of Z^{1+r} -> raw group, (t0, k) -> zeta^{t0} prod units^{k_i}
static std::vector<std::vector<i64>> unit_relation_kernel(const ComponentGroup& cg) {
  const NumberField& K = *cg.field;
  int ng = 1 + K.unit_rank();
  std::map<u64, std::vector<i64>> H;
  H[cg.raw_identity] = std::vector<i64>(0);
  std::vector<std::vector<i64>> basis;
  int j = 0;
  for (; j < ng; ++j) {
    u64 gj = cg.unit_gen_images[j];
    u64 pw = gj;
    i64 t = 1;
    while (!H.count(pw)) {
      pw = cg.raw_mul(pw, gj);
      ++t;
    }
    std::vector<i64> v = H[pw];
    v.resize(j, 0);
    std::vector<i64> col(ng, 0);
    for (int i = 0; i < j; ++i) col[i] = -v[i];
    col[j] = t;
    basis.push_back(col);
    std::map<u64, std::vector<i64>> nH = H;
    u64 step = gj;
    for (i64 s = 1; s < t; ++s) {
      for (const auto& [hk, hv] : H) {
        std::vector<i64> nv = hv;
        nv.resize(j, 0);
        nv.push_back(s);
        nH.emplace(cg.raw_mul(hk, step), std::move(nv));
      }
      step = cg.raw_mul(step, gj);
    }
    for (auto& [hk, hv] : nH) hv.resize(j + 1, 0);
    H = std::move(nH);
  }
  return basis;
}

std::vector<AngularCharacter> angular_characters_up_to(const NumberField& K,
                                                       const FracIdeal& q, int Y) {
  if (K.n > 3) throw domain_error("angular characters: only degrees <= 3 supported");
  ComponentGroup cg = component_group(K, q);
  int r = K.unit_rank(), r2 = K.r2;
  auto fin = enumerate_finite_characters(cg);
  std::vector<AngularCharacter> out;

  // dual basis of the unit-kernel lattice (columns of B^{-T}), exact
  IntegerLattice lam;
  QMat dual;  // r x r, column t = dual basis vector
  if (r > 0) {
    lam = unit_kernel_lattice(K, q);
    QMat B(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) B.at(i, j) = Q(lam.basis.at(j, i));  // B^T
    dual = qmat_inverse(B);
  }
  auto tang = torsion_angles_exact(K);
  auto kernel = unit_relation_kernel(cg);

  // quotient-character pullbacks to raw (angle tables in turns)
  std::vector<std::unordered_map<u64, double>> fin_tables(fin.size());
  for (size_t f = 0; f < fin.size(); ++f)
    for (u64 mask = 0; mask < (u64(1) << K.r1); ++mask)
      for (u64 o = 0; o < cg.ring.phi(); ++o) {
        u64 key = cg.raw_key(mask, o);
        const auto& e = cg.q_dlog.at(cg.coset_of.at(key));
        double turns = 0;
        for (size_t i = 0; i < e.size(); ++i)
          turns += double(fin[f].exponents[i]) * double(e[i]) / double(cg.q_orders[i]);
        fin_tables[f][key] = turns - std::floor(turns);
      }

  // frequency label boxes
  std::vector<i64> label(r + r2, -Y);
  if (Y == 0) label.assign(r + r2, 0);
  while (true) {
    std::vector<i64> hl(label.begin(), label.begin() + r);
    std::vector<i64> m(label.begin() + r, label.end());
    // f = dual * hl (rational vector over unit-exponent coordinates)
    std::vector<Q> f(r, Q(0));
    for (int i = 0; i < r; ++i)
      for (int t = 0; t < r; ++t) f[i] += dual.at(i, t) * q_of(hl[t]);
    for (auto& v : f) v.canonicalize();
    // required compensator angles (turns, exact rationals):
    //   on zeta: -sum_j m_j * tang_j ;  on unit_i: -f_i
    Q rho_t(0);
    for (int j = 0; j < r2; ++j) rho_t -= q_of(m[j]) * tang[j];
    std::vector<Q> rho_u(r);
    for (int i = 0; i < r; ++i) rho_u[i] = -f[i];
    // exact kernel check: value must be integral on every kernel vector
    bool valid = true;
    for (const auto& kv : kernel) {
      Q tot = q_of(kv[0]) * (-rho_t);
      for (int i = 0; i < r; ++i) tot += q_of(kv[1 + i]) * (-rho_u[i]);
      tot.canonicalize();
      if (tot.get_den() != 1) { valid = false; break; }
    }
    if (valid) {
      // extend the compensator from the unit-image subgroup to all of raw
      std::unordered_map<u64, Q> val;
      for (u64 hk : cg.unit_image_keys) {
        const auto& pre = cg.unit_image_pre.at(hk);
        Q a = q_of(pre[0]) * rho_t;
        for (int i = 0; i < r; ++i) a += q_of(pre[1 + i]) * rho_u[i];
        // reduce mod 1
        Z fl;
        mpz_fdiv_q(fl.get_mpz_t(), a.get_num().get_mpz_t(), a.get_den().get_mpz_t());
        a -= Q(fl);
        a.canonicalize();
        auto it = val.find(hk);
        if (it != val.end() && it->second != a) { valid = false; break; }
        val[hk] = a;
      }
      if (valid) {
        // grow to the full raw group: pick elements, take roots
        std::vector<u64> have(cg.unit_image_keys);
        u64 mask_count = u64(1) << K.r1;
        for (u64 mask = 0; mask < mask_count && have.size() < cg.raw_size; ++mask)
          for (u64 o = 0; o < cg.ring.phi() && have.size() < cg.raw_size; ++o) {
            u64 cand = cg.raw_key(mask, o);
            if (val.count(cand)) continue;
            u64 pw = cand;
            i64 t = 1;
            while (!val.count(pw)) {
              pw = cg.raw_mul(pw, cand);
              ++t;
            }
            Q root = val[pw] / q_of(t);
            root.canonicalize();
            std::vector<u64> prev = have;
            u64 step = cand;
            Q acc = root;
            for (i64 s = 1; s < t; ++s) {
              for (u64 hk : prev) {
                Q a = val[hk] + acc;
                Z fl;
                mpz_fdiv_q(fl.get_mpz_t(), a.get_num().get_mpz_t(), a.get_den().get_mpz_t());
                a -= Q(fl);
                a.canonicalize();
                u64 nk = cg.raw_mul(hk, step);
                val[nk] = a;
                have.push_back(nk);
              }
              step = cg.raw_mul(step, cand);
              acc += root;
            }
          }
        // assemble one AngularCharacter per finite twist
        for (size_t fidx = 0; fidx < fin.size(); ++fidx) {
          AngularCharacter ac;
          ac.h_freq_label = hl;
          ac.angular_freq = m;
          ac.h_freq_eff.resize(r);
          for (int i = 0; i < r; ++i) {
            double lam = f[i].get_d();
            EmbPt up = minkowski_embed(K, K.units[i]);
            for (int j = 0; j < r2; ++j) {
              double aij = std::arg(up.s[K.r1 + j]) / (2 * M_PI);
              aij -= std::floor(aij);
              lam -= double(m[j]) * aij;
            }
            ac.h_freq_eff[i] = lam;
          }
          ac.finite_label = int(fidx);
          for (auto& [key, a] : val) {
            double turns = a.get_d() + fin_tables[fidx][key];
            ac.twist_turns[key] = turns - std::floor(turns);
          }
          out.push_back(std::move(ac));
        }
      }
    }
    // advance the label box
    if (Y == 0) break;
    size_t i = 0;
    for (; i < label.size(); ++i) {
      if (++label[i] <= Y) break;
      label[i] = -Y;
    }
    if (i == label.size() || label.empty()) break;
  }
  return out;
}

std::complex<double> evaluate_angular(const ComponentGroup& cg, const FundamentalDomain& fd,
                                      const AngularCharacter& psi, const EmbPt& x,
                                      const ResidueRing& ring_a,
                                      const std::vector<i64>& alpha_rep) {
  const NumberField& K = *cg.field;
  u64 key = cg.raw_of(x, transported_ordinal(ring_a, alpha_rep));
  double turns = psi.twist_turns.at(key);
  if (!psi.h_freq_eff.empty()) {
    auto c = fd.unit_coords(x);
    for (size_t i = 0; i < c.size(); ++i) turns += psi.h_freq_eff[i] * c[i];
  }
  for (int j = 0; j < K.r2; ++j) {
    double aj = std::arg(x.s[K.r1 + j]) / (2 * M_PI);
    aj -= std::floor(aj);
    turns += double(psi.angular_freq[j]) * aj;
  }
  return std::polar(1.0, 2 * M_PI * turns);
}

std::complex<double> CharacterHandle::value(const EmbPt& x, const ResidueRing& ring_a,
                                            const std::vector<i64>& alpha_rep) const {
  switch (kind) {
    case Kind::Trivial:
      return {1.0, 0.0};
    case Kind::Finite:
      return evaluate_finite(*cg, fin, x, ring_a, alpha_rep);
    case Kind::Angular:
      return evaluate_angular(*cg, *fd, ang, x, ring_a, alpha_rep);
  }
  return {1.0, 0.0};
}

ChartPoint chart(const NumberField& K, const FracIdeal& q, const Elem& pi, int class_index) {
  const FracIdeal& a = K.class_reps.at(class_index);
  ResidueRing ring = residue_units(K, a, q);
  auto rep_class = ring.reduce_to_class(pi);
  if (!ring.is_unit_class(rep_class))
    throw domain_error("chart: element is not coprime to the modulus (valuative test)");
  FundamentalDomain fd(K);
  auto [unit, rep] = fd.reduce(pi);
  (void)unit;
  ChartPoint cp;
  cp.class_index = class_index;
  cp.domain_rep = rep;
  cp.residue.modulus = q;
  cp.residue.ambient = a;
  cp.residue.rep = ring.reduce_to_class(rep);
  return cp;
}

}  // namespace mitsui
