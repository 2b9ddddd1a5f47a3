#include "mitsui/residue.hpp"

#include <algorithm>

namespace mitsui {

std::vector<i64> ResidueRing::reduce(std::vector<i64> z) const {
  int n = field->n;
  for (int i = 0; i < n; ++i) {
    i64 k = floor_div(z[i], diag[i]);
    if (k == 0) continue;
    for (int j = i; j < n; ++j) z[j] = checked_sub(z[j], checked_mul(k, z_to_i64(M.at(i, j))));
  }
  return z;
}

u64 ResidueRing::index_of(const std::vector<i64>& rep) const {
  u64 idx = 0;
  for (size_t i = 0; i < rep.size(); ++i) idx += u64(rep[i]) * stride[i];
  return idx;
}

std::vector<i64> ResidueRing::rep_of_index(u64 idx) const {
  int n = field->n;
  std::vector<i64> rep(n);
  for (int i = 0; i < n; ++i) {
    rep[i] = i64(idx % u64(diag[i]));
    idx /= u64(diag[i]);
  }
  return rep;
}

std::vector<i64> ResidueRing::reduce_to_class(const Elem& x) const {
  auto z = ideal_coords(*field, ambient, x);
  if (!z) throw domain_error("reduce_to_class: element is not in the ambient module");
  return reduce(*z);
}

Elem ResidueRing::lift(const std::vector<i64>& rep) const {
  return from_ideal_coords(*field, ambient, rep);
}

std::vector<i64> ResidueRing::class_mul(const std::vector<i64>& a, const std::vector<i64>& b) const {
  Elem prod = element_mul(*field, lift(a), lift(b));
  return reduce_to_class(prod);
}

bool ResidueRing::is_unit_class(const std::vector<i64>& rep) const {
  // rep generates a/qa iff the module spanned by {rep * w_k} and q*a equals a;
  // in a-coordinates that means the stacked HNF is the identity.
  const NumberField& K = *field;
  int n = K.n;
  Elem x = lift(rep);
  if (is_zero(x)) return count == 1;  // a/qa = 0 is generated by its zero class
  ZMat m(2 * n, n);
  for (int k = 0; k < n; ++k) {
    Elem wk = K.zero();
    wk.c[k] = 1;
    auto z = ideal_coords(K, ambient, element_mul(K, x, wk));
    if (!z) throw domain_error("residue ring: ambient is not an O_K-module");
    for (int c = 0; c < n; ++c) m.at(k, c) = z_of((*z)[c]);
  }
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m.at(n + r, c) = M.at(r, c);
  ZMat h = hnf(m);
  if (h.rows != n) return false;
  for (int i = 0; i < n; ++i)
    if (h.at(i, i) != 1) return false;
  return true;
}

// Generic abelian structure by incremental generators + SNF on the relation
// matrix. Elements are the unit classes of `ring`.
static void build_group_structure(ResidueRing& ring) {
  const u64 G = ring.phi();
  std::vector<i64> id_rep = ring.reduce_to_class(ring.field->one());
  u64 id_idx = ring.index_of(id_rep);

  std::unordered_map<u64, std::vector<i64>> H;  // index -> exponents over raw gens
  H[id_idx] = {};
  std::vector<std::vector<i64>> raw_gens;
  std::vector<i64> rel_t;                 // t_j
  std::vector<std::vector<i64>> rel_v;    // g_j^{t_j} = prod g_i^{v_i}

  for (u64 pos = 0; pos < ring.unit_indices.size() && H.size() < G; ++pos) {
    u64 cand = ring.unit_indices[pos];
    if (H.count(cand)) continue;
    auto g = ring.rep_of_index(cand);
    int j = int(raw_gens.size());
    // minimal t with g^t in H
    auto pw = g;
    i64 t = 1;
    while (!H.count(ring.index_of(pw))) {
      pw = ring.class_mul(pw, g);
      ++t;
    }
    std::vector<i64> v = H[ring.index_of(pw)];
    v.resize(j, 0);
    raw_gens.push_back(g);
    rel_t.push_back(t);
    rel_v.push_back(v);
    // extend H
    std::unordered_map<u64, std::vector<i64>> nH = H;
    auto step = g;
    for (i64 s = 1; s < t; ++s) {
      for (const auto& [hk, hv] : H) {
        auto ne = ring.class_mul(ring.rep_of_index(hk), step);
        std::vector<i64> nv = hv;
        nv.resize(j, 0);
        nv.push_back(s);
        nH.emplace(ring.index_of(ne), std::move(nv));
      }
      step = ring.class_mul(step, g);
    }
    for (auto& [hk, hv] : nH) hv.resize(j + 1, 0);
    H = std::move(nH);
  }
  int k = int(raw_gens.size());
  if (k == 0) {  // trivial group
    ring.dlog[id_idx] = {};
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
  // raw generator orders, for negative exponents in V
  std::vector<i64> raw_order(k);
  for (int i = 0; i < k; ++i) {
    auto pw = raw_gens[i];
    i64 o = 1;
    while (ring.index_of(pw) != id_idx) {
      pw = ring.class_mul(pw, raw_gens[i]);
      ++o;
    }
    raw_order[i] = o;
  }
  auto pow_class = [&](const std::vector<i64>& g, i64 e, i64 ord) {
    e %= ord;
    if (e < 0) e += ord;
    auto r = id_rep;
    auto b = g;
    while (e > 0) {
      if (e & 1) r = ring.class_mul(r, b);
      e >>= 1;
      if (e) b = ring.class_mul(b, b);
    }
    return r;
  };
  std::vector<std::vector<i64>> new_gens;
  std::vector<i64> new_orders;
  for (int j = 0; j < k; ++j) {
    i64 dj = z_to_i64(d[j]);
    if (dj <= 1) continue;
    auto gj = id_rep;
    for (int i = 0; i < k; ++i)
      gj = ring.class_mul(gj, pow_class(raw_gens[i], z_to_i64(V.at(i, j)), raw_order[i]));
    new_gens.push_back(gj);
    new_orders.push_back(dj);
  }
  // SNF gives d_1 | d_2 | ...; keep ascending order
  ring.gens = new_gens;
  ring.orders = new_orders;
  // discrete logs by full enumeration of the product box
  ring.dlog.clear();
  std::vector<i64> e(new_gens.size(), 0);
  while (true) {
    auto elt = id_rep;
    for (size_t i = 0; i < new_gens.size(); ++i)
      elt = ring.class_mul(elt, pow_class(new_gens[i], e[i], new_orders[i]));
    ring.dlog[ring.index_of(elt)] = e;
    size_t i = 0;
    for (; i < e.size(); ++i) {
      if (++e[i] < new_orders[i]) break;
      e[i] = 0;
    }
    if (i == e.size()) break;
    if (new_gens.empty()) break;
  }
  if (ring.dlog.size() != G)
    throw domain_error("residue group structure: discrete log enumeration mismatch");
}

ResidueRing residue_units(const NumberField& K, const FracIdeal& a, const FracIdeal& q) {
  ResidueRing r;
  r.field = &K;
  r.ambient = a;
  r.modulus = q;
  Q nq = ideal_norm(K, q);
  if (nq.get_den() != 1) throw domain_error("residue_units: modulus must be integral");
  if (nq.get_num() > 100000)
    throw domain_error("residue_units: modulus too large for brute force");
  FracIdeal qa = ideal_mul(K, q, a);
  // express q*a in a-coordinates
  int n = K.n;
  ZMat m(n, n);
  for (int i = 0; i < n; ++i) {
    auto z = ideal_coords(K, a, ideal_basis_vector(K, qa, i));
    if (!z) throw domain_error("residue_units: q*a not inside a");
    for (int c = 0; c < n; ++c) m.at(i, c) = z_of((*z)[c]);
  }
  r.M = hnf_square(m);
  r.diag.resize(n);
  r.stride.resize(n);
  u64 s = 1;
  for (int i = 0; i < n; ++i) {
    r.diag[i] = z_to_i64(r.M.at(i, i));
    r.stride[i] = s;
    s *= u64(r.diag[i]);
  }
  r.count = s;
  if (Z(z_of_u(r.count)) != nq.get_num())
    throw domain_error("residue_units: coset count does not match the ideal norm");

  for (u64 idx = 0; idx < r.count; ++idx)
    if (r.is_unit_class(r.rep_of_index(idx))) r.unit_indices.push_back(idx);
  std::sort(r.unit_indices.begin(), r.unit_indices.end());
  for (u64 i = 0; i < r.unit_indices.size(); ++i) r.unit_ordinal[r.unit_indices[i]] = i;
  if (r.unit_indices.empty()) throw domain_error("residue_units: no generator classes");
  r.trivialization = r.rep_of_index(r.unit_indices[0]);

  bool ambient_is_ok = (a == unit_ideal(K));
  if (ambient_is_ok) {
    build_group_structure(r);
    r.torsor_to_reference.resize(r.unit_indices.size());
    for (u64 i = 0; i < r.unit_indices.size(); ++i) r.torsor_to_reference[i] = i;
  } else {
    // torsor map through the reference ring (O_K/q)^x: alpha = t * g0
    ResidueRing ref = residue_units(K, unit_ideal(K), q);
    if (ref.phi() != r.phi())
      throw domain_error("residue_units: torsor size mismatch");
    Elem g0 = r.lift(r.trivialization);
    r.torsor_to_reference.assign(r.phi(), 0);
    std::unordered_map<u64, u64> seen;
    for (u64 tpos = 0; tpos < ref.unit_indices.size(); ++tpos) {
      Elem t = ref.lift(ref.rep_of_index(ref.unit_indices[tpos]));
      auto prod = r.reduce_to_class(element_mul(K, t, g0));
      u64 ai = r.index_of(prod);
      auto it = r.unit_ordinal.find(ai);
      if (it == r.unit_ordinal.end())
        throw domain_error("residue_units: torsor product left the unit classes");
      r.torsor_to_reference[it->second] = tpos;
      seen[ai] = tpos;
    }
    if (seen.size() != r.phi())
      throw domain_error("residue_units: torsor trivialization is not bijective");
  }
  return r;
}

CongruenceClass make_congruence_class(const NumberField& K, const FracIdeal& a,
                                      const FracIdeal& q, const Elem& representative) {
  ResidueRing ring = residue_units(K, a, q);
  auto rep = ring.reduce_to_class(representative);
  if (!ring.is_unit_class(rep))
    throw domain_error("congruence class representative does not generate a/qa");
  CongruenceClass cc;
  cc.modulus = q;
  cc.ambient = a;
  cc.rep = rep;
  (void)K;
  return cc;
}

}  // namespace mitsui
