#pragma once

#include <functional>

#include "mitsui/geometry.hpp"

namespace mitsui {

struct PrimeIdeal {
  i64 p = 0;              // rational prime below
  int residue_degree = 1; // f
  u64 norm = 0;           // p^f
  FracIdeal ideal;
  std::optional<Elem> generator;  // in the fundamental domain, h_K = 1 only
};

struct SieveOptions {
  bool with_generators = true;  // ignored (off) when h_K > 1
  bool parallel = true;
};

// All prime ideals of norm < bound, each exactly once, sorted by
// (norm, basis entries). OpenMP kernel and a plain serial reference.
std::vector<PrimeIdeal> sieve_prime_ideals(const NumberField& K, u64 bound,
                                           const SieveOptions& opt = {});
std::vector<PrimeIdeal> sieve_prime_ideals_serial(const NumberField& K, u64 bound,
                                                  const SieveOptions& opt = {});

// Shared read-only lookup structure for element-primality tests.
struct SieveTable {
  u64 bound = 0;
  std::vector<PrimeIdeal> primes;
  std::vector<uint8_t> prime_bitmap;  // integers < bound
  // norms p^f with f >= 2 -> indices into primes
  std::unordered_map<u64, std::vector<int>> prime_power_norms;
  bool is_rational_prime(u64 q) const {
    if (q >= bound) throw domain_error("sieve table not primed to this norm");
    return q >= 2 && prime_bitmap[q];
  }
};

SieveTable build_sieve_table(const NumberField& K, u64 bound, const SieveOptions& opt = {});

// true iff x * a^{-1} is a (nonzero) prime ideal; x must lie in a.
bool is_prime_element(const NumberField& K, const FracIdeal& a, const Elem& x,
                      const SieveTable& table);

struct WeightedElement {
  std::vector<i64> zcoords;  // coordinates in a's basis
  Elem elem;
  u64 norm_q = 0;       // N(x a^{-1})
  double log_weight = 0;
  u64 residue_index = 0;  // canonical class index mod q*a when requested
};

struct EnumerateOptions {
  bool parallel = true;
  // optional extra membership predicate (e.g. fundamental-domain cut)
  std::function<bool(const EmbPt&)> extra_filter;
  bool record_residues = false;  // fill residue_index even without a congruence filter
};

// Every prime element of a inside the region (optionally in a fixed residue
// class), with weight log N(pi a^{-1}); deterministic output order.
std::vector<WeightedElement> enumerate_prime_elements(
    const NumberField& K, const FracIdeal& a, const Region& region,
    const std::optional<CongruenceClass>& cc, const SieveTable& table,
    const EnumerateOptions& opt = {});
std::vector<WeightedElement> enumerate_prime_elements_serial(
    const NumberField& K, const FracIdeal& a, const Region& region,
    const std::optional<CongruenceClass>& cc, const SieveTable& table,
    const EnumerateOptions& opt = {});

// Sum of psi(pi; pi; 0) log N(p) over sieved prime ideals coprime to q of
// norm < N (Corollary of the Prime Ideal Theorem, prime-element form).
std::complex<double> pit_sum(const NumberField& K, const FracIdeal& q,
                             const CharacterHandle& psi, u64 N, const SieveTable& table);

// Same sum restricted to prime ideals whose domain generator lies in a fixed
// residue class (exact fixed-point accumulation for partition identities).
struct ClassSplitResult {
  std::vector<FixedAcc> class_sums;   // indexed by unit-class ordinal of (O/q)^x
  std::vector<u64> class_counts;
  FixedAcc total;                     // == sum of class_sums bit-exactly
  u64 total_count = 0;
};
ClassSplitResult pit_class_split(const NumberField& K, const FracIdeal& q, u64 N,
                                 const SieveTable& table);

}  // namespace mitsui
