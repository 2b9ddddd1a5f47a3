#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "mitsui/field.hpp"
#include "oracles.hpp"

using namespace mitsui;

static std::string cfg(const char* name) {
  return std::string(MITSUI_CONFIG_DIR) + "/fields/" + name;
}

TEST_CASE("load_field reference fields") {
  auto Kq = load_field_file(cfg("q.json"));
  CHECK(Kq.n == 1);
  CHECK(Kq.r1 == 1);
  CHECK(Kq.r2 == 0);
  CHECK(Kq.regulator == doctest::Approx(1.0));
  CHECK(Kq.w == 2);

  auto Ki = load_field_file(cfg("q_i.json"));
  CHECK(Ki.r1 == 0);
  CHECK(Ki.r2 == 1);
  CHECK(Ki.regulator == doctest::Approx(1.0));
  CHECK(Ki.w == 4);
  CHECK(Ki.discriminant == -4);

  auto K2 = load_field_file(cfg("q_sqrt2.json"));
  CHECK(K2.r1 == 2);
  CHECK(K2.r2 == 0);
  CHECK(K2.regulator == doctest::Approx(std::log(1.0 + std::sqrt(2.0))).epsilon(1e-9));
  CHECK(K2.discriminant == 8);
}

TEST_CASE("load_field rejects bad configurations") {
  NumberFieldSpec s;
  s.poly = {-4, 0, 1};  // x^2 - 4 = (x-2)(x+2)
  s.torsion_generator = {-1, 0};
  s.torsion_order = 2;
  CHECK_THROWS_AS(load_field(s), config_error);

  NumberFieldSpec s2;
  s2.poly = {-2, 0, 1};
  s2.torsion_generator = {-1, 0};
  s2.torsion_order = 2;
  s2.fundamental_units = {{2, 0}};  // |N(2)| = 4, not a unit
  CHECK_THROWS_AS(load_field(s2), config_error);

  NumberFieldSpec s3;
  s3.poly = {1, 0, 1};
  s3.torsion_generator = {0, 1};
  s3.torsion_order = 8;  // i has order 4
  CHECK_THROWS_AS(load_field(s3), config_error);
}

TEST_CASE("element multiplication") {
  auto Ki = load_field_file(cfg("q_i.json"));
  auto K2 = load_field_file(cfg("q_sqrt2.json"));

  Elem x{{7, -3}, 1};
  CHECK(element_mul(Ki, Ki.one(), x) == x);

  // (1+i)^2 = 2i
  Elem onei{{1, 1}, 1};
  auto sq = element_mul(Ki, onei, onei);
  CHECK(sq.c == std::vector<i64>{0, 2});

  // (1+sqrt2)(-1+sqrt2) = 1
  auto p = element_mul(K2, Elem{{1, 1}, 1}, Elem{{-1, 1}, 1});
  CHECK(p == K2.one());
}

TEST_CASE("element multiplication detects overflow") {
  auto Ki = load_field_file(cfg("q_i.json"));
  Elem big{{i64(3e18), 0}, 1};
  CHECK_THROWS_AS(element_mul(Ki, big, big), overflow_error);
}

TEST_CASE("field_norm examples") {
  auto Ki = load_field_file(cfg("q_i.json"));
  auto K2 = load_field_file(cfg("q_sqrt2.json"));
  CHECK(field_norm(Ki, Ki.one()).signed_norm == 1);
  CHECK(field_norm(Ki, Ki.one()).abs_norm == 1);
  // |9 - 2| = 7 (norm of 3 + sqrt2)
  auto np = field_norm(K2, Elem{{3, 1}, 1});
  CHECK(np.signed_norm == 7);
  CHECK(np.abs_norm == 7);
  // det [[1,-2],[2,1]] = 5
  auto ni = field_norm(Ki, Elem{{1, 2}, 1});
  CHECK(ni.signed_norm == 5);
  // norm with sign: N(sqrt2) = -2
  CHECK(field_norm(K2, Elem{{0, 1}, 1}).signed_norm == -2);
}

TEST_CASE("minkowski embedding examples") {
  auto K2 = load_field_file(cfg("q_sqrt2.json"));
  auto Ki = load_field_file(cfg("q_i.json"));

  auto e1 = minkowski_embed(K2, K2.one());
  CHECK(e1.s[0].real() == doctest::Approx(1.0));
  CHECK(e1.s[1].real() == doctest::Approx(1.0));

  auto es = minkowski_embed(K2, Elem{{0, 1}, 1});
  std::vector<double> vals{es.s[0].real(), es.s[1].real()};
  std::sort(vals.begin(), vals.end());
  CHECK(vals[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
  CHECK(vals[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  auto ei = minkowski_embed(Ki, Elem{{0, 1}, 1});
  CHECK(std::abs(ei.s[0]) == doctest::Approx(1.0));
}

TEST_CASE("ideal construction and norms") {
  auto Ki = load_field_file(cfg("q_i.json"));
  auto K2 = load_field_file(cfg("q_sqrt2.json"));

  auto unit = ideal_from_generators(Ki, {Ki.one()});
  CHECK(unit == unit_ideal(Ki));
  CHECK(ideal_norm(Ki, unit) == Q(1));

  // (2, 1+i) = (1+i), determinant 2
  auto a = ideal_from_generators(Ki, {Elem{{2, 0}, 1}, Elem{{1, 1}, 1}});
  CHECK(ideal_norm(Ki, a) == Q(2));
  CHECK(a == principal_ideal(Ki, Elem{{1, 1}, 1}));

  auto b = ideal_from_generators(K2, {Elem{{3, 1}, 1}});
  CHECK(ideal_norm(K2, b) == Q(7));

  auto two = principal_ideal(Ki, Elem{{2, 0}, 1});
  CHECK(ideal_norm(Ki, two) == Q(4));

  CHECK_THROWS_AS(ideal_from_generators(Ki, {}), domain_error);
  CHECK_THROWS_AS(ideal_from_generators(Ki, {Ki.zero()}), domain_error);
}

TEST_CASE("norm multiplicativity on random pairs") {
  for (const char* f : {"q_i.json", "q_sqrt2.json", "q_cbrt2.json"}) {
    auto K = load_field_file(cfg(f));
    u64 st = 99;
    auto rnd = [&st]() {
      st = st * 6364136223846793005ull + 1442695040888963407ull;
      return i64((st >> 33) % 201) - 100;
    };
    for (int t = 0; t < 1000; ++t) {
      Elem x = K.zero(), y = K.zero();
      for (int i = 0; i < K.n; ++i) {
        x.c[i] = rnd();
        y.c[i] = rnd();
      }
      if (is_zero(x) || is_zero(y)) continue;
      auto nx = field_norm(K, x).signed_norm;
      auto ny = field_norm(K, y).signed_norm;
      auto nxy = field_norm(K, element_mul(K, x, y)).signed_norm;
      REQUIRE(nxy == checked_mul(nx, ny));
    }
  }
}

TEST_CASE("embedding/norm consistency") {
  for (const char* f : {"q_i.json", "q_sqrt2.json", "q_sqrt5.json", "q_cbrt2.json"}) {
    auto K = load_field_file(cfg(f));
    u64 st = 7;
    auto rnd = [&st]() {
      st = st * 6364136223846793005ull + 1442695040888963407ull;
      return i64((st >> 33) % 41) - 20;
    };
    for (int t = 0; t < 200; ++t) {
      Elem x = K.zero();
      for (int i = 0; i < K.n; ++i) x.c[i] = rnd();
      if (is_zero(x)) continue;
      double prod = 1;
      auto p = minkowski_embed(K, x);
      for (int i = 0; i < K.r1 + K.r2; ++i) {
        double a = std::abs(p.s[i]);
        prod *= (i < K.r1) ? a : a * a;
      }
      double exact = double(field_norm(K, x).abs_norm);
      REQUIRE(std::abs(prod - exact) <= 1e-8 * std::max(1.0, exact));
    }
  }
}

TEST_CASE("ideal norm multiplicativity on random principal pairs") {
  auto K = load_field_file(cfg("q_sqrt2.json"));
  u64 st = 41;
  auto rnd = [&st]() {
    st = st * 6364136223846793005ull + 1442695040888963407ull;
    return i64((st >> 33) % 21) - 10;
  };
  for (int t = 0; t < 100; ++t) {
    Elem x{{rnd(), rnd()}, 1}, y{{rnd(), rnd()}, 1};
    if (is_zero(x) || is_zero(y)) continue;
    auto a = principal_ideal(K, x), b = principal_ideal(K, y);
    CHECK(ideal_norm(K, ideal_mul(K, a, b)) == ideal_norm(K, a) * ideal_norm(K, b));
  }
}

TEST_CASE("HNF canonicity under unimodular recombination") {
  auto K = load_field_file(cfg("q_i.json"));
  u64 st = 5;
  auto rnd = [&st]() {
    st = st * 6364136223846793005ull + 1442695040888963407ull;
    return i64((st >> 33) % 11) - 5;
  };
  for (int t = 0; t < 50; ++t) {
    Elem g{{rnd(), rnd()}, 1};
    if (is_zero(g)) continue;
    auto a1 = ideal_from_generators(K, {g});
    // recombine basis rows by a small unimodular transform
    Elem r0 = ideal_basis_vector(K, a1, 0);
    Elem r1 = ideal_basis_vector(K, a1, 1);
    i64 m = rnd();
    Elem shift = r1;
    for (auto& v : shift.c) v = checked_mul(v, m);
    Elem r0b = element_add(K, r0, shift);
    auto a2 = ideal_from_generators(K, {r1, r0b});
    CHECK(a1 == a2);
  }
}

TEST_CASE("real quadratic units computed by continued fractions") {
  // Q(sqrt5): fundamental unit is the golden ratio (norm -1)
  auto K5 = load_field_file(cfg("q_sqrt5.json"));
  REQUIRE(K5.units.size() == 1);
  CHECK(field_norm(K5, K5.units[0]).abs_norm == 1);
  CHECK(K5.regulator == doctest::Approx(std::log((1 + std::sqrt(5.0)) / 2)).epsilon(1e-9));

  // Q(sqrt3): unit 2 + sqrt3
  NumberFieldSpec s;
  s.name = "Q(sqrt3)";
  s.poly = {-3, 0, 1};
  s.torsion_generator = {-1, 0};
  s.torsion_order = 2;
  auto K3 = load_field(s);
  CHECK(K3.regulator == doctest::Approx(std::log(2 + std::sqrt(3.0))).epsilon(1e-9));

  // Q(sqrt7): unit 8 + 3 sqrt7
  NumberFieldSpec s7;
  s7.name = "Q(sqrt7)";
  s7.poly = {-7, 0, 1};
  s7.torsion_generator = {-1, 0};
  s7.torsion_order = 2;
  auto K7 = load_field(s7);
  CHECK(K7.regulator == doctest::Approx(std::log(8 + 3 * std::sqrt(7.0))).epsilon(1e-9));
}

TEST_CASE("regulator reference mismatch is rejected") {
  NumberFieldSpec s;
  s.poly = {-2, 0, 1};
  s.torsion_generator = {-1, 0};
  s.torsion_order = 2;
  s.fundamental_units = {{1, 1}};
  s.regulator_reference = 0.5;
  CHECK_THROWS_AS(load_field(s), config_error);
}

TEST_CASE("totient of small ideals") {
  auto Ki = load_field_file(cfg("q_i.json"));
  CHECK(totient_ideal(Ki, unit_ideal(Ki)) == 1);
  CHECK(totient_ideal(Ki, principal_ideal(Ki, Elem{{3, 0}, 1})) == 8);
  CHECK(totient_ideal(Ki, principal_ideal(Ki, Elem{{1, 1}, 1})) == 1);
  CHECK(totient_ideal(Ki, principal_ideal(Ki, Elem{{5, 0}, 1})) == 16);
}

TEST_CASE("class representatives are validated") {
  auto Km5 = load_field_file(cfg("q_sqrt_m5.json"));
  CHECK(Km5.h == 2);
  CHECK(Km5.class_reps.size() == 2);
  CHECK(Km5.class_reps[0] == unit_ideal(Km5));
  CHECK(ideal_norm(Km5, Km5.class_reps[1]) == Q(2));
}
