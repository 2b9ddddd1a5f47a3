// Benchmark the OpenMP kernels against their serial reference
// implementations and verify they produce identical results.

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mitsui/harness.hpp"

using namespace mitsui;
using Clock = std::chrono::steady_clock;

static double time_ms(const std::function<void()>& f) {
  auto t0 = Clock::now();
  f();
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int main(int argc, char** argv) {
  u64 sieve_bound = argc > 1 ? std::stoull(argv[1]) : 300000;
  double disk_radius = argc > 2 ? std::stod(argv[2]) : 600.0;
  u64 qmc_points = argc > 3 ? std::stoull(argv[3]) : (1u << 21);

  int threads = 1;
#ifdef _OPENMP
#pragma omp parallel
  threads = omp_get_num_threads();
#endif
  printf("threads: %d\n", threads);
  printf("%-28s %12s %12s %8s %s\n", "kernel", "serial ms", "openmp ms", "speedup", "match");

  auto K = load_field_file(std::string(MITSUI_CONFIG_DIR) + "/fields/q_i.json");

  {
    std::vector<PrimeIdeal> a, b;
    double ts = time_ms([&] { a = sieve_prime_ideals_serial(K, sieve_bound); });
    double tp = time_ms([&] { b = sieve_prime_ideals(K, sieve_bound); });
    bool same = a.size() == b.size();
    for (size_t i = 0; same && i < a.size(); ++i)
      same = a[i].norm == b[i].norm && a[i].ideal == b[i].ideal &&
             a[i].generator == b[i].generator;
    printf("%-28s %12.1f %12.1f %8.2f %s\n", "sieve_prime_ideals", ts, tp, ts / tp,
           same ? "yes" : "NO");
  }
  {
    SieveTable table = build_sieve_table(K, u64(disk_radius * disk_radius) + 2,
                                         SieveOptions{false, true});
    Region disk = make_ball(K, {0, 0}, disk_radius);
    std::vector<WeightedElement> a, b;
    double ts = time_ms(
        [&] { a = enumerate_prime_elements_serial(K, unit_ideal(K), disk, {}, table); });
    double tp =
        time_ms([&] { b = enumerate_prime_elements(K, unit_ideal(K), disk, {}, table); });
    bool same = a.size() == b.size();
    for (size_t i = 0; same && i < a.size(); ++i)
      same = a[i].zcoords == b[i].zcoords && a[i].norm_q == b[i].norm_q;
    printf("%-28s %12.1f %12.1f %8.2f %s\n", "enumerate_prime_elements", ts, tp, ts / tp,
           same ? "yes" : "NO");
  }
  {
    auto f = [](const double* x) {
      double r2 = x[0] * x[0] + x[1] * x[1];
      return r2 < 1.0 ? 1.0 : 0.0;
    };
    QmcResult a, b;
    double ts =
        time_ms([&] { a = qmc_integrate_serial(f, {-1, -1}, {1, 1}, qmc_points); });
    double tp = time_ms([&] { b = qmc_integrate(f, {-1, -1}, {1, 1}, qmc_points); });
    bool same = a.value == b.value;  // bit-identical by the fixed merge order
    printf("%-28s %12.1f %12.1f %8.2f %s\n", "qmc_integrate", ts, tp, ts / tp,
           same ? "yes" : "NO");
  }
  return 0;
}
