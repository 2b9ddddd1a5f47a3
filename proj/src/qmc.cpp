#include "mitsui/qmc.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mitsui {

static const int kHaltonBases[] = {2, 3, 5, 7, 11, 13};

double halton(u64 index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * double(index % base);
    index /= base;
  }
  return r;
}

void halton_point(u64 index, int dim, double* out) {
  for (int d = 0; d < dim; ++d) out[d] = halton(index, kHaltonBases[d]);
}

static QmcResult qmc_run(const std::function<double(const double*)>& f,
                         const std::vector<double>& lo, const std::vector<double>& hi,
                         u64 npoints, bool parallel) {
  int dim = int(lo.size());
  if (dim == 0 || dim > 6 || hi.size() != lo.size())
    throw domain_error("qmc_integrate: dimension must be 1..6");
  double volume = 1.0;
  for (int d = 0; d < dim; ++d) volume *= (hi[d] - lo[d]);
  if (npoints == 0) return {0.0, 0.0, 0};

  constexpr u64 kChunk = 1 << 14;
  u64 nchunks = (npoints + kChunk - 1) / kChunk;
  std::vector<double> partial(nchunks, 0.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (long long c = 0; c < (long long)nchunks; ++c) {
    u64 begin = u64(c) * kChunk, end = std::min(npoints, begin + kChunk);
    Kahan acc;
    double x[6];
    for (u64 i = begin; i < end; ++i) {
      halton_point(i + kQmcIndexOffset, dim, x);
      double p[6];
      for (int d = 0; d < dim; ++d) p[d] = lo[d] + x[d] * (hi[d] - lo[d]);
      acc.add(f(p));
    }
    partial[c] = acc.value();
  }
  (void)parallel;

  // Fixed combination order over chunks; 16 interleaved sub-means give the
  // error estimate.
  Kahan total;
  Kahan sub[16];
  u64 subcount[16] = {0};
  for (u64 c = 0; c < nchunks; ++c) {
    total.add(partial[c]);
    sub[c % 16].add(partial[c]);
    u64 begin = c * kChunk, end = std::min(npoints, begin + kChunk);
    subcount[c % 16] += end - begin;
  }
  double mean = total.value() / double(npoints);
  double err = 0.0;
  int nsub = 0;
  double submeans[16];
  for (int s = 0; s < 16; ++s)
    if (subcount[s] > 0) submeans[nsub++] = sub[s].value() / double(subcount[s]);
  if (nsub > 1) {
    double m = 0.0;
    for (int s = 0; s < nsub; ++s) m += submeans[s];
    m /= nsub;
    double var = 0.0;
    for (int s = 0; s < nsub; ++s) var += (submeans[s] - m) * (submeans[s] - m);
    var /= (nsub - 1);
    err = std::sqrt(var / nsub) * std::abs(volume);
  }
  return {mean * volume, err, npoints};
}

QmcResult qmc_integrate(const std::function<double(const double*)>& f,
                        const std::vector<double>& lo, const std::vector<double>& hi,
                        u64 npoints, bool parallel) {
  return qmc_run(f, lo, hi, npoints, parallel);
}

QmcResult qmc_integrate_serial(const std::function<double(const double*)>& f,
                               const std::vector<double>& lo, const std::vector<double>& hi,
                               u64 npoints) {
  return qmc_run(f, lo, hi, npoints, false);
}

}  // namespace mitsui
