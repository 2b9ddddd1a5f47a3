#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mitsui/util.hpp"

namespace mitsui {

// Halton low-discrepancy sequence (bases 2,3,5,7,11,13) with a fixed index
// offset, so every "stochastic-looking" number in reports is reproducible.
constexpr u64 kQmcIndexOffset = 4096;

double halton(u64 index, int base);
void halton_point(u64 index, int dim, double* out);  // coordinates in [0,1)

struct QmcResult {
  double value = 0.0;
  double error_estimate = 0.0;
  u64 points = 0;
};

// Integrate f over the axis-aligned box [lo_i, hi_i). Deterministic for a
// given point count: points are processed in fixed chunks, each chunk is
// compensated-summed, and chunk partials are combined in index order, so the
// result is independent of thread scheduling.
QmcResult qmc_integrate(const std::function<double(const double*)>& f,
                        const std::vector<double>& lo, const std::vector<double>& hi,
                        u64 npoints, bool parallel = true);

// Serial reference: same chunking, same combination order, no OpenMP.
QmcResult qmc_integrate_serial(const std::function<double(const double*)>& f,
                               const std::vector<double>& lo, const std::vector<double>& hi,
                               u64 npoints);

}  // namespace mitsui
