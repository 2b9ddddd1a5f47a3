#pragma once

#include <complex>

#include "mitsui/util.hpp"

namespace mitsui {

// Small convex torus set: an axis box inside one component of a torus with
// `component_count` components; coordinates live in R^d/Z^d.
struct TorusBox {
  int dim = 1;
  std::vector<double> lo, hi;  // box edges, hi - lo < 2/5 per axis
  int component_count = 1;
  int component = 0;  // which component carries the box
};

// 1_P = sum over Xi of c_xi . xi + G + H with
//   - xi running over (component character) x (frequency max-norm <= Y),
//   - |c_xi| <= 1,
//   - G supported in P'\P for P' = P enlarged by 2*delta, |G| <= 1,
//   - H uniformly small (tail of the Fejer smoothing), reported empirically.
// The smoothing convolves the indicator of the delta-enlarged box with a
// product Fejer kernel of bandwidth Y, delta = 1/(4M).
struct TorusIndicatorApprox {
  int dim = 1;
  int component_count = 1;
  int component = 0;
  int Y = 0;
  double M = 0;
  double delta = 0;  // margin 1/(4M)
  TorusBox set;
  // separable coefficients: axis_coeffs[a][k + Y] for frequency k on axis a
  std::vector<std::vector<std::complex<double>>> axis_coeffs;
  double c0 = 0;              // coefficient of the trivial character (volume + O(1/M))
  double max_coeff_abs = 0;   // max |c_xi|
  u64 coefficient_count = 0;  // #Xi
  double residual_off_margin = 0;  // measured sup |1_P - sum c xi - G| off the margin
  double margin_volume = 0;        // vol(P'\P)

  // full coefficient for frequency vector xi (size dim) and component char j
  std::complex<double> coefficient(const std::vector<int>& xi, int comp_char) const;
  // value of the trigonometric part at a point (same component assumed)
  double smooth_value(const std::vector<double>& x) const;
  bool in_box(const std::vector<double>& x) const;
  bool in_margin(const std::vector<double>& x) const;  // P' \ P band
};

TorusIndicatorApprox fourier_approximate_indicator(const TorusBox& P, int Y, double M);

}  // namespace mitsui
