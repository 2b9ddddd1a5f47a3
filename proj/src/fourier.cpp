#include "mitsui/fourier.hpp"

#include <cmath>

namespace mitsui {

static std::complex<double> interval_hat(double a, double b, int k) {
  // integral over [a,b] of e(-k x) dx
  if (k == 0) return {b - a, 0.0};
  std::complex<double> ia = std::polar(1.0, -2 * M_PI * k * a);
  std::complex<double> ib = std::polar(1.0, -2 * M_PI * k * b);
  return (ia - ib) / std::complex<double>(0.0, 2 * M_PI * k);
}

std::complex<double> TorusIndicatorApprox::coefficient(const std::vector<int>& xi,
                                                       int comp_char) const {
  std::complex<double> c = std::polar(1.0 / double(component_count),
                                      -2 * M_PI * comp_char * component / double(component_count));
  for (int a = 0; a < dim; ++a) {
    int k = xi[a];
    if (k < -Y || k > Y) return {0.0, 0.0};
    c *= axis_coeffs[a][k + Y];
  }
  return c;
}

double TorusIndicatorApprox::smooth_value(const std::vector<double>& x) const {
  double prod = 1.0;
  for (int a = 0; a < dim; ++a) {
    std::complex<double> s = 0;
    for (int k = -Y; k <= Y; ++k)
      s += axis_coeffs[a][k + Y] * std::polar(1.0, 2 * M_PI * k * x[a]);
    prod *= s.real();
  }
  return prod;
}

static double wrap01(double t) {
  t -= std::floor(t);
  return t;
}

bool TorusIndicatorApprox::in_box(const std::vector<double>& x) const {
  for (int a = 0; a < dim; ++a) {
    double w = set.hi[a] - set.lo[a];
    if (w >= 1.0) continue;
    double t = wrap01(x[a] - set.lo[a]);
    if (t >= w) return false;
  }
  return true;
}

bool TorusIndicatorApprox::in_margin(const std::vector<double>& x) const {
  bool inP = in_box(x);
  bool inPp = true;
  for (int a = 0; a < dim; ++a) {
    double w = set.hi[a] - set.lo[a];
    if (w >= 1.0) continue;
    double wp = std::min(1.0, w + 4 * delta);
    double t = wrap01(x[a] - (set.lo[a] - 2 * delta));
    if (t >= wp) inPp = false;
  }
  return inPp && !inP;
}

TorusIndicatorApprox fourier_approximate_indicator(const TorusBox& P, int Y, double M) {
  if (Y < 1 || M <= 1) throw domain_error("fourier_approximate_indicator: need Y >= 1, M > 1");
  TorusIndicatorApprox out;
  out.dim = P.dim;
  out.component_count = P.component_count;
  out.component = P.component;
  out.Y = Y;
  out.M = M;
  out.delta = 1.0 / (4.0 * M);
  out.set = P;

  for (int a = 0; a < P.dim; ++a) {
    double w = P.hi[a] - P.lo[a];
    if (w < 0) throw domain_error("fourier_approximate_indicator: negative box width");
    bool full = w >= 1.0 - 1e-12;
    if (!full && w > 0.4)
      throw domain_error("fourier_approximate_indicator: set too large (size must be < 1/5)");
    std::vector<std::complex<double>> coeffs(2 * Y + 1);
    for (int k = -Y; k <= Y; ++k) {
      double fejer = 1.0 - double(std::abs(k)) / double(Y + 1);
      std::complex<double> ih;
      if (full)
        ih = (k == 0) ? std::complex<double>(1.0, 0.0) : std::complex<double>(0.0, 0.0);
      else
        ih = interval_hat(P.lo[a] - out.delta, P.hi[a] + out.delta, k);
      coeffs[k + Y] = ih * fejer;
    }
    out.axis_coeffs.push_back(std::move(coeffs));
  }

  // c0, coefficient count, max |c|
  {
    out.c0 = 1.0;
    for (int a = 0; a < P.dim; ++a) out.c0 *= out.axis_coeffs[a][Y].real();
    out.c0 /= double(P.component_count);
    out.coefficient_count = u64(P.component_count);
    for (int a = 0; a < P.dim; ++a) out.coefficient_count *= u64(2 * Y + 1);
    double mx = 1.0 / double(P.component_count);
    for (int a = 0; a < P.dim; ++a) {
      double best = 0;
      for (int k = -Y; k <= Y; ++k) best = std::max(best, std::abs(out.axis_coeffs[a][k + Y]));
      mx *= best;
    }
    out.max_coeff_abs = mx;
  }

  // margin volume vol(P'\P)
  {
    double vp = 1, v = 1;
    for (int a = 0; a < P.dim; ++a) {
      double w = P.hi[a] - P.lo[a];
      if (w >= 1.0) continue;
      vp *= std::min(1.0, w + 4 * out.delta);
      v *= w;
    }
    out.margin_volume = (vp - v) / double(P.component_count);
  }

  // measured off-margin residual on a 10Y-per-axis grid (separable evaluation)
  {
    int Gpts = 10 * Y;
    std::vector<std::vector<double>> axis_vals(P.dim, std::vector<double>(Gpts));
    std::vector<std::vector<uint8_t>> axis_inP(P.dim, std::vector<uint8_t>(Gpts));
    std::vector<std::vector<uint8_t>> axis_inPp(P.dim, std::vector<uint8_t>(Gpts));
    for (int a = 0; a < P.dim; ++a) {
      double w = P.hi[a] - P.lo[a];
      bool full = w >= 1.0 - 1e-12;
      double wp = std::min(1.0, w + 4 * out.delta);
      for (int g = 0; g < Gpts; ++g) {
        double x = (g + 0.5) / double(Gpts);
        std::complex<double> s = 0;
        for (int k = -Y; k <= Y; ++k)
          s += out.axis_coeffs[a][k + Y] * std::polar(1.0, 2 * M_PI * k * x);
        axis_vals[a][g] = s.real();
        axis_inP[a][g] = full || wrap01(x - P.lo[a]) < w;
        axis_inPp[a][g] = full || wrap01(x - (P.lo[a] - 2 * out.delta)) < wp;
      }
    }
    double worst = 0;
    if (P.dim == 1) {
      for (int g = 0; g < Gpts; ++g) {
        bool inP = axis_inP[0][g], inPp = axis_inPp[0][g];
        if (inPp && !inP) continue;  // margin: G absorbs the error
        double err = std::abs((inP ? 1.0 : 0.0) - axis_vals[0][g]);
        worst = std::max(worst, err);
      }
    } else if (P.dim == 2) {
      for (int g0 = 0; g0 < Gpts; ++g0)
        for (int g1 = 0; g1 < Gpts; ++g1) {
          bool inP = axis_inP[0][g0] && axis_inP[1][g1];
          bool inPp = axis_inPp[0][g0] && axis_inPp[1][g1];
          if (inPp && !inP) continue;
          double val = axis_vals[0][g0] * axis_vals[1][g1];
          double err = std::abs((inP ? 1.0 : 0.0) - val);
          worst = std::max(worst, err);
        }
    } else {
      throw domain_error("fourier residual grid: dimensions 1 and 2 only");
    }
    out.residual_off_margin = worst;
  }
  return out;
}

}  // namespace mitsui
