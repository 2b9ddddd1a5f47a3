#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "mitsui/util.hpp"

namespace mitsui {

using Z = mpz_class;
using Q = mpq_class;

// Dense integer matrix, row-major. Rows are module generators throughout.
struct ZMat {
  int rows = 0, cols = 0;
  std::vector<Z> a;

  ZMat() = default;
  ZMat(int r, int c) : rows(r), cols(c), a(size_t(r) * c) {}
  Z& at(int i, int j) { return a[size_t(i) * cols + j]; }
  const Z& at(int i, int j) const { return a[size_t(i) * cols + j]; }
  static ZMat identity(int n) {
    ZMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  bool operator==(const ZMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

struct QMat {
  int rows = 0, cols = 0;
  std::vector<Q> a;
  QMat() = default;
  QMat(int r, int c) : rows(r), cols(c), a(size_t(r) * c) {}
  Q& at(int i, int j) { return a[size_t(i) * cols + j]; }
  const Q& at(int i, int j) const { return a[size_t(i) * cols + j]; }
  static QMat identity(int n) {
    QMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
};

ZMat zmat_mul(const ZMat& A, const ZMat& B);

// Row-style Hermite normal form: integer row operations only. Returns the
// nonzero rows; for a full-column-rank input this is the canonical
// upper-triangular basis with positive diagonal and entries above each pivot
// reduced into [0, pivot).
ZMat hnf(const ZMat& m);

// HNF restricted to square full-rank input; throws domain_error otherwise.
ZMat hnf_square(const ZMat& m);

// Column-style HNF with transform: returns (H, U) with H = A*U, U unimodular.
// H is lower-triangular by columns (mirror of hnf on the transpose).
void hnf_columns_with_transform(const ZMat& A, ZMat& H, ZMat& U);

Z det(const ZMat& m);  // Bareiss, exact

// Solve A x = b over Q; A square nonsingular.
std::vector<Q> solve_q(const QMat& A, const std::vector<Q>& b);
QMat qmat_inverse(const QMat& A);

// Smith normal form of the relation matrix R (m rows of relations on k
// generators): returns diagonal d and the unimodular V (k x k) of column
// operations, so that new generators g'_j = prod_i g_i^{V[i][j]} have
// independent orders d_j (d_j = 0 means infinite; not produced for finite
// groups).
void snf_with_v(const ZMat& R, std::vector<Z>& d, ZMat& V);

// gmpxx has no long long constructors; long is 64-bit on this platform.
inline Z z_of(i64 v) { return Z(static_cast<long>(v)); }
inline Z z_of_u(u64 v) { return Z(static_cast<unsigned long>(v)); }
inline Q q_of(i64 v) { return Q(static_cast<long>(v)); }

inline std::vector<Q> to_q(const std::vector<i64>& v) {
  std::vector<Q> r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = q_of(v[i]);
  return r;
}

inline i64 z_to_i64(const Z& z) {
  if (!z.fits_slong_p()) throw overflow_error("mpz value exceeds 64 bits");
  return z.get_si();
}

}  // namespace mitsui
