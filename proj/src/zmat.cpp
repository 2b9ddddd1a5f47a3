#include "mitsui/zmat.hpp"

namespace mitsui {

ZMat zmat_mul(const ZMat& A, const ZMat& B) {
  if (A.cols != B.rows) throw domain_error("zmat_mul: shape mismatch");
  ZMat C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      const Z& aik = A.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < B.cols; ++j) C.at(i, j) += aik * B.at(k, j);
    }
  return C;
}

ZMat hnf(const ZMat& m) {
  ZMat w = m;
  int pivot_row = 0;
  for (int j = 0; j < w.cols && pivot_row < w.rows; ++j) {
    // Euclidean elimination below the pivot.
    int nz = -1;
    for (int i = pivot_row; i < w.rows; ++i)
      if (w.at(i, j) != 0) { nz = i; break; }
    if (nz < 0) continue;
    if (nz != pivot_row)
      for (int c = 0; c < w.cols; ++c) std::swap(w.at(pivot_row, c), w.at(nz, c));
    for (int i = pivot_row + 1; i < w.rows; ++i) {
      while (w.at(i, j) != 0) {
        Z q = w.at(pivot_row, j) / w.at(i, j);  // truncated division is fine here
        for (int c = 0; c < w.cols; ++c) w.at(pivot_row, c) -= q * w.at(i, c);
        for (int c = 0; c < w.cols; ++c) std::swap(w.at(pivot_row, c), w.at(i, c));
      }
    }
    if (w.at(pivot_row, j) < 0)
      for (int c = 0; c < w.cols; ++c) w.at(pivot_row, c) = -w.at(pivot_row, c);
    if (w.at(pivot_row, j) == 0) continue;
    // Reduce entries above the pivot into [0, pivot).
    for (int i = 0; i < pivot_row; ++i) {
      Z q;
      mpz_fdiv_q(q.get_mpz_t(), w.at(i, j).get_mpz_t(), w.at(pivot_row, j).get_mpz_t());
      if (q != 0)
        for (int c = 0; c < w.cols; ++c) w.at(i, c) -= q * w.at(pivot_row, c);
    }
    ++pivot_row;
  }
  ZMat out(pivot_row, w.cols);
  for (int i = 0; i < pivot_row; ++i)
    for (int c = 0; c < w.cols; ++c) out.at(i, c) = w.at(i, c);
  return out;
}

ZMat hnf_square(const ZMat& m) {
  ZMat h = hnf(m);
  if (h.rows != m.cols) throw domain_error("hnf_square: rank-deficient input");
  return h;
}

void hnf_columns_with_transform(const ZMat& A, ZMat& H, ZMat& U) {
  // Column operations = row operations on the transpose.
  ZMat T(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
  // Augment with identity to track the transform.
  ZMat W(T.rows, T.cols + T.rows);
  for (int i = 0; i < T.rows; ++i) {
    for (int j = 0; j < T.cols; ++j) W.at(i, j) = T.at(i, j);
    W.at(i, T.cols + i) = 1;
  }
  int pivot_row = 0;
  for (int j = 0; j < T.cols && pivot_row < T.rows; ++j) {
    int nz = -1;
    for (int i = pivot_row; i < T.rows; ++i)
      if (W.at(i, j) != 0) { nz = i; break; }
    if (nz < 0) continue;
    if (nz != pivot_row)
      for (int c = 0; c < W.cols; ++c) std::swap(W.at(pivot_row, c), W.at(nz, c));
    for (int i = pivot_row + 1; i < T.rows; ++i) {
      while (W.at(i, j) != 0) {
        Z q = W.at(pivot_row, j) / W.at(i, j);
        for (int c = 0; c < W.cols; ++c) W.at(pivot_row, c) -= q * W.at(i, c);
        for (int c = 0; c < W.cols; ++c) std::swap(W.at(pivot_row, c), W.at(i, c));
      }
    }
    if (W.at(pivot_row, j) < 0)
      for (int c = 0; c < W.cols; ++c) W.at(pivot_row, c) = -W.at(pivot_row, c);
    if (W.at(pivot_row, j) != 0) ++pivot_row;
  }
  H = ZMat(A.rows, A.cols);
  U = ZMat(A.cols, A.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) H.at(i, j) = W.at(j, i);
  for (int i = 0; i < A.cols; ++i)
    for (int j = 0; j < A.cols; ++j) U.at(i, j) = W.at(j, A.cols + i);
}

Z det(const ZMat& m) {
  if (m.rows != m.cols) throw domain_error("det: square matrix required");
  int n = m.rows;
  if (n == 0) return 1;
  ZMat w = m;
  Z prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (w.at(k, k) == 0) {
      int s = -1;
      for (int i = k + 1; i < n; ++i)
        if (w.at(i, k) != 0) { s = i; break; }
      if (s < 0) return 0;
      for (int c = 0; c < n; ++c) std::swap(w.at(k, c), w.at(s, c));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Z num = w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j);
        mpz_divexact(w.at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
    prev = w.at(k, k);
  }
  return sign > 0 ? w.at(n - 1, n - 1) : Z(-w.at(n - 1, n - 1));
}

std::vector<Q> solve_q(const QMat& A, const std::vector<Q>& b) {
  if (A.rows != A.cols || int(b.size()) != A.rows)
    throw domain_error("solve_q: shape mismatch");
  int n = A.rows;
  QMat w = A;
  std::vector<Q> rhs = b;
  for (int k = 0; k < n; ++k) {
    int p = -1;
    for (int i = k; i < n; ++i)
      if (w.at(i, k) != 0) { p = i; break; }
    if (p < 0) throw domain_error("solve_q: singular matrix");
    if (p != k) {
      for (int c = 0; c < n; ++c) std::swap(w.at(k, c), w.at(p, c));
      std::swap(rhs[k], rhs[p]);
    }
    for (int i = 0; i < n; ++i) {
      if (i == k || w.at(i, k) == 0) continue;
      Q f = w.at(i, k) / w.at(k, k);
      for (int c = k; c < n; ++c) w.at(i, c) -= f * w.at(k, c);
      rhs[i] -= f * rhs[k];
    }
  }
  std::vector<Q> x(n);
  for (int i = 0; i < n; ++i) {
    x[i] = rhs[i] / w.at(i, i);
    x[i].canonicalize();
  }
  return x;
}

QMat qmat_inverse(const QMat& A) {
  int n = A.rows;
  QMat inv(n, n);
  for (int j = 0; j < n; ++j) {
    std::vector<Q> e(n);
    e[j] = 1;
    auto col = solve_q(A, e);
    for (int i = 0; i < n; ++i) inv.at(i, j) = col[i];
  }
  return inv;
}

void snf_with_v(const ZMat& R, std::vector<Z>& d, ZMat& V) {
  int m = R.rows, k = R.cols;
  ZMat w = R;
  V = ZMat::identity(k);
  auto swap_rows = [&](int i, int j) {
    for (int c = 0; c < k; ++c) std::swap(w.at(i, c), w.at(j, c));
  };
  auto swap_cols = [&](int i, int j) {
    for (int r = 0; r < m; ++r) std::swap(w.at(r, i), w.at(r, j));
    for (int r = 0; r < k; ++r) std::swap(V.at(r, i), V.at(r, j));
  };
  auto row_op = [&](int dst, int src, const Z& q) {  // row dst -= q*row src
    for (int c = 0; c < k; ++c) w.at(dst, c) -= q * w.at(src, c);
  };
  auto col_op = [&](int dst, int src, const Z& q) {  // col dst -= q*col src
    for (int r = 0; r < m; ++r) w.at(r, dst) -= q * w.at(r, src);
    for (int r = 0; r < k; ++r) V.at(r, dst) -= q * V.at(r, src);
  };

  int t = 0;
  int bound = std::min(m, k);
  for (; t < bound; ++t) {
    // Find a nonzero pivot in the remaining block.
    int pi = -1, pj = -1;
    for (int i = t; i < m && pi < 0; ++i)
      for (int j = t; j < k; ++j)
        if (w.at(i, j) != 0) { pi = i; pj = j; break; }
    if (pi < 0) break;
    if (pi != t) swap_rows(pi, t);
    if (pj != t) swap_cols(pj, t);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (int i = t + 1; i < m; ++i)
        while (w.at(i, t) != 0) {
          Z q = w.at(t, t) / w.at(i, t);
          row_op(t, i, q);
          swap_rows(t, i);
          clean = false;
        }
      for (int j = t + 1; j < k; ++j)
        while (w.at(t, j) != 0) {
          Z q = w.at(t, t) / w.at(t, j);
          col_op(t, j, q);
          swap_cols(t, j);
          clean = false;
        }
    }
    if (w.at(t, t) < 0) {
      for (int r = 0; r < m; ++r) w.at(r, t) = -w.at(r, t);
      for (int r = 0; r < k; ++r) V.at(r, t) = -V.at(r, t);
    }
  }
  // Enforce divisibility d_1 | d_2 | ...
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i + 1 < t; ++i) {
      if (w.at(i + 1, i + 1) % w.at(i, i) != 0) {
        // Standard fixup: add column i+1 to column i, re-clear the 2x2 block.
        col_op(i, i + 1, Z(-1));
        for (int j = i; j < std::min(t + 1, bound); ++j) {
          // local re-elimination
          bool c2 = false;
          do {
            c2 = false;
            for (int r = j + 1; r < m; ++r)
              while (w.at(r, j) != 0) {
                Z q = w.at(j, j) / w.at(r, j);
                row_op(j, r, q);
                swap_rows(j, r);
                c2 = true;
              }
            for (int c = j + 1; c < k; ++c)
              while (w.at(j, c) != 0) {
                Z q = w.at(j, j) / w.at(j, c);
                col_op(j, c, q);
                swap_cols(j, c);
                c2 = true;
              }
          } while (c2);
          if (w.at(j, j) < 0) {
            for (int r = 0; r < m; ++r) w.at(r, j) = -w.at(r, j);
            for (int r = 0; r < k; ++r) V.at(r, j) = -V.at(r, j);
          }
        }
        changed = true;
      }
    }
  }
  d.assign(k, Z(0));
  for (int i = 0; i < t; ++i) d[i] = w.at(i, i);
}

}  // namespace mitsui
