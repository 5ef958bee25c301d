#include "apeq/exactlin.hpp"

#include <stdexcept>

namespace apeq {

namespace {

void swap_rows(IntMatrix& M, Eigen::Index a, Eigen::Index b) {
  if (a != b) M.row(a).swap(M.row(b));
}

// Replaces rows (r, i) by a unimodular combination that puts
// gcd(M(r,c), M(i,c)) at (r,c) and 0 at (i,c). Mirrors the same
// combination onto W.
void gcd_rows(IntMatrix& M, IntMatrix& W, Eigen::Index r, Eigen::Index i,
              Eigen::Index c) {
  Int a = M(r, c), b = M(i, c), g, x, y;
  if (a != 0 && b % a == 0) {  // plain subtraction keeps row r fixed
    Int q = b / a;
    M.row(i) -= q * M.row(r);
    W.row(i) -= q * W.row(r);
    return;
  }
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(),
             b.get_mpz_t());
  Int adg = a / g, bdg = b / g;
  for (Eigen::Index k = 0; k < M.cols(); ++k) {
    Int mr = M(r, k), mi = M(i, k);
    M(r, k) = x * mr + y * mi;
    M(i, k) = adg * mi - bdg * mr;
  }
  for (Eigen::Index k = 0; k < W.cols(); ++k) {
    Int wr = W(r, k), wi = W(i, k);
    W(r, k) = x * wr + y * wi;
    W(i, k) = adg * wi - bdg * wr;
  }
}

}  // namespace

HnfResult hnf(const IntMatrix& A) {
  const Eigen::Index m = A.rows(), n = A.cols();
  if (m == 0 || n == 0) throw std::invalid_argument("hnf: empty matrix");
  IntMatrix H = A;
  IntMatrix T = IntMatrix::Identity(m, m);
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < n && r < m; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = r; i < m; ++i)
      if (H(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    swap_rows(H, r, piv);
    swap_rows(T, r, piv);
    for (Eigen::Index i = r + 1; i < m; ++i)
      if (H(i, c) != 0) gcd_rows(H, T, r, i, c);
    if (H(r, c) < 0) {
      H.row(r) = -H.row(r);
      T.row(r) = -T.row(r);
    }
    for (Eigen::Index i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), H(i, c).get_mpz_t(), H(r, c).get_mpz_t());
      if (q != 0) {
        H.row(i) -= q * H.row(r);
        T.row(i) -= q * T.row(r);
      }
    }
    ++r;
  }
  return {std::move(H), std::move(T)};
}

SnfResult snf(const IntMatrix& A) {
  const Eigen::Index m = A.rows(), n = A.cols();
  if (m == 0 || n == 0) throw std::invalid_argument("snf: empty matrix");
  IntMatrix S = A;
  IntMatrix L = IntMatrix::Identity(m, m);
  IntMatrix R = IntMatrix::Identity(n, n);

  auto swap_cols = [&](IntMatrix& M, Eigen::Index a, Eigen::Index b) {
    if (a != b) M.col(a).swap(M.col(b));
  };
  auto gcd_cols = [&](Eigen::Index c, Eigen::Index j, Eigen::Index r) {
    Int a = S(r, c), b = S(r, j), g, x, y;
    if (a != 0 && b % a == 0) {  // plain subtraction keeps column c fixed
      Int q = b / a;
      S.col(j) -= q * S.col(c);
      R.col(j) -= q * R.col(c);
      return;
    }
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(),
               b.get_mpz_t());
    Int adg = a / g, bdg = b / g;
    for (Eigen::Index k = 0; k < m; ++k) {
      Int sc = S(k, c), sj = S(k, j);
      S(k, c) = x * sc + y * sj;
      S(k, j) = adg * sj - bdg * sc;
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      Int rc = R(k, c), rj = R(k, j);
      R(k, c) = x * rc + y * rj;
      R(k, j) = adg * rj - bdg * rc;
    }
  };

  const Eigen::Index dim = std::min(m, n);
  for (Eigen::Index k = 0; k < dim; ++k) {
    // smallest-|entry| pivot in the trailing block keeps growth in check
    Eigen::Index pi = -1, pj = -1;
    for (Eigen::Index i = k; i < m; ++i)
      for (Eigen::Index j = k; j < n; ++j)
        if (S(i, j) != 0 &&
            (pi < 0 || cmp(abs(S(i, j)), abs(S(pi, pj))) < 0)) {
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    swap_rows(S, k, pi);
    swap_rows(L, k, pi);
    swap_cols(S, k, pj);
    swap_cols(R, k, pj);

    for (;;) {
      for (Eigen::Index i = k + 1; i < m; ++i)
        if (S(i, k) != 0) gcd_rows(S, L, k, i, k);
      bool col_clear = true;
      for (Eigen::Index j = k + 1; j < n; ++j)
        if (S(k, j) != 0) {
          gcd_cols(k, j, k);
          col_clear = false;
        }
      if (!col_clear) continue;  // column ops may have refilled rows below
      bool rows_clear = true;
      for (Eigen::Index i = k + 1; i < m; ++i)
        if (S(i, k) != 0) rows_clear = false;
      if (rows_clear) break;
    }
    if (S(k, k) < 0) {
      S.row(k) = -S.row(k);
      L.row(k) = -L.row(k);
    }
    // enforce d_k | every entry of the trailing block
    for (Eigen::Index i = k + 1; i < m; ++i) {
      bool redo = false;
      for (Eigen::Index j = k + 1; j < n && !redo; ++j)
        if (S(i, j) % S(k, k) != 0) redo = true;
      if (redo) {
        S.row(k) += S.row(i);
        L.row(k) += L.row(i);
        --k;  // re-run this diagonal position
        break;
      }
    }
  }
  return {std::move(S), std::move(L), std::move(R)};
}

IntMatrix kernel_lattice(const RatMatrix& Rm) {
  const Eigen::Index N = Rm.rows(), k = Rm.cols();
  if (N == 0) return IntMatrix(0, 0);
  // Column scaling by the denominator lcm preserves the left kernel.
  IntMatrix A(N, std::max<Eigen::Index>(k, 1));
  if (k == 0) {
    A.setZero();
  } else {
    for (Eigen::Index j = 0; j < k; ++j) {
      Int d = 1;
      for (Eigen::Index i = 0; i < N; ++i)
        mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), Rm(i, j).get_den_mpz_t());
      for (Eigen::Index i = 0; i < N; ++i) {
        Rat s = Rm(i, j) * Rat(d);
        A(i, j) = s.get_num();
      }
    }
  }
  auto [H, T] = hnf(A);
  auto row_is_zero = [](const IntMatrix& M, Eigen::Index i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (M(i, j) != 0) return false;
    return true;
  };
  Eigen::Index nz = 0;
  for (Eigen::Index i = 0; i < N; ++i)
    if (!row_is_zero(H, i)) ++nz;
  const Eigen::Index m = N - nz;
  if (m == 0) return IntMatrix(0, N);
  IntMatrix U = T.bottomRows(m);
  U = hnf(U).H;  // canonical basis of the kernel lattice
  // Saturation self-check (all invariant factors 1). The construction from
  // unimodular transform rows guarantees saturation; the SNF recomputation is
  // affordable only at small sizes, so it is gated.
  if (m <= 12 && N <= 16) {
    IntMatrix S = snf(U).S;
    for (Eigen::Index i = 0; i < m; ++i)
      if (S(i, i) != 1) throw std::logic_error("kernel_lattice: not saturated");
  }
  return U;
}

std::optional<IntVector> solve_integer(const IntMatrix& U, const IntVector& v) {
  const Eigen::Index m = U.rows(), n = U.cols();
  if (v.size() != m) throw std::invalid_argument("solve_integer: size mismatch");
  auto [S, L, R] = snf(U);
  IntVector w = L * v;
  IntVector y = IntVector::Zero(n);
  const Eigen::Index dim = std::min(m, n);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (S(i, i) == 0) {
      if (w(i) != 0) return std::nullopt;
    } else {
      if (w(i) % S(i, i) != 0) return std::nullopt;
      y(i) = w(i) / S(i, i);
    }
  }
  for (Eigen::Index i = dim; i < m; ++i)
    if (w(i) != 0) return std::nullopt;
  return IntVector(R * y);
}

bool is_unimodular(const IntMatrix& T) {
  if (T.rows() != T.cols() || T.rows() == 0) return false;
  // Bareiss fraction-free elimination; determinant is the last pivot.
  IntMatrix M = T;
  const Eigen::Index n = M.rows();
  Int prev = 1;
  int sign = 1;
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (M(k, k) == 0) {
      Eigen::Index p = -1;
      for (Eigen::Index i = k + 1; i < n; ++i)
        if (M(i, k) != 0) {
          p = i;
          break;
        }
      if (p < 0) return false;
      M.row(k).swap(M.row(p));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j)
        M(i, j) = (M(i, j) * M(k, k) - M(i, k) * M(k, j)) / prev;
    prev = M(k, k);
  }
  Int det = M(n - 1, n - 1) * sign;
  return det == 1 || det == -1;
}

Eigen::Index rank_of(const IntMatrix& A) {
  IntMatrix H = hnf(A).H;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    bool zero = true;
    for (Eigen::Index j = 0; j < H.cols(); ++j)
      if (H(i, j) != 0) zero = false;
    if (!zero) ++r;
  }
  return r;
}

}  // namespace apeq
