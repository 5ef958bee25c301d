#pragma once

#include <optional>

#include "apeq/scalar.hpp"

namespace apeq {

/// Row-style Hermite normal form: H = T * A with T unimodular, pivots
/// positive, entries above each pivot reduced into [0, pivot), zero rows last.
/// Pivoting is first-nonzero-in-column, so the output is deterministic.
struct HnfResult {
  IntMatrix H;
  IntMatrix T;
};
HnfResult hnf(const IntMatrix& A);

/// Smith normal form: S = L * A * R with L, R unimodular, S diagonal with
/// nonnegative invariant factors d_1 | d_2 | ...
struct SnfResult {
  IntMatrix S;
  IntMatrix L;
  IntMatrix R;
};
SnfResult snf(const IntMatrix& A);

/// Basis of the saturated lattice {c in Z^N : c^T R = 0} as rows of the
/// returned matrix (0 x N when the left kernel is trivial). The rows come from
/// the unimodular transform of an HNF run, HNF-reduced, so saturation is
/// structural; it is re-verified via SNF and a failure throws std::logic_error.
IntMatrix kernel_lattice(const RatMatrix& R);

/// Solves U * z = v over the integers via SNF; empty optional when no integer
/// solution exists. Throws std::invalid_argument on dimension mismatch.
std::optional<IntVector> solve_integer(const IntMatrix& U, const IntVector& v);

/// |det T| == 1, tested exactly by Bareiss elimination.
bool is_unimodular(const IntMatrix& T);

Eigen::Index rank_of(const IntMatrix& A);

}  // namespace apeq
