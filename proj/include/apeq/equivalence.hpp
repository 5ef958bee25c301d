#pragma once

#include <optional>

#include "apeq/exactlin.hpp"
#include "apeq/sums.hpp"

namespace apeq {

struct NonExactInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct MixedSymbolTables : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct VerdictMismatch : std::logic_error {
  using std::logic_error::logic_error;
};

/// Phase differences q_j = phase(b_j) - phase(a_j) mod 1 on the shared
/// nonzero support, in turns.
struct PhaseVector {
  std::vector<Exponent> support;  // declaration order of f1, then f2 extras
  std::vector<Rat> q;             // entries in [0, 1)
};

/// Exact witness: rational turn assignment y on a Q-basis of the support's
/// span; psi(g_k) = 2*pi*y_k satisfies sum_k R(j,k) y_k == q_j (mod 1) for
/// every support index j.
struct Witness {
  QBasis basis;
  std::vector<Rat> y;  // turns, in [0, 1)
};

/// Finite refutation: an integer relation sum_j c_j lambda_j = 0 whose pairing
/// with the phase differences is not an integer number of turns.
struct Certificate {
  IntVector relation;
  Rat defect;  // sum_j c_j q_j mod 1, in (0, 1)
};

struct EquivalenceVerdict {
  bool equivalent = false;
  std::optional<Witness> witness;
  std::optional<Certificate> certificate;
  std::optional<size_t> modulus_mismatch;  // index into support
  PhaseVector phases;                      // support + q (empty on mismatch)
};

/// Decides *-equivalence of two exact-mode sums over a shared symbol table
/// (union-of-supports convention, zero fill; a zero-vs-nonzero coefficient is
/// a modulus mismatch). Exactly one of witness / certificate /
/// modulus_mismatch is populated.
EquivalenceVerdict star_equivalent(const ExponentialSum& f1,
                                   const ExponentialSum& f2);

/// star_equivalent on the n-term truncations (declaration order) for
/// n = 1..n_max, n capped at each sum's term count.
std::vector<std::pair<size_t, EquivalenceVerdict>> equivalence_trace(
    const ExponentialSum& f1, const ExponentialSum& f2, size_t n_max);

/// Bohr equivalence on a finite support: same decision as star_equivalent on
/// the full support (a single psi suffices and restricts to every n);
/// a distinct entry point so reports can state which definition was applied.
EquivalenceVerdict bohr_equivalent_finite(const ExponentialSum& f1,
                                          const ExponentialSum& f2);

/// Re-checks a verdict against its inputs in exact arithmetic. Returns true;
/// throws VerdictMismatch when the verdict does not verify.
bool verify_verdict(const EquivalenceVerdict& verdict, const ExponentialSum& f1,
                    const ExponentialSum& f2);

}  // namespace apeq
