#pragma once

#include <complex>
#include <optional>

#include "apeq/sums.hpp"

namespace apeq {

struct Rectangle {
  double sigma_lo, sigma_hi, t_lo, t_hi;
  bool valid() const { return sigma_lo < sigma_hi && t_lo < t_hi; }
};

/// Boundary sample came within the guard distance of the target value; the
/// winding count would be unreliable. Carries a suggested rectangle offset.
struct BoundaryTooClose : std::runtime_error {
  double suggested_offset;
  BoundaryTooClose(const std::string& what, double offset)
      : std::runtime_error(what), suggested_offset(offset) {}
};

/// Default numeric tolerances, stated in every report.
struct ValueSetTolerances {
  double attain_tol = 1e-6;
  double boundary_guard = 1e-9;
  double newton_stop = 1e-12;
  double dedup_radius = 1e-8;
};

struct AttainmentReport {
  std::complex<double> target;
  Rectangle rect;
  int count = 0;  // roots of f - w inside, with multiplicity
  double boundary_margin = 0.0;
  std::vector<std::complex<double>> roots;  // located, refined, deduplicated
  ValueSetTolerances tolerances;
};

/// Argument-principle count of solutions of f(s) = w inside the rectangle:
/// adaptive boundary sampling with argument increments capped below pi/2,
/// Newton refinement from an interior seed grid for root location.
AttainmentReport attainment_count(const ExponentialSum& f,
                                  std::complex<double> w, const Rectangle& rect,
                                  const ValueSetTolerances& tol = {});

struct AttainResult {
  std::optional<std::complex<double>> point;
  double residual = 0.0;    // |f(point) - w| when found, best seen otherwise
  double explored_T = 0.0;  // half-height of the searched window
};

/// Expanding-window search for f(s) = w with Re s in [sigma_lo, sigma_hi]:
/// windows t in [-T, T], T = 16, 32, ..., t_cap, tiled into height-8 slabs.
/// Absence is a result ("unresolved at t_cap"), never an error.
AttainResult attains(const ExponentialSum& f, std::complex<double> w,
                     double sigma_lo, double sigma_hi, double t_cap, double tol);

struct ValueSetComparison {
  struct Sample {
    std::complex<double> s;        // where the value was drawn
    std::complex<double> w;        // the drawn value
    bool found = false;
    std::complex<double> found_s;  // preimage in the other sum's substrip
    double residual = 0.0;
    double explored_T = 0.0;
  };
  double sigma_lo = 0.0, sigma_hi = 0.0;
  int n_samples = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  double t_cap = 0.0;
  std::vector<Sample> values_of_f1_in_f2;  // w drawn from f1, searched in f2
  std::vector<Sample> values_of_f2_in_f1;
  double fraction_f1_in_f2 = 0.0;
  double fraction_f2_in_f1 = 0.0;
  double worst_residual_f1_in_f2 = 0.0;  // over unresolved samples, best seen
  double worst_residual_f2_in_f1 = 0.0;
};

/// Draws seed-deterministic samples s in the substrip (t in [-100, 100]) and
/// tests cross-attainment of each sum's values by the other.
ValueSetComparison value_set_compare(const ExponentialSum& f1,
                                     const ExponentialSum& f2, double sigma_lo,
                                     double sigma_hi, int n_samples,
                                     std::uint64_t seed, double tol,
                                     double t_cap);

struct ExperimentReport {
  std::vector<ValueSetComparison> substrips;
  bool consistent_with_equivalence = false;  // all fractions equal 1
  /// Exact verdict cross-reference, set when both sums are exact-mode.
  std::optional<bool> exact_equivalent;
};

/// Partitions the strip into n overlapping substrips, compares value sets on
/// each, and cross-references the exact decision when available.
ExperimentReport equivalence_principle_experiment(
    const ExponentialSum& f1, const ExponentialSum& f2, double sigma_lo,
    double sigma_hi, int n_substrips, int samples_per_substrip,
    std::uint64_t seed, double tol, double t_cap);

}  // namespace apeq
