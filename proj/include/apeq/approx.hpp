#pragma once

#include <complex>
#include <functional>

#include "apeq/sums.hpp"

namespace apeq {

using Evaluator = std::function<std::complex<double>(std::complex<double>)>;

/// Composite-Fejer orders, one per element of the scaled integral basis.
struct BFOrders {
  std::vector<int> orders;  // all >= 1
};

/// Weighted partial sum P(s) = sum_j p_j a_j e^{lambda_j s} with the
/// composite-Fejer product weights p_j = prod_i max(0, 1 - |m_{j,i}|/N_i)
/// taken over the integer coordinates m of each exponent in the integral
/// basis of the sum's exponent set.
struct BFPolynomial {
  ExponentialSum base;
  IntegralBasis basis;
  std::vector<Rat> weights;  // aligned with base.terms(), in [0,1]
  ExponentialSum realized;   // zero-weight terms dropped
};

/// orders.orders must have one entry per integral-basis element, or exactly
/// one entry, which is broadcast.
BFPolynomial bochner_fejer(const ExponentialSum& sum, const BFOrders& orders);

struct MeanValueEstimate {
  double lambda = 0.0;
  double sigma = 0.0;
  double T = 0.0;
  double step = 0.0;
  std::complex<double> value;
};

/// Trapezoidal estimate of (1/2T) Int_{-T}^{T} f(sigma+it) e^{-i lambda t} dt.
/// Requires step <= T/100; step <= 0 selects the default T/1e5.
MeanValueEstimate mean_value(const Evaluator& f, double sigma, double lambda,
                             double T, double step = 0.0);

/// Dirichlet coefficients a(lambda) = mean_value / e^{lambda sigma} at each
/// candidate frequency. Candidates must be separated by some delta > 0 with
/// T >= 100/delta.
std::vector<std::pair<double, std::complex<double>>> recover_coefficients(
    const Evaluator& f, double sigma, const std::vector<double>& candidates,
    double T, double step = 0.0);

struct AlmostPeriodGrid {
  double tau_step = 0.0;   // <= 0 selects 2*pi/(100*lambda_max)
  double lambda_max = 1.0; // scale for the default step
  int sigma_samples = 11;
  int t_samples = 101;
  double t_lo = -20.0, t_hi = 20.0;
};

struct AlmostPeriodReport {
  double epsilon = 0.0;
  double sigma_lo = 0.0, sigma_hi = 0.0;
  struct Period {
    double tau;
    double defect;  // sup estimate of |f(s+i tau) - f(s)| on the grid
  };
  std::vector<Period> periods;
  /// Smallest observed l such that every length-l window in [0, T_max]
  /// contained a reported tau; 0 when no tau qualified.
  double inclusion_length = 0.0;
  bool empty_flagged = false;  // no tau qualified within the search range
  AlmostPeriodGrid grid;       // echoed for reproducibility
};

/// Scans tau over (0, T_max], measures the translation defect on a
/// (sigma, t) sample grid, refines local minima, and reports every tau with
/// defect <= epsilon.
AlmostPeriodReport almost_periods(const Evaluator& f, double epsilon,
                                  double sigma_lo, double sigma_hi,
                                  double T_max, AlmostPeriodGrid grid = {});

}  // namespace apeq
