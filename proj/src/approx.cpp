#include "apeq/approx.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace apeq {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

BFPolynomial bochner_fejer(const ExponentialSum& sum, const BFOrders& orders) {
  BFPolynomial out;
  out.base = sum;
  if (sum.empty()) {
    out.realized = sum;
    return out;
  }
  std::vector<Exponent> exps;
  for (const auto& t : sum.terms()) exps.push_back(t.exponent);
  out.basis = integral_basis(exps);

  const size_t k = out.basis.basis.size();
  std::vector<int> N = orders.orders;
  if (N.size() == 1 && k != 1) N.assign(k, N[0]);
  if (N.size() != k)
    throw std::invalid_argument("bochner_fejer: need one order per basis element");
  for (int n : N)
    if (n < 1) throw std::invalid_argument("bochner_fejer: orders must be >= 1");

  out.weights.resize(sum.size());
  for (size_t j = 0; j < sum.size(); ++j) {
    Rat p(1);
    for (size_t i = 0; i < k; ++i) {
      Int m = out.basis.rep(static_cast<Eigen::Index>(j),
                            static_cast<Eigen::Index>(i));
      Rat factor = Rat(1) - make_rat(abs(m), N[i]);
      if (factor <= 0) {
        p = 0;
        break;
      }
      p *= factor;
    }
    out.weights[j] = p;
  }

  if (sum.mode() == CoeffMode::Exact) {
    std::vector<std::pair<Exponent, ExactCoefficient>> terms;
    for (size_t j = 0; j < sum.size(); ++j)
      if (out.weights[j] != 0)
        terms.emplace_back(sum.terms()[j].exponent,
                           sum.terms()[j].exact.scaled(out.weights[j]));
    out.realized = ExponentialSum::exact(sum.name() + "_bf", sum.table(),
                                         std::move(terms));
  } else {
    std::vector<std::pair<Exponent, std::complex<double>>> terms;
    for (size_t j = 0; j < sum.size(); ++j)
      if (out.weights[j] != 0)
        terms.emplace_back(sum.terms()[j].exponent,
                           sum.terms()[j].numeric * out.weights[j].get_d());
    out.realized = ExponentialSum::numeric(sum.name() + "_bf", sum.table(),
                                           std::move(terms));
  }
  return out;
}

MeanValueEstimate mean_value(const Evaluator& f, double sigma, double lambda,
                             double T, double step) {
  if (T <= 0) throw std::invalid_argument("mean_value: T must be positive");
  if (step <= 0) step = T / 1e5;
  if (step > T / 100)
    throw std::invalid_argument("mean_value: step must be <= T/100");
  const long n = std::lround(std::ceil(2 * T / step));
  const double h = 2 * T / static_cast<double>(n);
  std::complex<double> acc = 0;
  for (long i = 0; i <= n; ++i) {
    double t = -T + h * static_cast<double>(i);
    std::complex<double> v =
        f({sigma, t}) * std::complex<double>(std::cos(lambda * t), -std::sin(lambda * t));
    acc += (i == 0 || i == n) ? 0.5 * v : v;
  }
  MeanValueEstimate est;
  est.lambda = lambda;
  est.sigma = sigma;
  est.T = T;
  est.step = h;
  est.value = acc * (h / (2 * T));
  return est;
}

std::vector<std::pair<double, std::complex<double>>> recover_coefficients(
    const Evaluator& f, double sigma, const std::vector<double>& candidates,
    double T, double step) {
  if (candidates.empty()) return {};
  double delta = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < candidates.size(); ++i)
    for (size_t j = i + 1; j < candidates.size(); ++j)
      delta = std::min(delta, std::abs(candidates[i] - candidates[j]));
  if (candidates.size() > 1 && T < 100 / delta)
    throw std::invalid_argument("recover_coefficients: T too small for the "
                                "candidate separation");
  std::vector<std::pair<double, std::complex<double>>> out;
  for (double lam : candidates) {
    auto est = mean_value(f, sigma, lam, T, step);
    out.emplace_back(lam, est.value / std::exp(lam * sigma));
  }
  return out;
}

namespace {

double translation_defect(const Evaluator& f, double tau, double sigma_lo,
                          double sigma_hi, const AlmostPeriodGrid& g,
                          int t_samples) {
  double worst = 0.0;
  for (int i = 0; i < g.sigma_samples; ++i) {
    double sigma = g.sigma_samples == 1
                       ? sigma_lo
                       : sigma_lo + (sigma_hi - sigma_lo) * i / (g.sigma_samples - 1);
    for (int j = 0; j < t_samples; ++j) {
      double t = t_samples == 1
                     ? g.t_lo
                     : g.t_lo + (g.t_hi - g.t_lo) * j / (t_samples - 1);
      worst = std::max(worst, std::abs(f({sigma, t + tau}) - f({sigma, t})));
    }
  }
  return worst;
}

}  // namespace

AlmostPeriodReport almost_periods(const Evaluator& f, double epsilon,
                                  double sigma_lo, double sigma_hi,
                                  double T_max, AlmostPeriodGrid grid) {
  if (epsilon <= 0) throw std::invalid_argument("almost_periods: epsilon <= 0");
  if (sigma_lo > sigma_hi)
    throw std::invalid_argument("almost_periods: empty strip");
  if (grid.tau_step <= 0)
    grid.tau_step = kTwoPi / (100.0 * std::max(grid.lambda_max, 1e-9));

  AlmostPeriodReport rep;
  rep.epsilon = epsilon;
  rep.sigma_lo = sigma_lo;
  rep.sigma_hi = sigma_hi;
  rep.grid = grid;

  auto defect = [&](double tau) {
    return translation_defect(f, tau, sigma_lo, sigma_hi, grid, grid.t_samples);
  };

  const long n = std::lround(std::floor(T_max / grid.tau_step));
  std::vector<double> d(static_cast<size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) d[static_cast<size_t>(i)] = defect(grid.tau_step * i);

  for (long i = 1; i < n; ++i) {
    size_t ui = static_cast<size_t>(i);
    // refine every local minimum; the epsilon test happens after refinement
    // (a coarse grid can sit well above a sharp dip)
    if (d[ui] > d[ui - 1] || d[ui] > d[ui + 1]) continue;
    // golden-section refinement of the local minimum
    double lo = grid.tau_step * (i - 1), hi = grid.tau_step * (i + 1);
    constexpr double phi = 0.6180339887498949;
    double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
    double fa = defect(a), fb = defect(b);
    while (hi - lo > 1e-9) {
      if (fa < fb) {
        hi = b;
        b = a;
        fb = fa;
        a = hi - phi * (hi - lo);
        fa = defect(a);
      } else {
        lo = a;
        a = b;
        fa = fb;
        b = lo + phi * (hi - lo);
        fb = defect(b);
      }
    }
    double tau = 0.5 * (lo + hi);
    double dv = defect(tau);
    if (dv <= epsilon) rep.periods.push_back({tau, dv});
  }

  if (rep.periods.empty()) {
    rep.empty_flagged = true;
    return rep;
  }
  double gap = rep.periods.front().tau;  // window starting at 0
  for (size_t i = 1; i < rep.periods.size(); ++i)
    gap = std::max(gap, rep.periods[i].tau - rep.periods[i - 1].tau);
  gap = std::max(gap, T_max - rep.periods.back().tau);
  rep.inclusion_length = gap;
  return rep;
}

}  // namespace apeq
