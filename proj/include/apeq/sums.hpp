#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "apeq/exponents.hpp"

namespace apeq {

/// Coefficient in exactly comparable polar form: rational modulus, rational
/// phase in turns (angle = 2*pi*phase_turns). Canonical zero is (0, 0).
struct ExactCoefficient {
  Rat modulus;      // >= 0
  Rat phase_turns;  // in [0, 1)

  ExactCoefficient() : modulus(0), phase_turns(0) {}
  ExactCoefficient(Rat mod, Rat turns);

  bool is_zero() const { return modulus == 0; }
  std::complex<double> to_complex() const;
  ExactCoefficient scaled(const Rat& factor) const;  // factor >= 0
  bool operator==(const ExactCoefficient& o) const {
    return modulus == o.modulus && phase_turns == o.phase_turns;
  }
};

/// Merging exact coefficients whose sum leaves the (rational modulus,
/// rational turns) class.
struct ExactPhaseClosure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MagnitudeOverflow : std::runtime_error {
  size_t term_index;
  MagnitudeOverflow(const std::string& what, size_t idx)
      : std::runtime_error(what), term_index(idx) {}
};

/// Attempts a + b within the exact class: possible when the phases agree,
/// are opposite (half-turn apart), or either side is zero.
ExactCoefficient exact_add(const ExactCoefficient& a, const ExactCoefficient& b);

enum class CoeffMode { Exact, Numeric };

struct ComplexPoint {
  double sigma = 0.0;
  double t = 0.0;
  std::complex<double> to_complex() const { return {sigma, t}; }
};

/// Finite exponential sum Sum_j a_j e^{lambda_j s} with a uniform coefficient
/// mode. Terms are kept in declaration order (it defines truncation order);
/// a sorted-by-exponent-value view is maintained alongside for canonical
/// serialization. Construction normalizes: duplicate exponents merged, zero
/// terms dropped.
class ExponentialSum {
 public:
  struct Term {
    Exponent exponent;
    ExactCoefficient exact;          // valid in Exact mode
    std::complex<double> numeric{};  // valid in Numeric mode
  };

  ExponentialSum() = default;
  static ExponentialSum exact(std::string name, SymbolTablePtr table,
                              std::vector<std::pair<Exponent, ExactCoefficient>> terms);
  static ExponentialSum numeric(std::string name, SymbolTablePtr table,
                                std::vector<std::pair<Exponent, std::complex<double>>> terms);

  const std::string& name() const { return name_; }
  const SymbolTablePtr& table() const { return table_; }
  CoeffMode mode() const { return mode_; }
  size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  /// Terms in declaration order.
  const std::vector<Term>& terms() const { return terms_; }
  /// Indices into terms() sorted by ascending exponent value.
  const std::vector<size_t>& sorted_order() const { return sorted_; }
  std::complex<double> coefficient(size_t i) const;
  /// Largest |lambda_j|, 0 for the empty sum.
  double max_abs_exponent() const;

  std::complex<double> evaluate(const ComplexPoint& s) const;
  std::complex<double> evaluate(std::complex<double> s) const {
    return evaluate(ComplexPoint{s.real(), s.imag()});
  }
  /// Derivative Sum_j lambda_j a_j e^{lambda_j s}.
  std::complex<double> derivative(std::complex<double> s) const;

  /// f(s + i*tau): coefficients rotated by e^{i*lambda_j*tau}. Numeric mode
  /// output except for tau = 0, where the sum is returned unchanged.
  ExponentialSum translate(double tau) const;

  /// First n terms in declaration order; throws std::out_of_range unless
  /// 1 <= n <= size().
  ExponentialSum truncate(size_t n) const;

 private:
  void normalize();

  std::string name_;
  SymbolTablePtr table_;
  CoeffMode mode_ = CoeffMode::Exact;
  std::vector<Term> terms_;
  std::vector<size_t> sorted_;
};

}  // namespace apeq
