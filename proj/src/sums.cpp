#include "apeq/sums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace apeq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// phase angle 2*pi*turns with the turn fraction reduced first
double turns_to_angle(const Rat& turns) { return kTwoPi * mod1(turns).get_d(); }

}  // namespace

ExactCoefficient::ExactCoefficient(Rat mod, Rat turns)
    : modulus(std::move(mod)), phase_turns(mod1(turns)) {
  if (modulus < 0) {
    // fold a negative modulus into a half-turn
    modulus = -modulus;
    phase_turns = mod1(phase_turns + Rat(1, 2));
  }
  if (modulus == 0) phase_turns = 0;
}

std::complex<double> ExactCoefficient::to_complex() const {
  double m = modulus.get_d();
  double a = turns_to_angle(phase_turns);
  return {m * std::cos(a), m * std::sin(a)};
}

ExactCoefficient ExactCoefficient::scaled(const Rat& factor) const {
  if (factor < 0) throw std::invalid_argument("negative scale");
  return ExactCoefficient(modulus * factor, phase_turns);
}

ExactCoefficient exact_add(const ExactCoefficient& a, const ExactCoefficient& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.phase_turns == b.phase_turns)
    return ExactCoefficient(a.modulus + b.modulus, a.phase_turns);
  if (mod1(a.phase_turns - b.phase_turns) == Rat(1, 2)) {
    Rat m = a.modulus - b.modulus;
    if (m == 0) return ExactCoefficient();
    return m > 0 ? ExactCoefficient(m, a.phase_turns)
                 : ExactCoefficient(-m, b.phase_turns);
  }
  throw ExactPhaseClosure("sum of exact coefficients with phases " +
                          rat_to_string(a.phase_turns) + " and " +
                          rat_to_string(b.phase_turns) +
                          " turns leaves the exact class");
}

ExponentialSum ExponentialSum::exact(
    std::string name, SymbolTablePtr table,
    std::vector<std::pair<Exponent, ExactCoefficient>> terms) {
  ExponentialSum s;
  s.name_ = std::move(name);
  s.table_ = std::move(table);
  s.mode_ = CoeffMode::Exact;
  for (auto& [e, c] : terms) s.terms_.push_back({std::move(e), std::move(c), {}});
  s.normalize();
  return s;
}

ExponentialSum ExponentialSum::numeric(
    std::string name, SymbolTablePtr table,
    std::vector<std::pair<Exponent, std::complex<double>>> terms) {
  ExponentialSum s;
  s.name_ = std::move(name);
  s.table_ = std::move(table);
  s.mode_ = CoeffMode::Numeric;
  for (auto& [e, c] : terms) s.terms_.push_back({std::move(e), {}, c});
  s.normalize();
  return s;
}

void ExponentialSum::normalize() {
  for (const auto& t : terms_)
    if (t.exponent.table() != table_)
      throw std::invalid_argument("term exponent over a foreign symbol table");
  // merge duplicate exponents, first-occurrence order
  std::vector<Term> merged;
  for (auto& t : terms_) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Term& m) {
      return m.exponent == t.exponent;
    });
    if (it == merged.end()) {
      merged.push_back(std::move(t));
    } else if (mode_ == CoeffMode::Exact) {
      it->exact = exact_add(it->exact, t.exact);
    } else {
      it->numeric += t.numeric;
    }
  }
  terms_.clear();
  for (auto& t : merged) {
    bool zero = mode_ == CoeffMode::Exact ? t.exact.is_zero()
                                          : t.numeric == std::complex<double>();
    if (!zero) terms_.push_back(std::move(t));
  }
  sorted_.resize(terms_.size());
  for (size_t i = 0; i < sorted_.size(); ++i) sorted_[i] = i;
  std::sort(sorted_.begin(), sorted_.end(), [&](size_t a, size_t b) {
    return Exponent::value_less(terms_[a].exponent, terms_[b].exponent);
  });
}

std::complex<double> ExponentialSum::coefficient(size_t i) const {
  return mode_ == CoeffMode::Exact ? terms_[i].exact.to_complex()
                                   : terms_[i].numeric;
}

double ExponentialSum::max_abs_exponent() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.exponent.value_double()));
  return m;
}

std::complex<double> ExponentialSum::evaluate(const ComplexPoint& s) const {
  // Kahan-compensated accumulation, real and imaginary parts separately
  double sr = 0, si = 0, cr = 0, ci = 0;
  for (size_t j = 0; j < terms_.size(); ++j) {
    double lambda = terms_[j].exponent.value_double();
    double growth = lambda * s.sigma;
    if (growth > 700.0)
      throw MagnitudeOverflow("term magnitude exceeds e^700", j);
    double mag = std::exp(growth);
    double ang = lambda * s.t;
    std::complex<double> v =
        coefficient(j) * std::complex<double>(mag * std::cos(ang), mag * std::sin(ang));
    double yr = v.real() - cr;
    double tr = sr + yr;
    cr = (tr - sr) - yr;
    sr = tr;
    double yi = v.imag() - ci;
    double ti = si + yi;
    ci = (ti - si) - yi;
    si = ti;
  }
  return {sr, si};
}

std::complex<double> ExponentialSum::derivative(std::complex<double> s) const {
  std::complex<double> acc = 0;
  for (size_t j = 0; j < terms_.size(); ++j) {
    double lambda = terms_[j].exponent.value_double();
    acc += lambda * coefficient(j) * std::exp(lambda * s);
  }
  return acc;
}

ExponentialSum ExponentialSum::translate(double tau) const {
  if (tau == 0.0) return *this;
  std::vector<std::pair<Exponent, std::complex<double>>> terms;
  terms.reserve(terms_.size());
  for (size_t j = 0; j < terms_.size(); ++j) {
    double ang = terms_[j].exponent.value_double() * tau;
    terms.emplace_back(terms_[j].exponent,
                       coefficient(j) * std::complex<double>(std::cos(ang), std::sin(ang)));
  }
  return numeric(name_ + "_translated", table_, std::move(terms));
}

ExponentialSum ExponentialSum::truncate(size_t n) const {
  if (n < 1 || n > terms_.size())
    throw std::out_of_range("truncate: n out of range");
  ExponentialSum s;
  s.name_ = name_;
  s.table_ = table_;
  s.mode_ = mode_;
  s.terms_.assign(terms_.begin(), terms_.begin() + static_cast<long>(n));
  s.normalize();
  return s;
}

}  // namespace apeq
