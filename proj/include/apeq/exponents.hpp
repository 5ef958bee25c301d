#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "apeq/scalar.hpp"

namespace apeq {

/// Ordered table of real symbols assumed Q-linearly independent (a user
/// contract; independence of the numeric values is not verified). Index 0 is
/// always the implicit unit symbol "1". Numeric values are carried at 256 bits
/// purely for the evaluation modules; all exact algebra ignores them.
class SymbolTable {
 public:
  static constexpr unsigned kPrecisionBits = 256;  // > 50 decimal digits

  SymbolTable();

  /// Declares a symbol from its decimal literal; returns its index.
  /// Throws std::invalid_argument on duplicate names or zero/malformed values.
  Eigen::Index declare(const std::string& name, const std::string& decimal_value);

  Eigen::Index size() const { return static_cast<Eigen::Index>(names_.size()); }
  const std::string& name(Eigen::Index i) const { return names_[i]; }
  const mpf_class& value(Eigen::Index i) const { return values_[i]; }
  const std::string& value_text(Eigen::Index i) const { return value_texts_[i]; }

  /// Index of a name, -1 if absent.
  Eigen::Index find(const std::string& name) const;

 private:
  std::vector<std::string> names_;
  std::vector<mpf_class> values_;
  std::vector<std::string> value_texts_;
};

using SymbolTablePtr = std::shared_ptr<const SymbolTable>;

/// Exact point of the Q-vector space spanned by the table's symbols.
/// Equality is coordinate equality; exponents with equal numeric values but
/// different coordinates are distinct objects.
class Exponent {
 public:
  Exponent() = default;
  Exponent(SymbolTablePtr table, RatVector coords);

  const RatVector& coords() const { return coords_; }
  const SymbolTablePtr& table() const { return table_; }
  /// Numeric value Sum coords_i * symbol_value_i at table precision.
  const mpf_class& value() const { return value_; }
  double value_double() const { return value_double_; }

  bool operator==(const Exponent& o) const { return coords_ == o.coords_; }
  bool operator!=(const Exponent& o) const { return !(*this == o); }

  /// Total order: numeric value first, exact coordinate lexicographic
  /// tie-break so sorting never depends on float coincidences.
  static bool value_less(const Exponent& a, const Exponent& b);

 private:
  SymbolTablePtr table_;
  RatVector coords_;
  mpf_class value_;
  double value_double_ = 0.0;
};

/// Exponent with rational coordinates over the unit symbol only.
Exponent rational_exponent(const SymbolTablePtr& table, const Rat& r);

/// Basis G of the Q-span of a finite exponent set, with the representation
/// matrix R: row j holds the coordinates of exponent j in the basis,
/// lambda_j = Sum_k R(j,k) g_k.
struct QBasis {
  std::vector<Exponent> basis;
  RatMatrix rep;
};

/// Same shape with integer representation entries; the basis generates the
/// same Z-module as the input exponents.
struct IntegralBasis {
  std::vector<Exponent> basis;
  IntMatrix rep;
};

/// Deterministic Gaussian elimination over Q in input order (pivot = first
/// usable row). Throws std::invalid_argument on duplicates, empty input, or
/// mixed symbol tables.
QBasis qbasis(const std::vector<Exponent>& exponents);

/// Z-module basis via denominator clearing and HNF; every representation
/// coefficient is an integer. Same preconditions as qbasis.
IntegralBasis integral_basis(const std::vector<Exponent>& exponents);

/// Integral bases of the nested prefixes {lambda_1..lambda_n}, n = 1..n_max.
std::vector<std::pair<int, IntegralBasis>> integral_basis_trace(
    const std::function<Exponent(int)>& generator, int n_max);

}  // namespace apeq
