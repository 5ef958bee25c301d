#pragma once

#include <json.hpp>

#include "apeq/approx.hpp"
#include "apeq/equivalence.hpp"
#include "apeq/valuesets.hpp"

namespace apeq {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kToolVersion = "apeq 1.0.0";

/// Violation of schema version "1", carrying a JSON-pointer-style path to the
/// offending element.
struct SchemaError : std::runtime_error {
  std::string path;
  SchemaError(const std::string& what, std::string path_)
      : std::runtime_error(what + " at " + path_), path(std::move(path_)) {}
};

/// Rationals serialize as reduced "p" / "p/q" strings.
Json rat_to_json(const Rat& q);
Rat rat_from_json(const Json& j, const std::string& path);

Json complex_to_json(std::complex<double> z);  // [re, im]

/// Sum with its symbol table embedded; lossless for exact coefficients.
Json sum_to_json(const ExponentialSum& f);
/// Rebuilds the sum; with a table supplied, the embedded table must match it
/// (names and literal values) and the shared instance is used.
ExponentialSum sum_from_json(const Json& j, SymbolTablePtr table = nullptr);

Json qbasis_to_json(const QBasis& b);
Json integral_basis_to_json(const IntegralBasis& b);

/// Full verdict payload: enough for an external checker to re-run
/// verify_verdict (support, phase differences, and the populated field).
Json verdict_to_json(const EquivalenceVerdict& v);
EquivalenceVerdict verdict_from_json(const Json& j, const SymbolTablePtr& table);

Json bf_to_json(const BFPolynomial& p);
Json mean_to_json(const MeanValueEstimate& e);
Json almost_periods_to_json(const AlmostPeriodReport& r);
Json attainment_to_json(const AttainmentReport& r);
Json value_set_compare_to_json(const ValueSetComparison& c);

/// Standard report envelope for the command-line driver.
Json make_report(const std::string& command, Json inputs, Json result);

}  // namespace apeq
