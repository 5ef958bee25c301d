#include "apeq/serialize.hpp"

namespace apeq {

namespace {

const Json& need(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    throw SchemaError(std::string("missing field '") + key + "'", path);
  return j[key];
}

std::string need_string(const Json& j, const char* key, const std::string& path) {
  const Json& v = need(j, key, path);
  if (!v.is_string())
    throw SchemaError("expected string", path + "/" + key);
  return v.get<std::string>();
}

Json coords_to_json(const RatVector& coords) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < coords.size(); ++i)
    out.push_back(rat_to_json(coords(i)));
  return out;
}

RatVector coords_from_json(const Json& j, Eigen::Index size,
                           const std::string& path) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size)
    throw SchemaError("expected coordinate array of length " +
                          std::to_string(size),
                      path);
  RatVector out(size);
  for (Eigen::Index i = 0; i < size; ++i)
    out(i) = rat_from_json(j[static_cast<size_t>(i)],
                           path + "/" + std::to_string(i));
  return out;
}

}  // namespace

Json rat_to_json(const Rat& q) { return rat_to_string(q); }

Rat rat_from_json(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError("expected rational string", path);
  try {
    return rat_from_string(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what(), path);
  }
}

Json complex_to_json(std::complex<double> z) {
  return Json::array({z.real(), z.imag()});
}

Json sum_to_json(const ExponentialSum& f) {
  Json symbols = Json::array();
  const SymbolTable& table = *f.table();
  for (Eigen::Index i = 1; i < table.size(); ++i)
    symbols.push_back({{"name", table.name(i)}, {"value", table.value_text(i)}});
  Json terms = Json::array();
  for (const auto& t : f.terms()) {
    Json term{{"exponent", coords_to_json(t.exponent.coords())}};
    if (f.mode() == CoeffMode::Exact) {
      term["modulus"] = rat_to_json(t.exact.modulus);
      term["phase_turns"] = rat_to_json(t.exact.phase_turns);
    } else {
      term["coefficient"] = complex_to_json(t.numeric);
    }
    terms.push_back(std::move(term));
  }
  return Json{{"schema_version", kSchemaVersion},
              {"name", f.name()},
              {"mode", f.mode() == CoeffMode::Exact ? "exact" : "numeric"},
              {"symbols", std::move(symbols)},
              {"terms", std::move(terms)}};
}

ExponentialSum sum_from_json(const Json& j, SymbolTablePtr table) {
  const std::string path = "/sum";
  if (need_string(j, "schema_version", path) != kSchemaVersion)
    throw SchemaError("unsupported schema version", path + "/schema_version");
  const std::string name = need_string(j, "name", path);
  const std::string mode = need_string(j, "mode", path);
  if (mode != "exact" && mode != "numeric")
    throw SchemaError("unknown mode '" + mode + "'", path + "/mode");

  const Json& symbols = need(j, "symbols", path);
  if (!symbols.is_array()) throw SchemaError("expected array", path + "/symbols");
  if (table) {
    if (table->size() != static_cast<Eigen::Index>(symbols.size()) + 1)
      throw SchemaError("symbol table size mismatch", path + "/symbols");
    for (size_t i = 0; i < symbols.size(); ++i) {
      const std::string spath = path + "/symbols/" + std::to_string(i);
      Eigen::Index idx = static_cast<Eigen::Index>(i) + 1;
      if (need_string(symbols[i], "name", spath) != table->name(idx) ||
          need_string(symbols[i], "value", spath) != table->value_text(idx))
        throw SchemaError("symbol table entry mismatch", spath);
    }
  } else {
    auto fresh = std::make_shared<SymbolTable>();
    for (size_t i = 0; i < symbols.size(); ++i) {
      const std::string spath = path + "/symbols/" + std::to_string(i);
      try {
        fresh->declare(need_string(symbols[i], "name", spath),
                       need_string(symbols[i], "value", spath));
      } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what(), spath);
      }
    }
    table = fresh;
  }
  const Eigen::Index K = table->size();

  const Json& terms = need(j, "terms", path);
  if (!terms.is_array()) throw SchemaError("expected array", path + "/terms");
  std::vector<std::pair<Exponent, ExactCoefficient>> exact_terms;
  std::vector<std::pair<Exponent, std::complex<double>>> numeric_terms;
  for (size_t i = 0; i < terms.size(); ++i) {
    const std::string tpath = path + "/terms/" + std::to_string(i);
    Exponent e(table, coords_from_json(need(terms[i], "exponent", tpath), K,
                                       tpath + "/exponent"));
    if (mode == "exact") {
      exact_terms.emplace_back(
          std::move(e),
          ExactCoefficient(
              rat_from_json(need(terms[i], "modulus", tpath), tpath + "/modulus"),
              rat_from_json(need(terms[i], "phase_turns", tpath),
                            tpath + "/phase_turns")));
    } else {
      const Json& c = need(terms[i], "coefficient", tpath);
      if (!c.is_array() || c.size() != 2 || !c[0].is_number() ||
          !c[1].is_number())
        throw SchemaError("expected [re, im]", tpath + "/coefficient");
      numeric_terms.emplace_back(
          std::move(e),
          std::complex<double>(c[0].get<double>(), c[1].get<double>()));
    }
  }
  return mode == "exact"
             ? ExponentialSum::exact(name, table, std::move(exact_terms))
             : ExponentialSum::numeric(name, table, std::move(numeric_terms));
}

Json qbasis_to_json(const QBasis& b) {
  Json basis = Json::array();
  for (const auto& e : b.basis) basis.push_back(coords_to_json(e.coords()));
  Json rep = Json::array();
  for (Eigen::Index i = 0; i < b.rep.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < b.rep.cols(); ++j)
      row.push_back(rat_to_json(b.rep(i, j)));
    rep.push_back(std::move(row));
  }
  return Json{{"basis", std::move(basis)}, {"representation", std::move(rep)}};
}

Json integral_basis_to_json(const IntegralBasis& b) {
  Json basis = Json::array();
  for (const auto& e : b.basis) basis.push_back(coords_to_json(e.coords()));
  Json rep = Json::array();
  for (Eigen::Index i = 0; i < b.rep.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < b.rep.cols(); ++j)
      row.push_back(b.rep(i, j).get_str());
    rep.push_back(std::move(row));
  }
  return Json{{"basis", std::move(basis)}, {"representation", std::move(rep)}};
}

Json verdict_to_json(const EquivalenceVerdict& v) {
  Json out{{"schema_version", kSchemaVersion}, {"equivalent", v.equivalent}};
  Json support = Json::array();
  for (const auto& e : v.phases.support)
    support.push_back(coords_to_json(e.coords()));
  Json q = Json::array();
  for (const auto& r : v.phases.q) q.push_back(rat_to_json(r));
  out["support"] = std::move(support);
  out["phase_differences"] = std::move(q);
  if (v.witness) {
    Json turns = Json::array();
    for (const auto& y : v.witness->y) turns.push_back(rat_to_json(y));
    out["witness"] = Json{{"basis", qbasis_to_json(v.witness->basis)},
                          {"turns", std::move(turns)}};
  }
  if (v.certificate) {
    Json rel = Json::array();
    for (Eigen::Index i = 0; i < v.certificate->relation.size(); ++i)
      rel.push_back(v.certificate->relation(i).get_str());
    out["certificate"] = Json{{"relation", std::move(rel)},
                              {"defect", rat_to_json(v.certificate->defect)}};
  }
  if (v.modulus_mismatch)
    out["modulus_mismatch"] = *v.modulus_mismatch;
  return out;
}

EquivalenceVerdict verdict_from_json(const Json& j, const SymbolTablePtr& table) {
  const std::string path = "/verdict";
  if (need_string(j, "schema_version", path) != kSchemaVersion)
    throw SchemaError("unsupported schema version", path + "/schema_version");
  const Json& eq = need(j, "equivalent", path);
  if (!eq.is_boolean()) throw SchemaError("expected boolean", path + "/equivalent");
  EquivalenceVerdict v;
  v.equivalent = eq.get<bool>();
  const Eigen::Index K = table->size();

  const Json& support = need(j, "support", path);
  if (!support.is_array()) throw SchemaError("expected array", path + "/support");
  for (size_t i = 0; i < support.size(); ++i)
    v.phases.support.emplace_back(
        table, coords_from_json(support[i], K,
                                path + "/support/" + std::to_string(i)));
  const Json& q = need(j, "phase_differences", path);
  if (!q.is_array())
    throw SchemaError("expected array", path + "/phase_differences");
  for (size_t i = 0; i < q.size(); ++i)
    v.phases.q.push_back(rat_from_json(
        q[i], path + "/phase_differences/" + std::to_string(i)));

  if (j.contains("witness")) {
    const Json& w = j["witness"];
    const std::string wpath = path + "/witness";
    const Json& b = need(w, "basis", wpath);
    const Json& basis = need(b, "basis", wpath + "/basis");
    const Json& rep = need(b, "representation", wpath + "/basis");
    Witness wit;
    for (size_t i = 0; i < basis.size(); ++i)
      wit.basis.basis.emplace_back(
          table, coords_from_json(basis[i], K, wpath + "/basis/basis/" +
                                                   std::to_string(i)));
    const Eigen::Index rows = static_cast<Eigen::Index>(rep.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(wit.basis.basis.size());
    wit.basis.rep = RatMatrix(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Json& row = rep[static_cast<size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
        throw SchemaError("ragged representation matrix",
                          wpath + "/basis/representation/" + std::to_string(r));
      for (Eigen::Index c = 0; c < cols; ++c)
        wit.basis.rep(r, c) =
            rat_from_json(row[static_cast<size_t>(c)],
                          wpath + "/basis/representation/" + std::to_string(r) +
                              "/" + std::to_string(c));
    }
    const Json& turns = need(w, "turns", wpath);
    for (size_t i = 0; i < turns.size(); ++i)
      wit.y.push_back(
          rat_from_json(turns[i], wpath + "/turns/" + std::to_string(i)));
    v.witness = std::move(wit);
  }
  if (j.contains("certificate")) {
    const Json& c = j["certificate"];
    const std::string cpath = path + "/certificate";
    const Json& rel = need(c, "relation", cpath);
    if (!rel.is_array()) throw SchemaError("expected array", cpath + "/relation");
    Certificate cert;
    cert.relation = IntVector(static_cast<Eigen::Index>(rel.size()));
    for (size_t i = 0; i < rel.size(); ++i) {
      if (!rel[i].is_string())
        throw SchemaError("expected integer string",
                          cpath + "/relation/" + std::to_string(i));
      cert.relation(static_cast<Eigen::Index>(i)) =
          Int(rel[i].get<std::string>());
    }
    cert.defect = rat_from_json(need(c, "defect", cpath), cpath + "/defect");
    v.certificate = std::move(cert);
  }
  if (j.contains("modulus_mismatch")) {
    if (!j["modulus_mismatch"].is_number_unsigned())
      throw SchemaError("expected index", path + "/modulus_mismatch");
    v.modulus_mismatch = j["modulus_mismatch"].get<size_t>();
  }
  return v;
}

Json bf_to_json(const BFPolynomial& p) {
  Json weights = Json::array();
  for (const auto& w : p.weights) weights.push_back(rat_to_json(w));
  return Json{{"basis", integral_basis_to_json(p.basis)},
              {"weights", std::move(weights)},
              {"realized", sum_to_json(p.realized)}};
}

Json mean_to_json(const MeanValueEstimate& e) {
  return Json{{"lambda", e.lambda},
              {"sigma", e.sigma},
              {"T", e.T},
              {"step", e.step},
              {"value", complex_to_json(e.value)}};
}

Json almost_periods_to_json(const AlmostPeriodReport& r) {
  Json periods = Json::array();
  for (const auto& p : r.periods)
    periods.push_back({{"tau", p.tau}, {"defect", p.defect}});
  return Json{{"epsilon", r.epsilon},
              {"sigma_lo", r.sigma_lo},
              {"sigma_hi", r.sigma_hi},
              {"periods", std::move(periods)},
              {"inclusion_length", r.inclusion_length},
              {"empty_flagged", r.empty_flagged},
              {"grid",
               {{"tau_step", r.grid.tau_step},
                {"sigma_samples", r.grid.sigma_samples},
                {"t_samples", r.grid.t_samples},
                {"t_lo", r.grid.t_lo},
                {"t_hi", r.grid.t_hi}}}};
}

Json attainment_to_json(const AttainmentReport& r) {
  Json roots = Json::array();
  for (const auto& z : r.roots) roots.push_back(complex_to_json(z));
  return Json{{"target", complex_to_json(r.target)},
              {"rect",
               {{"sigma_lo", r.rect.sigma_lo},
                {"sigma_hi", r.rect.sigma_hi},
                {"t_lo", r.rect.t_lo},
                {"t_hi", r.rect.t_hi}}},
              {"count", r.count},
              {"boundary_margin", r.boundary_margin},
              {"roots", std::move(roots)},
              {"tolerances",
               {{"attain_tol", r.tolerances.attain_tol},
                {"boundary_guard", r.tolerances.boundary_guard},
                {"newton_stop", r.tolerances.newton_stop},
                {"dedup_radius", r.tolerances.dedup_radius}}}};
}

Json value_set_compare_to_json(const ValueSetComparison& c) {
  auto samples_json = [](const std::vector<ValueSetComparison::Sample>& v) {
    Json out = Json::array();
    for (const auto& s : v) {
      Json e{{"s", complex_to_json(s.s)},
             {"w", complex_to_json(s.w)},
             {"found", s.found},
             {"residual", s.residual},
             {"explored_T", s.explored_T}};
      if (s.found) e["found_s"] = complex_to_json(s.found_s);
      out.push_back(std::move(e));
    }
    return out;
  };
  return Json{{"sigma_lo", c.sigma_lo},
              {"sigma_hi", c.sigma_hi},
              {"n_samples", c.n_samples},
              {"seed", c.seed},
              {"tol", c.tol},
              {"t_cap", c.t_cap},
              {"fraction_f1_in_f2", c.fraction_f1_in_f2},
              {"fraction_f2_in_f1", c.fraction_f2_in_f1},
              {"worst_residual_f1_in_f2", c.worst_residual_f1_in_f2},
              {"worst_residual_f2_in_f1", c.worst_residual_f2_in_f1},
              {"values_of_f1_in_f2", samples_json(c.values_of_f1_in_f2)},
              {"values_of_f2_in_f1", samples_json(c.values_of_f2_in_f1)}};
}

Json make_report(const std::string& command, Json inputs, Json result) {
  return Json{{"schema_version", kSchemaVersion},
              {"tool_version", kToolVersion},
              {"command", command},
              {"inputs", std::move(inputs)},
              {"result", std::move(result)}};
}

}  // namespace apeq
