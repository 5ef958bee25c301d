#include "apeq/cli.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "apeq/corpus.hpp"
#include "apeq/dsl.hpp"
#include "apeq/serialize.hpp"

namespace apeq::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Args {
  std::vector<std::string> positional;
  std::map<std::string, std::string> flags;

  const std::string& pos(size_t i, const char* what) const {
    if (i >= positional.size())
      throw UsageError(std::string("missing argument: ") + what);
    return positional[i];
  }
  const std::string* flag(const std::string& name) const {
    auto it = flags.find(name);
    return it == flags.end() ? nullptr : &it->second;
  }
  std::string require_flag(const std::string& name) const {
    const std::string* v = flag(name);
    if (!v) throw UsageError("missing required flag --" + name);
    return *v;
  }
  double number(const std::string& name) const {
    const std::string text = require_flag(name);
    size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size())
      throw UsageError("flag --" + name + ": malformed number '" + text + "'");
    return v;
  }
  double number_or(const std::string& name, double dflt) const {
    return flag(name) ? number(name) : dflt;
  }
};

Args split_args(const std::vector<std::string>& argv) {
  Args a;
  for (size_t i = 0; i < argv.size(); ++i) {
    if (argv[i].rfind("--", 0) == 0) {
      if (i + 1 >= argv.size())
        throw UsageError("flag " + argv[i] + " needs a value");
      a.flags[argv[i].substr(2)] = argv[i + 1];
      ++i;
    } else {
      a.positional.push_back(argv[i]);
    }
  }
  return a;
}

Workspace load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const ExponentialSum& pick(const Workspace& ws, const std::string& name) {
  const ExponentialSum* f = ws.find(name);
  if (!f) throw UsageError("no sum named '" + name + "' in the file");
  return *f;
}

Json warnings_json(const Workspace& ws) {
  Json out = Json::array();
  for (const auto& w : ws.warnings)
    out.push_back({{"line", w.line}, {"message", w.message}});
  return out;
}

std::vector<int> parse_orders(const std::string& text) {
  std::vector<int> orders;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    size_t used = 0;
    int v = std::stoi(piece, &used);
    if (used != piece.size())
      throw UsageError("malformed order '" + piece + "'");
    orders.push_back(v);
  }
  if (orders.empty()) throw UsageError("--orders needs at least one value");
  return orders;
}

/// Verdict + verification + exit code; shared by `equiv` and `corpus run`.
int emit_equiv(const ExponentialSum& f1, const ExponentialSum& f2,
               const std::string& definition, const std::string* trace_flag,
               const std::string& command, Json inputs, std::ostream& out) {
  if (definition != "star" && definition != "bohr")
    throw UsageError("--definition must be star or bohr");
  EquivalenceVerdict v = definition == "bohr" ? bohr_equivalent_finite(f1, f2)
                                              : star_equivalent(f1, f2);
  Json result{{"definition", definition}, {"verdict", verdict_to_json(v)}};
  int code = v.equivalent ? kOk : kNegative;
  try {
    verify_verdict(v, f1, f2);
    result["verified"] = true;
  } catch (const VerdictMismatch& e) {
    result["verified"] = false;
    result["verify_error"] = e.what();
    code = kVerifyFailure;
  }
  if (trace_flag) {
    size_t n_max = static_cast<size_t>(std::stoul(*trace_flag));
    Json trace = Json::array();
    for (const auto& [n, tv] : equivalence_trace(f1, f2, n_max)) {
      verify_verdict(tv, f1.truncate(std::min(n, f1.size())),
                     f2.truncate(std::min(n, f2.size())));
      trace.push_back({{"n", n}, {"verdict", verdict_to_json(tv)}});
    }
    result["trace"] = std::move(trace);
  }
  out << make_report(command, std::move(inputs), std::move(result)).dump(2)
      << "\n";
  return code;
}

int dispatch(const std::vector<std::string>& argv, std::ostream& out) {
  if (argv.empty()) throw UsageError("no command given");
  const std::string cmd = argv[0];
  Args args = split_args({argv.begin() + 1, argv.end()});

  if (cmd == "basis" || cmd == "integral-basis") {
    Workspace ws = load(args.pos(0, "file"));
    const ExponentialSum& f = pick(ws, args.pos(1, "sum"));
    std::vector<Exponent> exps;
    for (const auto& t : f.terms()) exps.push_back(t.exponent);
    if (exps.empty()) throw UsageError("sum '" + f.name() + "' is empty");
    Json inputs{{"file", args.pos(0, "file")}, {"sum", f.name()},
                {"warnings", warnings_json(ws)}};
    Json result = cmd == "basis"
                      ? Json{{"basis", qbasis_to_json(qbasis(exps))}}
                      : Json{{"integral_basis",
                              integral_basis_to_json(integral_basis(exps))}};
    out << make_report(cmd, std::move(inputs), std::move(result)).dump(2)
        << "\n";
    return kOk;
  }

  if (cmd == "equiv") {
    Workspace ws = load(args.pos(0, "file"));
    const ExponentialSum& f1 = pick(ws, args.pos(1, "sum1"));
    const ExponentialSum& f2 = pick(ws, args.pos(2, "sum2"));
    std::string definition = args.flag("definition") ? *args.flag("definition")
                                                     : "star";
    Json inputs{{"file", args.pos(0, "file")},
                {"sum1", f1.name()},
                {"sum2", f2.name()},
                {"warnings", warnings_json(ws)}};
    return emit_equiv(f1, f2, definition, args.flag("trace"), cmd,
                      std::move(inputs), out);
  }

  if (cmd == "bf") {
    Workspace ws = load(args.pos(0, "file"));
    const ExponentialSum& f = pick(ws, args.pos(1, "sum"));
    BFOrders orders{parse_orders(args.require_flag("orders"))};
    auto bf = bochner_fejer(f, orders);
    Json inputs{{"file", args.pos(0, "file")},
                {"sum", f.name()},
                {"orders", orders.orders},
                {"warnings", warnings_json(ws)}};
    out << make_report(cmd, std::move(inputs), bf_to_json(bf)).dump(2) << "\n";
    return kOk;
  }

  if (cmd == "mean") {
    Workspace ws = load(args.pos(0, "file"));
    const ExponentialSum& f = pick(ws, args.pos(1, "sum"));
    double sigma = args.number("sigma"), lambda = args.number("lambda"),
           T = args.number("T");
    auto est = mean_value([&](std::complex<double> s) { return f.evaluate(s); },
                          sigma, lambda, T, args.number_or("step", 0.0));
    Json inputs{{"file", args.pos(0, "file")},
                {"sum", f.name()},
                {"sigma", sigma},
                {"lambda", lambda},
                {"T", T},
                {"warnings", warnings_json(ws)}};
    out << make_report(cmd, std::move(inputs), mean_to_json(est)).dump(2)
        << "\n";
    return kOk;
  }

  if (cmd == "almost-periods") {
    Workspace ws = load(args.pos(0, "file"));
    const ExponentialSum& f = pick(ws, args.pos(1, "sum"));
    double eps = args.number("eps"), lo = args.number("sigma-lo"),
           hi = args.number("sigma-hi"), tmax = args.number("tmax");
    AlmostPeriodGrid grid;
    grid.lambda_max = std::max(f.max_abs_exponent(), 1e-9);
    auto rep = almost_periods(
        [&](std::complex<double> s) { return f.evaluate(s); }, eps, lo, hi,
        tmax, grid);
    Json inputs{{"file", args.pos(0, "file")},
                {"sum", f.name()},
                {"eps", eps},
                {"sigma_lo", lo},
                {"sigma_hi", hi},
                {"tmax", tmax},
                {"warnings", warnings_json(ws)}};
    out << make_report(cmd, std::move(inputs), almost_periods_to_json(rep))
               .dump(2)
        << "\n";
    return rep.empty_flagged ? kNegative : kOk;
  }

  if (cmd == "values") {
    Workspace ws = load(args.pos(0, "file"));
    const ExponentialSum& f1 = pick(ws, args.pos(1, "sum1"));
    const ExponentialSum& f2 = pick(ws, args.pos(2, "sum2"));
    double lo = args.number("sigma-lo"), hi = args.number("sigma-hi");
    int samples = static_cast<int>(args.number_or("samples", 10));
    auto seed = static_cast<std::uint64_t>(args.number_or("seed", 1));
    double tol = args.number_or("tol", 1e-6);
    double tcap = args.number_or("tcap", 1e4);
    auto cmp = value_set_compare(f1, f2, lo, hi, samples, seed, tol, tcap);
    Json inputs{{"file", args.pos(0, "file")},
                {"sum1", f1.name()},
                {"sum2", f2.name()},
                {"sigma_lo", lo},
                {"sigma_hi", hi},
                {"samples", samples},
                {"seed", seed},
                {"tol", tol},
                {"tcap", tcap},
                {"warnings", warnings_json(ws)}};
    out << make_report(cmd, std::move(inputs), value_set_compare_to_json(cmp))
               .dump(2)
        << "\n";
    return (cmp.fraction_f1_in_f2 == 1.0 && cmp.fraction_f2_in_f1 == 1.0)
               ? kOk
               : kNegative;
  }

  if (cmd == "corpus") {
    const std::string sub = args.pos(0, "list|run");
    if (sub == "list") {
      Json entries = Json::array();
      for (const auto& e : corpus())
        entries.push_back({{"name", e.name},
                           {"description", e.description},
                           {"sum1", e.f1.name()},
                           {"sum2", e.f2.name()}});
      out << make_report("corpus list", Json::object(),
                         Json{{"entries", std::move(entries)}})
                 .dump(2)
          << "\n";
      return kOk;
    }
    if (sub == "run") {
      const std::string name = args.pos(1, "entry name");
      const CorpusEntry* e = corpus_find(name);
      if (!e) throw UsageError("no corpus entry named '" + name + "'");
      Json inputs{{"entry", e->name},
                  {"description", e->description},
                  {"sum1", sum_to_json(e->f1)},
                  {"sum2", sum_to_json(e->f2)}};
      return emit_equiv(e->f1, e->f2, "star", nullptr, "corpus run",
                        std::move(inputs), out);
    }
    throw UsageError("corpus subcommand must be list or run");
  }

  throw UsageError("unknown command '" + cmd + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  try {
    return dispatch(args, out);
  } catch (const UsageError& e) {
    out << make_report("error", Json::object(),
                       Json{{"error", e.what()}, {"kind", "usage"}})
               .dump(2)
        << "\n";
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    out << make_report("error", Json::object(),
                       Json{{"error", e.what()},
                            {"kind", "parse"},
                            {"line", e.line},
                            {"column", e.column}})
               .dump(2)
        << "\n";
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    out << make_report("error", Json::object(),
                       Json{{"error", e.what()}, {"kind", "input"}})
               .dump(2)
        << "\n";
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace apeq::cli
