#include "apeq/corpus.hpp"

#include <array>

namespace apeq {

namespace {

ExponentialSum rat_sum(const std::string& name, const SymbolTablePtr& tab,
                       std::vector<std::array<Rat, 3>> triples) {
  std::vector<std::pair<Exponent, ExactCoefficient>> terms;
  for (auto& t : triples)
    terms.emplace_back(rational_exponent(tab, t[0]),
                       ExactCoefficient(t[1], t[2]));
  return ExponentialSum::exact(name, tab, std::move(terms));
}

// lambda_j = 2j-1 + 1/(2(2j-1)): half-odd frequencies whose prefix bases
// shrink (trace 3/2 -> 1/6 -> 1/30 -> ...)
ExponentialSum half_odd_sum(const std::string& name, const SymbolTablePtr& tab,
                            int n, bool negated) {
  std::vector<std::pair<Exponent, ExactCoefficient>> terms;
  for (int j = 1; j <= n; ++j) {
    Rat odd(2 * j - 1);
    terms.emplace_back(
        rational_exponent(tab, odd + Rat(1) / (2 * odd)),
        ExactCoefficient(Rat(1), negated ? make_rat(1, 2) : Rat(0)));
  }
  return ExponentialSum::exact(name, tab, std::move(terms));
}

std::vector<CorpusEntry> build() {
  std::vector<CorpusEntry> out;

  {
    auto tab = std::make_shared<SymbolTable>();
    SymbolTablePtr t = tab;
    out.push_back({"lambda0_pair_n50",
                   "50-term half-odd pair A1 vs -A1: every truncation is "
                   "equivalent via the all-half-turn twist",
                   half_odd_sum("A1", t, 50, false),
                   half_odd_sum("A2", t, 50, true)});
    out.push_back({"lambda0_pair_n3",
                   "3-term variant of the half-odd pair with a small integral "
                   "basis (1/30), suitable for weighted-approximation runs",
                   half_odd_sum("B1", t, 3, false),
                   half_odd_sum("B2", t, 3, true)});
    out.push_back({"sign_pair",
                   "e^s + e^{2s} vs -e^s + e^{2s}: equivalent, witness "
                   "y = (1/2) on the basis {1}",
                   rat_sum("f1", t, {{Rat(1), Rat(1), Rat(0)},
                                     {Rat(2), Rat(1), Rat(0)}}),
                   rat_sum("f2", t, {{Rat(1), Rat(1), make_rat(1, 2)},
                                     {Rat(2), Rat(1), Rat(0)}})});
    out.push_back({"twist_pair",
                   "e^s + e^{2s} vs i e^s + e^{2s}: not equivalent, "
                   "certificate relation (2,-1) with defect 1/2",
                   rat_sum("g1", t, {{Rat(1), Rat(1), Rat(0)},
                                     {Rat(2), Rat(1), Rat(0)}}),
                   rat_sum("g2", t, {{Rat(1), Rat(1), make_rat(1, 4)},
                                     {Rat(2), Rat(1), Rat(0)}})});
  }

  {
    // Dirichlet polynomial over independent prime logarithms: any per-prime
    // twist is realizable, so the pair is equivalent
    auto tab = std::make_shared<SymbolTable>();
    tab->declare("L2", "0.693147180559945309417232121458176568");
    tab->declare("L3", "1.0986122886681096913952452369225257");
    tab->declare("L5", "1.60943791243410037460075933322618764");
    SymbolTablePtr t = tab;
    auto prime_term = [&](Eigen::Index idx, const Rat& turns) {
      RatVector coords = RatVector::Zero(t->size());
      coords(idx) = -1;
      return std::pair<Exponent, ExactCoefficient>(
          Exponent(t, std::move(coords)), ExactCoefficient(Rat(1), turns));
    };
    std::vector<std::pair<Exponent, ExactCoefficient>> plain{
        prime_term(1, Rat(0)), prime_term(2, Rat(0)), prime_term(3, Rat(0))};
    std::vector<std::pair<Exponent, ExactCoefficient>> twisted{
        prime_term(1, make_rat(1, 3)), prime_term(2, make_rat(1, 4)),
        prime_term(3, make_rat(1, 5))};
    out.push_back({"prime_log_pair",
                   "2^-s + 3^-s + 5^-s against the same polynomial with "
                   "independent per-prime twists: equivalent",
                   ExponentialSum::exact("D1", t, std::move(plain)),
                   ExponentialSum::exact("D2", t, std::move(twisted))});
  }

  {
    // sum_n e^{-jn} e^{(1 - log n / n) s} for j = 1, 2, truncated to n <= 3;
    // the moduli e^{-n} vs e^{-2n} (20-digit rational truncations) differ at
    // every term, so the pair fails on a modulus mismatch
    auto tab = std::make_shared<SymbolTable>();
    tab->declare("L2", "0.693147180559945309417232121458176568");
    tab->declare("L3", "1.0986122886681096913952452369225257");
    SymbolTablePtr t = tab;
    Int scale("100000000000000000000");  // 10^20
    auto modulus = [&](const char* digits) {
      return make_rat(Int(digits), scale);
    };
    auto exponent = [&](Eigen::Index log_idx, const Rat& log_coeff) {
      RatVector coords = RatVector::Zero(t->size());
      coords(0) = 1;
      if (log_idx > 0) coords(log_idx) = log_coeff;
      return Exponent(t, std::move(coords));
    };
    std::vector<std::pair<Exponent, ExactCoefficient>> r1{
        {exponent(0, Rat(0)),
         ExactCoefficient(modulus("36787944117144232159"), Rat(0))},
        {exponent(1, make_rat(-1, 2)),
         ExactCoefficient(modulus("13533528323661269189"), Rat(0))},
        {exponent(2, make_rat(-1, 3)),
         ExactCoefficient(modulus("4978706836786394297"), Rat(0))}};
    std::vector<std::pair<Exponent, ExactCoefficient>> r2{
        {exponent(0, Rat(0)),
         ExactCoefficient(modulus("13533528323661269189"), Rat(0))},
        {exponent(1, make_rat(-1, 2)),
         ExactCoefficient(modulus("1831563888873418029"), Rat(0))},
        {exponent(2, make_rat(-1, 3)),
         ExactCoefficient(modulus("247875217666635842"), Rat(0))}};
    out.push_back({"remark_pair",
                   "truncations of sum_n e^{-jn} e^{(1 - log n / n)s} for "
                   "j = 1, 2: coefficient moduli differ, not equivalent",
                   ExponentialSum::exact("R1", t, std::move(r1)),
                   ExponentialSum::exact("R2", t, std::move(r2))});
  }

  return out;
}

}  // namespace

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = build();
  return entries;
}

const CorpusEntry* corpus_find(const std::string& name) {
  for (const auto& e : corpus())
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace apeq
