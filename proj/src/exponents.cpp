#include "apeq/exponents.hpp"

#include <stdexcept>

#include "apeq/exactlin.hpp"

namespace apeq {

SymbolTable::SymbolTable() {
  names_.push_back("1");
  values_.emplace_back(1, kPrecisionBits);
  value_texts_.push_back("1");
}

Eigen::Index SymbolTable::declare(const std::string& name,
                                  const std::string& decimal_value) {
  if (find(name) >= 0)
    throw std::invalid_argument("duplicate symbol: " + name);
  mpf_class v(0, kPrecisionBits);
  if (v.set_str(decimal_value, 10) != 0)
    throw std::invalid_argument("malformed symbol value: " + decimal_value);
  if (v == 0) throw std::invalid_argument("symbol value must be nonzero: " + name);
  names_.push_back(name);
  values_.push_back(std::move(v));
  value_texts_.push_back(decimal_value);
  return size() - 1;
}

Eigen::Index SymbolTable::find(const std::string& name) const {
  for (Eigen::Index i = 0; i < size(); ++i)
    if (names_[i] == name) return i;
  return -1;
}

Exponent::Exponent(SymbolTablePtr table, RatVector coords)
    : table_(std::move(table)), coords_(std::move(coords)),
      value_(0, SymbolTable::kPrecisionBits) {
  if (!table_ || coords_.size() != table_->size())
    throw std::invalid_argument("exponent coords do not match symbol table");
  mpf_class acc(0, SymbolTable::kPrecisionBits);
  for (Eigen::Index i = 0; i < coords_.size(); ++i) {
    if (coords_(i) == 0) continue;
    mpf_class c(coords_(i), SymbolTable::kPrecisionBits);
    acc += c * table_->value(i);
  }
  value_ = acc;
  value_double_ = value_.get_d();
}

bool Exponent::value_less(const Exponent& a, const Exponent& b) {
  int c = cmp(a.value_, b.value_);
  if (c != 0) return c < 0;
  for (Eigen::Index i = 0; i < a.coords_.size() && i < b.coords_.size(); ++i) {
    int d = cmp(a.coords_(i), b.coords_(i));
    if (d != 0) return d < 0;
  }
  return a.coords_.size() < b.coords_.size();
}

Exponent rational_exponent(const SymbolTablePtr& table, const Rat& r) {
  RatVector c = RatVector::Zero(table->size());
  c(0) = r;
  return Exponent(table, c);
}

namespace {

void check_input(const std::vector<Exponent>& exponents) {
  if (exponents.empty())
    throw std::invalid_argument("empty exponent list");
  const auto& table = exponents.front().table();
  for (const auto& e : exponents)
    if (e.table() != table)
      throw std::invalid_argument("exponents over mixed symbol tables");
  for (size_t i = 0; i < exponents.size(); ++i)
    for (size_t j = i + 1; j < exponents.size(); ++j)
      if (exponents[i] == exponents[j])
        throw std::invalid_argument("duplicate exponents");
}

}  // namespace

QBasis qbasis(const std::vector<Exponent>& exponents) {
  check_input(exponents);
  const Eigen::Index K = exponents.front().coords().size();
  const Eigen::Index N = static_cast<Eigen::Index>(exponents.size());

  std::vector<Exponent> basis;
  std::vector<RatVector> red;                // RREF rows over symbol coords
  std::vector<std::vector<Rat>> comb;        // red[i] = sum comb[i][j]*basis[j]
  std::vector<Eigen::Index> pivcol;
  std::vector<std::vector<Rat>> rep_rows(N);

  for (Eigen::Index j = 0; j < N; ++j) {
    RatVector r = exponents[j].coords();
    std::vector<Rat> c(basis.size(), Rat(0));
    for (size_t i = 0; i < red.size(); ++i) {
      Rat f = r(pivcol[i]);
      if (f == 0) continue;
      r -= f * red[i];
      for (size_t t = 0; t < basis.size(); ++t) c[t] += f * comb[i][t];
    }
    bool zero = true;
    for (Eigen::Index t = 0; t < K; ++t)
      if (r(t) != 0) {
        zero = false;
        break;
      }
    if (zero) {
      rep_rows[j] = std::move(c);
      continue;
    }
    // new basis element: the exponent itself, in input order
    Eigen::Index p = 0;
    while (r(p) == 0) ++p;
    Rat inv = Rat(1) / r(p);
    RatVector red_new = inv * r;
    std::vector<Rat> comb_new(basis.size() + 1, Rat(0));
    for (size_t t = 0; t < basis.size(); ++t) comb_new[t] = -inv * c[t];
    comb_new[basis.size()] = inv;
    for (size_t i = 0; i < red.size(); ++i) {
      Rat f = red[i](p);
      if (f == 0) continue;
      red[i] -= f * red_new;
      comb[i].resize(basis.size() + 1, Rat(0));
      for (size_t t = 0; t <= basis.size(); ++t) comb[i][t] -= f * comb_new[t];
    }
    for (auto& cm : comb) cm.resize(basis.size() + 1, Rat(0));
    basis.push_back(exponents[j]);
    red.push_back(std::move(red_new));
    comb.push_back(std::move(comb_new));
    pivcol.push_back(p);
    std::vector<Rat> self(basis.size(), Rat(0));
    self.back() = 1;
    rep_rows[j] = std::move(self);
  }

  QBasis out;
  out.basis = std::move(basis);
  const Eigen::Index k = static_cast<Eigen::Index>(out.basis.size());
  out.rep = RatMatrix::Zero(N, k);
  for (Eigen::Index j = 0; j < N; ++j)
    for (size_t t = 0; t < rep_rows[j].size(); ++t)
      out.rep(j, static_cast<Eigen::Index>(t)) = rep_rows[j][t];
  return out;
}

IntegralBasis integral_basis(const std::vector<Exponent>& exponents) {
  check_input(exponents);
  const auto& table = exponents.front().table();
  const Eigen::Index K = exponents.front().coords().size();
  const Eigen::Index N = static_cast<Eigen::Index>(exponents.size());

  Int D = 1;
  for (const auto& e : exponents)
    for (Eigen::Index t = 0; t < K; ++t)
      mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), e.coords()(t).get_den_mpz_t());

  IntMatrix W(N, K);
  for (Eigen::Index j = 0; j < N; ++j)
    for (Eigen::Index t = 0; t < K; ++t) {
      Rat s = exponents[j].coords()(t) * Rat(D);
      W(j, t) = s.get_num();
    }

  IntMatrix H = hnf(W).H;
  std::vector<Eigen::Index> pivots;
  Eigen::Index r = 0;
  for (; r < N; ++r) {
    Eigen::Index p = -1;
    for (Eigen::Index t = 0; t < K; ++t)
      if (H(r, t) != 0) {
        p = t;
        break;
      }
    if (p < 0) break;
    pivots.push_back(p);
  }

  IntegralBasis out;
  for (Eigen::Index i = 0; i < r; ++i) {
    RatVector coords(K);
    for (Eigen::Index t = 0; t < K; ++t) coords(t) = make_rat(H(i, t), D);
    out.basis.emplace_back(table, std::move(coords));
  }
  // back-substitution at the HNF pivots; divisions are exact by membership
  // of each row of W in the Z-span of H
  out.rep = IntMatrix::Zero(N, r);
  for (Eigen::Index j = 0; j < N; ++j) {
    IntVector v = W.row(j).transpose();
    for (Eigen::Index i = 0; i < r; ++i) {
      Int q = v(pivots[i]) / H(i, pivots[i]);
      if (q * H(i, pivots[i]) != v(pivots[i]))
        throw std::logic_error("integral_basis: non-integral representation");
      out.rep(j, i) = q;
      for (Eigen::Index t = 0; t < K; ++t) v(t) -= q * H(i, t);
    }
    for (Eigen::Index t = 0; t < K; ++t)
      if (v(t) != 0)
        throw std::logic_error("integral_basis: residual after reduction");
  }
  return out;
}

std::vector<std::pair<int, IntegralBasis>> integral_basis_trace(
    const std::function<Exponent(int)>& generator, int n_max) {
  if (n_max < 1) throw std::invalid_argument("integral_basis_trace: n_max < 1");
  std::vector<std::pair<int, IntegralBasis>> out;
  std::vector<Exponent> prefix;
  for (int n = 1; n <= n_max; ++n) {
    prefix.push_back(generator(n));
    out.emplace_back(n, integral_basis(prefix));
  }
  return out;
}

}  // namespace apeq
