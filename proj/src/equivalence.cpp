#include "apeq/equivalence.hpp"

#include <algorithm>

namespace apeq {

namespace {

struct SupportData {
  std::vector<Exponent> support;
  std::vector<ExactCoefficient> a, b;
};

// Union of the two supports: f1's terms in declaration order, then f2's
// extras in f2's declaration order; absent coefficients are zero.
SupportData build_support(const ExponentialSum& f1, const ExponentialSum& f2) {
  if (f1.mode() != CoeffMode::Exact || f2.mode() != CoeffMode::Exact)
    throw NonExactInput("equivalence requires exact-mode sums");
  if (f1.table() != f2.table())
    throw MixedSymbolTables("sums over different symbol tables");
  SupportData d;
  for (const auto& t : f1.terms()) {
    d.support.push_back(t.exponent);
    d.a.push_back(t.exact);
    d.b.emplace_back();
  }
  for (const auto& t : f2.terms()) {
    auto it = std::find(d.support.begin(), d.support.end(), t.exponent);
    if (it == d.support.end()) {
      d.support.push_back(t.exponent);
      d.a.emplace_back();
      d.b.push_back(t.exact);
    } else {
      d.b[static_cast<size_t>(it - d.support.begin())] = t.exact;
    }
  }
  return d;
}

// Valid mod-1 reduction of a witness only when it preserves every congruence
// (automatic for integer representation matrices, not in general).
std::vector<Rat> reduce_witness(const QBasis& qb, const std::vector<Rat>& y,
                                const std::vector<Rat>& q) {
  std::vector<Rat> red(y.size());
  bool changed = false;
  for (size_t i = 0; i < y.size(); ++i) {
    red[i] = mod1(y[i]);
    if (red[i] != y[i]) changed = true;
  }
  if (!changed) return y;
  for (Eigen::Index j = 0; j < qb.rep.rows(); ++j) {
    Rat psi(0);
    for (Eigen::Index k = 0; k < qb.rep.cols(); ++k)
      psi += qb.rep(j, k) * red[static_cast<size_t>(k)];
    if (mod1(psi - q[static_cast<size_t>(j)]) != 0) return y;
  }
  return red;
}

}  // namespace

EquivalenceVerdict star_equivalent(const ExponentialSum& f1,
                                   const ExponentialSum& f2) {
  SupportData d = build_support(f1, f2);
  EquivalenceVerdict verdict;
  verdict.phases.support = d.support;

  for (size_t j = 0; j < d.support.size(); ++j)
    if (d.a[j].modulus != d.b[j].modulus) {
      verdict.modulus_mismatch = j;
      return verdict;
    }

  const size_t N = d.support.size();
  verdict.phases.q.resize(N);
  for (size_t j = 0; j < N; ++j)
    verdict.phases.q[j] = mod1(d.b[j].phase_turns - d.a[j].phase_turns);
  const auto& q = verdict.phases.q;

  if (N == 0) {  // both sums empty
    verdict.equivalent = true;
    verdict.witness = Witness{};
    return verdict;
  }

  QBasis qb = qbasis(d.support);
  const Eigen::Index Nn = qb.rep.rows();
  const Eigen::Index k = qb.rep.cols();

  // Column-scale the representation to integers: M = R * diag(dcol).
  std::vector<Int> dcol(static_cast<size_t>(k), Int(1));
  IntMatrix M(Nn, std::max<Eigen::Index>(k, 1));
  M.setZero();
  for (Eigen::Index j = 0; j < k; ++j) {
    Int& dc = dcol[static_cast<size_t>(j)];
    for (Eigen::Index i = 0; i < Nn; ++i)
      mpz_lcm(dc.get_mpz_t(), dc.get_mpz_t(), qb.rep(i, j).get_den_mpz_t());
    for (Eigen::Index i = 0; i < Nn; ++i)
      M(i, j) = Rat(qb.rep(i, j) * Rat(dc)).get_num();
  }

  // T*M = H. Writing y = diag(dcol)*x, the congruences R*y == q (mod 1)
  // become H*x = T*q + w with free w in Z^N: the zero rows of H decide
  // (lower transform rows span the relation lattice), and the pivotal top
  // block solves for x by back substitution with w there set to zero.
  auto [H, T] = hnf(M);
  Eigen::Index r = 0;
  auto row_zero = [&](Eigen::Index i) {
    for (Eigen::Index j = 0; j < H.cols(); ++j)
      if (H(i, j) != 0) return false;
    return true;
  };
  while (r < Nn && !row_zero(r)) ++r;
  if (r != k && k > 0)
    throw std::logic_error("star_equivalent: basis representation rank defect");

  RatVector c(Nn);
  for (Eigen::Index i = 0; i < Nn; ++i) {
    Rat s(0);
    for (Eigen::Index j = 0; j < Nn; ++j)
      s += Rat(T(i, j)) * q[static_cast<size_t>(j)];
    c(i) = s;
  }
  bool violated = false;
  for (Eigen::Index i = r; i < Nn && !violated; ++i)
    if (!is_integer(c(i))) violated = true;
  if (violated) {
    // certificate from the canonical relation basis: first violated row
    IntMatrix U = kernel_lattice(qb.rep);
    for (Eigen::Index i = 0; i < U.rows(); ++i) {
      Rat s(0);
      for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(N); ++j)
        s += Rat(U(i, j)) * q[static_cast<size_t>(j)];
      if (!is_integer(s)) {
        Certificate cert;
        cert.relation = U.row(i).transpose();
        cert.defect = mod1(s);
        verdict.certificate = std::move(cert);
        return verdict;
      }
    }
    throw std::logic_error("star_equivalent: violation without violated row");
  }

  // back substitution on the k x k pivotal top block of H
  std::vector<Rat> x(static_cast<size_t>(k), Rat(0));
  for (Eigen::Index i = k - 1; i >= 0; --i) {
    Rat s = c(i);
    for (Eigen::Index j = i + 1; j < k; ++j)
      s -= Rat(H(i, j)) * x[static_cast<size_t>(j)];
    x[static_cast<size_t>(i)] = s / Rat(H(i, i));
  }
  std::vector<Rat> y(static_cast<size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i)
    y[static_cast<size_t>(i)] =
        x[static_cast<size_t>(i)] * Rat(dcol[static_cast<size_t>(i)]);

  // exact self-check: R*y - q must be an integer vector
  for (size_t j = 0; j < N; ++j) {
    Rat psi(0);
    for (size_t i = 0; i < static_cast<size_t>(k); ++i)
      psi += qb.rep(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) * y[i];
    if (!is_integer(psi - q[j]))
      throw std::logic_error("star_equivalent: witness construction failed");
  }
  verdict.equivalent = true;
  verdict.witness = Witness{qb, reduce_witness(qb, y, q)};
  return verdict;
}

std::vector<std::pair<size_t, EquivalenceVerdict>> equivalence_trace(
    const ExponentialSum& f1, const ExponentialSum& f2, size_t n_max) {
  std::vector<std::pair<size_t, EquivalenceVerdict>> out;
  const size_t cap = std::min(n_max, std::max(f1.size(), f2.size()));
  for (size_t n = 1; n <= cap; ++n) {
    ExponentialSum t1 = f1.truncate(std::min(n, f1.size()));
    ExponentialSum t2 = f2.truncate(std::min(n, f2.size()));
    out.emplace_back(n, star_equivalent(t1, t2));
  }
  return out;
}

EquivalenceVerdict bohr_equivalent_finite(const ExponentialSum& f1,
                                          const ExponentialSum& f2) {
  // finite support: one psi on the full span restricts to every V_n
  return star_equivalent(f1, f2);
}

bool verify_verdict(const EquivalenceVerdict& verdict, const ExponentialSum& f1,
                    const ExponentialSum& f2) {
  SupportData d = build_support(f1, f2);
  int populated = (verdict.witness ? 1 : 0) + (verdict.certificate ? 1 : 0) +
                  (verdict.modulus_mismatch ? 1 : 0);
  if (populated != 1) throw VerdictMismatch("verdict fields inconsistent");
  if (verdict.equivalent != verdict.witness.has_value())
    throw VerdictMismatch("equivalent flag does not match witness presence");

  if (verdict.modulus_mismatch) {
    size_t j = *verdict.modulus_mismatch;
    if (j >= d.support.size() || d.a[j].modulus == d.b[j].modulus)
      throw VerdictMismatch("claimed modulus mismatch does not hold");
    return true;
  }

  const size_t N = d.support.size();
  std::vector<Rat> q(N);
  for (size_t j = 0; j < N; ++j) {
    if (d.a[j].modulus != d.b[j].modulus)
      throw VerdictMismatch("undeclared modulus mismatch");
    q[j] = mod1(d.b[j].phase_turns - d.a[j].phase_turns);
  }

  if (verdict.certificate) {
    const auto& cert = *verdict.certificate;
    if (cert.relation.size() != static_cast<Eigen::Index>(N))
      throw VerdictMismatch("certificate relation has wrong length");
    const Eigen::Index K = N ? d.support.front().coords().size() : 0;
    for (Eigen::Index t = 0; t < K; ++t) {
      Rat s(0);
      for (size_t j = 0; j < N; ++j)
        s += Rat(cert.relation(static_cast<Eigen::Index>(j))) *
             d.support[j].coords()(t);
      if (s != 0) throw VerdictMismatch("certificate is not a relation");
    }
    Rat defect(0);
    for (size_t j = 0; j < N; ++j)
      defect += Rat(cert.relation(static_cast<Eigen::Index>(j))) * q[j];
    defect = mod1(defect);
    if (defect == 0 || defect != cert.defect)
      throw VerdictMismatch("certificate defect does not refute");
    return true;
  }

  // witness case: b_j = a_j e^{i psi(lambda_j)} re-derived in turn arithmetic
  const auto& w = *verdict.witness;
  if (N == 0) return true;
  if (w.basis.rep.rows() != static_cast<Eigen::Index>(N) ||
      w.y.size() != w.basis.basis.size())
    throw VerdictMismatch("witness dimensions do not match support");
  const Eigen::Index K = d.support.front().coords().size();
  for (size_t j = 0; j < N; ++j) {
    // representation row must reproduce the exponent's coordinates
    for (Eigen::Index t = 0; t < K; ++t) {
      Rat s(0);
      for (size_t i = 0; i < w.basis.basis.size(); ++i)
        s += w.basis.rep(static_cast<Eigen::Index>(j),
                         static_cast<Eigen::Index>(i)) *
             w.basis.basis[i].coords()(t);
      if (s != d.support[j].coords()(t))
        throw VerdictMismatch("witness basis does not represent the support");
    }
    Rat psi(0);
    for (size_t i = 0; i < w.y.size(); ++i)
      psi += w.basis.rep(static_cast<Eigen::Index>(j),
                         static_cast<Eigen::Index>(i)) *
             w.y[i];
    ExactCoefficient twisted(d.a[j].modulus, d.a[j].phase_turns + psi);
    if (!(twisted == d.b[j]))
      throw VerdictMismatch("witness does not transform f1 into f2");
  }
  return true;
}

}  // namespace apeq
