#include "apeq/valuesets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "apeq/equivalence.hpp"

namespace apeq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using cplx = std::complex<double>;

// Sum of principal argument increments along one boundary edge, subdividing
// until every increment is below pi/2 (bounds the discretization error of the
// winding number under the margin guard).
struct BoundaryWalk {
  const ExponentialSum& f;
  cplx w;
  double margin = std::numeric_limits<double>::infinity();

  double edge(cplx s0, cplx s1, int depth = 0) {
    cplx v0 = f.evaluate(s0) - w, v1 = f.evaluate(s1) - w;
    margin = std::min({margin, std::abs(v0), std::abs(v1)});
    return segment(s0, v0, s1, v1, depth);
  }

  double segment(cplx s0, cplx v0, cplx s1, cplx v1, int depth) {
    double dphi = std::arg(v1 / v0);
    // a non-finite increment means a sample hit the target; the caller's
    // margin guard rejects the walk, so the value returned here is moot
    if (!std::isfinite(dphi)) return 0.0;
    if (std::abs(dphi) < std::numbers::pi / 2 || depth > 48) return dphi;
    cplx sm = 0.5 * (s0 + s1);
    cplx vm = f.evaluate(sm) - w;
    margin = std::min(margin, std::abs(vm));
    return segment(s0, v0, sm, vm, depth + 1) +
           segment(sm, vm, s1, v1, depth + 1);
  }
};

std::optional<cplx> newton_root(const ExponentialSum& f, cplx w, cplx seed,
                                double stop) {
  cplx z = seed;
  try {
    for (int it = 0; it < 80; ++it) {
      cplx fv = f.evaluate(z) - w;
      if (std::abs(fv) < stop) return z;
      cplx dv = f.derivative(z);
      if (std::abs(dv) < 1e-14) return std::nullopt;
      cplx next = z - fv / dv;
      if (!std::isfinite(next.real()) || !std::isfinite(next.imag()))
        return std::nullopt;
      if (std::abs(next - z) < stop * 1e-2) return next;
      z = next;
    }
  } catch (const MagnitudeOverflow&) {
    // an iterate escaped the representable strip: plain divergence
  }
  return std::nullopt;
}

// bit-stable uniform in [0,1) regardless of platform distribution details
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

AttainmentReport attainment_count(const ExponentialSum& f, cplx w,
                                  const Rectangle& rect,
                                  const ValueSetTolerances& tol) {
  if (!rect.valid()) throw std::invalid_argument("attainment_count: bad rectangle");
  AttainmentReport rep;
  rep.target = w;
  rep.rect = rect;
  rep.tolerances = tol;

  const cplx c0(rect.sigma_lo, rect.t_lo), c1(rect.sigma_hi, rect.t_lo),
      c2(rect.sigma_hi, rect.t_hi), c3(rect.sigma_lo, rect.t_hi);
  BoundaryWalk walk{f, w};
  // seed each edge with enough initial segments for oscillatory sums
  auto walk_edge = [&](cplx a, cplx b) {
    double len = std::abs(b - a);
    int pieces = std::max(8, static_cast<int>(len * f.max_abs_exponent() * 4));
    double total = 0;
    for (int i = 0; i < pieces; ++i)
      total += walk.edge(a + (b - a) * (static_cast<double>(i) / pieces),
                         a + (b - a) * (static_cast<double>(i + 1) / pieces));
    return total;
  };
  double winding =
      walk_edge(c0, c1) + walk_edge(c1, c2) + walk_edge(c2, c3) + walk_edge(c3, c0);
  rep.boundary_margin = walk.margin;
  if (walk.margin < tol.boundary_guard)
    throw BoundaryTooClose("boundary sample within guard distance of target",
                           10 * tol.boundary_guard +
                               1e-3 * std::min(rect.sigma_hi - rect.sigma_lo,
                                               rect.t_hi - rect.t_lo));
  rep.count = static_cast<int>(std::lround(winding / kTwoPi));

  // root location: Newton from an interior seed grid, deduplicated
  int ns = 12, nt = std::max(12, static_cast<int>((rect.t_hi - rect.t_lo) *
                                                  f.max_abs_exponent()));
  nt = std::min(nt, 200);
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nt; ++j) {
      cplx seed(rect.sigma_lo + (rect.sigma_hi - rect.sigma_lo) * (i + 0.5) / ns,
                rect.t_lo + (rect.t_hi - rect.t_lo) * (j + 0.5) / nt);
      auto r = newton_root(f, w, seed, tol.newton_stop);
      if (!r) continue;
      if (r->real() < rect.sigma_lo || r->real() > rect.sigma_hi ||
          r->imag() < rect.t_lo || r->imag() > rect.t_hi)
        continue;
      if (std::abs(f.evaluate(*r) - w) > 1e-9) continue;
      bool dup = false;
      for (const auto& known : rep.roots)
        if (std::abs(known - *r) < tol.dedup_radius) dup = true;
      if (!dup) rep.roots.push_back(*r);
    }
  std::sort(rep.roots.begin(), rep.roots.end(), [](cplx a, cplx b) {
    return a.imag() != b.imag() ? a.imag() < b.imag() : a.real() < b.real();
  });
  return rep;
}

AttainResult attains(const ExponentialSum& f, cplx w, double sigma_lo,
                     double sigma_hi, double t_cap, double tol) {
  if (tol <= 0) throw std::invalid_argument("attains: tol must be positive");
  AttainResult res;
  double best = std::numeric_limits<double>::infinity();

  auto search_slab = [&](double t0, double t1) -> std::optional<cplx> {
    const int ns = 6, nt = 9;
    for (int i = 0; i < ns; ++i)
      for (int j = 0; j < nt; ++j) {
        cplx seed(sigma_lo + (sigma_hi - sigma_lo) * (i + 0.5) / ns,
                  t0 + (t1 - t0) * (j + 0.5) / nt);
        auto r = newton_root(f, w, seed, 1e-12);
        if (!r) continue;
        if (r->real() >= sigma_lo && r->real() <= sigma_hi &&
            std::abs(r->imag()) <= t_cap) {
          double resid = std::abs(f.evaluate(*r) - w);
          best = std::min(best, resid);
          if (resid <= tol) return r;
        }
      }
    return std::nullopt;
  };

  double prev = 0.0;
  for (double T = 16; prev < t_cap; T *= 2) {
    T = std::min(T, t_cap);
    double lo = prev;  // only the freshly added region
    for (double base = lo; base < T; base += 8) {
      double hi = std::min(base + 8, T);
      // positive slab, then its mirror
      if (auto r = search_slab(base, hi)) {
        res.point = r;
        res.residual = std::abs(f.evaluate(*r) - w);
        res.explored_T = T;
        return res;
      }
      if (auto r = search_slab(-hi, -base)) {
        res.point = r;
        res.residual = std::abs(f.evaluate(*r) - w);
        res.explored_T = T;
        return res;
      }
    }
    res.explored_T = T;
    prev = T;
  }
  res.residual = best;
  return res;
}

ValueSetComparison value_set_compare(const ExponentialSum& f1,
                                     const ExponentialSum& f2, double sigma_lo,
                                     double sigma_hi, int n_samples,
                                     std::uint64_t seed, double tol,
                                     double t_cap) {
  if (n_samples < 1)
    throw std::invalid_argument("value_set_compare: n_samples < 1");
  ValueSetComparison cmp;
  cmp.sigma_lo = sigma_lo;
  cmp.sigma_hi = sigma_hi;
  cmp.n_samples = n_samples;
  cmp.seed = seed;
  cmp.tol = tol;
  cmp.t_cap = t_cap;

  std::mt19937_64 rng(seed);
  auto run_direction = [&](const ExponentialSum& from, const ExponentialSum& to,
                           std::vector<ValueSetComparison::Sample>& out) {
    int found = 0;
    double worst = 0.0;
    for (int i = 0; i < n_samples; ++i) {
      ValueSetComparison::Sample smp;
      double sg = sigma_lo + (sigma_hi - sigma_lo) * uniform01(rng);
      double t = -100.0 + 200.0 * uniform01(rng);
      smp.s = {sg, t};
      smp.w = from.evaluate(smp.s);
      AttainResult r = attains(to, smp.w, sigma_lo, sigma_hi, t_cap, tol);
      smp.found = r.point.has_value();
      smp.residual = r.residual;
      smp.explored_T = r.explored_T;
      if (smp.found) {
        smp.found_s = *r.point;
        ++found;
      } else {
        worst = std::max(worst, r.residual);
      }
      out.push_back(smp);
    }
    return std::pair<double, double>(
        static_cast<double>(found) / n_samples, worst);
  };

  auto [fr12, w12] = run_direction(f1, f2, cmp.values_of_f1_in_f2);
  cmp.fraction_f1_in_f2 = fr12;
  cmp.worst_residual_f1_in_f2 = w12;
  auto [fr21, w21] = run_direction(f2, f1, cmp.values_of_f2_in_f1);
  cmp.fraction_f2_in_f1 = fr21;
  cmp.worst_residual_f2_in_f1 = w21;
  return cmp;
}

ExperimentReport equivalence_principle_experiment(
    const ExponentialSum& f1, const ExponentialSum& f2, double sigma_lo,
    double sigma_hi, int n_substrips, int samples_per_substrip,
    std::uint64_t seed, double tol, double t_cap) {
  if (n_substrips < 1)
    throw std::invalid_argument("experiment: n_substrips < 1");
  ExperimentReport rep;
  // overlapping cover: each substrip spans two consecutive half-steps
  double half = (sigma_hi - sigma_lo) / (n_substrips + 1);
  bool all_full = true;
  for (int i = 0; i < n_substrips; ++i) {
    double lo = sigma_lo + half * i;
    double hi = lo + 2 * half;
    auto c = value_set_compare(f1, f2, lo, hi, samples_per_substrip,
                               seed + static_cast<std::uint64_t>(i), tol, t_cap);
    if (c.fraction_f1_in_f2 < 1.0 || c.fraction_f2_in_f1 < 1.0) all_full = false;
    rep.substrips.push_back(std::move(c));
  }
  rep.consistent_with_equivalence = all_full;
  if (f1.mode() == CoeffMode::Exact && f2.mode() == CoeffMode::Exact &&
      f1.table() == f2.table())
    rep.exact_equivalent = star_equivalent(f1, f2).equivalent;
  return rep;
}

}  // namespace apeq
