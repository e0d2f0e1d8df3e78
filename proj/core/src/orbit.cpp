#include <algorithm>
#include <set>
#include <stdexcept>

#include "ietx/dynamics.hpp"

namespace ietx {

namespace {

void check_unit(const Iet& t, const Scalar& x) {
  if (x.sign() < 0 || x >= t.one()) {
    throw std::invalid_argument("start point " + format_scalar(x) + " outside [0, 1)");
  }
}

const Scalar& nearest_interior_breakpoint(const Iet& t, const Scalar& x) {
  const auto bps = t.interior_breakpoints();
  auto it = std::lower_bound(bps.begin(), bps.end(), x);
  if (it == bps.end()) return bps.back();
  if (it == bps.begin()) return *it;
  auto prev = it - 1;
  return (x - *prev) <= (*it - x) ? *prev : *it;
}

}  // namespace

Orbit orbit(const Iet& t, const Scalar& x0, std::size_t n) {
  if (n == 0) throw std::invalid_argument("orbit length must be positive");
  Scalar x = rebase(x0, t.one());
  check_unit(t, x);
  Orbit out;
  out.points.reserve(n);
  out.points.push_back(x);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    if (!out.singular_step && t.near_interior_breakpoint(x)) {
      out.singular_step = step;
      if (t.backend() == Backend::fixed) break;
    }
    x = t.apply(x);
    out.points.push_back(x);
  }
  return out;
}

IdocVerdict idoc_check(const Iet& t, std::size_t depth) {
  if (depth == 0) throw std::invalid_argument("i.d.o.c. depth must be positive");
  IdocVerdict verdict{true, depth, std::nullopt};
  const auto bps = t.interior_breakpoints();
  std::vector<Scalar> current(bps.begin(), bps.end());
  for (std::size_t n = 1; n <= depth && !current.empty(); ++n) {
    for (std::size_t i = 0; i < current.size(); ++i) {
      current[i] = t.apply(current[i]);
      if (t.near_interior_breakpoint(current[i])) {
        verdict.pass = false;
        verdict.witness = IdocWitness{bps[i], n, nearest_interior_breakpoint(t, current[i])};
        return verdict;
      }
    }
  }
  return verdict;
}

PropertyPReport property_p_profile(const Iet& t, std::size_t n_max) {
  if (n_max == 0) throw std::invalid_argument("n_max must be positive");
  const Iet inverse = invert(t);
  const Scalar tol = t.tolerance();
  const Scalar zero = t.zero();

  std::set<Scalar> partition{t.zero(), t.one()};
  Scalar min_gap = t.one();
  const auto bps = t.interior_breakpoints();
  std::vector<Scalar> frontier(bps.begin(), bps.end());  // T^{-(n-1)}(d)

  PropertyPReport report;
  report.entries.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (!report.degenerate_from) {
      for (const auto& p : frontier) {
        auto hi = partition.lower_bound(p);
        if (*hi == p) continue;
        auto lo = std::prev(hi);
        Scalar left = p - *lo;
        Scalar right = *hi - p;
        if (left <= tol || right <= tol) {
          report.degenerate_from = n;
          break;
        }
        min_gap = std::min({min_gap, left, right});
        partition.insert(hi, p);
      }
      for (auto& p : frontier) p = inverse.apply(p);
    }
    Scalar eps = report.degenerate_from ? zero : min_gap;
    Scalar scaled = eps * Scalar::like(eps, static_cast<long>(n));
    report.entries.push_back({n, std::move(eps), std::move(scaled)});
  }
  report.min_scaled = report.entries.front().scaled;
  for (const auto& e : report.entries) report.min_scaled = std::min(report.min_scaled, e.scaled);
  report.last_scaled = report.entries.back().scaled;
  return report;
}

Scalar star_discrepancy(std::span<const Scalar> points) {
  if (points.empty()) throw std::invalid_argument("star discrepancy of an empty point set");
  std::vector<mpq_class> sorted;
  sorted.reserve(points.size());
  for (const auto& p : points) sorted.push_back(p.exact());
  std::sort(sorted.begin(), sorted.end());
  const mpz_class count(static_cast<unsigned long>(sorted.size()));
  mpq_class best(0);
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    mpq_class upper(mpz_class(static_cast<unsigned long>(i)), count);
    mpq_class lower(mpz_class(static_cast<unsigned long>(i - 1)), count);
    upper.canonicalize();
    lower.canonicalize();
    const mpq_class& x = sorted[i - 1];
    if (upper - x > best) best = upper - x;
    if (x - lower > best) best = x - lower;
  }
  if (points.front().is_rational()) return Scalar::from_rational(best);
  return Scalar::from_ratio(best, NumericsConfig{Backend::fixed, points.front().precision_bits()});
}

double minimality_heuristic(const Iet& t, const Scalar& x0, std::size_t n, std::size_t bins) {
  if (bins < 2) throw std::invalid_argument("minimality heuristic needs at least 2 bins");
  const Orbit o = orbit(t, x0, n);
  std::vector<bool> seen(bins, false);
  const Scalar scale = Scalar::like(t.one(), static_cast<long>(bins));
  std::size_t visited = 0;
  for (const auto& x : o.points) {
    const auto bin = static_cast<std::size_t>((x * scale).floor().get_ui());
    if (!seen[bin]) {
      seen[bin] = true;
      ++visited;
    }
  }
  return static_cast<double>(visited) / static_cast<double>(bins);
}

}  // namespace ietx
