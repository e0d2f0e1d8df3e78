#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "ietx/dynamics.hpp"
#include "orbit_engine.hpp"

namespace ietx {

double TestFunction::operator()(double x) const {
  const double angle = 2.0 * std::numbers::pi * frequency * x;
  return kind == Kind::cosine ? std::cos(angle) : std::sin(angle);
}

std::string TestFunction::name() const {
  return std::string(kind == Kind::cosine ? "cos" : "sin") + "(2pi*" + std::to_string(frequency) + "x)";
}

std::vector<TestFunction> default_test_functions(int max_frequency) {
  if (max_frequency < 1) throw std::invalid_argument("max_frequency must be at least 1");
  std::vector<TestFunction> out;
  for (int k = 1; k <= max_frequency; ++k) {
    out.push_back({TestFunction::Kind::cosine, k});
    out.push_back({TestFunction::Kind::sine, k});
  }
  return out;
}

void evaluate_family(std::span<const TestFunction> family, double x, std::span<double> out) {
  int top = 0;
  for (const auto& f : family) top = std::max(top, f.frequency);
  const double angle = 2.0 * std::numbers::pi * x;
  const std::complex<double> base(std::cos(angle), std::sin(angle));
  // e^{2 pi i k x} for k = 1..top by repeated multiplication; top is small.
  std::array<std::complex<double>, 16> powers{};
  if (top > static_cast<int>(powers.size())) {
    for (std::size_t i = 0; i < family.size(); ++i) out[i] = family[i](x);
    return;
  }
  powers[0] = base;
  for (int k = 1; k < top; ++k) powers[static_cast<std::size_t>(k)] = powers[static_cast<std::size_t>(k - 1)] * base;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& p = powers[static_cast<std::size_t>(family[i].frequency - 1)];
    out[i] = family[i].kind == TestFunction::Kind::cosine ? p.real() : p.imag();
  }
}

std::vector<std::uint64_t> dyadic_ladder(int min_exp, int max_exp) {
  if (min_exp < 0 || max_exp < min_exp || max_exp > 40) {
    throw std::invalid_argument("bad dyadic ladder exponents");
  }
  std::vector<std::uint64_t> out;
  for (int e = min_exp; e <= max_exp; ++e) out.push_back(std::uint64_t{1} << e);
  return out;
}

namespace {

void check_ladder(std::span<const std::uint64_t> ladder) {
  if (ladder.empty()) throw std::invalid_argument("ladder is empty");
  if (ladder.front() == 0) throw std::invalid_argument("ladder entries must be positive");
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (ladder[i] <= ladder[i - 1]) throw std::invalid_argument("ladder must be strictly increasing");
  }
}

}  // namespace

BirkhoffLadder birkhoff_ladder(const Iet& t, const TestFunction& f, const Scalar& x0,
                               std::span<const std::uint64_t> ladder) {
  check_ladder(ladder);
  Scalar x = rebase(x0, t.one());
  if (x.sign() < 0 || x >= t.one()) throw std::invalid_argument("start point outside [0, 1)");
  BirkhoffLadder out;
  double sum = 0.0;
  double running = 0.0;
  std::size_t next = 0;
  const std::uint64_t n_max = ladder.back();
  for (std::uint64_t step = 0; step < n_max; ++step) {
    sum += f(unit_to_double(x));
    running = std::max(running, std::abs(sum));
    if (step + 1 == ladder[next]) {
      out.n.push_back(ladder[next]);
      out.sums.push_back(sum);
      out.running_max_abs.push_back(running);
      ++next;
    }
    if (step + 1 == n_max) break;
    if (t.near_interior_breakpoint(x)) {
      out.singular_step = static_cast<std::size_t>(step);
      if (t.backend() == Backend::fixed) break;
    }
    x = t.apply(x);
  }
  return out;
}

DeviationFit deviation_exponent_fit(std::span<const std::uint64_t> ladder,
                                    std::span<const std::vector<double>> abs_sums) {
  check_ladder(ladder);
  if (ladder.size() < 4) throw std::invalid_argument("deviation fit needs at least 4 ladder points");
  if (abs_sums.empty()) throw std::invalid_argument("deviation fit needs at least one function");
  const std::size_t n = ladder.size();

  std::vector<double> envelope(n, 0.0);
  bool all_zero = true;
  for (const auto& series : abs_sums) {
    if (series.size() != n) throw std::invalid_argument("sum series length differs from the ladder");
    for (std::size_t j = 0; j < n; ++j) {
      const double v = std::abs(series[j]);
      if (v != 0.0) all_zero = false;
      envelope[j] = std::max(envelope[j], v);
    }
  }
  for (std::size_t j = 1; j < n; ++j) envelope[j] = std::max(envelope[j], envelope[j - 1]);

  DeviationFit fit;
  fit.window_end = n;
  fit.window_begin = n / 2;  // top half, ceil(n/2) points
  if (all_zero) {
    fit.degenerate = true;
    fit.beta_hat = 0.0;
    fit.r_squared = 1.0;
    return fit;
  }

  const auto count = static_cast<double>(fit.window_end - fit.window_begin);
  double mx = 0.0, my = 0.0;
  for (std::size_t j = fit.window_begin; j < fit.window_end; ++j) {
    mx += std::log(static_cast<double>(ladder[j]));
    my += std::log(std::max(1.0, envelope[j]));
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t j = fit.window_begin; j < fit.window_end; ++j) {
    const double dx = std::log(static_cast<double>(ladder[j])) - mx;
    const double dy = std::log(std::max(1.0, envelope[j])) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.beta_hat = sxy / sxx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

DiagnosticConfig DiagnosticConfig::defaults() {
  DiagnosticConfig c;
  c.starts = {Scalar::rational(1, 7), Scalar::rational(1, 3), Scalar::rational(2, 3),
              Scalar::rational(123456789, 1000000000)};
  c.ladder = dyadic_ladder(10, 20);
  return c;
}

void DiagnosticConfig::validate() const {
  if (starts.size() < 2) throw std::invalid_argument("diagnostic needs at least 2 starts");
  for (std::size_t i = 0; i < starts.size(); ++i) {
    for (std::size_t j = i + 1; j < starts.size(); ++j) {
      if (starts[i].exact() == starts[j].exact()) throw std::invalid_argument("diagnostic starts must be distinct");
    }
  }
  check_ladder(ladder);
  if (bins < 2) throw std::invalid_argument("bins must be at least 2");
  if (max_frequency < 1) throw std::invalid_argument("max_frequency must be at least 1");
}

namespace detail {

OrbitDiagnostics trace_generic(const Iet& t, const Scalar& x0, std::span<const std::uint64_t> ladder,
                               std::span<const TestFunction> family, std::size_t bins) {
  OrbitDiagnostics out;
  out.start = x0;
  const std::size_t nf = family.size();
  std::vector<double> values(nf), sums(nf, 0.0), running(nf, 0.0);
  std::vector<bool> seen(bins, false);
  const Scalar scale = Scalar::like(t.one(), static_cast<long>(bins));

  std::vector<Scalar> points;
  points.reserve(static_cast<std::size_t>(ladder.back()));
  Scalar x = x0;
  std::size_t next = 0;
  const std::uint64_t n_max = ladder.back();
  for (std::uint64_t step = 0; step < n_max; ++step) {
    points.push_back(x);
    const auto bin = static_cast<std::size_t>((x * scale).floor().get_ui());
    if (!seen[bin]) {
      seen[bin] = true;
      ++out.visited_bins;
    }
    evaluate_family(family, unit_to_double(x), values);
    for (std::size_t f = 0; f < nf; ++f) {
      sums[f] += values[f];
      running[f] = std::max(running[f], std::abs(sums[f]));
    }
    if (step + 1 == ladder[next]) {
      out.ladder.push_back(ladder[next]);
      out.star_discrepancy.push_back(star_discrepancy(points));
      out.sums.push_back(sums);
      out.running_max.push_back(running);
      ++next;
    }
    if (step + 1 == n_max) break;
    if (t.near_interior_breakpoint(x)) {
      out.singular_step = static_cast<std::size_t>(step);
      break;
    }
    x = t.apply(x);
  }
  return out;
}

}  // namespace detail

UeDiagnostic ue_diagnostic(const Iet& t, const DiagnosticConfig& config) {
  config.validate();
  UeDiagnostic out;
  out.functions = default_test_functions(config.max_frequency);
  const std::uint64_t n_max = config.ladder.back();

  for (const auto& s : config.starts) {
    Scalar x0 = rebase(s, t.one());
    if (x0.sign() < 0 || x0 >= t.one()) throw std::invalid_argument("diagnostic start outside [0, 1)");
    auto fast = detail::trace_fixed(t, x0, config.ladder, out.functions, config.bins);
    out.orbits.push_back(fast ? std::move(*fast)
                              : detail::trace_generic(t, x0, config.ladder, out.functions, config.bins));
  }

  UeSummary& sum = out.summary;
  sum.n_max = n_max;
  const std::size_t nf = out.functions.size();
  std::vector<double> lo(nf, INFINITY), hi(nf, -INFINITY);
  std::vector<std::vector<double>> envelopes;  // per (start, function) running maxima
  bool first_usable = true;
  sum.max_star_discrepancy = 0.0;
  for (const auto& o : out.orbits) {
    if (o.singular_step || o.ladder.size() != config.ladder.size()) {
      ++sum.singular_starts;
      continue;
    }
    ++sum.usable_starts;
    if (first_usable) {
      sum.occupancy = static_cast<double>(o.visited_bins) / static_cast<double>(config.bins);
      first_usable = false;
    }
    sum.max_star_discrepancy = std::max(sum.max_star_discrepancy, o.star_discrepancy.back().to_double());
    const auto& last = o.sums.back();
    for (std::size_t f = 0; f < nf; ++f) {
      const double avg = last[f] / static_cast<double>(n_max);
      sum.max_birkhoff_deviation = std::max(sum.max_birkhoff_deviation, std::abs(avg));
      lo[f] = std::min(lo[f], avg);
      hi[f] = std::max(hi[f], avg);
      std::vector<double> series;
      series.reserve(o.running_max.size());
      for (const auto& row : o.running_max) series.push_back(row[f]);
      envelopes.push_back(std::move(series));
    }
  }
  if (sum.usable_starts == 0) {
    sum.max_star_discrepancy = 1.0;
    sum.convergent = false;
    return out;
  }
  for (std::size_t f = 0; f < nf; ++f) sum.spread = std::max(sum.spread, hi[f] - lo[f]);
  sum.convergent = sum.max_star_discrepancy < config.discrepancy_threshold &&
                   sum.spread < config.spread_threshold;
  if (config.ladder.size() >= 4) out.fit = deviation_exponent_fit(config.ladder, envelopes);
  return out;
}

}  // namespace ietx
