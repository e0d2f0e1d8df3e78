#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ietx/iet.hpp"

namespace ietx {

// --- orbits ----------------------------------------------------------------

struct Orbit {
  std::vector<Scalar> points;  // x0, T x0, ...
  // First step n at which T had to be applied to a point on (fixed point:
  // within tolerance of) an interior breakpoint. Fixed-point orbits stop
  // there; rational orbits continue, the half-open convention settles the
  // branch exactly.
  std::optional<std::size_t> singular_step;
};

// (x0, T x0, ..., T^{n-1} x0). Throws std::invalid_argument for n = 0 or
// x0 outside [0, 1).
Orbit orbit(const Iet& t, const Scalar& x0, std::size_t n);

// --- Keane's infinite distinct orbit condition, to finite depth ------------

struct IdocWitness {
  Scalar breakpoint;  // d
  std::size_t step;   // n with T^n(d) = d'
  Scalar hit;         // d'
};

struct IdocVerdict {
  bool pass = true;
  std::size_t depth = 0;
  std::optional<IdocWitness> witness;
};

// PASS means no interior breakpoint reaches an interior breakpoint within
// `depth` forward steps. T is injective, so this also rules out collisions
// between two breakpoint orbits up to that depth.
IdocVerdict idoc_check(const Iet& t, std::size_t depth);

// --- Property P profile ----------------------------------------------------

struct PropertyPEntry {
  std::size_t n;
  Scalar min_gap;  // epsilon_n
  Scalar scaled;   // n * epsilon_n
};

struct PropertyPReport {
  std::vector<PropertyPEntry> entries;  // n = 1..n_max
  Scalar min_scaled;
  Scalar last_scaled;
  // Fixed point only: the step from which two partition points fell within
  // tolerance without coinciding; epsilon_n is reported as 0 from there.
  std::optional<std::size_t> degenerate_from;
};

// epsilon_n is the smallest cell of the partition of [0, 1) cut at 0 and at
// T^{-j}(d) for interior breakpoints d and 0 <= j < n. Coinciding points
// merge.
PropertyPReport property_p_profile(const Iet& t, std::size_t n_max);

// --- equidistribution --------------------------------------------------------

// D*_N = max_i max(i/N - x_(i), x_(i) - (i-1)/N) over the sorted points.
// Exact for rationals; rounded to the working precision for fixed point.
Scalar star_discrepancy(std::span<const Scalar> points);

// Fraction of the `bins` equal cells of [0, 1) visited by the first n points
// of the orbit of x0.
double minimality_heuristic(const Iet& t, const Scalar& x0, std::size_t n, std::size_t bins);

// --- Birkhoff sums -------------------------------------------------------

// f_k(x) = cos(2 pi k x) or g_k(x) = sin(2 pi k x); all have zero mean.
struct TestFunction {
  enum class Kind { cosine, sine };
  Kind kind = Kind::cosine;
  int frequency = 1;

  double operator()(double x) const;
  std::string name() const;
};

std::vector<TestFunction> default_test_functions(int max_frequency = 3);

// Evaluates every function of `family` at x, sharing one sincos.
void evaluate_family(std::span<const TestFunction> family, double x, std::span<double> out);

struct BirkhoffLadder {
  std::vector<std::uint64_t> n;        // ladder points actually reached
  std::vector<double> sums;            // S_N
  std::vector<double> running_max_abs; // max_{k<=N} |S_k|
  std::optional<std::size_t> singular_step;
};

BirkhoffLadder birkhoff_ladder(const Iet& t, const TestFunction& f, const Scalar& x0,
                               std::span<const std::uint64_t> ladder);

// 2^min_exp, ..., 2^max_exp.
std::vector<std::uint64_t> dyadic_ladder(int min_exp, int max_exp);

// --- deviation exponent ------------------------------------------------------

struct DeviationFit {
  double beta_hat = 0.0;
  double r_squared = 1.0;
  std::size_t window_begin = 0;  // ladder indices [begin, end)
  std::size_t window_end = 0;
  bool degenerate = false;  // every sum was zero
};

// Least-squares slope of log max(1, max_{k<=N} |S_k|) against log N over the
// top half of the ladder. `abs_sums[f][j]` is |S_{ladder[j]}| (or a running
// maximum) for function f; the maximum over functions and the cumulative
// maximum along the ladder are taken here. Needs at least 4 ladder points.
DeviationFit deviation_exponent_fit(std::span<const std::uint64_t> ladder,
                                    std::span<const std::vector<double>> abs_sums);

// --- unique-ergodicity diagnostic ----------------------------------------------

struct DiagnosticConfig {
  std::vector<Scalar> starts;           // rebased onto the IET's backend
  std::vector<std::uint64_t> ladder;    // strictly increasing
  int max_frequency = 3;
  std::size_t bins = 1000;
  double discrepancy_threshold = 0.01;
  double spread_threshold = 0.01;

  // Starts {1/7, 1/3, 2/3, 0.123456789}, ladder 2^10..2^20.
  static DiagnosticConfig defaults();
  void validate() const;
};

struct OrbitDiagnostics {
  Scalar start;
  std::vector<std::uint64_t> ladder;            // reached ladder points
  std::vector<Scalar> star_discrepancy;         // D*_N
  std::vector<std::vector<double>> sums;        // [ladder][function] S_N
  std::vector<std::vector<double>> running_max; // [ladder][function] max_{k<=N} |S_k|
  std::optional<std::size_t> singular_step;
  std::size_t visited_bins = 0;
};

struct UeSummary {
  std::size_t usable_starts = 0;
  std::size_t singular_starts = 0;
  std::uint64_t n_max = 0;
  double max_star_discrepancy = 1.0;  // over usable starts, at N_max
  double max_birkhoff_deviation = 0.0;  // max |S_N| / N at N_max
  double spread = 0.0;  // max over functions of the range of S_N / N across starts
  double occupancy = 0.0;  // minimality heuristic of the first usable start
  bool convergent = false;
};

struct UeDiagnostic {
  std::vector<TestFunction> functions;
  std::vector<OrbitDiagnostics> orbits;
  UeSummary summary;
  std::optional<DeviationFit> fit;
};

UeDiagnostic ue_diagnostic(const Iet& t, const DiagnosticConfig& config);

}  // namespace ietx
