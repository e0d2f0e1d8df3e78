#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ietx/composition.hpp"
#include "ietx/dynamics.hpp"
#include "ietx/sampling.hpp"
#include "ietx/serialization.hpp"

namespace ietx {

struct SamplerConfig {
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  // Every sample uses this alpha instead of drawing one.
  std::optional<Scalar> forced_alpha;
};

struct ExperimentConfig {
  CompositionSpec spec;
  NumericsConfig numerics{};
  SamplerConfig sampler{};
  DiagnosticConfig diagnostics = DiagnosticConfig::defaults();
  std::size_t idoc_depth = 10000;
  // Permits coefficients of both signs (sum must stay nonzero).
  bool mixed_sign = false;
  // 0 means std::thread::hardware_concurrency().
  std::size_t workers = 1;

  void validate() const;
  // FNV-1a of the canonical JSON of everything that affects results
  // (not the worker count).
  std::string hash() const;
  nlohmann::json to_json() const;
};

struct SweepRow {
  std::size_t index = 0;
  Scalar alpha;
  std::size_t intervals = 0;  // size of the canonical S_alpha
  std::uint64_t n_max = 0;
  double star_discrepancy = 1.0;
  double max_birkhoff_deviation = 0.0;
  double spread = 0.0;
  std::optional<double> beta_hat;
  double r_squared = 0.0;
  bool idoc_pass = false;
  std::optional<std::size_t> idoc_step;
  double occupancy = 0.0;
  std::size_t usable_starts = 0;
  std::size_t singular_starts = 0;
  bool convergent = false;
};

struct Quantiles {
  double median = 0.0;
  double p95 = 0.0;
};

// Nearest-rank quantile: the ceil(q n)-th smallest value.
double nearest_rank_quantile(std::vector<double> values, double q);

struct SweepAggregates {
  Quantiles star_discrepancy;
  Quantiles spread;
  Quantiles beta_hat;
  std::size_t nonconvergent = 0;
  std::size_t singular_aborted = 0;  // rows with at least one singular start
};

// Rows without a usable start are left out of the quantiles.
SweepAggregates aggregate(const std::vector<SweepRow>& rows);

struct SweepReport {
  std::vector<SweepRow> rows;
  SweepAggregates aggregates;
};

// Per sample: S_alpha, unique-ergodicity diagnostic, i.d.o.c. check and
// deviation fit. Requires positive coefficients.
SweepReport run_alpha_sweep(const ExperimentConfig& config);

// Same pipeline with coefficients of either sign; rejects sum(c_i) = 0.
SweepReport run_mixed_sign_sweep(const ExperimentConfig& config);

// Alpha for sample `index`: the forced value, or sample_unit() on the
// sample's own stream.
Scalar sweep_alpha(const ExperimentConfig& config, std::size_t index);

struct OracleConfig {
  std::size_t configs = 100;
  std::size_t starts = 1000;
  std::uint64_t seed = 1;
  NumericsConfig numerics{};
  RandomSpecOptions random{};
  // Check this spec (with sampled alpha) instead of random ones.
  std::optional<CompositionSpec> spec;
  int time_bits = 256;
  // log2 of the fixed-point acceptance bound (2^-200 by default).
  int fixed_tolerance_log2 = -200;
  std::size_t workers = 1;
};

struct OracleReport {
  std::size_t configs = 0;
  std::size_t compared = 0;
  std::size_t singular_skipped = 0;
  std::size_t mismatches = 0;
  mpq_class max_deviation = 0;       // circle distance, exact
  mpq_class max_time_deviation = 0;  // |time - (sum c) sqrt(1 + alpha^2)|
  std::size_t time_squared_mismatches = 0;  // rational only
  bool pass = false;
};

// For sampled (spec, alpha, x0), compares the surface's first return with
// the built composite S_alpha, and the return time with the constant roof.
OracleReport run_oracle_check(const OracleConfig& config);

}  // namespace ietx
