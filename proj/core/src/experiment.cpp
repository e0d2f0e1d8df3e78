#include "ietx/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ietx/surface.hpp"

namespace ietx {

namespace {

// Runs task(i) for i in [0, n) on a pool of threads. Each task writes only
// its own slot, so results land in input order whatever the schedule.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& task) {
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

SweepRow evaluate_sample(const ExperimentConfig& config, std::size_t index) {
  SweepRow row;
  row.index = index;
  row.alpha = sweep_alpha(config, index);
  const Iet s_alpha = build_composition(config.spec, row.alpha);
  row.intervals = s_alpha.size();

  const UeDiagnostic diag = ue_diagnostic(s_alpha, config.diagnostics);
  const UeSummary& sum = diag.summary;
  row.n_max = sum.n_max;
  row.star_discrepancy = sum.max_star_discrepancy;
  row.max_birkhoff_deviation = sum.max_birkhoff_deviation;
  row.spread = sum.spread;
  row.occupancy = sum.occupancy;
  row.usable_starts = sum.usable_starts;
  row.singular_starts = sum.singular_starts;
  row.convergent = sum.convergent;
  if (diag.fit) {
    row.beta_hat = diag.fit->beta_hat;
    row.r_squared = diag.fit->r_squared;
  }
  if (s_alpha.size() >= 2) {
    const IdocVerdict idoc = idoc_check(s_alpha, config.idoc_depth);
    row.idoc_pass = idoc.pass;
    if (idoc.witness) row.idoc_step = idoc.witness->step;
  } else {
    row.idoc_pass = true;  // no interior breakpoints
  }
  return row;
}

SweepReport run_sweep(const ExperimentConfig& config) {
  SweepReport report;
  report.rows.resize(config.sampler.samples);
  parallel_for(config.sampler.samples, config.workers,
               [&](std::size_t i) { report.rows[i] = evaluate_sample(config, i); });
  report.aggregates = aggregate(report.rows);
  return report;
}

}  // namespace

void ExperimentConfig::validate() const {
  numerics.validate();
  diagnostics.validate();
  if (sampler.samples == 0) throw std::invalid_argument("sample count must be at least 1");
  if (spec.backend() != numerics.backend ||
      (numerics.backend == Backend::fixed && spec.precision_bits() != numerics.precision_bits)) {
    throw BackendMismatch("composition spec was not built with the experiment's numerics");
  }
  if (mixed_sign) {
    if (spec.coefficient_sum().is_zero()) {
      throw std::invalid_argument("mixed-sign sweeps need a nonzero coefficient sum");
    }
  } else if (!spec.all_positive()) {
    throw std::invalid_argument("negative coefficients need mixed-sign mode");
  }
  if (idoc_depth == 0) throw std::invalid_argument("i.d.o.c. depth must be positive");
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json starts = nlohmann::json::array();
  for (const auto& s : diagnostics.starts) starts.push_back(format_scalar(s));
  return {
      {"spec", spec_to_json(spec)},
      {"backend", std::string(backend_name(numerics.backend))},
      {"precision", numerics.precision_bits},
      {"samples", sampler.samples},
      {"seed", sampler.seed},
      {"forced_alpha", sampler.forced_alpha ? nlohmann::json(format_scalar(*sampler.forced_alpha))
                                            : nlohmann::json(nullptr)},
      {"ladder", diagnostics.ladder},
      {"starts", std::move(starts)},
      {"max_frequency", diagnostics.max_frequency},
      {"bins", diagnostics.bins},
      {"discrepancy_threshold", diagnostics.discrepancy_threshold},
      {"spread_threshold", diagnostics.spread_threshold},
      {"idoc_depth", idoc_depth},
      {"mixed_sign", mixed_sign},
  };
}

std::string ExperimentConfig::hash() const { return hex64(fnv1a64(to_json().dump())); }

Scalar sweep_alpha(const ExperimentConfig& config, std::size_t index) {
  const Scalar proto = config.spec.coefficients().front();
  if (config.sampler.forced_alpha) return rebase(*config.sampler.forced_alpha, proto);
  Rng rng(derive_seed(config.sampler.seed, index));
  return sample_unit(rng, config.numerics);
}

double nearest_rank_quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

SweepAggregates aggregate(const std::vector<SweepRow>& rows) {
  SweepAggregates agg;
  std::vector<double> dstar, spread, beta;
  for (const auto& r : rows) {
    if (!r.convergent) ++agg.nonconvergent;
    if (r.singular_starts > 0) ++agg.singular_aborted;
    if (r.usable_starts == 0) continue;
    dstar.push_back(r.star_discrepancy);
    spread.push_back(r.spread);
    if (r.beta_hat) beta.push_back(*r.beta_hat);
  }
  agg.star_discrepancy = {nearest_rank_quantile(dstar, 0.5), nearest_rank_quantile(dstar, 0.95)};
  agg.spread = {nearest_rank_quantile(spread, 0.5), nearest_rank_quantile(spread, 0.95)};
  agg.beta_hat = {nearest_rank_quantile(beta, 0.5), nearest_rank_quantile(beta, 0.95)};
  return agg;
}

SweepReport run_alpha_sweep(const ExperimentConfig& config) {
  if (config.mixed_sign) throw std::invalid_argument("use run_mixed_sign_sweep for mixed-sign mode");
  config.validate();
  return run_sweep(config);
}

SweepReport run_mixed_sign_sweep(const ExperimentConfig& config) {
  if (!config.mixed_sign) throw std::invalid_argument("mixed-sign sweep requires mixed-sign mode");
  config.validate();
  return run_sweep(config);
}

OracleReport run_oracle_check(const OracleConfig& config) {
  config.numerics.validate();
  if (config.configs == 0 || config.starts == 0) throw std::invalid_argument("oracle check needs work to do");
  if (config.spec && !config.spec->all_positive()) {
    throw std::invalid_argument("the surface oracle needs positive coefficients");
  }
  const bool rational = config.numerics.backend == Backend::rational;
  mpq_class tol = 0;
  if (!rational) {
    mpz_class den;
    mpz_setbit(den.get_mpz_t(), static_cast<mp_bitcnt_t>(-config.fixed_tolerance_log2));
    tol = mpq_class(1, den);
  }
  mpq_class time_tol;
  {
    mpz_class den;
    mpz_setbit(den.get_mpz_t(), static_cast<mp_bitcnt_t>(-config.fixed_tolerance_log2));
    time_tol = mpq_class(1, den);
  }

  struct CaseResult {
    std::size_t compared = 0, singular = 0, mismatches = 0, time_sq_mismatches = 0;
    mpq_class max_dev = 0, max_time_dev = 0;
  };
  std::vector<CaseResult> results(config.configs);

  parallel_for(config.configs, config.workers, [&](std::size_t c) {
    Rng rng(derive_seed(config.seed, c));
    RandomSpecOptions options = config.random;
    options.mixed_sign = false;
    const CompositionSpec spec = config.spec ? *config.spec : random_spec(rng, options, config.numerics);
    const Scalar alpha = rational ? sample_rational_unit(rng, 1000, config.numerics)
                                  : sample_unit(rng, config.numerics);
    const Iet s_alpha = build_composition(spec, alpha);
    const StackedSurface surface = build_surface(spec);
    const DirectionSpec dir(alpha);
    const ReturnTime roof = return_time(surface, dir, config.time_bits);

    CaseResult& r = results[c];
    for (std::size_t s = 0; s < config.starts; ++s) {
      const Scalar x0 = rational ? sample_rational_unit(rng, 1000000, config.numerics)
                                 : sample_unit(rng, config.numerics);
      const FirstReturn fr = first_return(surface, dir, x0, config.time_bits);
      if (fr.singularity) {
        ++r.singular;
        continue;
      }
      ++r.compared;
      const mpq_class dev = circle_distance(fr.x, s_alpha.apply(x0)).exact();
      if (dev > tol) ++r.mismatches;
      if (dev > r.max_dev) r.max_dev = dev;
      const mpq_class tdev = abs(fr.time.value.exact() - roof.value.exact());
      if (tdev > time_tol) ++r.mismatches;
      if (tdev > r.max_time_dev) r.max_time_dev = tdev;
      if (rational && fr.time.squared != roof.squared) ++r.time_sq_mismatches;
    }
  });

  OracleReport report;
  report.configs = config.configs;
  for (const auto& r : results) {
    report.compared += r.compared;
    report.singular_skipped += r.singular;
    report.mismatches += r.mismatches;
    report.time_squared_mismatches += r.time_sq_mismatches;
    if (r.max_dev > report.max_deviation) report.max_deviation = r.max_dev;
    if (r.max_time_dev > report.max_time_deviation) report.max_time_deviation = r.max_time_dev;
  }
  report.pass = report.compared > 0 && report.mismatches == 0 && report.time_squared_mismatches == 0;
  return report;
}

}  // namespace ietx
