#include "ietx/report.hpp"

#include <cmath>
#include <cstdio>

namespace ietx {

namespace {

nlohmann::json optional_double(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

// JSON has no NaN; empty quantiles become null.
nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json quantiles_to_json(const Quantiles& q) {
  return {{"median", finite_or_null(q.median)}, {"p95", finite_or_null(q.p95)}};
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json RunMetadata::to_json() const {
  nlohmann::json j = {{"command", command},
                      {"config_hash", config_hash},
                      {"seed", seed},
                      {"backend", std::string(backend_name(backend))},
                      {"precision", precision_bits}};
  if (timestamp) j["timestamp"] = *timestamp;
  return j;
}

RunMetadata metadata_for(const std::string& command, const ExperimentConfig& config) {
  RunMetadata meta;
  meta.command = command;
  meta.config_hash = config.hash();
  meta.seed = config.sampler.seed;
  meta.backend = config.numerics.backend;
  meta.precision_bits = config.numerics.precision_bits;
  return meta;
}

void write_comment_header(std::ostream& os, const RunMetadata& meta) {
  os << "# command: " << meta.command << '\n'
     << "# config_hash: " << meta.config_hash << '\n'
     << "# seed: " << meta.seed << '\n'
     << "# backend: " << backend_name(meta.backend) << '\n'
     << "# precision: " << meta.precision_bits << '\n';
  if (meta.timestamp) os << "# timestamp: " << *meta.timestamp << '\n';
}

void write_sweep_csv(std::ostream& os, const RunMetadata& meta, const SweepReport& report) {
  write_comment_header(os, meta);
  os << "alpha,N,Dstar,max_birkhoff_dev,spread,beta_hat,idoc,occupancy\n";
  for (const auto& r : report.rows) {
    os << format_scalar(r.alpha) << ',' << r.n_max << ',' << format_double(r.star_discrepancy) << ','
       << format_double(r.max_birkhoff_deviation) << ',' << format_double(r.spread) << ','
       << (r.beta_hat ? format_double(*r.beta_hat) : std::string()) << ','
       << (r.idoc_pass ? "PASS" : "FAIL") << ',' << format_double(r.occupancy) << '\n';
  }
}

nlohmann::json sweep_row_to_json(const SweepRow& r) {
  return {{"index", r.index},
          {"alpha", format_scalar(r.alpha)},
          {"intervals", r.intervals},
          {"N", r.n_max},
          {"Dstar", r.star_discrepancy},
          {"max_birkhoff_dev", r.max_birkhoff_deviation},
          {"spread", r.spread},
          {"beta_hat", optional_double(r.beta_hat)},
          {"r_squared", r.r_squared},
          {"idoc", r.idoc_pass},
          {"idoc_step", r.idoc_step ? nlohmann::json(*r.idoc_step) : nlohmann::json(nullptr)},
          {"occupancy", r.occupancy},
          {"usable_starts", r.usable_starts},
          {"singular_starts", r.singular_starts},
          {"convergent", r.convergent}};
}

nlohmann::json sweep_report_to_json(const RunMetadata& meta, const ExperimentConfig& config,
                                     const SweepReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) rows.push_back(sweep_row_to_json(r));
  const SweepAggregates& a = report.aggregates;
  return {{"meta", meta.to_json()},
          {"config", config.to_json()},
          {"rows", std::move(rows)},
          {"aggregates",
           {{"Dstar", quantiles_to_json(a.star_discrepancy)},
            {"spread", quantiles_to_json(a.spread)},
            {"beta_hat", quantiles_to_json(a.beta_hat)},
            {"nonconvergent", a.nonconvergent},
            {"singular_aborted", a.singular_aborted}}}};
}

nlohmann::json diagnostic_to_json(const UeDiagnostic& diag) {
  nlohmann::json functions = nlohmann::json::array();
  for (const auto& f : diag.functions) functions.push_back(f.name());
  nlohmann::json orbits = nlohmann::json::array();
  for (const auto& o : diag.orbits) {
    nlohmann::json dstar = nlohmann::json::array();
    for (const auto& d : o.star_discrepancy) dstar.push_back(d.to_double());
    orbits.push_back({{"start", format_scalar(o.start)},
                      {"ladder", o.ladder},
                      {"Dstar", std::move(dstar)},
                      {"sums", o.sums},
                      {"running_max", o.running_max},
                      {"singular_step", o.singular_step ? nlohmann::json(*o.singular_step)
                                                        : nlohmann::json(nullptr)},
                      {"visited_bins", o.visited_bins}});
  }
  const UeSummary& s = diag.summary;
  nlohmann::json fit = nullptr;
  if (diag.fit) {
    fit = {{"beta_hat", diag.fit->beta_hat},
           {"r_squared", diag.fit->r_squared},
           {"window_begin", diag.fit->window_begin},
           {"window_end", diag.fit->window_end},
           {"degenerate", diag.fit->degenerate}};
  }
  return {{"functions", std::move(functions)},
          {"orbits", std::move(orbits)},
          {"summary",
           {{"usable_starts", s.usable_starts},
            {"singular_starts", s.singular_starts},
            {"N", s.n_max},
            {"Dstar", s.max_star_discrepancy},
            {"max_birkhoff_dev", s.max_birkhoff_deviation},
            {"spread", s.spread},
            {"occupancy", s.occupancy},
            {"convergent", s.convergent}}},
          {"fit", std::move(fit)}};
}

nlohmann::json oracle_report_to_json(const OracleReport& r) {
  auto log2_or_null = [](const mpq_class& v) -> nlohmann::json {
    if (v == 0) return nullptr;
    long exp = 0;
    const double m = mpf_get_d_2exp(&exp, mpf_class(v, 128).get_mpf_t());
    return std::log2(m) + static_cast<double>(exp);
  };
  return {{"configs", r.configs},
          {"compared", r.compared},
          {"singular_skipped", r.singular_skipped},
          {"mismatches", r.mismatches},
          {"time_squared_mismatches", r.time_squared_mismatches},
          {"max_deviation", r.max_deviation.get_d()},
          {"max_deviation_log2", log2_or_null(r.max_deviation)},
          {"max_time_deviation", r.max_time_deviation.get_d()},
          {"max_time_deviation_log2", log2_or_null(r.max_time_deviation)},
          {"pass", r.pass}};
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace ietx
