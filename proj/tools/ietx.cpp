// ietx: batch experiments on compositions of interval exchanges and rotations.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ietx/experiment.hpp"
#include "ietx/report.hpp"
#include "ietx/serialization.hpp"
#include "ietx/surface.hpp"

namespace {

struct CommonOptions {
  std::string spec_path;
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  int precision = 256;
  std::string backend = "fixed";
  int ladder_max = 20;
  std::string out;
  bool no_timestamp = false;
  std::size_t workers = 1;
  std::string alpha;
  bool json = false;
  std::size_t idoc_depth = 10000;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool spec_required) {
  auto* spec = cmd->add_option("--spec", o.spec_path, "Composition spec (JSON)")->check(CLI::ExistingFile);
  if (spec_required) spec->required();
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--precision", o.precision, "Fixed-point precision in bits")->check(CLI::Range(64, 1 << 16));
  cmd->add_option("--backend", o.backend, "Scalar backend")->check(CLI::IsMember({"rational", "fixed"}));
  cmd->add_option("--out", o.out, "Output path (default: stdout)");
  cmd->add_flag("--no-timestamp", o.no_timestamp, "Omit the timestamp header line");
}

void add_diagnostic(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--ladder-max", o.ladder_max, "Largest ladder exponent (N_max = 2^exp)")->check(CLI::Range(1, 40));
  cmd->add_option("--idoc-depth", o.idoc_depth, "Orbit depth for the i.d.o.c. check")->check(CLI::PositiveNumber);
}

ietx::NumericsConfig numerics_of(const CommonOptions& o) {
  ietx::NumericsConfig n;
  n.backend = ietx::parse_backend(o.backend);
  n.precision_bits = o.precision;
  n.validate();
  return n;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ietx::ExperimentConfig experiment_of(const CommonOptions& o, bool mixed_sign) {
  const ietx::NumericsConfig numerics = numerics_of(o);
  ietx::ExperimentConfig config{ietx::load_spec(o.spec_path, numerics)};
  config.numerics = numerics;
  config.sampler.samples = o.samples;
  config.sampler.seed = o.seed;
  if (!o.alpha.empty()) config.sampler.forced_alpha = ietx::parse_scalar(o.alpha, numerics);
  config.diagnostics.ladder = ietx::dyadic_ladder(std::min(10, o.ladder_max), o.ladder_max);
  config.idoc_depth = o.idoc_depth;
  config.mixed_sign = mixed_sign;
  config.workers = o.workers;
  return config;
}

template <typename Writer>
void emit(const std::string& path, Writer&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write(os);
  if (!os) throw std::runtime_error("failed writing " + path);
}

void stamp(ietx::RunMetadata& meta, const CommonOptions& o) {
  if (!o.no_timestamp) meta.timestamp = utc_timestamp();
}

int run_sweep(const CommonOptions& o, bool mixed_sign) {
  const ietx::ExperimentConfig config = experiment_of(o, mixed_sign);
  const ietx::SweepReport report =
      mixed_sign ? ietx::run_mixed_sign_sweep(config) : ietx::run_alpha_sweep(config);
  ietx::RunMetadata meta = ietx::metadata_for(mixed_sign ? "mixed-sweep" : "sweep", config);
  stamp(meta, o);
  emit(o.out, [&](std::ostream& os) {
    if (o.json) {
      os << ietx::dump_json(ietx::sweep_report_to_json(meta, config, report));
    } else {
      ietx::write_sweep_csv(os, meta, report);
    }
  });
  const auto& a = report.aggregates;
  std::cerr << report.rows.size() << " samples; median D* " << ietx::format_double(a.star_discrepancy.median)
            << ", median spread " << ietx::format_double(a.spread.median) << ", nonconvergent "
            << a.nonconvergent << ", singular-aborted " << a.singular_aborted << '\n';
  return 0;
}

int run_diagnose(const CommonOptions& o) {
  ietx::ExperimentConfig config = experiment_of(o, true);
  config.sampler.samples = 1;
  if (config.spec.coefficient_sum().is_zero()) throw std::invalid_argument("sum of coefficients is zero");
  config.diagnostics.validate();
  const ietx::Scalar alpha = ietx::sweep_alpha(config, 0);
  const ietx::Iet s_alpha = ietx::build_composition(config.spec, alpha);
  const ietx::UeDiagnostic diag = ietx::ue_diagnostic(s_alpha, config.diagnostics);
  nlohmann::json idoc = nullptr;
  if (s_alpha.size() >= 2) {
    const ietx::IdocVerdict v = ietx::idoc_check(s_alpha, config.idoc_depth);
    idoc = {{"pass", v.pass}, {"depth", v.depth}};
    if (v.witness) {
      idoc["witness"] = {{"breakpoint", ietx::format_scalar(v.witness->breakpoint)},
                         {"step", v.witness->step},
                         {"hit", ietx::format_scalar(v.witness->hit)}};
    }
  }
  ietx::RunMetadata meta = ietx::metadata_for("diagnose", config);
  stamp(meta, o);
  nlohmann::json j = {{"meta", meta.to_json()},
                      {"config", config.to_json()},
                      {"alpha", ietx::format_scalar(alpha)},
                      {"composition", ietx::iet_to_json(s_alpha)},
                      {"diagnostic", ietx::diagnostic_to_json(diag)},
                      {"idoc", std::move(idoc)}};
  emit(o.out, [&](std::ostream& os) { os << ietx::dump_json(j); });
  return 0;
}

int run_oracle(const CommonOptions& o, std::size_t starts) {
  ietx::OracleConfig config;
  config.configs = o.samples;
  config.starts = starts;
  config.seed = o.seed;
  config.numerics = numerics_of(o);
  config.workers = o.workers;
  if (!o.spec_path.empty()) config.spec = ietx::load_spec(o.spec_path, config.numerics);
  const ietx::OracleReport report = ietx::run_oracle_check(config);

  nlohmann::json cfg = {{"configs", config.configs},
                        {"starts", config.starts},
                        {"seed", config.seed},
                        {"backend", std::string(ietx::backend_name(config.numerics.backend))},
                        {"precision", config.numerics.precision_bits},
                        {"time_bits", config.time_bits},
                        {"fixed_tolerance_log2", config.fixed_tolerance_log2},
                        {"spec", config.spec ? ietx::spec_to_json(*config.spec) : nlohmann::json(nullptr)}};
  ietx::RunMetadata meta;
  meta.command = "oracle-check";
  meta.config_hash = ietx::hex64(ietx::fnv1a64(cfg.dump()));
  meta.seed = config.seed;
  meta.backend = config.numerics.backend;
  meta.precision_bits = config.numerics.precision_bits;
  stamp(meta, o);
  nlohmann::json j = {{"meta", meta.to_json()}, {"config", cfg}, {"report", ietx::oracle_report_to_json(report)}};
  emit(o.out, [&](std::ostream& os) { os << ietx::dump_json(j); });
  std::cerr << (report.pass ? "PASS" : "FAIL") << ": " << report.compared << " comparisons, "
            << report.mismatches << " mismatches, " << report.singular_skipped << " singular starts skipped\n";
  return report.pass ? 0 : 1;
}

int run_surface_info(const CommonOptions& o, const std::string& trace_path, const std::string& x0_text) {
  const ietx::NumericsConfig numerics = numerics_of(o);
  std::ifstream is(o.spec_path);
  const nlohmann::json doc = nlohmann::json::parse(is);
  const ietx::StackedSurface surface = ietx::surface_from_json(doc, numerics);
  const nlohmann::json surface_json = ietx::surface_to_json(surface);

  nlohmann::json square_tiled;
  try {
    const ietx::SquareTiledVerdict v = ietx::is_square_tiled(surface);
    square_tiled = {{"square_tiled", v.square_tiled}, {"reason", v.reason}};
  } catch (const ietx::RationalityUndecidable& e) {
    square_tiled = {{"square_tiled", nullptr}, {"reason", e.what()}};
  }
  nlohmann::json cylinders = nlohmann::json::array();
  for (const auto& c : ietx::horizontal_cylinders(surface)) {
    cylinders.push_back({{"height", ietx::format_scalar(c.height)},
                         {"circumference", ietx::format_scalar(c.circumference)},
                         {"modulus", ietx::format_scalar(c.modulus)}});
  }

  nlohmann::json cfg = {{"surface", surface_json},
                        {"backend", std::string(ietx::backend_name(numerics.backend))},
                        {"precision", numerics.precision_bits},
                        {"alpha", o.alpha.empty() ? nlohmann::json(nullptr) : nlohmann::json(o.alpha)},
                        {"x0", x0_text}};
  ietx::RunMetadata meta;
  meta.command = "surface-info";
  meta.config_hash = ietx::hex64(ietx::fnv1a64(cfg.dump()));
  meta.seed = o.seed;
  meta.backend = numerics.backend;
  meta.precision_bits = numerics.precision_bits;
  stamp(meta, o);

  nlohmann::json j = {{"meta", meta.to_json()},
                      {"surface", surface_json},
                      {"area", ietx::format_scalar(surface.area())},
                      {"square_tiled", std::move(square_tiled)},
                      {"cylinders", std::move(cylinders)}};
  if (!o.alpha.empty()) {
    const ietx::DirectionSpec dir(ietx::parse_scalar(o.alpha, numerics));
    const ietx::ReturnTime rt = ietx::return_time(surface, dir);
    const ietx::Scalar x0 = ietx::parse_scalar(x0_text, numerics);
    const ietx::FirstReturn fr = ietx::first_return(surface, dir, x0);
    nlohmann::json ret = {{"x0", ietx::format_scalar(x0)},
                          {"x", ietx::format_scalar(fr.x)},
                          {"time_squared", ietx::format_scalar(rt.squared)},
                          {"time", ietx::format_scalar(rt.value)},
                          {"singular", fr.singularity.has_value()}};
    if (fr.singularity) {
      ret["singularity"] = {{"rectangle", fr.singularity->rectangle + 1},
                            {"x", ietx::format_scalar(fr.singularity->x)}};
    }
    j["first_return"] = std::move(ret);
    if (!trace_path.empty()) {
      const auto events = ietx::flow_trace(surface, dir, x0);
      emit(trace_path, [&](std::ostream& os) {
        ietx::write_comment_header(os, meta);
        ietx::write_trace_csv(os, events);
      });
    }
  } else if (!trace_path.empty()) {
    throw std::invalid_argument("--trace needs --alpha");
  }
  emit(o.out, [&](std::ostream& os) { os << ietx::dump_json(j); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compositions of interval exchange transformations and rotations"};
  app.require_subcommand(1);
  CommonOptions o;

  auto* sweep = app.add_subcommand("sweep", "Sample alpha and diagnose S_alpha for each sample");
  auto* mixed = app.add_subcommand("mixed-sweep", "Sweep with coefficients of either sign");
  for (auto* cmd : {sweep, mixed}) {
    add_common(cmd, o, true);
    add_diagnostic(cmd, o);
    cmd->add_option("--samples", o.samples, "Number of alpha samples")->check(CLI::PositiveNumber);
    cmd->add_option("--workers", o.workers, "Worker threads (0: one per core)");
    cmd->add_option("--alpha", o.alpha, "Use this alpha for every sample");
    cmd->add_flag("--json", o.json, "Write the JSON report instead of CSV");
  }

  std::size_t oracle_starts = 1000;
  auto* oracle = app.add_subcommand("oracle-check", "Compare surface first returns with the built composition");
  add_common(oracle, o, false);
  oracle->add_option("--samples", o.samples, "Number of (spec, alpha) configurations")->check(CLI::PositiveNumber);
  oracle->add_option("--starts", oracle_starts, "Starting points per configuration")->check(CLI::PositiveNumber);
  oracle->add_option("--workers", o.workers, "Worker threads (0: one per core)");

  auto* diagnose = app.add_subcommand("diagnose", "Full diagnostic of S_alpha for a single alpha");
  add_common(diagnose, o, true);
  add_diagnostic(diagnose, o);
  diagnose->add_option("--alpha", o.alpha, "Alpha (default: first sampled value)");

  std::string trace_path;
  std::string x0_text = "0";
  auto* surface = app.add_subcommand("surface-info", "Describe the stacked-rectangle surface of a spec");
  add_common(surface, o, true);
  surface->add_option("--alpha", o.alpha, "Direction cot(theta) for the first return");
  surface->add_option("--x0", x0_text, "Starting point on the bottom of R_1");
  surface->add_option("--trace", trace_path, "Write the flow trace CSV here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) return run_sweep(o, false);
    if (*mixed) return run_sweep(o, true);
    if (*oracle) return run_oracle(o, oracle_starts);
    if (*diagnose) return run_diagnose(o);
    if (*surface) return run_surface_info(o, trace_path, x0_text);
  } catch (const std::exception& e) {
    std::cerr << "ietx: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
