#include "ietx/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ietx {

namespace {

Scalar scalar_from_json(const nlohmann::json& j, const NumericsConfig& config) {
  if (j.is_string()) return parse_scalar(j.get<std::string>(), config);
  if (j.is_number_integer()) return Scalar::from_ratio(j.get<long>(), 1, config);
  throw ParseError("scalars must be JSON strings (\"p/q\" or decimal) or integers, got " + j.dump());
}

}  // namespace

nlohmann::json iet_to_json(const Iet& t) {
  nlohmann::json lengths = nlohmann::json::array();
  for (const auto& l : t.lengths()) lengths.push_back(format_scalar(l));
  return {{"lengths", std::move(lengths)}, {"permutation", t.permutation().one_based()}};
}

Iet iet_from_json(const nlohmann::json& j, const NumericsConfig& config) {
  if (!j.is_object() || !j.contains("lengths") || !j.contains("permutation")) {
    throw ParseError("IET must be an object with 'lengths' and 'permutation'");
  }
  std::vector<Scalar> lengths;
  for (const auto& v : j.at("lengths")) lengths.push_back(scalar_from_json(v, config));
  const auto images = j.at("permutation").get<std::vector<int>>();
  return Iet::make(std::move(lengths), Permutation::from_one_based(images));
}

nlohmann::json spec_to_json(const CompositionSpec& spec) {
  nlohmann::json iets = nlohmann::json::array();
  for (const auto& t : spec.iets()) iets.push_back(iet_to_json(t));
  nlohmann::json coefficients = nlohmann::json::array();
  for (const auto& c : spec.coefficients()) coefficients.push_back(format_scalar(c));
  return {{"iets", std::move(iets)}, {"coefficients", std::move(coefficients)}};
}

CompositionSpec spec_from_json(const nlohmann::json& j, const NumericsConfig& config) {
  if (!j.is_object() || !j.contains("iets") || !j.contains("coefficients")) {
    throw ParseError("composition spec must be an object with 'iets' and 'coefficients'");
  }
  std::vector<Iet> iets;
  for (const auto& t : j.at("iets")) iets.push_back(iet_from_json(t, config));
  std::vector<Scalar> coefficients;
  for (const auto& c : j.at("coefficients")) coefficients.push_back(scalar_from_json(c, config));
  return CompositionSpec(std::move(iets), std::move(coefficients));
}

CompositionSpec load_spec(const std::filesystem::path& path, const NumericsConfig& config) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return spec_from_json(j, config);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace ietx
