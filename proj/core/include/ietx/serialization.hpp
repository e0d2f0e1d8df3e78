#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "ietx/composition.hpp"

namespace ietx {

// {"lengths": ["1/2", "1/4", "1/4"], "permutation": [3, 2, 1]}
nlohmann::json iet_to_json(const Iet& t);
Iet iet_from_json(const nlohmann::json& j, const NumericsConfig& config);

// {"iets": [...], "coefficients": ["1", "-1/2"]}
nlohmann::json spec_to_json(const CompositionSpec& spec);
CompositionSpec spec_from_json(const nlohmann::json& j, const NumericsConfig& config);

CompositionSpec load_spec(const std::filesystem::path& path, const NumericsConfig& config);

// 64-bit FNV-1a, used to fingerprint configurations in report headers.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace ietx
