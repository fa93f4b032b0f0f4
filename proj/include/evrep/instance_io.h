#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "evrep/model.h"

namespace evrep {

inline constexpr const char* kInstanceFormat = "evrep-instance";
inline constexpr const char* kSolutionFormat = "evrep-solution";
inline constexpr int kFormatVersion = 1;

nlohmann::json instance_to_json(const Instance& instance);

// Throws Error(ParseError) naming the offending field, or
// InvalidInstanceError listing every violated invariant.
Instance instance_from_json(const nlohmann::json& document);

std::string dump_instance(const Instance& instance);
Instance parse_instance(const std::string& text);

void save_instance(const Instance& instance, const std::filesystem::path& path);
Instance load_instance(const std::filesystem::path& path);

nlohmann::json solution_to_json(const Solution& solution);
Solution solution_from_json(const nlohmann::json& document);

// Full-precision, key-ordered text so equal solutions give equal bytes.
std::string dump_json(const nlohmann::json& document);

nlohmann::json parse_json(const std::string& text);
nlohmann::json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace evrep
