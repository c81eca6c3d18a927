#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "steadylab/config.hpp"

namespace steadylab {

// JSON text with every double printed at 17 significant digits, keys sorted.
std::string dump_json(const nlohmann::json& j, int indent = 2);

// {command, config, result}
nlohmann::json envelope(const std::string& command, const RunConfig& cfg, nlohmann::json result);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
// gnuplot-ready "x y" rows.
void write_two_column(const std::filesystem::path& path, const std::vector<double>& x,
                      const std::vector<double>& y);

}  // namespace steadylab
