#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "steadylab/grid.hpp"
#include "steadylab/params.hpp"

namespace steadylab {

struct InitialSpec {
  std::string kind = "zero";  // zero sech2 gaussian cosine trig kdv_soliton samples file
  double amplitude = 1.0;
  double width = 1.0;
  double center = 0.0;
  double offset = 0.0;
  double phase = 0.0;
  int mode = 1;
  double c3 = 0.0, c4 = 0.0, omega = 1.0;
  std::vector<double> values;
  std::string path;
};

struct RunConfig {
  std::string source = "<memory>";
  std::string equation = "rkrlw";  // rkrlw | perturbed
  std::optional<std::string> preset;
  GRKRLWParams rkrlw;
  PerturbedParams perturbed;
  double L = 2.0 * 3.141592653589793;
  std::size_t N = 128;
  double t_end = 1.0;
  double dt = 0.0;  // 0 picks a stable default
  int snapshot_every = 1;
  InitialSpec initial;
  std::uint64_t seed = 0;
  int bumps = 20;
  // verify only: profile coefficients; default from the initial datum
  std::optional<double> c3, c4;

  Grid grid() const { return Grid(L, N); }
};

// Flat "key = value" text with [section] headers, or a JSON object with
// the same sections. Errors are ConfigurationError naming file, line and field.
RunConfig parse_config(const std::string& text, const std::string& source = "<memory>");
RunConfig load_config(const std::filesystem::path& path);

// Set one coefficient by name ("b2", "kappa", ...); used by sweeps.
void set_coefficient(RunConfig& cfg, const std::string& name, double value);
double get_coefficient(const RunConfig& cfg, const std::string& name);

nlohmann::json to_json(const RunConfig& cfg);

// Initial datum as a function of x and sampled on the configured grid.
std::function<double(double)> initial_function(const RunConfig& cfg);
Field initial_field(const RunConfig& cfg);

}  // namespace steadylab
