#pragma once

#include <iosfwd>
#include <variant>
#include <vector>

#include <json.hpp>

#include "steadylab/grid.hpp"
#include "steadylab/params.hpp"

namespace steadylab {

using ModelParams = std::variant<std::monostate, GRKRLWParams, PerturbedParams>;

class Trajectory {
 public:
  Trajectory(std::vector<Field> snapshots, ModelParams params = {}, double dt = 0.0);

  const Grid& grid() const { return snapshots_.front().grid(); }
  const std::vector<Field>& snapshots() const { return snapshots_; }
  const Field& operator[](std::size_t i) const { return snapshots_[i]; }
  const Field& front() const { return snapshots_.front(); }
  const Field& back() const { return snapshots_.back(); }
  std::size_t size() const { return snapshots_.size(); }
  std::vector<double> times() const;
  const ModelParams& params() const { return params_; }
  double dt() const { return dt_; }

 private:
  std::vector<Field> snapshots_;
  ModelParams params_;
  double dt_;
};

// Row-major CSV with header t,x,v.
void write_csv(const Trajectory& traj, std::ostream& os);
// {grid:{L,N}, times:[...], values:[[...]]}; doubles round-trip exactly.
nlohmann::json to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const nlohmann::json& j, ModelParams params = {});

}  // namespace steadylab
