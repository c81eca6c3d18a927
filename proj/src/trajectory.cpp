#include "steadylab/trajectory.hpp"

#include <cstdio>
#include <ostream>
#include <string>

#include "steadylab/errors.hpp"

namespace steadylab {

Trajectory::Trajectory(std::vector<Field> snapshots, ModelParams params, double dt)
    : snapshots_(std::move(snapshots)), params_(std::move(params)), dt_(dt) {
  if (snapshots_.empty()) throw InvalidArgument("trajectory needs at least one snapshot");
  for (std::size_t i = 1; i < snapshots_.size(); ++i) {
    if (snapshots_[i].grid() != snapshots_[0].grid()) {
      throw InvalidArgument("trajectory snapshots must share one grid");
    }
    if (!(snapshots_[i].time() > snapshots_[i - 1].time())) {
      throw InvalidArgument("trajectory times must be strictly increasing");
    }
  }
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(snapshots_.size());
  for (const auto& f : snapshots_) t.push_back(f.time());
  return t;
}

void write_csv(const Trajectory& traj, std::ostream& os) {
  os << "t,x,v\n";
  char buf[96];
  for (const auto& f : traj.snapshots()) {
    for (std::size_t j = 0; j < f.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.time(), f.grid().node(j), f[j]);
      os << buf;
    }
  }
}

nlohmann::json to_json(const Trajectory& traj) {
  nlohmann::json j;
  j["grid"] = {{"L", traj.grid().length()}, {"N", traj.grid().size()}};
  j["times"] = traj.times();
  nlohmann::json values = nlohmann::json::array();
  for (const auto& f : traj.snapshots()) values.push_back(f.values());
  j["values"] = std::move(values);
  if (traj.dt() != 0.0) j["dt"] = traj.dt();
  return j;
}

Trajectory trajectory_from_json(const nlohmann::json& j, ModelParams params) {
  try {
    const Grid grid(j.at("grid").at("L").get<double>(), j.at("grid").at("N").get<std::size_t>());
    const auto times = j.at("times").get<std::vector<double>>();
    const auto& values = j.at("values");
    if (values.size() != times.size()) {
      throw InvalidArgument("trajectory JSON: times and values differ in length");
    }
    std::vector<Field> snaps;
    snaps.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      snaps.emplace_back(grid, values[i].get<std::vector<double>>(), times[i]);
    }
    const double dt = j.contains("dt") ? j["dt"].get<double>() : 0.0;
    return Trajectory(std::move(snaps), std::move(params), dt);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("trajectory JSON: ") + e.what());
  }
}

}  // namespace steadylab
