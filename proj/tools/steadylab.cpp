// steadylab command-line front end.
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "steadylab/admissibility.hpp"
#include "steadylab/classifier.hpp"
#include "steadylab/config.hpp"
#include "steadylab/errors.hpp"
#include "steadylab/oracle.hpp"
#include "steadylab/perturbed.hpp"
#include "steadylab/reports.hpp"
#include "steadylab/rkrlw.hpp"
#include "steadylab/spectral.hpp"
#include "steadylab/symmetry.hpp"
#include "steadylab/weak.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace steadylab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;
constexpr int kExitBlowUp = 3;
constexpr int kExitVerdict = 4;

struct Options {
  std::string config;
  std::string out = "steadylab-out";
  std::optional<std::uint64_t> seed;
  bool plot = false;
  std::string expect;
  std::string sweep;
  int workers = 1;
};

// Result of one subcommand run: the JSON payload plus its verdict.
struct Outcome {
  json result;
  bool verdict = true;  // satisfied / symmetric
};

struct SweepAxis {
  std::string key;
  std::vector<double> values;
};

std::vector<SweepAxis> parse_sweep(const std::string& spec) {
  std::vector<SweepAxis> axes;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigurationError("sweep entry '" + item + "' lacks '='");
    SweepAxis ax;
    ax.key = item.substr(0, eq);
    const std::string range = item.substr(eq + 1);
    std::vector<std::string> parts;
    std::stringstream rs(range);
    std::string p;
    while (std::getline(rs, p, ':')) parts.push_back(p);
    if (parts.size() != 3) {
      throw ConfigurationError("sweep entry '" + item + "' must look like key=lo:hi:count");
    }
    double lo = 0, hi = 0;
    long count = 0;
    try {
      lo = std::stod(parts[0]);
      hi = std::stod(parts[1]);
      count = std::stol(parts[2]);
    } catch (const std::exception&) {
      throw ConfigurationError("sweep entry '" + item + "' has a non-numeric bound or count");
    }
    if (count < 1) throw ConfigurationError("sweep count must be >= 1 in '" + item + "'");
    for (long i = 0; i < count; ++i) {
      ax.values.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    axes.push_back(std::move(ax));
  }
  if (axes.empty()) throw ConfigurationError("empty sweep specification");
  return axes;
}

double pick_dt(const RunConfig& cfg, const Field& v0) {
  if (cfg.dt > 0.0) return cfg.dt;
  const double amp = std::max(1.0, max_abs(v0));
  const double dt = cfg.equation == "perturbed" ? suggest_dt_perturbed(cfg.perturbed, v0.grid(), amp)
                                                : suggest_dt(cfg.rkrlw, v0.grid(), amp);
  // land exactly on t_end
  const double steps = std::ceil(cfg.t_end / dt - 1e-9);
  return steps > 0 ? cfg.t_end / steps : dt;
}

Trajectory run_dynamics(const RunConfig& cfg, const Field& v0, double dt) {
  if (cfg.equation == "perturbed") {
    cfg.perturbed.validate_on(v0.grid());
    return simulate_perturbed(v0, cfg.perturbed, cfg.t_end, dt, cfg.snapshot_every);
  }
  return simulate(v0, cfg.rkrlw, cfg.t_end, dt, cfg.snapshot_every);
}

void write_trajectory(const fs::path& out, const Trajectory& tr) {
  std::ostringstream csv;
  write_csv(tr, csv);
  write_text(out / "trajectory.csv", csv.str());
  write_json(out / "trajectory.json", to_json(tr));
}

std::vector<double> nodes(const Grid& g) {
  std::vector<double> x(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) x[j] = g.node(j);
  return x;
}

Outcome run_simulate(const RunConfig& cfg, const Options& opt, const fs::path& out) {
  const Field v0 = initial_field(cfg);
  const double dt = pick_dt(cfg, v0);
  const Trajectory tr = run_dynamics(cfg, v0, dt);
  write_trajectory(out, tr);
  json r;
  r["dt"] = dt;
  r["snapshots"] = tr.size();
  r["final_time"] = tr.back().time();
  r["max_abs_final"] = max_abs(tr.back());
  r["mass_initial"] = mass(tr.front());
  r["mass_final"] = mass(tr.back());
  if (cfg.equation == "rkrlw") {
    const double e0 = energy(tr.front(), cfg.rkrlw), e1 = energy(tr.back(), cfg.rkrlw);
    r["energy_initial"] = e0;
    r["energy_final"] = e1;
  }
  r["files"] = {"trajectory.csv", "trajectory.json"};
  if (opt.plot) {
    const auto x = nodes(tr.grid());
    write_two_column(out / "plot" / "initial.dat", x, tr.front().values());
    write_two_column(out / "plot" / "final.dat", x, tr.back().values());
  }
  return {r, true};
}

ConstraintCoefficients constraint_of(const RunConfig& cfg) {
  if (cfg.equation != "perturbed") {
    throw ConfigurationError(cfg.source + ": field 'model.equation': classify and verify need equation = perturbed");
  }
  return {cfg.perturbed.b1, cfg.perturbed.b2, cfg.perturbed.b10};
}

Outcome run_classify(const RunConfig& cfg, const Options& opt, const fs::path& out) {
  const Classification c = classify(constraint_of(cfg), initial_function(cfg));
  if (opt.plot && c.construction.profile) {
    const TrigProfile& g = *c.construction.profile;
    const double span = g.is_zero() ? 2 * std::numbers::pi
                                    : 2.0 * 2 * std::numbers::pi / g.min_frequency();
    std::vector<double> x(1000), y(1000);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = span * static_cast<double>(i) / 999.0;
      y[i] = g(x[i]);
    }
    write_two_column(out / "plot" / "profile.dat", x, y);
  }
  return {to_json(c), c.bounded() && c.symmetric()};
}

Outcome run_verify(const RunConfig& cfg, const Options& opt, const fs::path& out) {
  const auto cc = constraint_of(cfg);
  const Classification c = classify(cc, initial_function(cfg));
  if (!c.construction.profile) {
    throw HypothesisViolation("no bounded symmetric profile to verify (" + c.construction.reason + ")");
  }
  const auto hs = c.construction.profile->harmonics();
  if (hs.size() != 1 || std::abs(c.construction.profile->offset()) > 1e-12) {
    throw Unsupported("verify handles single-frequency profiles c3 cos(w y) + c4 sin(w y) only; got " +
                      std::to_string(hs.size()) + " frequencies");
  }
  const double omega = hs.front().frequency;
  const double c3 = cfg.c3.value_or(hs.front().cos_coef);
  const double c4 = cfg.c4.value_or(hs.front().sin_coef);
  const AdmissibilityReport rep = check_conditions(cfg.perturbed, c3, c4, omega);
  json r = to_json(rep);
  r["omega"] = omega;
  r["c3"] = c3;
  r["c4"] = c4;
  r["classification"] = {{"case_tag", to_string(c.roots.tag)}, {"condition", to_string(c.condition)}};

  bool verdict = rep.satisfied;
  if (cfg.t_end > 0.0) {
    const double periods = cfg.L * omega / (2 * std::numbers::pi);
    if (std::abs(periods - std::round(periods)) > 1e-9 * std::max(1.0, periods) || std::round(periods) < 1) {
      throw ConfigurationError(cfg.source + ": field 'grid.L': must be a positive multiple of 2 pi / omega = " +
                               std::to_string(2 * std::numbers::pi / omega));
    }
    const TrigProfile g = single_frequency_profile(c3, c4, omega);
    const Field v0 = Field::sample(cfg.grid(), [&](double x) { return g(x); });
    const double dt = pick_dt(cfg, v0);
    const Trajectory tr = run_dynamics(cfg, v0, dt);
    json dyn;
    dyn["dt"] = dt;
    dyn["snapshots"] = tr.size();
    const SpeedEstimate est = measure_speed(tr);
    dyn["measured_speed"] = est.speed;
    dyn["shape_defect"] = est.shape_defect;
    const double target = rep.lambda_dot;
    const double rel = std::abs(est.speed - target) / std::max(std::abs(target), 1e-300);
    dyn["relative_speed_error"] = rel;
    dyn["speed_within_1pct"] = rel < 1e-2;
    if (tr.size() >= 3) {
      const SymmetryReport sym = track_axis(tr);
      dyn["axis_speed"] = sym.axis_speed;
      dyn["max_symmetry_defect"] = sym.max_defect();
    }
    if (opt.plot) {
      const auto x = nodes(tr.grid());
      write_two_column(out / "plot" / "initial.dat", x, tr.front().values());
      write_two_column(out / "plot" / "final.dat", x, tr.back().values());
    }
    r["dynamic"] = dyn;
    if (rep.satisfied && !(rel < 1e-2)) verdict = false;
  }
  return {r, verdict};
}

Outcome run_monitor(const RunConfig& cfg, const Options& opt, const fs::path& out) {
  const Field v0 = initial_field(cfg);
  const double dt = pick_dt(cfg, v0);
  const Trajectory tr = run_dynamics(cfg, v0, dt);
  json r;
  r["dt"] = dt;
  r["snapshots"] = tr.size();
  const SymmetryReport sym = track_axis(tr);
  {
    std::ostringstream csv;
    write_csv(sym, csv);
    write_text(out / "symmetry.csv", csv.str());
  }
  r["symmetry"] = to_json(sym);
  r["affine_deviation"] = affine_deviation(sym);
  const ModelParams params = cfg.equation == "perturbed" ? ModelParams(cfg.perturbed) : ModelParams(cfg.rkrlw);
  if (tr.size() >= 5) {
    const auto d = decomposition_residuals(tr, sym, params);
    json dj{{"r_transport", d.r_transport}, {"r_balance", d.r_balance}};
    if (d.r_linear) dj["r_linear"] = *d.r_linear;
    if (d.r_nonlinear) dj["r_nonlinear"] = *d.r_nonlinear;
    r["decomposition"] = dj;
    r["fd_pde_residual"] = oracle::fd_pde_residual(tr);
  } else {
    r["decomposition"] = nullptr;
    r["fd_pde_residual"] = nullptr;
  }
  if (cfg.equation == "rkrlw" && cfg.bumps > 0) {
    const auto bumps = random_bumps(tr, static_cast<std::size_t>(cfg.bumps), cfg.seed);
    r["weak"] = to_json(weak_residual_report(tr, cfg.rkrlw, bumps));
  }
  try {
    const SpeedEstimate est = measure_speed(tr);
    r["measured_speed"] = est.speed;
    r["shape_defect"] = est.shape_defect;
  } catch (const DegenerateInput& e) {
    r["measured_speed"] = nullptr;
    r["shape_defect"] = nullptr;
  }
  if (opt.plot) {
    std::vector<double> t, a, d;
    for (std::size_t i = 0; i < sym.axis_samples.size(); ++i) {
      t.push_back(sym.axis_samples[i].first);
      a.push_back(sym.axis_unwrapped[i]);
      d.push_back(sym.defect_samples[i].second);
    }
    write_two_column(out / "plot" / "axis.dat", t, a);
    write_two_column(out / "plot" / "defect.dat", t, d);
  }
  const bool symmetric = sym.max_defect() < 1e-8;
  r["symmetric"] = symmetric;
  return {r, symmetric};
}

using Runner = Outcome (*)(const RunConfig&, const Options&, const fs::path&);

int map_error(const std::exception& e) {
  if (dynamic_cast<const BlowUp*>(&e)) return kExitBlowUp;
  if (dynamic_cast<const InternalError*>(&e)) return kExitInternal;
  if (dynamic_cast<const Error*>(&e)) return kExitValidation;
  return kExitInternal;
}

int run_sweep(const std::string& command, Runner fn, const RunConfig& base, const Options& opt,
              const fs::path& out) {
  const auto axes = parse_sweep(opt.sweep);
  for (const auto& ax : axes) get_coefficient(base, ax.key);  // validates the name
  std::size_t total = 1;
  for (const auto& ax : axes) total *= ax.values.size();
  std::vector<json> cells(total);
  std::vector<int> verdicts(total, -1);
  std::atomic<std::size_t> next{0};
  Options quiet = opt;
  quiet.plot = false;
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      RunConfig cfg = base;
      json point;
      std::size_t rem = i;
      for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
        const double v = it->values[rem % it->values.size()];
        rem /= it->values.size();
        set_coefficient(cfg, it->key, v);
        point[it->key] = v;
      }
      json cell{{"point", point}};
      try {
        Outcome o = fn(cfg, quiet, out);
        cell["result"] = std::move(o.result);
        cell["verdict"] = o.verdict;
        verdicts[i] = o.verdict ? 1 : 0;
      } catch (const std::exception& e) {
        cell["error"] = e.what();
        cell["exit_code"] = map_error(e);
      }
      cells[i] = std::move(cell);
    }
  };
  const int nw = std::max(1, opt.workers);
  std::vector<std::thread> pool;
  for (int w = 1; w < nw; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  json result{{"sweep", opt.sweep}, {"cells", cells}};
  write_text(out / (command + ".json"), dump_json(envelope(command, base, result)) + "\n");
  if (!opt.expect.empty()) {
    const bool want = opt.expect == "satisfied";
    for (int v : verdicts) {
      if (v != (want ? 1 : 0)) return kExitVerdict;
    }
  }
  return kExitOk;
}

int run_command(const std::string& command, Runner fn, const Options& opt) {
  RunConfig cfg = load_config(opt.config);
  if (opt.seed) cfg.seed = *opt.seed;
  const fs::path out(opt.out);
  fs::create_directories(out);
  if (!opt.sweep.empty()) {
    if (command != "classify" && command != "verify") {
      throw ConfigurationError("--sweep is only available for classify and verify");
    }
    return run_sweep(command, fn, cfg, opt, out);
  }
  Outcome o = fn(cfg, opt, out);
  o.result["verdict"] = o.verdict ? "satisfied" : "violated";
  write_text(out / (command + ".json"), dump_json(envelope(command, cfg, o.result)) + "\n");
  std::cout << command << ": " << (o.verdict ? "satisfied" : "violated") << " -> "
            << (out / (command + ".json")).string() << "\n";
  if (!opt.expect.empty() && o.verdict != (opt.expect == "satisfied")) {
    std::cerr << "steadylab: verdict " << (o.verdict ? "satisfied" : "violated")
              << " does not match --expect " << opt.expect << "\n";
    return kExitVerdict;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral simulation and steady-profile analysis for RKRLW-type equations"};
  app.require_subcommand(1);
  Options opt;
  struct Cmd {
    const char* name;
    const char* help;
    Runner fn;
  };
  const Cmd cmds[] = {
      {"simulate", "integrate the configured equation and write the trajectory", run_simulate},
      {"classify", "classify bounded symmetric steady profiles of the linear constraint", run_classify},
      {"verify", "check admissibility of the single-frequency profile and its speed", run_verify},
      {"monitor", "simulate and track symmetry, steadiness and weak residuals", run_monitor},
  };
  std::vector<std::pair<CLI::App*, const Cmd*>> subs;
  for (const auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", opt.config, "configuration file (INI-style or JSON)")->required();
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--seed", opt.seed, "seed override for randomized checks");
    sub->add_flag("--emit-plot-data", opt.plot, "write gnuplot-ready two-column files");
    sub->add_option("--expect", opt.expect, "exit 4 when the verdict differs")
        ->check(CLI::IsMember({"satisfied", "violated"}));
    sub->add_option("--sweep", opt.sweep, "coefficient grid, e.g. b2=-1:1:5,b10=0.5:2:4");
    sub->add_option("--workers", opt.workers, "threads for --sweep")->check(CLI::PositiveNumber);
    subs.emplace_back(sub, &c);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }
  for (const auto& [sub, c] : subs) {
    if (!sub->parsed()) continue;
    try {
      return run_command(c->name, c->fn, opt);
    } catch (const std::exception& e) {
      std::cerr << "steadylab " << c->name << ": " << e.what() << "\n";
      return map_error(e);
    }
  }
  return kExitInternal;
}
