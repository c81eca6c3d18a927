#include "steadylab/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pseudo.hpp"
#include "steadylab/errors.hpp"
#include "steadylab/fd_weights.hpp"
#include "steadylab/perturbed.hpp"
#include "steadylab/rkrlw.hpp"
#include "steadylab/spectral.hpp"

namespace steadylab {
namespace {

// Squared reflection mismatch as a function of the axis, in Fourier space.
// Each bin contributes |X - conj(X) e^{-2 i xi a}|^2, computed directly so
// that exact symmetry gives round-off level values (no 2|X|^2 - 2Re(..)).
class ReflectionObjective {
 public:
  explicit ReflectionObjective(const Field& v)
      : grid_(v.grid()), x_(forward(v)), nyq_(v.size() / 2) {
    for (std::size_t k = 0; k <= nyq_; ++k) norm2_ += weight(k) * std::norm(x_[k]);
  }

  double norm2() const { return norm2_; }

  double q(double a) const {
    double s = 0.0;
    for (std::size_t k = 1; k < nyq_; ++k) {
      const auto e = std::polar(1.0, -2.0 * grid_.wavenumber(k) * a);
      s += 2.0 * std::norm(x_[k] - std::conj(x_[k]) * e);
    }
    const double r = x_[nyq_].real() * (1.0 - std::cos(2.0 * grid_.wavenumber(nyq_) * a));
    return s + r * r;
  }

  // Same sum on many equally spaced axes using a power recurrence.
  std::vector<double> scan(double a0, double step, std::size_t count) const {
    std::vector<double> out(count);
    const double base = grid_.wavenumber(1);
    for (std::size_t j = 0; j < count; ++j) {
      const double a = a0 + step * static_cast<double>(j);
      const auto z = std::polar(1.0, -2.0 * base * a);
      std::complex<double> e = z;
      double s = 0.0;
      for (std::size_t k = 1; k < nyq_; ++k) {
        s += 2.0 * std::norm(x_[k] - std::conj(x_[k]) * e);
        e *= z;
      }
      const double r = x_[nyq_].real() * (1.0 - std::cos(2.0 * grid_.wavenumber(nyq_) * a));
      out[j] = s + r * r;
    }
    return out;
  }

  double dq(double a) const {
    double s = 0.0;
    for (std::size_t k = 1; k < nyq_; ++k) {
      const double xi = grid_.wavenumber(k);
      s += 8.0 * xi * std::imag(x_[k] * x_[k] * std::polar(1.0, 2.0 * xi * a));
    }
    const double xi = grid_.wavenumber(nyq_);
    const double th = 2.0 * xi * a;
    const double xn = x_[nyq_].real();
    return s + 4.0 * xi * xn * xn * (1.0 - std::cos(th)) * std::sin(th);
  }

  double d2q(double a) const {
    double s = 0.0;
    for (std::size_t k = 1; k < nyq_; ++k) {
      const double xi = grid_.wavenumber(k);
      s += 16.0 * xi * xi * std::real(x_[k] * x_[k] * std::polar(1.0, 2.0 * xi * a));
    }
    return s;
  }

  double defect(double a) const {
    if (norm2_ == 0.0) return 0.0;
    return std::sqrt(std::max(0.0, q(a)) / norm2_);
  }

 private:
  double weight(std::size_t k) const { return (k == 0 || k == nyq_) ? 1.0 : 2.0; }

  Grid grid_;
  Spectrum x_;
  std::size_t nyq_;
  double norm2_ = 0.0;
};

double golden_min(const ReflectionObjective& obj, double lo, double hi, double tol) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - r * (hi - lo), d = lo + r * (hi - lo);
  double fc = obj.q(c), fd = obj.q(d);
  while (hi - lo > tol) {
    if (fc <= fd) {
      hi = d; d = c; fd = fc;
      c = hi - r * (hi - lo); fc = obj.q(c);
    } else {
      lo = c; c = d; fc = fd;
      d = lo + r * (hi - lo); fd = obj.q(d);
    }
  }
  return 0.5 * (lo + hi);
}

// A few Newton steps on dq/da; kept only while the objective does not grow.
double polish(const ReflectionObjective& obj, double a, double lo, double hi) {
  double best = a, fbest = obj.q(a);
  for (int it = 0; it < 6; ++it) {
    const double h2 = obj.d2q(best);
    if (!(h2 > 0.0)) break;
    const double next = best - obj.dq(best) / h2;
    if (!(next >= lo && next <= hi)) break;
    const double f = obj.q(next);
    if (!(f <= fbest)) break;
    if (next == best) break;
    best = next;
    fbest = f;
  }
  return best;
}

AxisResult refine(const ReflectionObjective& obj, double center, double half) {
  const double lo = center - half, hi = center + half;
  double a = golden_min(obj, lo, hi, 1e-12);
  a = polish(obj, a, lo, hi);
  return {a, obj.defect(a)};
}

double wrap(double a, double period) {
  double w = a - std::floor(a / period) * period;
  if (w >= period) w -= period;
  if (w < 0.0) w = 0.0;
  return w;
}

void require_nonconstant(const Field& v) {
  if (variance(v) <= 1e-14) {
    throw DegenerateInput("symmetry axis undefined for a near-constant field");
  }
}

}  // namespace

double reflection_defect(const Field& v, double axis) {
  return ReflectionObjective(v).defect(axis);
}

AxisResult detect_axis(const Field& v) {
  require_nonconstant(v);
  const ReflectionObjective obj(v);
  const double half_period = 0.5 * v.grid().length();
  const std::size_t count = v.size();
  const double step = half_period / static_cast<double>(count);
  const std::vector<double> vals = obj.scan(0.0, step, count);

  std::vector<std::size_t> minima;
  for (std::size_t j = 0; j < count; ++j) {
    const double prev = vals[(j + count - 1) % count];
    const double next = vals[(j + 1) % count];
    if (vals[j] <= prev && vals[j] <= next) minima.push_back(j);
  }
  std::sort(minima.begin(), minima.end(),
            [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
  if (minima.size() > 6) minima.resize(6);

  std::vector<AxisResult> cands;
  for (std::size_t j : minima) {
    AxisResult r = refine(obj, step * static_cast<double>(j), step);
    r.axis = wrap(r.axis, half_period);
    cands.push_back(r);
  }
  double dmin = cands.front().defect;
  for (const auto& c : cands) dmin = std::min(dmin, c.defect);
  // Ties go to the smallest coordinate.
  AxisResult best{half_period, 0.0};
  for (const auto& c : cands) {
    if (c.defect <= dmin + 1e-10 && c.axis < best.axis) best = c;
  }
  return best;
}

AxisResult refine_axis_near(const Field& v, double guess, double halfwidth) {
  require_nonconstant(v);
  if (!(halfwidth > 0.0)) throw InvalidArgument("search half-width must be positive");
  const ReflectionObjective obj(v);
  const std::size_t count = 65;
  const double step = 2.0 * halfwidth / static_cast<double>(count - 1);
  const std::vector<double> vals = obj.scan(guess - halfwidth, step, count);
  const std::size_t j =
      static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  return refine(obj, guess - halfwidth + step * static_cast<double>(j), step);
}

double SymmetryReport::max_defect() const {
  double m = 0.0;
  for (const auto& s : defect_samples) m = std::max(m, s.second);
  return m;
}

SymmetryReport track_axis(const Trajectory& traj) {
  if (traj.size() < 3) throw InsufficientData("track_axis needs at least three snapshots");
  const Grid& g = traj.grid();
  const double L = g.length();
  const double half = 0.5 * L;
  SymmetryReport rep;
  std::vector<double> times;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Field& v = traj[i];
    const AxisResult global = detect_axis(v);
    double axis = global.axis;
    double defect = global.defect;
    if (i > 0) {
      const double prev = rep.axis_unwrapped.back();
      double predicted = prev;
      if (i > 1) {
        const double dt_prev = times[i - 1] - times[i - 2];
        const double dt_now = v.time() - times[i - 1];
        predicted = prev + (prev - rep.axis_unwrapped[i - 2]) * dt_now / dt_prev;
      }
      const double width = std::max(2.0 * std::abs(predicted - prev), 2.0 * g.spacing());
      const AxisResult local = refine_axis_near(v, predicted, width);
      if (local.defect <= 1.5 * global.defect + 1e-10) {
        axis = local.axis;
        defect = local.defect;
      } else {
        axis = global.axis + std::round((prev - global.axis) / half) * half;
      }
    }
    times.push_back(v.time());
    rep.axis_unwrapped.push_back(axis);
    rep.axis_samples.emplace_back(v.time(), wrap(axis, L));
    rep.defect_samples.emplace_back(v.time(), defect);
  }
  const std::vector<double> nodes(times.begin(), times.begin() + 3);
  const auto w = fornberg_weights(times[0], nodes, 1);
  rep.axis_speed = w[0] * rep.axis_unwrapped[0] + w[1] * rep.axis_unwrapped[1] +
                   w[2] * rep.axis_unwrapped[2];
  return rep;
}

double affine_deviation(const SymmetryReport& report) {
  const std::size_t n = report.axis_unwrapped.size();
  if (n < 2) return 0.0;
  double st = 0, sa = 0, stt = 0, sta = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = report.axis_samples[i].first, a = report.axis_unwrapped[i];
    st += t; sa += a; stt += t * t; sta += t * a;
  }
  const double dn = static_cast<double>(n);
  const double slope = (dn * sta - st * sa) / (dn * stt - st * st);
  const double icept = (sa - slope * st) / dn;
  double dev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = report.axis_samples[i].first;
    dev = std::max(dev, std::abs(report.axis_unwrapped[i] - (icept + slope * t)));
  }
  return dev;
}

namespace {

std::vector<std::vector<double>> spatial(const Field& f, int order) {
  return detail::derivatives(f.grid(), forward(f), order);
}

double norm_of(const std::vector<double>& r, double h) {
  double s = 0.0;
  for (double x : r) s += x * x;
  return std::sqrt(s * h);
}

}  // namespace

DecompositionResiduals decomposition_residuals(const Trajectory& traj,
                                               const SymmetryReport& report,
                                               const ModelParams& params) {
  if (traj.size() < 5) throw InsufficientData("decomposition residuals need >= 5 snapshots");
  if (report.axis_samples.size() != traj.size()) {
    throw InvalidArgument("symmetry report does not match trajectory length");
  }
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (std::abs(report.axis_samples[i].first - traj[i].time()) >
        1e-12 * std::max(1.0, std::abs(traj[i].time()))) {
      throw InvalidArgument("symmetry report times do not align with trajectory times");
    }
  }
  if (std::holds_alternative<std::monostate>(params)) {
    throw InvalidArgument("decomposition residuals need model coefficients");
  }
  const Grid& g = traj.grid();
  const double h = g.spacing();
  const double ld = report.axis_speed;
  const auto times = traj.times();
  DecompositionResiduals out;
  if (std::holds_alternative<PerturbedParams>(params)) {
    out.r_linear = 0.0;
    out.r_nonlinear = 0.0;
  }

  for (std::size_t i = 2; i + 2 < traj.size(); ++i) {
    const std::vector<double> nodes(times.begin() + static_cast<long>(i) - 2,
                                    times.begin() + static_cast<long>(i) + 3);
    const auto w = fornberg_weights(times[i], nodes, 1);
    std::vector<double> vt(g.size(), 0.0);
    for (int s = 0; s < 5; ++s) {
      const Field& f = traj[i - 2 + static_cast<std::size_t>(s)];
      for (std::size_t j = 0; j < g.size(); ++j) vt[j] += w[static_cast<std::size_t>(s)] * f[j];
    }
    const Field& v = traj[i];
    const auto d = spatial(v, 5);

    std::vector<double> tr(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) tr[j] = vt[j] + ld * d[1][j];
    out.r_transport = std::max(out.r_transport, norm_of(tr, h));

    if (const auto* rp = std::get_if<GRKRLWParams>(&params)) {
      const Field kf = apply_k(flux(v, *rp), rp->symbol());
      std::vector<double> bal(g.size());
      for (std::size_t j = 0; j < g.size(); ++j) bal[j] = ld * d[1][j] - kf[j];
      out.r_balance = std::max(out.r_balance, norm_of(bal, h));
    } else {
      const auto& p = std::get<PerturbedParams>(params);
      const Field rhs = perturbed_rhs(v, p);
      std::vector<double> bal(g.size());
      for (std::size_t j = 0; j < g.size(); ++j) bal[j] = ld * d[1][j] + rhs[j];
      out.r_balance = std::max(out.r_balance, norm_of(bal, h));

      const auto dt = spatial(Field(g, vt, v.time()), 4);
      std::vector<double> lin(g.size()), nl(g.size());
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double u = d[0][j], u1 = d[1][j], u2 = d[2][j], u3 = d[3][j], u4 = d[4][j],
                     u5 = d[5][j];
        const double trans = ld * (u1 + p.a3 * u3 + p.a4 * u5);
        lin[j] = dt[0][j] + p.a3 * dt[2][j] + p.a4 * dt[4][j] + trans -
                 (p.b1 * u + p.b2 * u2 + p.b10 * u4);
        const double vn1 = std::pow(u, p.n - 1);
        const double vm = std::pow(u, p.m);
        const double rhs_nl = p.a1 * u1 + p.a2 * u3 + p.a5 * p.n * vn1 * u1 - p.b3 * u1 * u2 -
                              p.b4 * vm * u1 - p.b5 * u * u3 - p.b6 * u * u1 * u2 -
                              p.b7 * u1 * u1 * u1 - p.b8 * u1 * u4 - p.b9 * u2 * u3 -
                              p.b11 * u5 - p.b12 * u * u5;
        nl[j] = trans - rhs_nl;
      }
      out.r_linear = std::max(*out.r_linear, norm_of(lin, h));
      out.r_nonlinear = std::max(*out.r_nonlinear, norm_of(nl, h));
    }
  }
  return out;
}

void write_csv(const SymmetryReport& report, std::ostream& os) {
  os << "t,axis,defect\n";
  char buf[96];
  for (std::size_t i = 0; i < report.axis_samples.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", report.axis_samples[i].first,
                  report.axis_samples[i].second, report.defect_samples[i].second);
    os << buf;
  }
}

nlohmann::json to_json(const SymmetryReport& report) {
  return {{"axis_speed", report.axis_speed}, {"max_defect", report.max_defect()}};
}

}  // namespace steadylab
