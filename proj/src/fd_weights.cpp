#include "steadylab/fd_weights.hpp"

#include "steadylab/errors.hpp"

namespace steadylab {

std::vector<double> fornberg_weights(double z, const std::vector<double>& x, int order) {
  const int n = static_cast<int>(x.size()) - 1;
  if (order < 0 || n < order) throw InvalidArgument("not enough nodes for derivative order");
  // c[i][k]: weight of node i for derivative k.
  std::vector<std::vector<double>> c(x.size(), std::vector<double>(order + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) w[i] = c[i][order];
  return w;
}

std::vector<double> central_weights(int order, int accuracy) {
  if (order < 1 || accuracy < 2 || accuracy % 2 != 0) {
    throw InvalidArgument("central stencil needs order >= 1 and even accuracy");
  }
  const int points = 2 * ((order + 1) / 2) - 1 + accuracy;
  const int h = points / 2;
  std::vector<double> x;
  for (int i = -h; i <= h; ++i) x.push_back(static_cast<double>(i));
  return fornberg_weights(0.0, x, order);
}

}  // namespace steadylab
