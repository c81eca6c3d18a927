#pragma once

#include <vector>

namespace steadylab {

// Finite-difference weights (Fornberg's recurrence) for the derivative of
// order `order` at z using the nodes x. Requires x.size() > order.
std::vector<double> fornberg_weights(double z, const std::vector<double>& x, int order);

// Centered weights on unit spacing for offsets -h..h; size 2h+1.
std::vector<double> central_weights(int order, int accuracy);

}  // namespace steadylab
