#pragma once

#include <vector>

namespace rodrigues {

struct GaussRule {
    std::vector<double> nodes;  // on [-1, 1], ascending
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule from the three-term recurrence and Newton's method.
GaussRule gauss_legendre(int n);

} // namespace rodrigues
