#pragma once

#include <vector>

namespace satotate {

// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Cached; n >= 1.
const GaussLegendre& gauss_legendre(int n);

// Rule mapped to [a, b].
struct MappedRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
MappedRule mapped_rule(int n, double a, double b);

}  // namespace satotate
