// Weight-lattice combinatorics for the root system C_g.
//
// Conventions: the fundamental weight w_l is e_1 + ... + e_l, so a weight
// given by nonnegative fundamental-weight coordinates x (the "omega" view)
// has epsilon coordinates lambda_i = x_i + x_{i+1} + ... + x_g, and the
// Weyl vector is rho = (g, g-1, ..., 1).  The Weyl group acts by signed
// permutations of the epsilon coordinates.

#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace satotate {

// Dominant-chamber weight in fundamental-weight coordinates (entries >= 0).
struct WeightOmega {
    std::vector<int> coords;

    int genus() const { return static_cast<int>(coords.size()); }
    auto operator<=>(const WeightOmega&) const = default;
};

// Weight in epsilon coordinates; dominant iff weakly decreasing and >= 0.
struct WeightEpsilon {
    std::vector<int> coords;

    int genus() const { return static_cast<int>(coords.size()); }
    auto operator<=>(const WeightEpsilon&) const = default;
};

WeightEpsilon omega_to_epsilon(const WeightOmega& x);
WeightOmega epsilon_to_omega(const WeightEpsilon& lambda);

// rho = (g, g-1, ..., 1)
WeightEpsilon weyl_vector(int g);

bool is_dominant(const WeightOmega& x);
bool is_strictly_dominant(const WeightEpsilon& v);

// Coordinate sum x_1 + ... + x_g (grades the dominant cone).
int sigma(const WeightOmega& x);

// Reduction of v to the unique strictly dominant representative under the
// signed-permutation Weyl group.  Returns sign 0 when v lies on a wall
// (a zero coordinate, or two coordinates of equal absolute value);
// otherwise sign = det(w) = (sort parity) * (-1)^(sign flips) and
// `reduced` holds w(v).
struct ReducedWeight {
    int sign = 0;
    WeightEpsilon reduced;
};
ReducedWeight dominant_regular_reduce(const WeightEpsilon& v);

// All x in N^g with sigma(x) <= d, ordered by sigma ascending and then
// lexicographically descending within each sigma level.
std::vector<WeightOmega> enumerate_dominant(int g, int d);

}  // namespace satotate
