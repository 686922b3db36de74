// Exact-expectation oracle for candidate Sato-Tate groups: tensor
// Gauss-Legendre quadrature of the Weyl integration densities over the
// maximal torus of SO(2)^a x SU(2)^b x prod USp(2m), block-embedded in an
// ambient USp(2g), plus a seeded rejection sampler for the same measures.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "satotate/frobdata.hpp"
#include "satotate/groupspec.hpp"
#include "satotate/weyl.hpp"

namespace satotate {

// Unnormalized Weyl density of one factor at the given torus angles:
// SO(2) is constant on [0, 2pi); SU(2) is sin^2 on [0, pi]; USp(2m) is
// prod_{j<k} (cos t_j - cos t_k)^2 * prod_j sin^2 t_j on [0, pi]^m.
double torus_density(const Factor& factor, std::span<const double> angles);

// Angle domain [lo, hi) of one torus dimension of the factor.
double factor_angle_span(const Factor& factor);

// s_1..s_g as elementary symmetric functions of t_i = 2 cos(angle_i),
// angles concatenated across factors.
std::vector<double> angles_to_s(const GroupSpec& spec,
                                std::span<const double> angles);

struct ExpectedMatrix {
    std::vector<WeightOmega> weights;
    std::vector<std::vector<double>> entries;
    int nodes = 0;
    // Max entrywise change observed against a half-resolution rule.
    double error_estimate = 0.0;
};

// <chi_lambda, chi_nu>_H over I x I for ambient-genus characters.
ExpectedMatrix expected_matrix(const GroupSpec& spec,
                               std::span<const WeightOmega> weights,
                               int nodes = 128, int workers = 0);

double expected_inner(const GroupSpec& spec, const WeightOmega& lambda,
                      const WeightOmega& nu, int nodes = 128);

// E[a_i^n] over the group, a_i from the s -> a conversion.
double moment_expectation(const GroupSpec& spec, int index, int order,
                          int nodes = 128);

// One weight per factor: SU2/USp factors take a dominant weight of the
// factor's own rank; an SO2 factor takes (n), meaning the class function
// 2 cos(n phi) for n >= 1 and 1 for n = 0.
using ProductWeight = std::vector<WeightOmega>;

std::string product_weight_str(const ProductWeight& w);

// Cartesian grid of the first per_factor weights of each factor, first
// factor varying slowest.
std::vector<ProductWeight> product_weight_grid(const GroupSpec& spec,
                                               int per_factor);

// Expectation of the product of factor characters; factors integrate
// independently.
double product_character_inner(const GroupSpec& spec, const ProductWeight& left,
                               const ProductWeight& right, int nodes = 128);

std::vector<std::vector<double>> product_expected_matrix(
    const GroupSpec& spec, std::span<const ProductWeight> weights,
    int nodes = 128);

// `count` independent Haar draws via per-factor rejection sampling;
// deterministic for a fixed seed, independent of thread count.  Records
// carry per-factor s-blocks when the spec has more than one factor.
SampleSet haar_sample(const GroupSpec& spec, long long count, uint64_t seed);

}  // namespace satotate
