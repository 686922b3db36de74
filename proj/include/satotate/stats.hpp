// Sample statistics over Frobenius data: character inner-product
// matrices, the err/Err diagnostics against a candidate group's expected
// matrix, sample moments, and convergence profiles.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "satotate/charring.hpp"
#include "satotate/frobdata.hpp"
#include "satotate/haar.hpp"
#include "satotate/weyl.hpp"

namespace satotate {

// Evaluates the characters of a weight set at a record's s-vector.
class CharEvaluator {
  public:
    CharEvaluator(int g, std::span<const WeightOmega> weights);
    size_t size() const { return polys_.size(); }
    void eval(std::span<const double> s, std::span<double> out) const;

  private:
    int genus_;
    std::vector<CompiledPoly> polys_;
};

std::vector<std::vector<double>> sample_inner_matrix(
    const SampleSet& set, std::span<const WeightOmega> weights,
    int workers = 0);

struct InnerProductReport {
    std::vector<std::string> labels;  // weight names, row/column order
    std::vector<std::vector<double>> sample;
    std::vector<std::vector<double>> expected;
    std::vector<std::vector<double>> err;  // sample - expected
    double Err = 0.0;                      // max |err|
    std::vector<std::vector<long long>> rounded;  // nearest-int of sample
    // Entries whose distance to the nearest integer exceeds
    // 0.5 * (1 - guard) with guard = 0.2; small-sample artifacts.
    std::vector<std::pair<int, int>> flagged;
    size_t sample_size = 0;
    double quadrature_error = 0.0;
};

InnerProductReport err_report(const SampleSet& set, const GroupSpec& spec,
                              std::span<const WeightOmega> weights,
                              int nodes = 128, int workers = 0);

// (M_{1,S}[a_i], ..., M_{n,S}[a_i])
std::vector<double> sample_moments(const SampleSet& set, int index,
                                   int max_order);

struct ConvergenceProfile {
    int chunk = 0;
    struct Row {
        long long n = 0;      // records used
        double delta = 0.0;   // Err over the first n records
        double delta_bar = 0.0;
        double sqrtk_delta_bar = 0.0;
    };
    std::vector<Row> rows;
};

ConvergenceProfile convergence_profile(const SampleSet& set,
                                       const GroupSpec& spec,
                                       std::span<const WeightOmega> weights,
                                       int chunk, int nodes = 128,
                                       int workers = 0);

// Least-squares slope of log(delta_bar) against log(n).
double profile_slope(const ConvergenceProfile& profile);

// Product-basis analysis: characters are products of factor characters
// evaluated on the per-factor s-blocks of each record.
std::vector<std::vector<double>> sample_product_matrix(
    const SampleSet& set, const GroupSpec& spec,
    std::span<const ProductWeight> weights, int workers = 0);

InnerProductReport product_err_report(const SampleSet& set,
                                      const GroupSpec& spec,
                                      std::span<const ProductWeight> weights,
                                      int nodes = 128, int workers = 0);

}  // namespace satotate
