#include "satotate/haar.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "satotate/stats.hpp"

using namespace satotate;

namespace {

WeightOmega om(std::vector<int> c) { return WeightOmega{std::move(c)}; }
constexpr double pi = std::numbers::pi;

}  // namespace

TEST_CASE("group spec parsing") {
    CHECK(GroupSpec::parse("USp(4)").str() == "USp(4)");
    CHECK(GroupSpec::parse("SO2*SO2").str() == "SO2*SO2");
    CHECK(GroupSpec::parse("SU2*USp(4)").str() == "SU2*USp(4)");
    CHECK(GroupSpec::parse("SO(2) * SU(2)").str() == "SO2*SU2");
    CHECK(GroupSpec::parse("USp(6)").ambient_genus() == 3);
    CHECK(GroupSpec::parse("SU2*USp(4)").ambient_genus() == 3);
    CHECK_THROWS_AS(GroupSpec::parse("USp(5)"), UsageError);
    CHECK_THROWS_AS(GroupSpec::parse("SO3"), UsageError);
    CHECK_THROWS_AS(GroupSpec::parse("SU2**SU2"), UsageError);
    CHECK_THROWS_AS(GroupSpec::parse(""), UsageError);
}

TEST_CASE("torus densities") {
    const Factor so2{FactorType::SO2, 1};
    const Factor su2{FactorType::SU2, 1};
    const Factor usp4{FactorType::USp, 2};
    CHECK(torus_density(so2, std::vector<double>{1.234}) == 1.0);
    CHECK(torus_density(su2, std::vector<double>{pi / 2}) ==
          doctest::Approx(1.0));
    CHECK(torus_density(usp4, std::vector<double>{pi / 3, pi / 3}) ==
          doctest::Approx(0.0));
}

TEST_CASE("angles_to_s") {
    const GroupSpec usp4 = GroupSpec::parse("USp(4)");
    const auto id = angles_to_s(usp4, std::vector<double>{0.0, 0.0});
    CHECK(id[0] == doctest::Approx(4.0));
    CHECK(id[1] == doctest::Approx(4.0));
    const auto z = angles_to_s(usp4, std::vector<double>{pi / 2, pi / 2});
    CHECK(z[0] == doctest::Approx(0.0));
    CHECK(z[1] == doctest::Approx(0.0));
    const auto m = angles_to_s(usp4, std::vector<double>{0.0, pi});
    CHECK(m[0] == doctest::Approx(0.0));
    CHECK(m[1] == doctest::Approx(-4.0));
}

TEST_CASE("Schur orthonormality for the full group") {
    for (int g = 1; g <= 2; ++g) {
        const GroupSpec spec =
            GroupSpec::parse("USp(" + std::to_string(2 * g) + ")");
        const auto I = enumerate_dominant(g, 3);
        const auto em = expected_matrix(spec, I, 64);
        for (size_t i = 0; i < I.size(); ++i)
            for (size_t j = 0; j < I.size(); ++j)
                CHECK(std::abs(em.entries[i][j] - (i == j ? 1.0 : 0.0)) <=
                      1e-8);
    }
}

TEST_CASE("expected matrix for SO(2)^2 in USp(4) matches the branching table") {
    const GroupSpec spec = GroupSpec::parse("SO2*SO2");
    const auto I = enumerate_dominant(2, 2);
    const std::vector<WeightOmega> first5(I.begin(), I.begin() + 5);
    const auto em = expected_matrix(spec, first5, 128);
    const double expect[5][5] = {{1, 0, 1, 2, 0},
                                 {0, 4, 0, 0, 8},
                                 {1, 0, 5, 6, 0},
                                 {2, 0, 6, 12, 0},
                                 {0, 8, 0, 0, 24}};
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            CHECK(std::abs(em.entries[i][j] - expect[i][j]) <= 1e-6);
}

TEST_CASE("expected matrix for SU(2) x USp(4) in USp(6)") {
    const GroupSpec spec = GroupSpec::parse("SU2*USp(4)");
    const auto I = enumerate_dominant(3, 2);
    const std::vector<WeightOmega> first6(I.begin(), I.begin() + 6);
    // 64 nodes: every integrand is polynomial well below the exactness
    // degree, so this matches the 128-node acceptance run.
    const auto em = expected_matrix(spec, first6, 64);
    const double expect[6][6] = {{1, 0, 1, 0, 0, 0}, {0, 2, 0, 1, 0, 2},
                                 {1, 0, 3, 0, 1, 0}, {0, 1, 0, 2, 0, 2},
                                 {0, 0, 1, 0, 3, 0}, {0, 2, 0, 2, 0, 6}};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(std::abs(em.entries[i][j] - expect[i][j]) <= 1e-6);
}

TEST_CASE("product character orthonormality") {
    const GroupSpec spec = GroupSpec::parse("SU2*USp(4)");
    const ProductWeight w1{om({1}), om({0, 1})};
    CHECK(product_character_inner(spec, w1, w1, 64) == doctest::Approx(1.0));
    const ProductWeight l{om({1}), om({0, 0})};
    const ProductWeight r{om({0}), om({1, 0})};
    CHECK(std::abs(product_character_inner(spec, l, r, 64)) <= 1e-6);

    const auto grid = product_weight_grid(spec, 4);
    REQUIRE(grid.size() == 16);
    const auto m = product_expected_matrix(spec, grid, 64);
    for (size_t i = 0; i < 16; ++i)
        for (size_t j = 0; j < 16; ++j)
            CHECK(std::abs(m[i][j] - (i == j ? 1.0 : 0.0)) <= 1e-6);
}

TEST_CASE("expected_inner single pairs") {
    CHECK(std::abs(expected_inner(GroupSpec::parse("USp(4)"), om({1, 1}),
                                  om({1, 1}), 64) -
                   1.0) <= 1e-8);
    // branching entry from the SO(2)^2 table
    CHECK(std::abs(expected_inner(GroupSpec::parse("SO2*SO2"), om({1, 0}),
                                  om({1, 0}), 64) -
                   4.0) <= 1e-6);
}

TEST_CASE("moment expectations reproduce the USp(4) integer moments") {
    const GroupSpec spec = GroupSpec::parse("USp(4)");
    const double a1_expect[10] = {0, 1, 0, 3, 0, 14, 0, 84, 0, 594};
    const double a2_expect[10] = {1, 2, 4, 10, 27, 82, 268, 940, 3476, 13448};
    for (int n = 1; n <= 10; ++n) {
        CHECK(std::abs(moment_expectation(spec, 1, n, 64) -
                       a1_expect[n - 1]) <= 1e-6);
        CHECK(std::abs(moment_expectation(spec, 2, n, 64) -
                       a2_expect[n - 1]) <= 1e-6);
    }
    // constant coefficient
    CHECK(moment_expectation(spec, 0, 5, 16) == doctest::Approx(1.0));
}

TEST_CASE("sampler first moments") {
    const long long n = 1 << 16;
    const double bound = 4.0 / std::sqrt(static_cast<double>(n));
    {
        const SampleSet so2 = haar_sample(GroupSpec::parse("SO2"), n, 7);
        double sum = 0;
        for (const auto& rec : so2.records) sum += rec.s[0] * rec.s[0];
        CHECK(std::abs(sum / n - 2.0) <= bound);
    }
    {
        const SampleSet su2 = haar_sample(GroupSpec::parse("SU2"), n, 7);
        double sum = 0;
        for (const auto& rec : su2.records) sum += rec.s[0] * rec.s[0];
        CHECK(std::abs(sum / n - 1.0) <= bound);
    }
}

TEST_CASE("sampler is reproducible and deterministic") {
    const GroupSpec spec = GroupSpec::parse("SU2*USp(4)");
    const SampleSet a = haar_sample(spec, 3000, 99);
    const SampleSet b = haar_sample(spec, 3000, 99);
    REQUIRE(a.records.size() == b.records.size());
    for (size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].s == b.records[i].s);
        CHECK(a.records[i].factor_s == b.records[i].factor_s);
    }
    const SampleSet c = haar_sample(spec, 3000, 100);
    bool differs = false;
    for (size_t i = 0; i < c.records.size() && !differs; ++i)
        differs = c.records[i].s != a.records[i].s;
    CHECK(differs);
}

TEST_CASE("quadrature against Monte Carlo at 2^16 draws") {
    const GroupSpec spec = GroupSpec::parse("USp(4)");
    const auto I = enumerate_dominant(2, 1);
    const long long n = 1 << 16;
    const SampleSet sample = haar_sample(spec, n, 11);
    const auto mc = sample_inner_matrix(sample, I);
    const auto em = expected_matrix(spec, I, 64);
    const double bound = 4.0 / std::sqrt(static_cast<double>(n));
    for (size_t i = 0; i < I.size(); ++i)
        for (size_t j = 0; j < I.size(); ++j)
            CHECK(std::abs(mc[i][j] - em.entries[i][j]) <= bound);
}

TEST_CASE("doubling the nodes stays within the reported error estimate") {
    const GroupSpec spec = GroupSpec::parse("USp(4)");
    const auto I = enumerate_dominant(2, 2);
    for (int nodes : {4, 8, 16}) {
        const auto at = expected_matrix(spec, I, nodes);
        const auto doubled = expected_matrix(spec, I, 2 * nodes);
        double change = 0;
        for (size_t i = 0; i < I.size(); ++i)
            for (size_t j = 0; j < I.size(); ++j)
                change = std::max(change, std::abs(doubled.entries[i][j] -
                                                   at.entries[i][j]));
        CHECK(change <= at.error_estimate + 1e-12);
    }
}
