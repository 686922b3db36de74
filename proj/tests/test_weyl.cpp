#include "satotate/weyl.hpp"

#include <algorithm>
#include <numeric>

#include "doctest.h"

using namespace satotate;

namespace {

WeightOmega om(std::vector<int> c) { return WeightOmega{std::move(c)}; }
WeightEpsilon ep(std::vector<int> c) { return WeightEpsilon{std::move(c)}; }

long long binomial(int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST_CASE("coordinate conversions") {
    CHECK(omega_to_epsilon(om({0, 0})) == ep({0, 0}));
    CHECK(omega_to_epsilon(om({0, 1})) == ep({1, 1}));
    CHECK(omega_to_epsilon(om({1, 1, 0})) == ep({2, 1, 0}));
    CHECK(epsilon_to_omega(ep({1, 1})) == om({0, 1}));
    CHECK(epsilon_to_omega(ep({2, 1})) == om({1, 1}));
    CHECK(epsilon_to_omega(ep({0, 0, 0})) == om({0, 0, 0}));
}

TEST_CASE("conversions are mutually inverse (exhaustive)") {
    for (int g = 1; g <= 4; ++g) {
        std::vector<int> v(g, -3);
        while (true) {
            WeightEpsilon lam{v};
            CHECK(omega_to_epsilon(epsilon_to_omega(lam)) == lam);
            WeightOmega x{v};
            CHECK(epsilon_to_omega(omega_to_epsilon(x)) == x);
            int i = g - 1;
            while (i >= 0 && v[i] == 3) v[i--] = -3;
            if (i < 0) break;
            ++v[i];
        }
    }
}

TEST_CASE("weyl vector") {
    CHECK(weyl_vector(1) == ep({1}));
    CHECK(weyl_vector(2) == ep({2, 1}));
    CHECK(weyl_vector(3) == ep({3, 2, 1}));
}

TEST_CASE("sigma") {
    CHECK(sigma(om({0, 0})) == 0);
    CHECK(sigma(om({1, 0})) == 1);
    CHECK(sigma(om({2, 1})) == 3);
}

TEST_CASE("dominant_regular_reduce basics") {
    auto r = dominant_regular_reduce(ep({2, 1}));
    CHECK(r.sign == 1);
    CHECK(r.reduced == ep({2, 1}));

    r = dominant_regular_reduce(ep({1, 2}));
    CHECK(r.sign == -1);
    CHECK(r.reduced == ep({2, 1}));

    CHECK(dominant_regular_reduce(ep({1, -1})).sign == 0);
    CHECK(dominant_regular_reduce(ep({0, 3})).sign == 0);
}

TEST_CASE("reduce is idempotent and strictly dominant") {
    for (int g = 1; g <= 3; ++g) {
        std::vector<int> v(g, -3);
        while (true) {
            const auto r = dominant_regular_reduce(WeightEpsilon{v});
            if (r.sign != 0) {
                CHECK(is_strictly_dominant(r.reduced));
                const auto again = dominant_regular_reduce(r.reduced);
                CHECK(again.sign == 1);
                CHECK(again.reduced == r.reduced);
            }
            int i = g - 1;
            while (i >= 0 && v[i] == 3) v[i--] = -3;
            if (i < 0) break;
            ++v[i];
        }
    }
}

TEST_CASE("reduce inverts every signed permutation with det(w)") {
    for (int g = 1; g <= 3; ++g) {
        const auto strict = [&] {
            std::vector<int> v(g);
            for (int i = 0; i < g; ++i) v[i] = 2 * (g - i) - 1;  // 2g-1,...,1
            return WeightEpsilon{v};
        }();
        std::vector<int> perm(g);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            int parity = 1;
            for (int i = 0; i < g; ++i)
                for (int j = i + 1; j < g; ++j)
                    if (perm[i] > perm[j]) parity = -parity;
            for (int mask = 0; mask < (1 << g); ++mask) {
                int det = parity;
                WeightEpsilon moved;
                moved.coords.resize(g);
                for (int i = 0; i < g; ++i) {
                    int c = strict.coords[perm[i]];
                    if (mask & (1 << i)) {
                        c = -c;
                        det = -det;
                    }
                    moved.coords[i] = c;
                }
                const auto r = dominant_regular_reduce(moved);
                CHECK(r.sign == det);
                CHECK(r.reduced == strict);
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
}

TEST_CASE("enumerate_dominant order and count") {
    const auto d1 = enumerate_dominant(2, 1);
    CHECK(d1 == std::vector<WeightOmega>{om({0, 0}), om({1, 0}), om({0, 1})});

    const auto d2 = enumerate_dominant(2, 2);
    CHECK(d2 == std::vector<WeightOmega>{om({0, 0}), om({1, 0}), om({0, 1}),
                                         om({2, 0}), om({1, 1}), om({0, 2})});

    const auto g3 = enumerate_dominant(3, 2);
    REQUIRE(g3.size() == 10);
    CHECK(g3[4] == om({2, 0, 0}));
    CHECK(g3[5] == om({1, 1, 0}));
    CHECK(g3[6] == om({1, 0, 1}));
    CHECK(g3[7] == om({0, 2, 0}));
    CHECK(g3[8] == om({0, 1, 1}));
    CHECK(g3[9] == om({0, 0, 2}));

    for (int g = 1; g <= 4; ++g)
        for (int d = 0; d <= 5; ++d)
            CHECK(enumerate_dominant(g, d).size() ==
                  static_cast<size_t>(binomial(g + d, g)));
}
