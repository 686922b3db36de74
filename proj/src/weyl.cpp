#include "satotate/weyl.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <numeric>

namespace satotate {

WeightEpsilon omega_to_epsilon(const WeightOmega& x) {
    const int g = x.genus();
    WeightEpsilon lambda;
    lambda.coords.resize(g);
    int suffix = 0;
    for (int i = g - 1; i >= 0; --i) {
        suffix += x.coords[i];
        lambda.coords[i] = suffix;
    }
    return lambda;
}

WeightOmega epsilon_to_omega(const WeightEpsilon& lambda) {
    const int g = lambda.genus();
    WeightOmega x;
    x.coords.resize(g);
    for (int i = 0; i < g; ++i)
        x.coords[i] = lambda.coords[i] - (i + 1 < g ? lambda.coords[i + 1] : 0);
    return x;
}

WeightEpsilon weyl_vector(int g) {
    WeightEpsilon rho;
    rho.coords.resize(g);
    for (int i = 0; i < g; ++i) rho.coords[i] = g - i;
    return rho;
}

bool is_dominant(const WeightOmega& x) {
    return std::all_of(x.coords.begin(), x.coords.end(),
                       [](int c) { return c >= 0; });
}

bool is_strictly_dominant(const WeightEpsilon& v) {
    const int g = v.genus();
    for (int i = 0; i < g; ++i) {
        if (v.coords[i] <= 0) return false;
        if (i + 1 < g && v.coords[i] <= v.coords[i + 1]) return false;
    }
    return true;
}

int sigma(const WeightOmega& x) {
    return std::accumulate(x.coords.begin(), x.coords.end(), 0);
}

ReducedWeight dominant_regular_reduce(const WeightEpsilon& v) {
    const int g = v.genus();
    int sign = 1;
    std::vector<int> a(g);
    for (int i = 0; i < g; ++i) {
        if (v.coords[i] == 0) return {};
        a[i] = std::abs(v.coords[i]);
        if (v.coords[i] < 0) sign = -sign;
    }
    // Insertion sort, descending; count swaps for the permutation parity.
    for (int i = 1; i < g; ++i) {
        int j = i;
        while (j > 0 && a[j - 1] < a[j]) {
            std::swap(a[j - 1], a[j]);
            sign = -sign;
            --j;
        }
    }
    for (int i = 0; i + 1 < g; ++i)
        if (a[i] == a[i + 1]) return {};
    ReducedWeight out;
    out.sign = sign;
    out.reduced.coords = std::move(a);
    return out;
}

std::vector<WeightOmega> enumerate_dominant(int g, int d) {
    assert(g >= 1 && d >= 0);
    std::vector<WeightOmega> out;
    std::vector<int> cur(g, 0);
    // Depth-first in lex-descending order within a fixed coordinate budget.
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == g) {
            if (remaining == 0) out.push_back(WeightOmega{cur});
            return;
        }
        for (int c = remaining; c >= 0; --c) {
            cur[pos] = c;
            self(self, pos + 1, remaining - c);
        }
        cur[pos] = 0;
    };
    for (int level = 0; level <= d; ++level) rec(rec, 0, level);
    return out;
}

}  // namespace satotate
