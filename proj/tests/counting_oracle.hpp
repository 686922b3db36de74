// Test-only brute-force point counter: independent F_q arithmetic (the
// modulus search runs in the opposite order from the implementation) and
// a plain double loop over (x, y) pairs.

#pragma once

#include <stdexcept>
#include <vector>

#include "satotate/frobdata.hpp"

namespace satotate::testing {

struct OracleField {
    long long p;
    int k;
    long long q;
    std::vector<long long> mod;

    OracleField(long long p_, int k_) : p(p_), k(k_) {
        q = 1;
        for (int i = 0; i < k; ++i) q *= p;
        if (k == 1) return;
        for (long long enc = q - 1; enc >= 0; --enc) {
            std::vector<long long> c(k);
            long long e = enc;
            for (int i = 0; i < k; ++i) {
                c[i] = e % p;
                e /= p;
            }
            bool root = false;
            for (long long x = 0; x < p && !root; ++x) {
                long long v = 1;
                for (int i = k - 1; i >= 0; --i) v = (v * x + c[i]) % p;
                root = v == 0;
            }
            if (!root) {
                mod = c;
                return;
            }
        }
        throw std::logic_error("no irreducible modulus found");
    }

    std::vector<long long> decode(long long idx) const {
        std::vector<long long> v(k);
        for (int i = 0; i < k; ++i) {
            v[i] = idx % p;
            idx /= p;
        }
        return v;
    }

    long long encode(const std::vector<long long>& v) const {
        long long idx = 0;
        for (int i = k - 1; i >= 0; --i) idx = idx * p + v[i];
        return idx;
    }

    long long mul(long long a, long long b) const {
        const auto av = decode(a), bv = decode(b);
        std::vector<long long> t(2 * k - 1, 0);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) t[i + j] = (t[i + j] + av[i] * bv[j]) % p;
        for (int d = 2 * k - 2; d >= k; --d) {
            const long long v = t[d];
            if (!v) continue;
            t[d] = 0;
            for (int i = 0; i < k; ++i)
                t[d - k + i] = (t[d - k + i] + (p - mod[i]) * v) % p;
        }
        t.resize(k);
        return encode(t);
    }

    long long add(long long a, long long b) const {
        const auto av = decode(a), bv = decode(b);
        std::vector<long long> t(k);
        for (int i = 0; i < k; ++i) t[i] = (av[i] + bv[i]) % p;
        return encode(t);
    }
};

inline long long oracle_count(const CurveSpec& curve, long long p, int k) {
    const OracleField F(p, k);
    const int d = static_cast<int>(curve.f.size()) - 1;
    std::vector<long long> fc(d + 1);
    for (int i = 0; i <= d; ++i) fc[i] = ((curve.f[i] % p) + p) % p;
    long long count = 0;
    for (long long x = 0; x < F.q; ++x) {
        long long v = 0;
        for (int i = d; i >= 0; --i) v = F.add(F.mul(v, x), fc[i]);
        for (long long y = 0; y < F.q; ++y)
            if (F.mul(y, y) == v) ++count;
    }
    if (d % 2 == 1) {
        count += 1;
    } else {
        for (long long y = 0; y < F.q; ++y)
            if (F.mul(y, y) == fc[d]) ++count;
    }
    return count;
}

}  // namespace satotate::testing
