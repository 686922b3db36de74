#include "satotate/bases.hpp"

#include <cassert>
#include <map>
#include <mutex>
#include <stdexcept>

namespace satotate {

namespace {

mpz_class binom(long n, long k) {
    if (k < 0 || k > n || n < 0) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(k));
    return r;
}

// Rows g..0 of the shared recurrence c_{i,j} = c_{i+1,j-1} + c_{i+1,j+1}.
// Columns run to 2g so the Remark-1 family can recurse past column g;
// `truncate` imposes Lemma 4.2's extra boundary c_{i,j} = 0 for j > g.
std::vector<std::vector<mpz_class>> recurrence_table(int g, bool truncate) {
    std::vector<std::vector<mpz_class>> c(
        g + 1, std::vector<mpz_class>(2 * g + 2, 0));
    c[g][g] = 1;
    for (int i = g - 1; i >= 0; --i)
        for (int j = 0; j <= 2 * g; ++j) {
            if (truncate && j > g) continue;
            mpz_class v = c[i + 1][j + 1];
            if (j > 0) v += c[i + 1][j - 1];
            c[i][j] = v;
        }
    for (auto& row : c) row.resize(g + 1);
    return c;
}

ConversionMatrix invert(const ConversionMatrix& m) {
    const int n = m.genus + 1;
    std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(2 * n, 0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = m.c[j][i];  // row i: target_i
        a[i][n + i] = 1;
    }
    for (int col = 0; col < n; ++col) {
        int piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) throw std::logic_error("conversion matrix is singular");
        std::swap(a[piv], a[col]);
        const mpq_class d = a[col][col];
        for (int j = 0; j < 2 * n; ++j) a[col][j] /= d;
        for (int i = 0; i < n; ++i) {
            if (i == col || a[i][col] == 0) continue;
            const mpq_class f = a[i][col];
            for (int j = col; j < 2 * n; ++j) a[i][j] -= f * a[col][j];
        }
    }
    ConversionMatrix out;
    out.genus = m.genus;
    out.source = m.target;
    out.target = m.source;
    out.c.assign(n, std::vector<mpz_class>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            mpq_class v = a[i][n + j];
            v.canonicalize();
            if (v.get_den() != 1)
                throw std::logic_error("conversion inverse is not integral");
            out.c[j][i] = v.get_num();
        }
    return out;
}

template <typename Fn>
const ConversionMatrix& cached(int g, std::map<int, ConversionMatrix>& cache,
                               std::mutex& mu, Fn&& make) {
    std::scoped_lock lock(mu);
    auto it = cache.find(g);
    if (it == cache.end()) it = cache.emplace(g, make()).first;
    return it->second;
}

}  // namespace

std::vector<double> ConversionMatrix::apply(std::span<const double> v) const {
    assert(static_cast<int>(v.size()) == genus + 1);
    std::vector<double> out(genus + 1, 0.0);
    for (int j = 0; j <= genus; ++j)
        for (int i = 0; i <= genus; ++i)
            out[j] += c[i][j].get_d() * v[i];
    return out;
}

std::vector<mpq_class> ConversionMatrix::apply_exact(
    std::span<const mpq_class> v) const {
    assert(static_cast<int>(v.size()) == genus + 1);
    std::vector<mpq_class> out(genus + 1, 0);
    for (int j = 0; j <= genus; ++j)
        for (int i = 0; i <= genus; ++i) out[j] += mpq_class(c[i][j]) * v[i];
    return out;
}

const ConversionMatrix& matrix_s_to_a(int g) {
    static std::map<int, ConversionMatrix> cache;
    static std::mutex mu;
    return cached(g, cache, mu, [g] {
        ConversionMatrix m;
        m.genus = g;
        m.source = Basis::S;
        m.target = Basis::A;
        m.c = recurrence_table(g, /*truncate=*/false);
        return m;
    });
}

const ConversionMatrix& matrix_a_to_s(int g) {
    static std::map<int, ConversionMatrix> cache;
    static std::mutex mu;
    return cached(g, cache, mu, [g] { return invert(matrix_s_to_a(g)); });
}

const ConversionMatrix& matrix_s_to_chi(int g) {
    static std::map<int, ConversionMatrix> cache;
    static std::mutex mu;
    return cached(g, cache, mu, [g] {
        ConversionMatrix m;
        m.genus = g;
        m.source = Basis::S;
        m.target = Basis::Chi;
        m.c = recurrence_table(g, /*truncate=*/true);
        return m;
    });
}

const ConversionMatrix& matrix_chi_to_s(int g) {
    static std::map<int, ConversionMatrix> cache;
    static std::mutex mu;
    return cached(g, cache, mu, [g] { return invert(matrix_s_to_chi(g)); });
}

std::vector<double> chi_from_a(int g, std::span<const double> a) {
    assert(static_cast<int>(a.size()) == g + 1);
    std::vector<double> chi(g + 1);
    for (int i = 0; i <= g; ++i) chi[i] = a[i] - (i >= 2 ? a[i - 2] : 0.0);
    return chi;
}

std::vector<double> a_from_chi(int g, std::span<const double> chi) {
    assert(static_cast<int>(chi.size()) == g + 1);
    std::vector<double> a(g + 1);
    for (int i = 0; i <= g; ++i) a[i] = chi[i] + (i >= 2 ? a[i - 2] : 0.0);
    return a;
}

std::vector<mpq_class> chi_from_a_exact(int g, std::span<const mpq_class> a) {
    std::vector<mpq_class> chi(g + 1);
    for (int i = 0; i <= g; ++i)
        chi[i] = a[i] - (i >= 2 ? a[i - 2] : mpq_class(0));
    return chi;
}

std::vector<mpq_class> a_from_chi_exact(int g, std::span<const mpq_class> chi) {
    std::vector<mpq_class> a(g + 1);
    for (int i = 0; i <= g; ++i)
        a[i] = chi[i] + (i >= 2 ? a[i - 2] : mpq_class(0));
    return a;
}

// Expand T^g * g(T + 1/T) where g(T) = sum_k (-1)^k s_k T^(g-k); the
// result is self-reciprocal of degree 2g and a_i is (-1)^i times the
// coefficient of T^(2g-i).
std::vector<mpq_class> expand_real_to_full(int g, std::span<const mpq_class> s) {
    assert(static_cast<int>(s.size()) == g + 1);
    std::vector<mpq_class> f(2 * g + 1, 0);  // coefficient of T^e, e = idx
    for (int k = 0; k <= g; ++k) {
        const int m = g - k;
        const mpq_class sk = (k % 2 ? -s[k] : s[k]);
        for (int r = 0; r <= m; ++r) {
            // T^g * (T + 1/T)^m term: C(m, r) T^(g + m - 2r)
            const int e = g + m - 2 * r;
            f[static_cast<size_t>(e)] += sk * mpq_class(binom(m, r));
        }
    }
    std::vector<mpq_class> a(g + 1);
    for (int i = 0; i <= g; ++i) {
        a[i] = f[static_cast<size_t>(2 * g - i)];
        if (i % 2) a[i] = -a[i];
    }
    return a;
}

std::vector<double> expand_real_to_full(int g, std::span<const double> s) {
    std::vector<mpq_class> sq(g + 1);
    for (int i = 0; i <= g; ++i) sq[i] = s[i];
    const auto aq = expand_real_to_full(g, std::span<const mpq_class>(sq));
    std::vector<double> a(g + 1);
    for (int i = 0; i <= g; ++i) a[i] = aq[i].get_d();
    return a;
}

mpz_class remark1_c_closed(int g, int i, int j) {
    if ((i + j) % 2 != 0) return 0;
    return binom(g - i, g - (i + j) / 2);
}

std::optional<mpq_class> remark1_d_closed(int g, int i, int j) {
    if (i == g && j == g) return mpq_class(1);
    if (2 * g - i - j == 0) return std::nullopt;
    if ((i + j) % 2 != 0) return mpq_class(0);  // i^(i-j) + i^(j-i) = 0
    // i^(i-j) + i^(j-i) = 2 * (-1)^((j-i)/2) for even differences
    const long half = (static_cast<long>(j) - i) / 2;
    const int sign = (half % 2 == 0) ? 1 : -1;
    mpq_class ratio(g - i, 2 * g - i - j);
    ratio.canonicalize();
    mpq_class v(2 * sign);
    v *= ratio;
    v *= mpq_class(binom(g - (i + j) / 2, (j - i) / 2));
    return v;
}

std::optional<mpq_class> lemma42_c_closed(int g, int i, int j) {
    if ((i + j) % 2 != 0) return mpq_class(0);
    mpq_class v(binom(2 * (g + 1 - j), 2 * (g + 1) - (i + j)));
    v *= mpq_class(binom(g - i, g - (i + j) / 2));
    return v;
}

mpq_class lemma42_d_closed(int g, int i, int j) {
    if ((i + j) % 2 != 0) return 0;
    const long half = (static_cast<long>(j) - i) / 2;
    const int sign = (half % 2 == 0) ? 1 : -1;
    mpq_class v(sign);
    v *= mpq_class(binom(g - (i + j) / 2, (j - i) / 2));
    return v;
}

void chi_point_from_s(int g, std::span<const double> s,
                      std::span<double> chi_out) {
    assert(static_cast<int>(s.size()) == g &&
           static_cast<int>(chi_out.size()) == g);
    thread_local std::map<int, std::vector<double>> cache;
    auto it = cache.find(g);
    if (it == cache.end()) {
        const ConversionMatrix& m = matrix_s_to_chi(g);
        std::vector<double> flat(static_cast<size_t>(g) * (g + 1));
        for (int j = 1; j <= g; ++j)
            for (int i = 0; i <= g; ++i)
                flat[static_cast<size_t>(j - 1) * (g + 1) + i] = m.c[i][j].get_d();
        it = cache.emplace(g, std::move(flat)).first;
    }
    const double* rows = it->second.data();
    for (int j = 0; j < g; ++j) {
        const double* row = rows + static_cast<size_t>(j) * (g + 1);
        double v = row[0];
        for (int i = 1; i <= g; ++i) v += row[i] * s[i - 1];
        chi_out[j] = v;
    }
}

CharPoly substitute_basis(const CharPoly& p, Basis target) {
    assert(p.basis() == Basis::Chi);
    const int g = p.genus();
    if (target == Basis::Chi) return p;

    // Linear form for each chi_j in the target variables.
    std::vector<CharPoly> forms;
    forms.reserve(g + 1);
    for (int j = 1; j <= g; ++j) {
        CharPoly f(g, target);
        if (target == Basis::S) {
            const ConversionMatrix& m = matrix_s_to_chi(g);
            f = CharPoly::constant(g, target, m.c[0][j]);
            for (int i = 1; i <= g; ++i) {
                CharPoly v = CharPoly::variable(g, target, i);
                v *= m.c[i][j];
                f += v;
            }
        } else {
            // chi_j = a_j - a_(j-2), with a_0 = 1
            f = CharPoly::variable(g, target, j);
            if (j == 2)
                f -= CharPoly::constant(g, target, 1);
            else if (j > 2)
                f -= CharPoly::variable(g, target, j - 2);
        }
        forms.push_back(std::move(f));
    }

    CharPoly out(g, target);
    for (const auto& [e, c] : p.terms()) {
        CharPoly term = CharPoly::constant(g, target, c);
        for (int i = 0; i < g; ++i)
            for (int k = 0; k < e[i]; ++k) term = term * forms[i];
        out += term;
    }
    return out;
}

CharPoly character_in_basis(int g, const WeightOmega& x, Basis basis) {
    return substitute_basis(engine(g).chi(x), basis);
}

}  // namespace satotate
