#include "satotate/frobdata.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "satotate/bases.hpp"
#include "satotate/parallel.hpp"

namespace satotate {

namespace {

int poly_degree(std::span<const long long> f) {
    int d = static_cast<int>(f.size()) - 1;
    while (d > 0 && f[d] == 0) --d;
    return d;
}

std::string render_curve(std::span<const long long> f) {
    std::ostringstream os;
    os << "y^2=";
    bool first = true;
    for (int i = poly_degree(f); i >= 0; --i) {
        const long long c = f[i];
        if (c == 0) continue;
        const long long ac = std::llabs(c);
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? "-" : "+");
        }
        if (ac != 1 || i == 0) {
            os << ac;
            if (i > 0) os << "*";
        }
        if (i > 0) {
            os << "x";
            if (i > 1) os << "^" << i;
        }
    }
    if (first) os << "0";
    return os.str();
}

// Fraction-free (Bareiss) determinant; destroys m.
mpz_class bareiss_det(std::vector<std::vector<mpz_class>>& m) {
    const int n = static_cast<int>(m.size());
    if (n == 0) return 1;
    int sign = 1;
    mpz_class prev = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            int swap = -1;
            for (int i = k + 1; i < n; ++i)
                if (m[i][k] != 0) {
                    swap = i;
                    break;
                }
            if (swap < 0) return 0;
            std::swap(m[k], m[swap]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                mpz_class v = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                m[i][j] = v;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

mpz_class resultant(std::span<const long long> a, std::span<const long long> b) {
    const int da = poly_degree(a), db = poly_degree(b);
    const int n = da + db;
    std::vector<std::vector<mpz_class>> syl(n, std::vector<mpz_class>(n, 0));
    for (int r = 0; r < db; ++r)
        for (int i = 0; i <= da; ++i)
            syl[r][r + da - i] = static_cast<long>(a[i]);
    for (int r = 0; r < da; ++r)
        for (int i = 0; i <= db; ++i)
            syl[db + r][r + db - i] = static_cast<long>(b[i]);
    return bareiss_det(syl);
}

// Incremental prime generator (trial division by earlier primes).
class PrimeStream {
  public:
    long long next() {
        while (true) {
            ++candidate_;
            bool prime = true;
            for (long long q : primes_) {
                if (q * q > candidate_) break;
                if (candidate_ % q == 0) {
                    prime = false;
                    break;
                }
            }
            if (prime) {
                primes_.push_back(candidate_);
                return candidate_;
            }
        }
    }

  private:
    long long candidate_ = 1;
    std::vector<long long> primes_;
};

// F_{p^k} with elements packed as indices sum c_i p^i, k <= 3.
struct SmallField {
    long long p = 0;
    int k = 1;
    long long q = 0;
    std::array<long long, 3> mod{};  // m(z) = z^k + mod[k-1] z^(k-1) + ... + mod[0]

    static SmallField make(long long p, int k) {
        SmallField f;
        f.p = p;
        f.k = k;
        f.q = 1;
        for (int i = 0; i < k; ++i) f.q *= p;
        if (k > 1) f.find_modulus();
        return f;
    }

    // Smallest-coefficient monic irreducible of degree k (k in {2,3}):
    // candidates ordered by their packed coefficient index; degree <= 3
    // polynomials are irreducible iff they have no root.
    void find_modulus() {
        for (long long enc = 0;; ++enc) {
            long long e = enc;
            std::array<long long, 3> c{};
            for (int i = 0; i < k; ++i) {
                c[i] = e % p;
                e /= p;
            }
            if (e != 0)
                throw DataError("no irreducible modulus found (impossible)");
            bool has_root = false;
            for (long long x = 0; x < p && !has_root; ++x) {
                long long v = 1;  // monic leading term
                for (int i = k - 1; i >= 0; --i) v = (v * x + c[i]) % p;
                has_root = v == 0;
            }
            if (!has_root) {
                for (int i = 0; i < k; ++i) mod[i] = c[i];
                return;
            }
        }
    }

    void decode(long long idx, std::array<long long, 3>& out) const {
        out[0] = idx % p;
        out[1] = k > 1 ? (idx / p) % p : 0;
        out[2] = k > 2 ? idx / (p * p) : 0;
    }

    long long encode(const std::array<long long, 3>& v) const {
        long long idx = v[0];
        if (k > 1) idx += v[1] * p;
        if (k > 2) idx += v[2] * p * p;
        return idx;
    }

    void mul(const std::array<long long, 3>& a, const std::array<long long, 3>& b,
             std::array<long long, 3>& out) const {
        if (k == 1) {
            out = {(a[0] * b[0]) % p, 0, 0};
            return;
        }
        std::array<long long, 5> t{};
        for (int i = 0; i < k; ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; j < k; ++j) t[i + j] += a[i] * b[j] % p;
        }
        for (int d = 2 * k - 2; d >= k; --d) {
            const long long v = t[d] % p;
            if (v == 0) continue;
            t[d] = 0;
            for (int i = 0; i < k; ++i)
                t[d - k + i] += (p - mod[i]) * v % p;
        }
        for (int i = 0; i < k; ++i) out[i] = t[i] % p;
        for (int i = k; i < 3; ++i) out[i] = 0;
    }

    void add_scalar(std::array<long long, 3>& a, long long c) const {
        a[0] = (a[0] + c) % p;
    }
};

}  // namespace

CurveSpec CurveSpec::from_coeffs(std::vector<long long> coeffs,
                                 std::string label) {
    const int d = poly_degree(coeffs);
    coeffs.resize(d + 1);
    if (d < 3)
        throw DataError("curve must have deg f >= 3 (genus >= 1)");
    if (poly_discriminant(coeffs) == 0)
        throw DataError("f must be squarefree");
    CurveSpec c;
    c.genus = (d - 1) / 2;
    c.f = std::move(coeffs);
    c.label = label.empty() ? render_curve(c.f) : std::move(label);
    return c;
}

CurveSpec CurveSpec::parse(std::string_view text) {
    size_t pos = 0;
    auto fail = [&](const std::string& why) -> void {
        throw UsageError("bad curve '" + std::string(text) + "': " + why +
                         " at position " + std::to_string(pos));
    };
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    };
    auto eat = [&](char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    };
    auto parse_uint = [&]() -> long long {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (pos == start) fail("expected a number");
        try {
            return std::stoll(std::string(text.substr(start, pos - start)));
        } catch (const std::exception&) {
            fail("number out of range");
            return 0;  // unreachable
        }
    };

    skip_ws();
    if (!(eat('y') || eat('Y'))) fail("expected 'y^2'");
    if (!eat('^') || !eat('2')) fail("expected 'y^2'");
    if (!eat('=')) fail("expected '='");

    std::map<int, long long> coeffs;
    bool first_term = true;
    while (true) {
        skip_ws();
        if (pos == text.size()) {
            if (first_term) fail("expected a polynomial in x");
            break;
        }
        long long sign = 1;
        if (eat('+')) {
            sign = 1;
        } else if (eat('-')) {
            sign = -1;
        } else if (!first_term) {
            fail("expected '+' or '-'");
        }
        first_term = false;
        skip_ws();
        long long coef = 1;
        bool saw_coef = false;
        if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            coef = parse_uint();
            saw_coef = true;
        }
        eat('*');
        skip_ws();
        int expo = 0;
        if (pos < text.size() && (text[pos] == 'x' || text[pos] == 'X')) {
            ++pos;
            expo = 1;
            if (eat('^')) expo = static_cast<int>(parse_uint());
        } else if (!saw_coef) {
            fail("expected a coefficient or 'x'");
        }
        if (expo > 16) fail("exponent too large");
        coeffs[expo] += sign * coef;
    }
    std::vector<long long> f(coeffs.empty() ? 1 : coeffs.rbegin()->first + 1, 0);
    for (const auto& [e, c] : coeffs) f[e] = c;
    return from_coeffs(std::move(f));
}

mpz_class poly_discriminant(std::span<const long long> f) {
    const int d = poly_degree(f);
    assert(d >= 1);
    std::vector<long long> df(d);
    for (int i = 1; i <= d; ++i) df[i - 1] = f[i] * i;
    mpz_class res = resultant(f, df);
    // disc = (-1)^(d(d-1)/2) res / lc
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), res.get_mpz_t(),
                mpz_class(static_cast<long>(f[d])).get_mpz_t());
    assert(r == 0);
    if ((static_cast<long>(d) * (d - 1) / 2) % 2 != 0) q = -q;
    return q;
}

std::vector<long long> good_primes(const CurveSpec& curve, int first_n) {
    const mpz_class disc = poly_discriminant(curve.f);
    const long long lc = curve.f[poly_degree(curve.f)];
    std::vector<long long> out;
    out.reserve(first_n);
    PrimeStream primes;
    while (static_cast<int>(out.size()) < first_n) {
        const long long p = primes.next();
        if (p == 2) continue;
        if (mpz_divisible_ui_p(disc.get_mpz_t(), static_cast<unsigned long>(p)))
            continue;
        if (std::llabs(lc) % p == 0) continue;
        out.push_back(p);
    }
    return out;
}

long long count_points(const CurveSpec& curve, long long p, int k,
                       long long budget) {
    if (p < 3 || p % 2 == 0) throw DataError("characteristic must be odd");
    if (mpz_probab_prime_p(mpz_class(static_cast<long>(p)).get_mpz_t(), 25) == 0)
        throw DataError("p = " + std::to_string(p) + " is not prime");
    if (k < 1 || k > 3)
        throw DataError("extension degree " + std::to_string(k) +
                        " not supported by the naive counter; "
                        "precompute externally and use the ingestion format");
    const int d = poly_degree(curve.f);
    if (curve.f[d] % p == 0)
        throw DataError("p = " + std::to_string(p) +
                        " divides the leading coefficient");
    double qd = 1;
    for (int i = 0; i < k; ++i) qd *= static_cast<double>(p);
    if (qd > static_cast<double>(budget))
        throw BudgetError("p^k = " + std::to_string(static_cast<long long>(qd)) +
                          " exceeds the counting budget " + std::to_string(budget) +
                          "; count externally and use the ingestion format");
    // Field products are done in 64-bit words.
    if (qd > static_cast<double>(1LL << 31))
        throw BudgetError("p^k beyond 2^31 is not supported by the naive counter");

    const SmallField F = SmallField::make(p, k);
    const long long q = F.q;

    // Reduced coefficients of f as base-field constants.
    std::vector<long long> fc(d + 1);
    for (int i = 0; i <= d; ++i) fc[i] = ((curve.f[i] % p) + p) % p;

    // Both sweeps run as an outer loop over the high coordinates and an
    // inner loop along x -> x + 1, where polynomial values advance by a
    // forward-difference cascade: field additions only, no divisions.
    const long long outer = q / p;
    auto fadd = [&](std::array<long long, 3>& a,
                    const std::array<long long, 3>& b) {
        for (int i = 0; i < k; ++i) {
            a[i] += b[i];
            if (a[i] >= p) a[i] -= p;
        }
    };
    auto eval_at = [&](const std::array<long long, 3>& x,
                       std::span<const long long> poly) {
        std::array<long long, 3> v{poly.back(), 0, 0};
        for (int i = static_cast<int>(poly.size()) - 2; i >= 0; --i) {
            std::array<long long, 3> t{};
            F.mul(v, x, t);
            F.add_scalar(t, poly[i]);
            v = t;
        }
        return v;
    };
    // Difference registers for `poly` starting at the block base x0.
    auto diff_table = [&](const std::array<long long, 3>& x0,
                          std::span<const long long> poly,
                          std::vector<std::array<long long, 3>>& regs) {
        const int dd = static_cast<int>(poly.size()) - 1;
        std::vector<std::array<long long, 3>> row(dd + 1);
        std::array<long long, 3> x = x0;
        for (int j = 0; j <= dd; ++j) {
            row[j] = eval_at(x, poly);
            F.add_scalar(x, 1);
        }
        regs.resize(dd + 1);
        for (int level = 0; level <= dd; ++level) {
            regs[level] = row[0];
            for (int j = 0; j + level < dd; ++j)
                for (int i = 0; i < k; ++i) {
                    row[j][i] = row[j + 1][i] - row[j][i];
                    if (row[j][i] < 0) row[j][i] += p;
                }
        }
    };

    // Squares bitmap over F_q, filled along y -> y + 1.
    std::vector<uint64_t> squares((q + 63) / 64, 0);
    {
        const long long sq_poly[3] = {0, 0, 1};  // y^2
        std::vector<std::array<long long, 3>> regs;
        std::array<long long, 3> base{};
        for (long long h = 0; h < outer; ++h) {
            base[0] = 0;
            base[1] = h % p;
            base[2] = k > 2 ? h / p : 0;
            diff_table(base, std::span<const long long>(sq_poly, 3), regs);
            for (long long c0 = 0; c0 < p; ++c0) {
                const long long e = F.encode(regs[0]);
                squares[e >> 6] |= uint64_t{1} << (e & 63);
                fadd(regs[0], regs[1]);
                fadd(regs[1], regs[2]);
            }
        }
    }
    auto is_square = [&](long long e) {
        return (squares[e >> 6] >> (e & 63)) & 1;
    };

    long long count = 0;
    {
        std::vector<std::array<long long, 3>> regs;
        std::array<long long, 3> base{};
        for (long long h = 0; h < outer; ++h) {
            base[0] = 0;
            base[1] = h % p;
            base[2] = k > 2 ? h / p : 0;
            diff_table(base, fc, regs);
            for (long long c0 = 0; c0 < p; ++c0) {
                const long long e = F.encode(regs[0]);
                if (e == 0)
                    count += 1;
                else if (is_square(e))
                    count += 2;
                for (int level = 0; level < d; ++level)
                    fadd(regs[level], regs[level + 1]);
            }
        }
    }

    if (d % 2 == 1) {
        count += 1;  // one point at infinity on the odd-degree model
    } else {
        // two points at infinity iff lc is a square in F_q
        if (is_square(fc[d])) count += 2;
    }
    return count;
}

std::vector<long long> lpoly_from_counts(long long p,
                                         std::span<const long long> counts) {
    const int g = static_cast<int>(counts.size());
    // Power sums of the Frobenius eigenvalues.
    std::vector<__int128> power(g + 1, 0);
    __int128 pk = 1;
    for (int j = 1; j <= g; ++j) {
        pk *= p;
        power[j] = pk + 1 - counts[j - 1];
    }
    std::vector<__int128> ta(g + 1, 0);
    ta[0] = 1;
    for (int i = 1; i <= g; ++i) {
        __int128 sum = 0;
        for (int j = 1; j <= i; ++j) {
            const __int128 term = ta[i - j] * power[j];
            sum += (j % 2 == 1) ? term : -term;
        }
        if (sum % i != 0)
            throw DataError("inconsistent point counts: Newton recurrence is "
                            "non-integral at index " + std::to_string(i));
        ta[i] = sum / i;
    }
    std::vector<long long> out(g);
    for (int i = 1; i <= g; ++i) {
        assert(ta[i] <= __int128(INT64_MAX) && ta[i] >= __int128(INT64_MIN));
        out[i - 1] = static_cast<long long>(ta[i]);
    }
    return out;
}

namespace {

void check_weil_bounds(int g, long long p, std::span<const long long> ta,
                       const std::string& context) {
    for (int i = 1; i <= g; ++i) {
        mpz_class bound;
        mpz_bin_uiui(bound.get_mpz_t(), 2 * g, i);
        bound = bound * bound;
        mpz_class pi;
        mpz_ui_pow_ui(pi.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(i));
        bound *= pi;
        const mpz_class lhs =
            mpz_class(static_cast<long>(ta[i - 1])) *
            mpz_class(static_cast<long>(ta[i - 1]));
        if (lhs > bound)
            throw DataError(context + ": |a~_" + std::to_string(i) +
                            "| = " + std::to_string(std::llabs(ta[i - 1])) +
                            " violates the Weil bound at p = " + std::to_string(p));
    }
}

}  // namespace

std::vector<double> normalize(int g, long long p,
                              std::span<const long long> tilde_a) {
    assert(static_cast<int>(tilde_a.size()) == g);
    check_weil_bounds(g, p, tilde_a, "normalize");
    const double sqrtp = std::sqrt(static_cast<double>(p));
    std::vector<double> a(g + 1);
    a[0] = 1.0;
    double denom = 1.0;
    for (int i = 1; i <= g; ++i) {
        denom *= sqrtp;
        a[i] = static_cast<double>(tilde_a[i - 1]) / denom;
    }
    const std::vector<double> s = matrix_a_to_s(g).apply(a);
    return {s.begin() + 1, s.end()};
}

SampleSet build_sample(const CurveSpec& curve, int first_n, long long budget,
                       int workers) {
    const int g = curve.genus;
    const std::vector<long long> primes = good_primes(curve, first_n);
    // Fail fast if the largest prime is out of budget.
    if (!primes.empty()) {
        double qg = 1;
        for (int i = 0; i < g; ++i) qg *= static_cast<double>(primes.back());
        if (qg > static_cast<double>(budget))
            throw BudgetError(
                "p^g = " + std::to_string(static_cast<long long>(qg)) +
                " at p = " + std::to_string(primes.back()) +
                " exceeds the counting budget; lower the prime count or "
                "ingest externally computed data");
    }

    SampleSet set;
    set.label = curve.label;
    set.genus = g;
    set.provenance = Provenance::Counted;
    set.records.resize(primes.size());
    parallel_for(primes.size(), workers, [&](size_t i) {
        const long long p = primes[i];
        FrobeniusRecord rec;
        rec.p = p;
        std::vector<long long> counts(g);
        for (int k = 1; k <= g; ++k) counts[k - 1] = count_points(curve, p, k, budget);
        rec.counts = counts;
        rec.tilde_a = lpoly_from_counts(p, counts);
        rec.s = normalize(g, p, *rec.tilde_a);
        set.records[i] = std::move(rec);
    });
    return set;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_sample(const SampleSet& set, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    const bool synthetic = set.provenance == Provenance::Synthetic;
    out << "# label=" << set.label << " genus=" << set.genus << " kind="
        << (synthetic ? "synthetic" : "tilde_a");
    if (synthetic && !set.factors_text.empty())
        out << " factors=" << set.factors_text;
    out << "\n";
    for (const FrobeniusRecord& rec : set.records) {
        out << rec.p;
        if (synthetic) {
            if (!rec.factor_s.empty() && !set.factors_text.empty()) {
                for (const auto& block : rec.factor_s)
                    for (double v : block) out << "," << format_double(v);
            } else {
                for (double v : rec.s) out << "," << format_double(v);
            }
        } else {
            if (!rec.tilde_a)
                throw DataError("record at p = " + std::to_string(rec.p) +
                                " has no integer Weil coefficients to write");
            for (long long v : *rec.tilde_a) out << "," << v;
        }
        out << "\n";
    }
}

SampleSet read_sample(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    SampleSet set;
    std::string kind;
    std::vector<int> factor_ranks;
    std::string line;
    int lineno = 0;
    bool have_header = false;
    auto fail = [&](const std::string& why) -> void {
        throw DataError(path + ":" + std::to_string(lineno) + ": " + why);
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string tok;
            while (hs >> tok) {
                const size_t eq = tok.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = tok.substr(0, eq);
                const std::string val = tok.substr(eq + 1);
                if (key == "label")
                    set.label = val;
                else if (key == "genus")
                    set.genus = std::stoi(val);
                else if (key == "kind")
                    kind = val;
                else if (key == "factors")
                    set.factors_text = val;
            }
            if (!kind.empty()) have_header = true;
            continue;
        }
        if (!have_header)
            fail("data row before a '# label=... genus=... kind=...' header");
        if (set.genus < 1) fail("missing or invalid genus in header");
        if (!set.factors_text.empty() && factor_ranks.empty()) {
            try {
                for (const Factor& f :
                     GroupSpec::parse(set.factors_text).factors)
                    factor_ranks.push_back(f.rank);
            } catch (const UsageError& e) {
                fail(std::string("bad factors header: ") + e.what());
            }
        }

        std::vector<std::string> fields;
        {
            std::string cur;
            std::istringstream ls(line);
            while (std::getline(ls, cur, ',')) fields.push_back(cur);
        }
        const int g = set.genus;
        FrobeniusRecord rec;
        try {
            rec.p = std::stoll(fields.at(0));
        } catch (const std::exception&) {
            fail("cannot parse record key '" + fields.at(0) + "'");
        }

        if (kind == "tilde_a" || kind == "counts") {
            if (static_cast<int>(fields.size()) != g + 1)
                fail("expected " + std::to_string(g + 1) + " fields, got " +
                     std::to_string(fields.size()));
            std::vector<long long> vals(g);
            for (int i = 0; i < g; ++i) {
                try {
                    size_t used = 0;
                    vals[i] = std::stoll(fields[i + 1], &used);
                    if (used != fields[i + 1].size()) throw std::invalid_argument("");
                } catch (const std::exception&) {
                    fail("field " + std::to_string(i + 2) + " ('" + fields[i + 1] +
                         "') is not an integer");
                }
            }
            if (rec.p < 3) fail("p must be an odd prime");
            try {
                if (kind == "counts") {
                    rec.counts = vals;
                    rec.tilde_a = lpoly_from_counts(rec.p, vals);
                } else {
                    rec.tilde_a = vals;
                }
                rec.s = normalize(g, rec.p, *rec.tilde_a);
            } catch (const DataError& e) {
                fail(e.what());
            }
        } else if (kind == "synthetic") {
            const int expect = factor_ranks.empty()
                                   ? g
                                   : std::accumulate(factor_ranks.begin(),
                                                     factor_ranks.end(), 0);
            if (static_cast<int>(fields.size()) != expect + 1)
                fail("expected " + std::to_string(expect + 1) + " fields, got " +
                     std::to_string(fields.size()));
            std::vector<double> vals(expect);
            for (int i = 0; i < expect; ++i) {
                try {
                    vals[i] = std::stod(fields[i + 1]);
                } catch (const std::exception&) {
                    fail("field " + std::to_string(i + 2) + " ('" + fields[i + 1] +
                         "') is not a number");
                }
            }
            if (factor_ranks.empty()) {
                rec.s = std::move(vals);
            } else {
                size_t off = 0;
                for (int r : factor_ranks) {
                    rec.factor_s.emplace_back(vals.begin() + off,
                                              vals.begin() + off + r);
                    off += r;
                }
                rec.s = combine_factor_s(rec.factor_s);
            }
        } else {
            fail("unknown kind '" + kind + "'");
        }
        if (!set.records.empty() && kind != "synthetic" &&
            rec.p <= set.records.back().p)
            fail("primes must be strictly increasing");
        set.records.push_back(std::move(rec));
    }
    if (!have_header) {
        lineno = 0;
        fail("missing header line");
    }
    set.provenance =
        kind == "synthetic" ? Provenance::Synthetic : Provenance::Ingested;
    return set;
}

std::vector<double> combine_factor_s(
    const std::vector<std::vector<double>>& blocks) {
    // Multiply the signed coefficient arrays (1, -s_1, +s_2, ...).
    std::vector<double> acc{1.0};
    for (const auto& s : blocks) {
        std::vector<double> c(s.size() + 1);
        c[0] = 1.0;
        for (size_t i = 0; i < s.size(); ++i) c[i + 1] = (i % 2 == 0 ? -1.0 : 1.0) * s[i];
        std::vector<double> next(acc.size() + c.size() - 1, 0.0);
        for (size_t i = 0; i < acc.size(); ++i)
            for (size_t j = 0; j < c.size(); ++j) next[i + j] += acc[i] * c[j];
        acc = std::move(next);
    }
    std::vector<double> s(acc.size() - 1);
    for (size_t i = 1; i < acc.size(); ++i)
        s[i - 1] = (i % 2 == 1 ? -1.0 : 1.0) * acc[i];
    return s;
}

namespace {

// Full integer Weil polynomial coefficients (degree 2g) from (p, ta).
std::vector<__int128> full_weil_poly(int g, long long p,
                                     std::span<const long long> ta) {
    std::vector<__int128> ext(2 * g + 1, 0);  // ext[i] = unsigned coeff a~_i
    ext[0] = 1;
    for (int i = 1; i <= g; ++i) ext[i] = ta[i - 1];
    __int128 pk = 1;
    for (int i = g + 1; i <= 2 * g; ++i) {
        pk *= p;
        ext[i] = ext[2 * g - i] * pk;
    }
    // signed coefficient of T^(2g-i) is (-1)^i ext[i]
    std::vector<__int128> c(2 * g + 1);
    for (int i = 0; i <= 2 * g; ++i) c[i] = (i % 2 == 0) ? ext[i] : -ext[i];
    return c;
}

}  // namespace

SampleSet product_records(std::span<const SampleSet> sets,
                          std::span<const CongruenceFilter> filters) {
    if (sets.empty()) throw DataError("product of zero sample sets");
    if (!filters.empty() && filters.size() != sets.size())
        throw DataError("one congruence filter per set required");

    // Filter, then index records by key (prime, or draw index).
    std::vector<std::map<long long, const FrobeniusRecord*>> by_key(sets.size());
    for (size_t i = 0; i < sets.size(); ++i) {
        const CongruenceFilter f =
            filters.empty() ? CongruenceFilter{} : filters[i];
        for (const FrobeniusRecord& rec : sets[i].records) {
            if (f.modulus > 1 && (rec.p % f.modulus) != f.residue) continue;
            by_key[i].emplace(rec.p, &rec);
        }
    }
    std::vector<long long> keys;
    for (const auto& [k, rec] : by_key[0]) {
        bool everywhere = true;
        for (size_t i = 1; i < sets.size() && everywhere; ++i)
            everywhere = by_key[i].count(k) > 0;
        if (everywhere) keys.push_back(k);
    }
    if (keys.empty())
        throw DataError("no common primes across the factor sets after filtering");

    SampleSet out;
    out.genus = 0;
    bool any_synthetic = false;
    for (const SampleSet& s : sets) {
        out.genus += s.genus;
        any_synthetic |= s.provenance == Provenance::Synthetic;
        out.label += (out.label.empty() ? "" : "*") + s.label;
    }
    out.provenance = any_synthetic ? Provenance::Synthetic : Provenance::Ingested;
    bool all_tilde = !any_synthetic;
    for (const SampleSet& s : sets)
        for (const FrobeniusRecord& rec : s.records)
            all_tilde = all_tilde && rec.tilde_a.has_value();

    for (long long key : keys) {
        FrobeniusRecord rec;
        rec.p = key;
        std::vector<std::pair<int, const FrobeniusRecord*>> parts;
        for (size_t i = 0; i < sets.size(); ++i) {
            const FrobeniusRecord* r = by_key[i].at(key);
            parts.emplace_back(sets[i].genus, r);
            if (r->factor_s.empty())
                rec.factor_s.push_back(r->s);
            else
                rec.factor_s.insert(rec.factor_s.end(), r->factor_s.begin(),
                                    r->factor_s.end());
        }
        rec.s = combine_factor_s(rec.factor_s);
        if (all_tilde) {
            std::vector<__int128> prod{1};
            for (const auto& [gi, r] : parts) {
                const auto c = full_weil_poly(gi, key, *r->tilde_a);
                std::vector<__int128> next(prod.size() + c.size() - 1, 0);
                for (size_t i = 0; i < prod.size(); ++i)
                    for (size_t j = 0; j < c.size(); ++j) next[i + j] += prod[i] * c[j];
                prod = std::move(next);
            }
            std::vector<long long> ta(out.genus);
            for (int i = 1; i <= out.genus; ++i) {
                const __int128 signedc = (i % 2 == 0) ? prod[i] : -prod[i];
                assert(signedc <= __int128(INT64_MAX) &&
                       signedc >= __int128(INT64_MIN));
                ta[i - 1] = static_cast<long long>(signedc);
            }
            rec.tilde_a = std::move(ta);
        }
        out.records.push_back(std::move(rec));
    }
    return out;
}

}  // namespace satotate
