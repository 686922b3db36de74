// Frobenius data for hyperelliptic curves y^2 = f(x): naive point counts
// over F_{p^k}, Weil coefficients via Newton identities, normalization to
// the real coefficients s_1..s_g, and a plain-text persistence format.

#pragma once

#include <gmpxx.h>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "satotate/errors.hpp"
#include "satotate/groupspec.hpp"

namespace satotate {

inline constexpr long long kDefaultCountBudget = 1LL << 26;

struct CurveSpec {
    int genus = 0;
    std::vector<long long> f;  // coefficients, f[i] multiplies x^i
    std::string label;

    // Accepts "y^2 = f(x)" with an expanded integer-coefficient f, e.g.
    // "y^2=x^5+x+1" or "y^2 = 2*x^6 - 3x^2 + 4".  Throws UsageError with
    // the offending position.
    static CurveSpec parse(std::string_view text);
    static CurveSpec from_coeffs(std::vector<long long> coeffs,
                                 std::string label = "");
};

// disc(f) computed as a resultant; zero iff f is not squarefree.
mpz_class poly_discriminant(std::span<const long long> f);

// First n primes of good reduction: odd primes not dividing disc(f)*lc(f).
std::vector<long long> good_primes(const CurveSpec& curve, int first_n);

// #C(F_{p^k}) on the smooth projective model.  Requires p odd and not
// dividing lc(f); p^k must stay within `budget`.
long long count_points(const CurveSpec& curve, long long p, int k,
                       long long budget = kDefaultCountBudget);

// Weil coefficients from counts N_1..N_g via Newton identities on the
// Frobenius power sums P_k = p^k + 1 - N_k.
std::vector<long long> lpoly_from_counts(long long p,
                                         std::span<const long long> counts);

// a_i = ta_i / p^(i/2), then s = matrix_a_to_s * a; returns s_1..s_g.
// Throws DataError if the Weil bounds |ta_i| <= C(2g,i) p^(i/2) fail.
std::vector<double> normalize(int g, long long p,
                              std::span<const long long> tilde_a);

enum class Provenance { Counted, Ingested, Synthetic };

struct FrobeniusRecord {
    long long p = 0;  // prime; 1-based draw index for synthetic records
    std::optional<std::vector<long long>> counts;
    std::optional<std::vector<long long>> tilde_a;
    std::vector<double> s;  // s_1..s_g
    // Per-factor s-blocks for product-structured records (synthetic draws
    // from a product group, or record products); empty otherwise.
    std::vector<std::vector<double>> factor_s;
};

struct SampleSet {
    std::string label;
    int genus = 0;
    Provenance provenance = Provenance::Ingested;
    std::string factors_text;  // group spec of the factor blocks, or ""
    std::vector<FrobeniusRecord> records;
};

// Counts k = 1..g at each of the first n good primes and assembles the
// records in ascending-prime order.  Deterministic for fixed inputs,
// independent of the worker count.
SampleSet build_sample(const CurveSpec& curve, int first_n,
                       long long budget = kDefaultCountBudget, int workers = 0);

// Plain-text format: `# label=<label> genus=<g> kind=<kind>` followed by
// one record per line.  kind=tilde_a rows are `p,ta_1,...,ta_g` and
// kind=counts rows `p,N_1,...,N_g` (integers; s is recomputed on load).
// kind=synthetic rows carry `idx,s_1,...,s_g` as decimals, or the
// concatenated factor blocks when a `factors=<spec>` field is present.
SampleSet read_sample(const std::string& path);
void write_sample(const SampleSet& set, const std::string& path);

// Real-Weil-polynomial product: coefficients of prod_i g_i(T) where each
// factor has coefficients (1, -s_1, s_2, ...); input and output are the
// s-vectors (s_1..s_g) without the leading 1.
std::vector<double> combine_factor_s(
    const std::vector<std::vector<double>>& blocks);

struct CongruenceFilter {
    long long modulus = 1;
    long long residue = 0;
};

// Block-diagonal product of per-prime Frobenius data: filters each set,
// intersects the prime lists, and multiplies the real Weil polynomials
// (and the integer Weil polynomials when every factor carries them).
SampleSet product_records(std::span<const SampleSet> sets,
                          std::span<const CongruenceFilter> filters);

}  // namespace satotate
