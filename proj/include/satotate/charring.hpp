// Irreducible characters of USp(2g) as exact integer polynomials in the
// fundamental characters chi_1..chi_g, computed by the Brauer-Klimyk
// recursion over the type-C weight lattice.

#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "satotate/weyl.hpp"

namespace satotate {

enum class Basis { Chi, S, A };

const char* basis_prefix(Basis b);  // "chi" / "s" / "a"

// Term order used for storage and printing: total degree descending,
// then lexicographically ascending on the exponent vector.
struct TermOrder {
    bool operator()(const std::vector<int>& a, const std::vector<int>& b) const;
};

// Multivariate polynomial with exact integer coefficients in g formal
// variables, tagged with the basis the variables refer to.
class CharPoly {
  public:
    using TermMap = std::map<std::vector<int>, mpz_class, TermOrder>;

    CharPoly() = default;
    CharPoly(int genus, Basis basis) : genus_(genus), basis_(basis) {}

    static CharPoly constant(int genus, Basis basis, const mpz_class& c);
    static CharPoly variable(int genus, Basis basis, int index);  // 1-based

    int genus() const { return genus_; }
    Basis basis() const { return basis_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int total_degree() const;

    // Adds c * x^exps, dropping the term if the coefficient cancels.
    void add_term(const std::vector<int>& exps, const mpz_class& c);

    CharPoly& operator+=(const CharPoly& o);
    CharPoly& operator-=(const CharPoly& o);
    CharPoly& operator*=(const mpz_class& c);
    friend CharPoly operator+(CharPoly a, const CharPoly& b) { return a += b; }
    friend CharPoly operator-(CharPoly a, const CharPoly& b) { return a -= b; }
    friend CharPoly operator*(const CharPoly& a, const CharPoly& b);
    bool operator==(const CharPoly& o) const;

    double eval(std::span<const double> point) const;
    mpq_class eval_exact(std::span<const mpq_class> point) const;

    // Canonical rendering, e.g. "chi_1^2 - chi_2 - 1".
    std::string str() const;

  private:
    int genus_ = 0;
    Basis basis_ = Basis::Chi;
    TermMap terms_;
};

// Flattened copy of a CharPoly for repeated evaluation: terms sorted in
// lexicographic order so evaluation can run as a nested Horner scheme.
class CompiledPoly {
  public:
    CompiledPoly() = default;
    explicit CompiledPoly(const CharPoly& p);
    double eval(std::span<const double> point) const;

  private:
    double horner(int var, size_t lo, size_t hi, const double* pt) const;
    int nvars_ = 0;
    std::vector<int> exps_;        // nvars per term, lex-descending
    std::vector<double> coeffs_;
};

// Weights of an irreducible representation with multiplicities.
using WeightMultiset = std::map<WeightEpsilon, long long>;

// Weights of the fundamental representation V_{w_l}: the weights of
// Lambda^l of the standard 2g-dimensional representation minus those of
// Lambda^(l-2).  Total multiplicity C(2g,l) - C(2g,l-2).
WeightMultiset fundamental_weight_multiplicities(int g, int l);

// chi_x * chi_{w_l} as a multiset of highest weights (y must be a
// fundamental weight e_l).
std::map<WeightOmega, long long> decompose_product(int g, const WeightOmega& x,
                                                   const WeightOmega& y);

// Weyl dimension formula for C_g.
mpz_class dimension(int g, const WeightOmega& x);

// Memoizing character engine for one genus.  chi() is safe to call from
// multiple threads: lookups take a shared lock and insertions an
// exclusive one; redundant concurrent computations are discarded.
class CharacterEngine {
  public:
    explicit CharacterEngine(int g);
    int genus() const { return genus_; }
    const CharPoly& chi(const WeightOmega& x);

  private:
    CharPoly compute(const WeightOmega& x);
    const CharPoly* lookup(const WeightOmega& x) const;
    const CharPoly& insert(const WeightOmega& x, CharPoly p);

    int genus_;
    std::vector<WeightMultiset> fundamental_;  // index l-1
    mutable std::shared_mutex mutex_;
    std::map<WeightOmega, std::unique_ptr<const CharPoly>> memo_;
};

// Process-wide engine shared across an analysis run.
CharacterEngine& engine(int g);

}  // namespace satotate
