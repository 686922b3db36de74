// Exact linear conversions among the three coefficient bases of a
// normalized Weil polynomial: a (full degree-2g polynomial), s (real
// degree-g polynomial) and chi (fundamental characters of USp(2g)).
//
// All vectors carry the constant at index 0 (s_0 = a_0 = chi_0 = 1) so
// every conversion is an honest linear map.  The recurrences are
// authoritative; the published closed formulas are kept only as
// cross-checks (two of them are typeset incorrectly in places).

#pragma once

#include <gmpxx.h>

#include <optional>
#include <span>
#include <vector>

#include "satotate/charring.hpp"

namespace satotate {

struct ConversionMatrix {
    int genus = 0;
    Basis source = Basis::S;
    Basis target = Basis::A;
    // target_j = sum_i c[i][j] * source_i, 0 <= i, j <= genus
    std::vector<std::vector<mpz_class>> c;

    // Applies the map to a coefficient vector (v[0] must be the constant 1).
    std::vector<double> apply(std::span<const double> v) const;
    std::vector<mpq_class> apply_exact(std::span<const mpq_class> v) const;
};

// a_j = sum_i c_{i,j} s_i; rows from the downward recurrence
// c_{g,j} = [j == g], c_{i,j} = c_{i+1,j-1} + c_{i+1,j+1} with columns
// allowed to run past g while recursing.
const ConversionMatrix& matrix_s_to_a(int g);

// Exact inverse of matrix_s_to_a.
const ConversionMatrix& matrix_a_to_s(int g);

// chi_j = sum_i c_{i,j} s_i; same recurrence but with the extra boundary
// condition c_{i,j} = 0 for j > g.
const ConversionMatrix& matrix_s_to_chi(int g);

// Exact inverse of matrix_s_to_chi.
const ConversionMatrix& matrix_chi_to_s(int g);

// Bidiagonal a<->chi maps: chi_i = a_i - a_{i-2}, inverse by suffix sums.
std::vector<double> chi_from_a(int g, std::span<const double> a);
std::vector<double> a_from_chi(int g, std::span<const double> chi);
std::vector<mpq_class> chi_from_a_exact(int g, std::span<const mpq_class> a);
std::vector<mpq_class> a_from_chi_exact(int g, std::span<const mpq_class> chi);

// Brute-force expansion oracle: given (s_0..s_g) form the real polynomial
// g(T) and expand T^g * g(T + 1/T); returns (a_0..a_g).
std::vector<mpq_class> expand_real_to_full(int g, std::span<const mpq_class> s);
std::vector<double> expand_real_to_full(int g, std::span<const double> s);

// Closed formulas from the source material, as stated.  Return nullopt
// where the expression is undefined (division by zero).  Best-effort
// cross-checks only.
mpz_class remark1_c_closed(int g, int i, int j);
std::optional<mpq_class> remark1_d_closed(int g, int i, int j);
std::optional<mpq_class> lemma42_c_closed(int g, int i, int j);
mpq_class lemma42_d_closed(int g, int i, int j);

// chi_1..chi_g evaluated from s_1..s_g through matrix_s_to_chi; the hot
// path for evaluating characters on samples.
void chi_point_from_s(int g, std::span<const double> s, std::span<double> chi_out);

// Rewrites a chi-basis polynomial in the s or a basis by substituting the
// linear forms for each chi_j.
CharPoly substitute_basis(const CharPoly& p, Basis target);

// chi(g, x) rendered in the requested basis.
CharPoly character_in_basis(int g, const WeightOmega& x, Basis basis);

}  // namespace satotate
