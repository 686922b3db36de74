#include "satotate/stats.hpp"

#include <algorithm>
#include <cassert>
#include <cfenv>
#include <cmath>
#include <sstream>

#include "satotate/bases.hpp"
#include "satotate/parallel.hpp"

namespace satotate {

namespace {

constexpr size_t kRecordBlock = 1024;  // fixed reduction block

std::string weight_label(const WeightOmega& w) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < w.genus(); ++i) {
        if (i) os << ",";
        os << w.coords[i];
    }
    os << ")";
    return os.str();
}

// Per-record character value table, blocks evaluated in parallel.
std::vector<double> evaluation_table(const SampleSet& set,
                                     const CharEvaluator& chars, int workers) {
    const size_t n = set.records.size();
    const size_t m = chars.size();
    std::vector<double> table(n * m);
    const size_t nblocks = (n + kRecordBlock - 1) / kRecordBlock;
    parallel_for(nblocks, workers, [&](size_t b) {
        const size_t lo = b * kRecordBlock;
        const size_t hi = std::min(n, lo + kRecordBlock);
        for (size_t i = lo; i < hi; ++i)
            chars.eval(set.records[i].s,
                       std::span<double>(table).subspan(i * m, m));
    });
    return table;
}

// Gram matrix of the value table rows lo..hi accumulated into acc
// (upper triangle, flattened).
void accumulate_gram(std::span<const double> table, size_t m, size_t lo,
                     size_t hi, std::span<double> acc) {
    for (size_t r = lo; r < hi; ++r) {
        const double* v = table.data() + r * m;
        size_t idx = 0;
        for (size_t i = 0; i < m; ++i)
            for (size_t j = i; j < m; ++j) acc[idx++] += v[i] * v[j];
    }
}

std::vector<std::vector<double>> gram_mean(std::span<const double> table,
                                           size_t n, size_t m, int workers) {
    const size_t npairs = m * (m + 1) / 2;
    const size_t nblocks = (n + kRecordBlock - 1) / kRecordBlock;
    std::vector<std::vector<double>> partial(nblocks);
    parallel_for(nblocks, workers, [&](size_t b) {
        std::vector<double> acc(npairs, 0.0);
        accumulate_gram(table, m, b * kRecordBlock,
                        std::min(n, (b + 1) * kRecordBlock), acc);
        partial[b] = std::move(acc);
    });
    std::vector<double> total(npairs, 0.0);
    for (const auto& acc : partial)
        for (size_t i = 0; i < npairs; ++i) total[i] += acc[i];
    std::vector<std::vector<double>> out(m, std::vector<double>(m));
    size_t idx = 0;
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i; j < m; ++j) {
            const double v = total[idx++] / static_cast<double>(n);
            out[i][j] = out[j][i] = v;
        }
    return out;
}

InnerProductReport assemble_report(std::vector<std::string> labels,
                                   std::vector<std::vector<double>> sample,
                                   std::vector<std::vector<double>> expected,
                                   size_t sample_size, double quad_err) {
    InnerProductReport rep;
    rep.labels = std::move(labels);
    rep.sample = std::move(sample);
    rep.expected = std::move(expected);
    rep.sample_size = sample_size;
    rep.quadrature_error = quad_err;
    const size_t m = rep.sample.size();
    rep.err.assign(m, std::vector<double>(m, 0.0));
    rep.rounded.assign(m, std::vector<long long>(m, 0));
    const int prev_rounding = std::fegetround();
    std::fesetround(FE_TONEAREST);  // ties-to-even
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            rep.err[i][j] = rep.sample[i][j] - rep.expected[i][j];
            rep.Err = std::max(rep.Err, std::abs(rep.err[i][j]));
            const double r = std::nearbyint(rep.sample[i][j]);
            rep.rounded[i][j] = static_cast<long long>(r);
            if (std::abs(rep.sample[i][j] - r) > 0.5 * (1.0 - 0.2))
                rep.flagged.emplace_back(static_cast<int>(i),
                                         static_cast<int>(j));
        }
    std::fesetround(prev_rounding);
    return rep;
}

}  // namespace

CharEvaluator::CharEvaluator(int g, std::span<const WeightOmega> weights)
    : genus_(g) {
    polys_.reserve(weights.size());
    for (const WeightOmega& w : weights) {
        if (w.genus() != g || !is_dominant(w))
            throw DataError("weight " + weight_label(w) +
                            " is not a dominant weight of genus " +
                            std::to_string(g));
        polys_.emplace_back(engine(g).chi(w));
    }
}

void CharEvaluator::eval(std::span<const double> s,
                         std::span<double> out) const {
    thread_local std::vector<double> chi;
    chi.resize(genus_);
    chi_point_from_s(genus_, s, chi);
    for (size_t i = 0; i < polys_.size(); ++i) out[i] = polys_[i].eval(chi);
}

std::vector<std::vector<double>> sample_inner_matrix(
    const SampleSet& set, std::span<const WeightOmega> weights, int workers) {
    if (set.records.empty()) throw DataError("empty sample set");
    const CharEvaluator chars(set.genus, weights);
    const auto table = evaluation_table(set, chars, workers);
    return gram_mean(table, set.records.size(), chars.size(), workers);
}

InnerProductReport err_report(const SampleSet& set, const GroupSpec& spec,
                              std::span<const WeightOmega> weights, int nodes,
                              int workers) {
    if (spec.ambient_genus() != set.genus)
        throw DataError("group spec genus " +
                        std::to_string(spec.ambient_genus()) +
                        " does not match the sample genus " +
                        std::to_string(set.genus));
    const ExpectedMatrix expected = expected_matrix(spec, weights, nodes, workers);
    auto sample = sample_inner_matrix(set, weights, workers);
    std::vector<std::string> labels;
    labels.reserve(weights.size());
    for (const WeightOmega& w : weights) labels.push_back(weight_label(w));
    return assemble_report(std::move(labels), std::move(sample),
                           expected.entries, set.records.size(),
                           expected.error_estimate);
}

std::vector<double> sample_moments(const SampleSet& set, int index,
                                   int max_order) {
    if (set.records.empty()) throw DataError("empty sample set");
    const int g = set.genus;
    if (index < 1 || index > g)
        throw DataError("coefficient index out of range");
    const ConversionMatrix& m = matrix_s_to_a(g);
    std::vector<double> row(g + 1);
    for (int i = 0; i <= g; ++i) row[i] = m.c[i][index].get_d();
    std::vector<double> sums(max_order, 0.0);
    for (const FrobeniusRecord& rec : set.records) {
        double a = row[0];
        for (int i = 1; i <= g; ++i) a += row[i] * rec.s[i - 1];
        double pw = 1.0;
        for (int n = 0; n < max_order; ++n) {
            pw *= a;
            sums[n] += pw;
        }
    }
    for (double& v : sums) v /= static_cast<double>(set.records.size());
    return sums;
}

ConvergenceProfile convergence_profile(const SampleSet& set,
                                       const GroupSpec& spec,
                                       std::span<const WeightOmega> weights,
                                       int chunk, int nodes, int workers) {
    if (chunk < 1) throw DataError("chunk must be positive");
    if (set.records.empty()) throw DataError("empty sample set");
    if (spec.ambient_genus() != set.genus)
        throw DataError("group spec genus does not match the sample genus");
    const ExpectedMatrix expected = expected_matrix(spec, weights, nodes, workers);
    const CharEvaluator chars(set.genus, weights);
    const auto table = evaluation_table(set, chars, workers);
    const size_t m = chars.size();
    const size_t npairs = m * (m + 1) / 2;

    // Full-block partials, so every prefix mean reproduces gram_mean's
    // summation grouping bit for bit.
    const size_t n = set.records.size();
    const size_t nblocks = (n + kRecordBlock - 1) / kRecordBlock;
    std::vector<std::vector<double>> partial(nblocks);
    parallel_for(nblocks, workers, [&](size_t b) {
        std::vector<double> acc(npairs, 0.0);
        accumulate_gram(table, m, b * kRecordBlock,
                        std::min(n, (b + 1) * kRecordBlock), acc);
        partial[b] = std::move(acc);
    });

    ConvergenceProfile profile;
    profile.chunk = chunk;
    double sq_sum = 0.0;
    const size_t kmax = n / static_cast<size_t>(chunk);
    std::vector<double> acc(npairs);
    std::vector<double> tail(npairs);
    for (size_t k = 1; k <= kmax; ++k) {
        const size_t upto = k * static_cast<size_t>(chunk);
        const size_t full = upto / kRecordBlock;
        std::fill(acc.begin(), acc.end(), 0.0);
        for (size_t b = 0; b < full; ++b)
            for (size_t i = 0; i < npairs; ++i) acc[i] += partial[b][i];
        if (upto % kRecordBlock != 0) {
            std::fill(tail.begin(), tail.end(), 0.0);
            accumulate_gram(table, m, full * kRecordBlock, upto, tail);
            for (size_t i = 0; i < npairs; ++i) acc[i] += tail[i];
        }
        double delta = 0.0;
        size_t idx = 0;
        for (size_t i = 0; i < m; ++i)
            for (size_t j = i; j < m; ++j) {
                const double mean = acc[idx++] / static_cast<double>(upto);
                delta = std::max(delta,
                                 std::abs(mean - expected.entries[i][j]));
            }
        sq_sum += delta * delta;
        const double bar = std::sqrt(sq_sum / static_cast<double>(k));
        profile.rows.push_back({static_cast<long long>(upto), delta, bar,
                                std::sqrt(static_cast<double>(k)) * bar});
    }
    return profile;
}

double profile_slope(const ConvergenceProfile& profile) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t n = 0;
    for (const auto& row : profile.rows) {
        if (row.delta_bar <= 0) continue;
        const double x = std::log(static_cast<double>(row.n));
        const double y = std::log(row.delta_bar);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return 0.0;
    const double den = n * sxx - sx * sx;
    return den == 0 ? 0.0 : (n * sxy - sx * sy) / den;
}

namespace {

// Product characters evaluated on per-factor s-blocks.
class ProductCharEvaluator {
  public:
    ProductCharEvaluator(const GroupSpec& spec,
                         std::span<const ProductWeight> weights)
        : spec_(spec) {
        for (const ProductWeight& pw : weights) {
            if (pw.size() != spec.factors.size())
                throw DataError("product weight arity mismatch");
            weights_.push_back(pw);
            std::vector<CompiledPoly> polys;
            for (size_t f = 0; f < pw.size(); ++f) {
                const Factor& fac = spec.factors[f];
                if (pw[f].genus() != fac.rank)
                    throw DataError("factor weight rank mismatch");
                if (fac.type != FactorType::SO2)
                    polys.emplace_back(engine(fac.rank).chi(pw[f]));
                else
                    polys.emplace_back();
            }
            polys_.push_back(std::move(polys));
        }
    }

    size_t size() const { return weights_.size(); }

    void eval(const FrobeniusRecord& rec, std::span<double> out) const {
        thread_local std::vector<std::vector<double>> single;
        const std::vector<std::vector<double>>* blocks_ptr = &rec.factor_s;
        if (rec.factor_s.empty() && spec_.factors.size() == 1) {
            single.assign(1, rec.s);
            blocks_ptr = &single;
        }
        const auto& blocks = *blocks_ptr;
        if (blocks.size() != spec_.factors.size())
            throw DataError(
                "record has no per-factor structure for a product-basis "
                "analysis");
        // chi-values per factor block
        thread_local std::vector<std::vector<double>> chi_blocks;
        chi_blocks.resize(blocks.size());
        for (size_t f = 0; f < blocks.size(); ++f) {
            const Factor& fac = spec_.factors[f];
            if (static_cast<int>(blocks[f].size()) != fac.rank)
                throw DataError("factor block size mismatch");
            if (fac.type == FactorType::SO2) continue;
            chi_blocks[f].resize(fac.rank);
            chi_point_from_s(fac.rank, blocks[f], chi_blocks[f]);
        }
        for (size_t wi = 0; wi < weights_.size(); ++wi) {
            double v = 1.0;
            for (size_t f = 0; f < blocks.size(); ++f) {
                const Factor& fac = spec_.factors[f];
                if (fac.type == FactorType::SO2) {
                    v *= so2_char(weights_[wi][f].coords[0], blocks[f][0]);
                } else {
                    v *= polys_[wi][f].eval(chi_blocks[f]);
                }
            }
            out[wi] = v;
        }
    }

  private:
    // 2 cos(n phi) as a polynomial in t = 2 cos(phi), by the recurrence
    // A_n = t A_(n-1) - A_(n-2), A_0 = 2, A_1 = t; weight 0 is the
    // trivial character 1.
    static double so2_char(int n, double t) {
        if (n == 0) return 1.0;
        double prev = 2.0, cur = t;
        for (int k = 2; k <= n; ++k) {
            const double next = t * cur - prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }

    GroupSpec spec_;
    std::vector<ProductWeight> weights_;
    std::vector<std::vector<CompiledPoly>> polys_;
};

}  // namespace

std::vector<std::vector<double>> sample_product_matrix(
    const SampleSet& set, const GroupSpec& spec,
    std::span<const ProductWeight> weights, int workers) {
    if (set.records.empty()) throw DataError("empty sample set");
    if (spec.ambient_genus() != set.genus)
        throw DataError("group spec genus does not match the sample genus");
    const ProductCharEvaluator chars(spec, weights);
    const size_t n = set.records.size();
    const size_t m = chars.size();
    std::vector<double> table(n * m);
    const size_t nblocks = (n + kRecordBlock - 1) / kRecordBlock;
    parallel_for(nblocks, workers, [&](size_t b) {
        const size_t lo = b * kRecordBlock;
        const size_t hi = std::min(n, lo + kRecordBlock);
        for (size_t i = lo; i < hi; ++i)
            chars.eval(set.records[i],
                       std::span<double>(table).subspan(i * m, m));
    });
    return gram_mean(table, n, m, workers);
}

InnerProductReport product_err_report(const SampleSet& set,
                                      const GroupSpec& spec,
                                      std::span<const ProductWeight> weights,
                                      int nodes, int workers) {
    auto sample = sample_product_matrix(set, spec, weights, workers);
    auto expected = product_expected_matrix(spec, weights, nodes);
    std::vector<std::string> labels;
    labels.reserve(weights.size());
    for (const ProductWeight& w : weights)
        labels.push_back(product_weight_str(w));
    return assemble_report(std::move(labels), std::move(sample),
                           std::move(expected), set.records.size(), 0.0);
}

}  // namespace satotate
