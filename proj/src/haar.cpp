#include "satotate/haar.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include "satotate/bases.hpp"
#include "satotate/charring.hpp"
#include "satotate/parallel.hpp"
#include "satotate/quadrature.hpp"

namespace satotate {

namespace {

constexpr size_t kNodeBlock = 8192;   // fixed quadrature reduction block
constexpr long long kDrawBlock = 1024;  // fixed sampler substream length

struct FactorKey {
    FactorType type;
    int rank;
    int nodes;
    auto operator<=>(const FactorKey&) const = default;
};

}  // namespace

double factor_angle_span(const Factor& factor) {
    return factor.type == FactorType::SO2 ? 2.0 * std::numbers::pi
                                          : std::numbers::pi;
}

double torus_density(const Factor& factor, std::span<const double> angles) {
    assert(static_cast<int>(angles.size()) == factor.rank);
    switch (factor.type) {
        case FactorType::SO2:
            return 1.0;
        case FactorType::SU2: {
            const double s = std::sin(angles[0]);
            return s * s;
        }
        case FactorType::USp: {
            double d = 1.0;
            for (int j = 0; j < factor.rank; ++j) {
                const double s = std::sin(angles[j]);
                d *= s * s;
                for (int k = j + 1; k < factor.rank; ++k) {
                    const double diff =
                        std::cos(angles[j]) - std::cos(angles[k]);
                    d *= diff * diff;
                }
            }
            return d;
        }
    }
    return 0.0;
}

std::vector<double> angles_to_s(const GroupSpec& spec,
                                std::span<const double> angles) {
    const int g = spec.ambient_genus();
    assert(static_cast<int>(angles.size()) == g);
    std::vector<double> e(g + 1, 0.0);
    e[0] = 1.0;
    for (int i = 0; i < g; ++i) {
        const double t = 2.0 * std::cos(angles[i]);
        for (int j = i + 1; j >= 1; --j) e[j] += t * e[j - 1];
    }
    return {e.begin() + 1, e.end()};
}

namespace {

// Tensor quadrature grid over the full torus of the spec.
struct TorusGrid {
    std::vector<MappedRule> dims;          // one rule per torus dimension
    std::vector<std::pair<int, int>> factor_dims;  // (first dim, rank)
    const GroupSpec* spec = nullptr;
    size_t total = 1;

    TorusGrid(const GroupSpec& s, int nodes) : spec(&s) {
        int d0 = 0;
        for (const Factor& f : s.factors) {
            factor_dims.emplace_back(d0, f.rank);
            for (int r = 0; r < f.rank; ++r) {
                dims.push_back(mapped_rule(nodes, 0.0, factor_angle_span(f)));
                total *= static_cast<size_t>(nodes);
            }
            d0 += f.rank;
        }
    }

    void decode(size_t flat, std::span<double> angles,
                double& weight) const {
        weight = 1.0;
        for (size_t d = dims.size(); d-- > 0;) {
            const size_t n = dims[d].nodes.size();
            const size_t i = flat % n;
            flat /= n;
            angles[d] = dims[d].nodes[i];
            weight *= dims[d].weights[i];
        }
    }

    double density(std::span<const double> angles) const {
        double rho = 1.0;
        for (size_t fi = 0; fi < spec->factors.size(); ++fi) {
            const auto [d0, rank] = factor_dims[fi];
            rho *= torus_density(spec->factors[fi],
                                 angles.subspan(d0, rank));
        }
        return rho;
    }
};

// Integral of the factor density over its own torus box (for the
// numerical normalization constants).
double factor_norm(const Factor& f, int nodes) {
    static std::map<FactorKey, double> cache;
    static std::mutex mu;
    const FactorKey key{f.type, f.rank, nodes};
    {
        std::scoped_lock lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const MappedRule rule = mapped_rule(nodes, 0.0, factor_angle_span(f));
    size_t total = 1;
    for (int r = 0; r < f.rank; ++r) total *= static_cast<size_t>(nodes);
    double z = 0.0;
    std::vector<double> angles(f.rank);
    for (size_t flat = 0; flat < total; ++flat) {
        size_t rest = flat;
        double w = 1.0;
        for (int d = f.rank; d-- > 0;) {
            const size_t i = rest % nodes;
            rest /= nodes;
            angles[d] = rule.nodes[i];
            w *= rule.weights[i];
        }
        z += w * torus_density(f, angles);
    }
    std::scoped_lock lock(mu);
    cache.emplace(key, z);
    return z;
}

double grid_norm(const GroupSpec& spec, int nodes) {
    double z = 1.0;
    for (const Factor& f : spec.factors) z *= factor_norm(f, nodes);
    return z;
}

// Integrates `values` callbacks over the normalized Haar measure of the
// torus: fn(angles, out) writes nvals integrand values; the result is
// their vector of expectations.  Deterministic ordered block reduction.
template <typename Fn>
std::vector<double> integrate(const GroupSpec& spec, int nodes, int workers,
                              size_t nvals, Fn&& fn) {
    const TorusGrid grid(spec, nodes);
    const size_t nblocks = (grid.total + kNodeBlock - 1) / kNodeBlock;
    std::vector<std::vector<double>> partial(nblocks);
    parallel_for(nblocks, workers, [&](size_t b) {
        std::vector<double> acc(nvals, 0.0);
        std::vector<double> angles(grid.dims.size());
        std::vector<double> vals(nvals);
        const size_t lo = b * kNodeBlock;
        const size_t hi = std::min(grid.total, lo + kNodeBlock);
        for (size_t flat = lo; flat < hi; ++flat) {
            double w;
            grid.decode(flat, angles, w);
            const double rho = grid.density(angles);
            if (rho == 0.0) continue;
            fn(std::span<const double>(angles), std::span<double>(vals));
            const double wr = w * rho;
            for (size_t i = 0; i < nvals; ++i) acc[i] += wr * vals[i];
        }
        partial[b] = std::move(acc);
    });
    std::vector<double> out(nvals, 0.0);
    for (const auto& acc : partial)
        for (size_t i = 0; i < nvals; ++i) out[i] += acc[i];
    const double z = grid_norm(spec, nodes);
    for (double& v : out) v /= z;
    return out;
}

// Character evaluation vector at an s-point of the ambient group.
struct AmbientChars {
    int genus;
    std::vector<CompiledPoly> polys;

    AmbientChars(int g, std::span<const WeightOmega> weights) : genus(g) {
        polys.reserve(weights.size());
        for (const WeightOmega& w : weights)
            polys.emplace_back(engine(g).chi(w));
    }

    void eval(std::span<const double> s, std::span<double> out) const {
        thread_local std::vector<double> chi;
        chi.resize(genus);
        chi_point_from_s(genus, s, chi);
        for (size_t i = 0; i < polys.size(); ++i) out[i] = polys[i].eval(chi);
    }
};

std::vector<std::vector<double>> gram_from_flat(std::span<const double> flat,
                                                size_t n) {
    std::vector<std::vector<double>> m(n, std::vector<double>(n));
    size_t idx = 0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) {
            m[i][j] = flat[idx];
            m[j][i] = flat[idx];
            ++idx;
        }
    return m;
}

std::vector<std::vector<double>> expected_gram(const GroupSpec& spec,
                                               std::span<const WeightOmega> I,
                                               int nodes, int workers) {
    const int g = spec.ambient_genus();
    const AmbientChars chars(g, I);
    const size_t n = I.size();
    const size_t npairs = n * (n + 1) / 2;
    // integrand: upper-triangular products chi_i * chi_j
    auto flat = integrate(
        spec, nodes, workers, npairs,
        [&](std::span<const double> angles, std::span<double> vals) {
            thread_local std::vector<double> cv, e;
            cv.resize(n);
            e.assign(static_cast<size_t>(g) + 1, 0.0);
            e[0] = 1.0;
            for (int i = 0; i < g; ++i) {
                const double t = 2.0 * std::cos(angles[i]);
                for (int j = i + 1; j >= 1; --j) e[j] += t * e[j - 1];
            }
            chars.eval(std::span<const double>(e).subspan(1), cv);
            size_t idx = 0;
            for (size_t i = 0; i < n; ++i)
                for (size_t j = i; j < n; ++j) vals[idx++] = cv[i] * cv[j];
        });
    return gram_from_flat(flat, n);
}

}  // namespace

ExpectedMatrix expected_matrix(const GroupSpec& spec,
                               std::span<const WeightOmega> weights,
                               int nodes, int workers) {
    const int g = spec.ambient_genus();
    for (const WeightOmega& w : weights)
        if (w.genus() != g || !is_dominant(w))
            throw DataError("weight set does not match the ambient genus " +
                            std::to_string(g));
    ExpectedMatrix out;
    out.weights.assign(weights.begin(), weights.end());
    out.nodes = nodes;
    out.entries = expected_gram(spec, weights, nodes, workers);
    const int half = std::max(2, nodes / 2);
    const auto coarse = expected_gram(spec, weights, half, workers);
    double est = 0.0;
    for (size_t i = 0; i < out.entries.size(); ++i)
        for (size_t j = 0; j < out.entries.size(); ++j)
            est = std::max(est, std::abs(out.entries[i][j] - coarse[i][j]));
    out.error_estimate = est;
    return out;
}

double expected_inner(const GroupSpec& spec, const WeightOmega& lambda,
                      const WeightOmega& nu, int nodes) {
    const std::vector<WeightOmega> pair{lambda, nu};
    const auto gram = expected_gram(spec, pair, nodes, 0);
    return gram[0][1];
}

double moment_expectation(const GroupSpec& spec, int index, int order,
                          int nodes) {
    const int g = spec.ambient_genus();
    if (index < 0 || index > g)
        throw DataError("coefficient index out of range");
    // Flattened double copy of the s -> a matrix row for a_index.
    const ConversionMatrix& m = matrix_s_to_a(g);
    std::vector<double> row(g + 1);
    for (int i = 0; i <= g; ++i) row[i] = m.c[i][index].get_d();
    const auto val = integrate(
        spec, nodes, 0, 1,
        [&](std::span<const double> angles, std::span<double> out) {
            const std::vector<double> s = angles_to_s(spec, angles);
            double a = row[0];
            for (int i = 1; i <= g; ++i) a += row[i] * s[i - 1];
            double pw = 1.0;
            for (int k = 0; k < order; ++k) pw *= a;
            out[0] = pw;
        });
    return val[0];
}

std::string product_weight_str(const ProductWeight& w) {
    std::ostringstream os;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) os << "x";
        os << "(";
        for (int j = 0; j < w[i].genus(); ++j) {
            if (j) os << ",";
            os << w[i].coords[j];
        }
        os << ")";
    }
    return os.str();
}

std::vector<ProductWeight> product_weight_grid(const GroupSpec& spec,
                                               int per_factor) {
    std::vector<std::vector<WeightOmega>> per(spec.factors.size());
    for (size_t f = 0; f < spec.factors.size(); ++f) {
        const Factor& fac = spec.factors[f];
        if (fac.type == FactorType::SO2) {
            for (int n = 0; n < per_factor; ++n)
                per[f].push_back(WeightOmega{{n}});
        } else {
            const auto all = enumerate_dominant(fac.rank, per_factor);
            for (int i = 0; i < per_factor; ++i) per[f].push_back(all[i]);
        }
    }
    std::vector<ProductWeight> grid;
    ProductWeight cur(spec.factors.size());
    auto rec = [&](auto&& self, size_t f) -> void {
        if (f == per.size()) {
            grid.push_back(cur);
            return;
        }
        for (const WeightOmega& w : per[f]) {
            cur[f] = w;
            self(self, f + 1);
        }
    };
    rec(rec, 0);
    return grid;
}

namespace {

// One factor's character as a function of its own angles.
class FactorChar {
  public:
    FactorChar(const Factor& f, const WeightOmega& w) : factor_(f) {
        if (w.genus() != f.rank)
            throw DataError("factor weight rank mismatch");
        if (f.type == FactorType::SO2) {
            n_ = w.coords[0];
        } else {
            poly_ = CompiledPoly(engine(f.rank).chi(w));
        }
    }

    double eval(std::span<const double> angles) const {
        if (factor_.type == FactorType::SO2)
            return n_ == 0 ? 1.0 : 2.0 * std::cos(n_ * angles[0]);
        const int m = factor_.rank;
        std::vector<double> e(m + 1, 0.0), chi(m);
        e[0] = 1.0;
        for (int i = 0; i < m; ++i) {
            const double t = 2.0 * std::cos(angles[i]);
            for (int j = i + 1; j >= 1; --j) e[j] += t * e[j - 1];
        }
        chi_point_from_s(m, std::span<const double>(e).subspan(1), chi);
        return poly_.eval(chi);
    }

  private:
    Factor factor_;
    int n_ = 0;
    CompiledPoly poly_;
};

}  // namespace

double product_character_inner(const GroupSpec& spec, const ProductWeight& left,
                               const ProductWeight& right, int nodes) {
    if (left.size() != spec.factors.size() ||
        right.size() != spec.factors.size())
        throw DataError("one weight per factor required");
    double prod = 1.0;
    for (size_t f = 0; f < spec.factors.size(); ++f) {
        const Factor& fac = spec.factors[f];
        const FactorChar cl(fac, left[f]);
        const FactorChar cr(fac, right[f]);
        GroupSpec sub;
        sub.factors = {fac};
        const auto val = integrate(
            sub, nodes, 0, 1,
            [&](std::span<const double> angles, std::span<double> out) {
                out[0] = cl.eval(angles) * cr.eval(angles);
            });
        prod *= val[0];
    }
    return prod;
}

std::vector<std::vector<double>> product_expected_matrix(
    const GroupSpec& spec, std::span<const ProductWeight> weights,
    int nodes) {
    const size_t n = weights.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    // Per-factor Gram matrices, combined entrywise by independence.
    const size_t nf = spec.factors.size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) {
            double v = 1.0;
            for (size_t f = 0; f < nf && v != 0.0; ++f) {
                GroupSpec sub;
                sub.factors = {spec.factors[f]};
                const FactorChar cl(spec.factors[f], weights[i][f]);
                const FactorChar cr(spec.factors[f], weights[j][f]);
                const auto val = integrate(
                    sub, nodes, 0, 1,
                    [&](std::span<const double> angles, std::span<double> out) {
                        out[0] = cl.eval(angles) * cr.eval(angles);
                    });
                v *= val[0];
            }
            m[i][j] = m[j][i] = v;
        }
    return m;
}

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// 1.01 * max grid density, the rejection bound.
double rejection_bound(const Factor& f) {
    static std::map<FactorKey, double> cache;
    static std::mutex mu;
    const FactorKey key{f.type, f.rank, 128};
    {
        std::scoped_lock lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const MappedRule rule = mapped_rule(128, 0.0, factor_angle_span(f));
    size_t total = 1;
    for (int r = 0; r < f.rank; ++r) total *= rule.nodes.size();
    double best = 0.0;
    std::vector<double> angles(f.rank);
    for (size_t flat = 0; flat < total; ++flat) {
        size_t rest = flat;
        for (int d = f.rank; d-- > 0;) {
            angles[d] = rule.nodes[rest % rule.nodes.size()];
            rest /= rule.nodes.size();
        }
        best = std::max(best, torus_density(f, angles));
    }
    best *= 1.01;
    std::scoped_lock lock(mu);
    cache.emplace(key, best);
    return best;
}

}  // namespace

SampleSet haar_sample(const GroupSpec& spec, long long count, uint64_t seed) {
    const int g = spec.ambient_genus();
    std::vector<double> bounds;
    bounds.reserve(spec.factors.size());
    for (const Factor& f : spec.factors) bounds.push_back(rejection_bound(f));

    SampleSet set;
    set.label = spec.str() + "-haar";
    set.genus = g;
    set.provenance = Provenance::Synthetic;
    if (spec.factors.size() > 1) set.factors_text = spec.str();
    set.records.resize(static_cast<size_t>(std::max<long long>(count, 0)));

    const long long nblocks = (count + kDrawBlock - 1) / kDrawBlock;
    parallel_for(static_cast<size_t>(nblocks), 0, [&](size_t b) {
        std::mt19937_64 rng(splitmix64(seed + 0x5851F42D4C957F2DULL * (b + 1)));
        const long long lo = static_cast<long long>(b) * kDrawBlock;
        const long long hi = std::min(count, lo + kDrawBlock);
        std::vector<double> angles;
        for (long long i = lo; i < hi; ++i) {
            FrobeniusRecord rec;
            rec.p = i + 1;
            for (size_t f = 0; f < spec.factors.size(); ++f) {
                const Factor& fac = spec.factors[f];
                const double span = factor_angle_span(fac);
                angles.resize(fac.rank);
                while (true) {
                    for (int d = 0; d < fac.rank; ++d)
                        angles[d] = span * next_uniform(rng);
                    const double u = next_uniform(rng);
                    if (u * bounds[f] <= torus_density(fac, angles)) break;
                }
                std::vector<double> e(fac.rank + 1, 0.0);
                e[0] = 1.0;
                for (int d = 0; d < fac.rank; ++d) {
                    const double t = 2.0 * std::cos(angles[d]);
                    for (int j = d + 1; j >= 1; --j) e[j] += t * e[j - 1];
                }
                rec.factor_s.emplace_back(e.begin() + 1, e.end());
            }
            rec.s = combine_factor_s(rec.factor_s);
            if (spec.factors.size() == 1) rec.factor_s.clear();
            set.records[static_cast<size_t>(i)] = std::move(rec);
        }
    });
    return set;
}

}  // namespace satotate
