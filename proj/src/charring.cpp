#include "satotate/charring.hpp"

#include <algorithm>
#include <cassert>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace satotate {

const char* basis_prefix(Basis b) {
    switch (b) {
        case Basis::Chi: return "chi";
        case Basis::S: return "s";
        case Basis::A: return "a";
    }
    return "?";
}

bool TermOrder::operator()(const std::vector<int>& a,
                           const std::vector<int>& b) const {
    const int da = std::accumulate(a.begin(), a.end(), 0);
    const int db = std::accumulate(b.begin(), b.end(), 0);
    if (da != db) return da > db;
    return a < b;
}

CharPoly CharPoly::constant(int genus, Basis basis, const mpz_class& c) {
    CharPoly p(genus, basis);
    if (c != 0) p.terms_.emplace(std::vector<int>(genus, 0), c);
    return p;
}

CharPoly CharPoly::variable(int genus, Basis basis, int index) {
    assert(index >= 1 && index <= genus);
    CharPoly p(genus, basis);
    std::vector<int> e(genus, 0);
    e[index - 1] = 1;
    p.terms_.emplace(std::move(e), 1);
    return p;
}

int CharPoly::total_degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_)
        d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
    return d;
}

void CharPoly::add_term(const std::vector<int>& exps, const mpz_class& c) {
    if (c == 0) return;
    auto it = terms_.find(exps);
    if (it == terms_.end()) {
        terms_.emplace(exps, c);
        return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

CharPoly& CharPoly::operator+=(const CharPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

CharPoly& CharPoly::operator-=(const CharPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

CharPoly& CharPoly::operator*=(const mpz_class& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

CharPoly operator*(const CharPoly& a, const CharPoly& b) {
    CharPoly out(a.genus_, a.basis_);
    std::vector<int> e(a.genus_);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            for (int i = 0; i < a.genus_; ++i) e[i] = ea[i] + eb[i];
            out.add_term(e, ca * cb);
        }
    }
    return out;
}

bool CharPoly::operator==(const CharPoly& o) const {
    return genus_ == o.genus_ && basis_ == o.basis_ && terms_ == o.terms_;
}

double CharPoly::eval(std::span<const double> point) const {
    return CompiledPoly(*this).eval(point);
}

mpq_class CharPoly::eval_exact(std::span<const mpq_class> point) const {
    assert(static_cast<int>(point.size()) == genus_);
    mpq_class total = 0;
    for (const auto& [e, c] : terms_) {
        mpq_class t(c);
        for (int i = 0; i < genus_; ++i)
            for (int k = 0; k < e[i]; ++k) t *= point[i];
        total += t;
    }
    return total;
}

std::string CharPoly::str() const {
    if (terms_.empty()) return "0";
    const char* prefix = basis_prefix(basis_);
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        mpz_class abs_c = abs(c);
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        const bool has_vars =
            std::any_of(e.begin(), e.end(), [](int k) { return k > 0; });
        bool need_star = false;
        if (abs_c != 1 || !has_vars) {
            os << abs_c.get_str();
            need_star = true;
        }
        for (int i = 0; i < genus_; ++i) {
            if (e[i] == 0) continue;
            if (need_star) os << "*";
            os << prefix << "_" << (i + 1);
            if (e[i] > 1) os << "^" << e[i];
            need_star = true;
        }
    }
    return os.str();
}

CompiledPoly::CompiledPoly(const CharPoly& p) : nvars_(p.genus()) {
    std::vector<std::pair<std::vector<int>, double>> terms;
    terms.reserve(p.terms().size());
    for (const auto& [e, c] : p.terms()) terms.emplace_back(e, c.get_d());
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    for (auto& [e, c] : terms) {
        exps_.insert(exps_.end(), e.begin(), e.end());
        coeffs_.push_back(c);
    }
}

double CompiledPoly::horner(int var, size_t lo, size_t hi,
                            const double* pt) const {
    if (var == nvars_) return coeffs_[lo];
    double acc = 0.0;
    int e_prev = exps_[lo * nvars_ + var];
    size_t i = lo;
    while (i < hi) {
        const int e = exps_[i * nvars_ + var];
        size_t j = i;
        while (j < hi && exps_[j * nvars_ + var] == e) ++j;
        for (int k = 0; k < e_prev - e; ++k) acc *= pt[var];
        acc += horner(var + 1, i, j, pt);
        e_prev = e;
        i = j;
    }
    for (int k = 0; k < e_prev; ++k) acc *= pt[var];
    return acc;
}

double CompiledPoly::eval(std::span<const double> point) const {
    if (coeffs_.empty()) return 0.0;
    assert(static_cast<int>(point.size()) == nvars_);
    return horner(0, 0, coeffs_.size(), point.data());
}

namespace {

// Adds to `out` the subset sums of k elements of {+-e_1, ..., +-e_g}.
void exterior_power_weights(int g, int k, std::map<WeightEpsilon, long long>& out,
                            long long scale) {
    const int n = 2 * g;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    if (k > n) return;
    while (true) {
        WeightEpsilon w;
        w.coords.assign(g, 0);
        for (int i : idx) {
            if (i < g)
                w.coords[i] += 1;
            else
                w.coords[i - g] -= 1;
        }
        out[w] += scale;
        // next k-combination of [0, n)
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

WeightMultiset fundamental_weight_multiplicities(int g, int l) {
    if (l < 1 || l > g)
        throw std::invalid_argument("fundamental weight index out of range");
    WeightMultiset m;
    exterior_power_weights(g, l, m, +1);
    if (l >= 2) exterior_power_weights(g, l - 2, m, -1);
    for (auto it = m.begin(); it != m.end();) {
        assert(it->second >= 0);
        it = it->second == 0 ? m.erase(it) : std::next(it);
    }
    return m;
}

mpz_class dimension(int g, const WeightOmega& x) {
    assert(is_dominant(x));
    const WeightEpsilon lambda = omega_to_epsilon(x);
    const WeightEpsilon rho = weyl_vector(g);
    mpz_class num = 1, den = 1;
    auto both = [&](int a, int b) {
        num *= a;
        den *= b;
    };
    for (int i = 0; i < g; ++i) {
        const int li = lambda.coords[i] + rho.coords[i];
        both(2 * li, 2 * rho.coords[i]);  // root 2e_i
        for (int j = i + 1; j < g; ++j) {
            const int lj = lambda.coords[j] + rho.coords[j];
            both(li - lj, rho.coords[i] - rho.coords[j]);
            both(li + lj, rho.coords[i] + rho.coords[j]);
        }
    }
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    assert(r == 0);
    return q;
}

std::map<WeightOmega, long long> decompose_product(int g, const WeightOmega& x,
                                                   const WeightOmega& y) {
    if (!is_dominant(x) || !is_dominant(y))
        throw std::invalid_argument("decompose_product: weights must be dominant");
    if (sigma(y) != 1)
        throw std::invalid_argument(
            "decompose_product: second factor must be a fundamental weight");
    int l = 0;
    for (int i = 0; i < g; ++i)
        if (y.coords[i] == 1) l = i + 1;

    const WeightEpsilon lambda = omega_to_epsilon(x);
    const WeightEpsilon rho = weyl_vector(g);
    WeightEpsilon base = lambda;
    for (int i = 0; i < g; ++i) base.coords[i] += rho.coords[i];

    std::map<WeightOmega, long long> out;
    for (const auto& [nu, mult] : fundamental_weight_multiplicities(g, l)) {
        WeightEpsilon u = base;
        for (int i = 0; i < g; ++i) u.coords[i] += nu.coords[i];
        const ReducedWeight red = dominant_regular_reduce(u);
        if (red.sign == 0) continue;
        WeightEpsilon mu = red.reduced;
        for (int i = 0; i < g; ++i) mu.coords[i] -= rho.coords[i];
        out[epsilon_to_omega(mu)] += red.sign * mult;
    }
    for (auto it = out.begin(); it != out.end();) {
        assert(it->second >= 0);
        it = it->second == 0 ? out.erase(it) : std::next(it);
    }
    return out;
}

CharacterEngine::CharacterEngine(int g) : genus_(g) {
    assert(g >= 1);
    fundamental_.reserve(g);
    for (int l = 1; l <= g; ++l)
        fundamental_.push_back(fundamental_weight_multiplicities(g, l));
}

const CharPoly* CharacterEngine::lookup(const WeightOmega& x) const {
    std::shared_lock lock(mutex_);
    auto it = memo_.find(x);
    return it == memo_.end() ? nullptr : it->second.get();
}

const CharPoly& CharacterEngine::insert(const WeightOmega& x, CharPoly p) {
    std::unique_lock lock(mutex_);
    auto [it, inserted] =
        memo_.try_emplace(x, std::make_unique<const CharPoly>(std::move(p)));
    return *it->second;
}

const CharPoly& CharacterEngine::chi(const WeightOmega& x) {
    assert(x.genus() == genus_);
    if (const CharPoly* hit = lookup(x)) return *hit;
    return insert(x, compute(x));
}

CharPoly CharacterEngine::compute(const WeightOmega& x) {
    const int g = genus_;
    if (!is_dominant(x)) return CharPoly(g, Basis::Chi);
    const int s = sigma(x);
    if (s == 0) return CharPoly::constant(g, Basis::Chi, 1);

    int l = 1;
    while (x.coords[l - 1] < 1) ++l;
    if (s == 1) return CharPoly::variable(g, Basis::Chi, l);

    const WeightEpsilon rho = weyl_vector(g);
    const WeightEpsilon lambda = omega_to_epsilon(x);
    // (lambda - w_l) + rho, with w_l = e_1 + ... + e_l
    WeightEpsilon base = lambda;
    for (int i = 0; i < g; ++i)
        base.coords[i] += rho.coords[i] - (i < l ? 1 : 0);

    CharPoly tilde(g, Basis::Chi);
    for (const auto& [nu, mult] : fundamental_[l - 1]) {
        bool is_wl = true;
        for (int i = 0; i < g; ++i)
            if (nu.coords[i] != (i < l ? 1 : 0)) {
                is_wl = false;
                break;
            }
        if (is_wl) continue;
        WeightEpsilon u = base;
        for (int i = 0; i < g; ++i) u.coords[i] += nu.coords[i];
        const ReducedWeight red = dominant_regular_reduce(u);
        if (red.sign == 0) continue;
        WeightEpsilon mu = red.reduced;
        for (int i = 0; i < g; ++i) mu.coords[i] -= rho.coords[i];
        CharPoly term = chi(epsilon_to_omega(mu));
        term *= mpz_class(static_cast<long>(red.sign * mult));
        tilde += term;
    }

    WeightOmega prev = x;
    prev.coords[l - 1] -= 1;
    CharPoly out = chi(prev) * CharPoly::variable(g, Basis::Chi, l);
    out -= tilde;
    return out;
}

CharacterEngine& engine(int g) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<CharacterEngine>> engines;
    std::scoped_lock lock(mu);
    auto& slot = engines[g];
    if (!slot) slot = std::make_unique<CharacterEngine>(g);
    return *slot;
}

}  // namespace satotate
