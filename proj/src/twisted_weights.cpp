#include "twverlinde/twisted_weights.hpp"

#include "twverlinde/errors.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace twv {

TwistedAffineType TwistedAffineType::of_untwisted(const FiniteType& g) {
    validate(g);
    return TwistedAffineType{AffineKind::Untwisted, 0, g};
}

TwistedAffineType TwistedAffineType::make(AffineKind kind, int n) {
    TwistedAffineType t{kind, n, FiniteType{}};
    if (kind == AffineKind::E6_2 || kind == AffineKind::D4_3) t.n = 0;
    validate(t);
    return t;
}

void validate(const TwistedAffineType& t) {
    switch (t.kind) {
        case AffineKind::Untwisted: validate(t.untwisted); return;
        case AffineKind::A2n_2:
            if (t.n < 1) throw InvalidArgument("A_{2n}^(2) needs n >= 1");
            return;
        case AffineKind::A2nm1_2:
        case AffineKind::Dnp1_2:
            if (t.n < 2) throw InvalidArgument("twisted family needs n >= 2");
            return;
        case AffineKind::E6_2:
        case AffineKind::D4_3: return;
    }
}

int TwistedAffineType::order() const {
    switch (kind) {
        case AffineKind::Untwisted: return 1;
        case AffineKind::D4_3: return 3;
        default: return 2;
    }
}

FiniteType TwistedAffineType::ambient() const {
    switch (kind) {
        case AffineKind::Untwisted: return untwisted;
        case AffineKind::A2n_2: return {Series::A, 2 * n};
        case AffineKind::A2nm1_2: return {Series::A, 2 * n - 1};
        case AffineKind::Dnp1_2: return {Series::D, n + 1};
        case AffineKind::E6_2: return {Series::E, 6};
        case AffineKind::D4_3: return {Series::D, 4};
    }
    return untwisted;
}

std::string TwistedAffineType::name() const {
    if (kind == AffineKind::Untwisted) return untwisted.name();
    return ambient().name() + "~" + std::to_string(order());
}

FiniteType TwistedAffineType::horizontal() const {
    switch (kind) {
        case AffineKind::Untwisted: return untwisted;
        case AffineKind::A2n_2: return n == 1 ? FiniteType{Series::A, 1} : FiniteType{Series::C, n};
        case AffineKind::A2nm1_2: return {Series::C, n};
        case AffineKind::Dnp1_2: return {Series::B, n};
        case AffineKind::E6_2: return {Series::F, 4};
        case AffineKind::D4_3: return {Series::G, 2};
    }
    return untwisted;
}

Labels TwistedAffineType::labels() const {
    Labels l;
    switch (kind) {
        case AffineKind::Untwisted: return untwisted_labels(untwisted);
        case AffineKind::A2n_2:
            l.a.assign(n, 2);
            l.a.back() = 1;
            l.av.assign(n, 2);
            break;
        case AffineKind::A2nm1_2:
            l.a.assign(n, 2);
            l.a.front() = 1;
            l.a.back() = 1;
            l.av.assign(n, 2);
            l.av.front() = 1;
            break;
        case AffineKind::Dnp1_2:
            l.a.assign(n, 1);
            l.av.assign(n, 2);
            l.av.back() = 1;
            break;
        case AffineKind::E6_2:
            l.a = {1, 2, 3, 2};
            l.av = {2, 4, 3, 2};
            break;
        case AffineKind::D4_3:
            l.a = {1, 2};
            l.av = {3, 2};
            break;
    }
    return l;
}

int TwistedAffineType::a0() const { return kind == AffineKind::A2n_2 ? 2 : 1; }

int TwistedAffineType::dual_coxeter_number() const {
    auto l = labels();
    return 1 + std::accumulate(l.av.begin(), l.av.end(), 0);
}

int TwistedAffineType::coxeter_number() const {
    auto l = labels();
    return a0() + std::accumulate(l.a.begin(), l.a.end(), 0);
}

TwistedAffineType parse_affine_type(const std::string& s) {
    auto tilde = s.find('~');
    if (tilde == std::string::npos) return TwistedAffineType::of_untwisted(parse_finite_type(s));
    const FiniteType x = parse_finite_type(s.substr(0, tilde));
    const std::string m = s.substr(tilde + 1);
    if (m == "1") return TwistedAffineType::of_untwisted(x);
    if (m == "2") {
        if (x.series == Series::A && x.rank >= 2)
            return x.rank % 2 == 0 ? TwistedAffineType::make(AffineKind::A2n_2, x.rank / 2)
                                   : TwistedAffineType::make(AffineKind::A2nm1_2, (x.rank + 1) / 2);
        if (x.series == Series::D && x.rank >= 3) return TwistedAffineType::make(AffineKind::Dnp1_2, x.rank - 1);
        if (x.series == Series::E && x.rank == 6) return TwistedAffineType::make(AffineKind::E6_2);
    }
    if (m == "3" && x.series == Series::D && x.rank == 4) return TwistedAffineType::make(AffineKind::D4_3);
    throw InvalidArgument("no twisted affine type '" + s + "'");
}

GramData gram_data(const TwistedAffineType& t) {
    validate(t);
    const auto l = t.labels();
    return gram_from_labels(t.horizontal(), l.a, l.av);
}

TwistedAffineType paired_type(const TwistedAffineType& t) {
    if (t.kind == AffineKind::A2nm1_2) return TwistedAffineType::make(AffineKind::Dnp1_2, t.n);
    if (t.kind == AffineKind::Dnp1_2) return TwistedAffineType::make(AffineKind::A2nm1_2, t.n);
    return t;
}

DiagramAutomorphism identity_automorphism(const FiniteType& g) {
    validate(g);
    DiagramAutomorphism s{g, 1, std::vector<int>(g.rank)};
    std::iota(s.perm.begin(), s.perm.end(), 0);
    return s;
}

DiagramAutomorphism standard_automorphism(const FiniteType& g, int order) {
    DiagramAutomorphism s = identity_automorphism(g);
    if (order == 1) return s;
    const int n = g.rank;
    s.order = order;
    if (order == 2 && g.series == Series::A && n >= 2) {
        std::reverse(s.perm.begin(), s.perm.end());
    } else if (order == 2 && g.series == Series::D) {
        std::swap(s.perm[n - 2], s.perm[n - 1]);
    } else if (order == 2 && g.series == Series::E && n == 6) {
        s.perm = {4, 3, 2, 1, 0, 5};
    } else if (order == 3 && g.series == Series::D && n == 4) {
        s.perm = {2, 1, 3, 0};
    } else {
        throw InvalidArgument(g.name() + " has no diagram automorphism of order " + std::to_string(order));
    }
    return s;
}

void validate(const DiagramAutomorphism& s) {
    validate(s.type);
    const int n = s.type.rank;
    if (static_cast<int>(s.perm.size()) != n) throw InvalidArgument("automorphism permutation has wrong length");
    std::vector<int> sorted = s.perm;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; ++i)
        if (sorted[i] != i) throw InvalidArgument("automorphism is not a permutation");
    const IntMatrix A = cartan_matrix(s.type);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (A[s.perm[i]][s.perm[j]] != A[i][j])
                throw InvalidArgument("permutation does not preserve the Cartan matrix of " + s.type.name());
    if (s.order < 1 || s.order > 3) throw InvalidArgument("automorphism order must be 1, 2 or 3");
    if (s.order == 3 && !(s.type.series == Series::D && s.type.rank == 4))
        throw InvalidArgument("order 3 only occurs for D4");
    // the permutation order must divide the declared order
    std::vector<int> p = s.perm;
    for (int k = 1; k < s.order; ++k) {
        std::vector<int> q(n);
        for (int i = 0; i < n; ++i) q[i] = s.perm[p[i]];
        p = q;
    }
    for (int i = 0; i < n; ++i)
        if (p[i] != i) throw InvalidArgument("permutation order does not divide the declared order");
    bool id = true;
    for (int i = 0; i < n; ++i) id = id && s.perm[i] == i;
    if (id != (s.order == 1)) throw InvalidArgument("declared order does not match the permutation");
}

DiagramAutomorphism power(const DiagramAutomorphism& s, int k) {
    const int n = s.type.rank;
    const int m = ((k % s.order) + s.order) % s.order;
    DiagramAutomorphism out = identity_automorphism(s.type);
    for (int step = 0; step < m; ++step) {
        std::vector<int> q(n);
        for (int i = 0; i < n; ++i) q[i] = s.perm[out.perm[i]];
        out.perm = q;
    }
    out.order = m == 0 ? 1 : s.order;  // orders 2 and 3 are prime
    return out;
}

TwistedAffineType twisted_type_of(const DiagramAutomorphism& s) {
    validate(s);
    const FiniteType& g = s.type;
    if (s.trivial()) return TwistedAffineType::of_untwisted(g);
    if (s.order == 3) return TwistedAffineType::make(AffineKind::D4_3);
    switch (g.series) {
        case Series::A:
            return g.rank % 2 == 0 ? TwistedAffineType::make(AffineKind::A2n_2, g.rank / 2)
                                   : TwistedAffineType::make(AffineKind::A2nm1_2, (g.rank + 1) / 2);
        case Series::D: return TwistedAffineType::make(AffineKind::Dnp1_2, g.rank - 1);
        case Series::E: return TwistedAffineType::make(AffineKind::E6_2);
        default: break;
    }
    throw InvalidArgument("no twisted type for " + g.name());
}

std::vector<int> orbit_representatives(const DiagramAutomorphism& s) {
    validate(s);
    const FiniteType& g = s.type;
    std::vector<int> reps;
    if (s.trivial()) {
        reps.resize(g.rank);
        std::iota(reps.begin(), reps.end(), 0);
        return reps;
    }
    if (s.order == 3) return {0, 1};
    switch (g.series) {
        case Series::A:
        case Series::D:
            // A_{2n-1}, A_{2n}: first half; D_{n+1}: all but the last node
            reps.resize(g.series == Series::A ? (g.rank + 1) / 2 : g.rank - 1);
            std::iota(reps.begin(), reps.end(), 0);
            return reps;
        case Series::E: return {0, 1, 2, 5};
        default: break;
    }
    throw InvalidArgument("no orbit data for " + g.name());
}

FiniteType orbit_type(const DiagramAutomorphism& s) { return paired_type(twisted_type_of(s)).horizontal(); }

size_t WeightList::find(const Coeffs& c) const {
    auto it = std::lower_bound(weights.begin(), weights.end(), c);
    if (it == weights.end() || *it != c) return npos;
    return static_cast<size_t>(it - weights.begin());
}

size_t WeightList::index_of(const Coeffs& c) const {
    size_t i = find(c);
    if (i == npos) {
        std::string s = "(";
        for (size_t k = 0; k < c.size(); ++k) s += (k ? "," : "") + std::to_string(c[k]);
        throw InvalidArgument("weight " + s + ") is not in the level-" + std::to_string(level) + " set of " + label);
    }
    return i;
}

namespace {

std::vector<Coeffs> bounded_weights(const std::vector<int>& av, int level) {
    std::vector<Coeffs> out;
    Coeffs b(av.size(), 0);
    std::function<void(size_t, int)> rec = [&](size_t i, int left) {
        if (i == av.size()) {
            out.push_back(b);
            return;
        }
        for (int v = 0; v * av[i] <= left; ++v) {
            b[i] = v;
            rec(i + 1, left - v * av[i]);
        }
        b[i] = 0;
    };
    rec(0, level);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

WeightList enumerate_twisted_level_weights(const TwistedAffineType& t, int level) {
    validate(t);
    if (level < 1) throw InvalidArgument("level must be positive");
    return WeightList{t.name(), t.horizontal(), level, bounded_weights(t.labels().av, level)};
}

WeightList enumerate_untwisted_level_weights(const FiniteType& g, int level) {
    return enumerate_twisted_level_weights(TwistedAffineType::of_untwisted(g), level);
}

WeightList level_weights_by_theta(const TwistedAffineType& t, int level) {
    const GramData gd = gram_data(t);
    const FiniteType h = t.horizontal();
    const IntMatrix A = cartan_matrix(h);
    const int n = h.rank;
    std::vector<Rational> theta(n, Rational(0));
    if (t.is_twisted()) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) theta[i] += A[i][j] * gd.a[j];
    } else {
        const Coeffs root = positive_roots(h).back();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) theta[i] += A[i][j] * root[j];
    }
    WeightList out{t.name(), h, level, {}};
    Coeffs b(n, 0);
    const int box = 2 * level;
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            std::vector<Rational> x(b.begin(), b.end());
            if (pairing(gd.gram_weights, x, theta) <= Rational(level)) out.weights.push_back(b);
            return;
        }
        for (int v = 0; v <= box; ++v) {
            b[i] = v;
            rec(i + 1);
        }
        b[i] = 0;
    };
    rec(0);
    std::sort(out.weights.begin(), out.weights.end());
    return out;
}

WeightList fixed_weights(const FiniteType& g, const DiagramAutomorphism& s, int level) {
    if (!(s.type == g)) throw InvalidArgument("automorphism belongs to " + s.type.name() + ", not " + g.name());
    validate(s);
    WeightList all = enumerate_untwisted_level_weights(g, level);
    WeightList out{all.label, g, level, {}};
    for (const auto& w : all.weights) {
        bool fixed = true;
        for (int i = 0; i < g.rank && fixed; ++i) fixed = w[s.perm[i]] == w[i];
        if (fixed) out.weights.push_back(w);
    }
    return out;
}

Weight iota(const DiagramAutomorphism& s, const Weight& mu) {
    if (!(mu.type == s.type) || static_cast<int>(mu.coeffs.size()) != s.type.rank)
        throw InvalidArgument("iota: weight does not belong to " + s.type.name());
    for (int i = 0; i < s.type.rank; ++i)
        if (mu.coeffs[s.perm[i]] != mu.coeffs[i]) throw InvalidArgument("iota: weight is not fixed by sigma");
    if (s.trivial()) return mu;
    Weight out{orbit_type(s), {}};
    for (int r : orbit_representatives(s)) out.coeffs.push_back(mu.coeffs[r]);
    return out;
}

Weight dual_weight(const TwistedAffineType& t, int level, const Weight& lambda) {
    const WeightList set = enumerate_twisted_level_weights(t, level);
    if (!(lambda.type == set.type)) throw InvalidArgument("dual_weight: weight type mismatch");
    set.index_of(lambda.coeffs);
    if (t.is_twisted()) return lambda;
    return longest_element_dual(t.untwisted, lambda);
}

Coeffs a2n_b_labelling(int n, int level, const Coeffs& c) {
    if (static_cast<int>(c.size()) != n) throw InvalidArgument("a2n_b_labelling: wrong length");
    int sum = std::accumulate(c.begin(), c.end(), 0);
    Coeffs out;
    for (int i = n - 2; i >= 0; --i) out.push_back(c[i]);
    out.push_back(level - 2 * sum);
    if (out.back() < 0) throw InvalidArgument("a2n_b_labelling: weight above the level");
    return out;
}

nlohmann::ordered_json to_json(const WeightList& w) {
    nlohmann::ordered_json j;
    j["type"] = w.label;
    j["coordinates"] = w.type.name();
    j["level"] = w.level;
    j["weights"] = nlohmann::ordered_json::array();
    for (const auto& c : w.weights) j["weights"].push_back(c);
    return j;
}

}  // namespace twv
