#include "twverlinde/verlinde.hpp"

#include "twverlinde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace twv {

namespace {

int mod(int a, int n) { return ((a % n) + n) % n; }

// memoized S-data per (algebra, level), shared by every rank evaluation in the process
struct AlgebraData {
    WeightList P;
    std::vector<double> s0;
    std::map<Coeffs, std::vector<Complex>> rows;
    std::map<std::vector<int>, SMatrixTable> crossed;  // keyed by sigma's permutation
};

class Store {
public:
    static Store& instance() {
        static Store s;
        return s;
    }

    AlgebraData& data(const FiniteType& g, int level) {
        auto key = g.name() + "@" + std::to_string(level);
        auto it = map_.find(key);
        if (it == map_.end()) {
            auto d = std::make_unique<AlgebraData>();
            d->P = enumerate_untwisted_level_weights(g, level);
            d->s0 = vacuum_row(g, level);
            it = map_.emplace(key, std::move(d)).first;
        }
        return *it->second;
    }

    const std::vector<Complex>& row(const FiniteType& g, int level, const Coeffs& lambda, const ComputeOptions& opt) {
        AlgebraData& d = data(g, level);
        auto it = d.rows.find(lambda);
        if (it != d.rows.end()) return it->second;
        std::vector<Complex> r;
        if (std::all_of(lambda.begin(), lambda.end(), [](int c) { return c == 0; })) {
            r.assign(d.s0.begin(), d.s0.end());
        } else {
            r = untwisted_smatrix_rows(g, level, {lambda}, opt).entries;
        }
        return d.rows.emplace(lambda, std::move(r)).first->second;
    }

    const SMatrixTable& crossed(const DiagramAutomorphism& s, int level, const ComputeOptions& opt) {
        AlgebraData& d = data(s.type, level);
        auto it = d.crossed.find(s.perm);
        if (it == d.crossed.end()) it = d.crossed.emplace(s.perm, crossed_smatrix(s.type, s, level, opt)).first;
        return it->second;
    }

    std::mutex& mutex() { return mu_; }

private:
    std::mutex mu_;
    std::map<std::string, std::unique_ptr<AlgebraData>> map_;
};

std::string point_str(size_t i) { return "point " + std::to_string(i); }

}  // namespace

void validate(const CoverSpec& spec) {
    validate(spec.g);
    if (!(spec.sigma.type == spec.g)) throw InvalidArgument("sigma is not an automorphism of " + spec.g.name());
    validate(spec.sigma);
    if (spec.N < 1 || spec.N % spec.sigma.order != 0)
        throw InvalidArgument("N must be a positive multiple of the order of sigma");
    if (spec.level < 1) throw InvalidArgument("level must be positive");
    if (spec.genus < 0) throw InvalidArgument("genus must be non-negative");
    if (spec.monodromies.size() != spec.weights.size())
        throw InvalidArgument("monodromies and weights have different lengths");
    const int n = static_cast<int>(spec.monodromies.size());
    if (!(2 * spec.genus - 2 + n > 0 || (spec.genus >= 1 && n == 0)))
        throw InvalidArgument("unstable curve: need 2g - 2 + n > 0");
    if (spec.holonomy < 1 || spec.N % spec.holonomy != 0) throw InvalidArgument("holonomy d must divide N");
    long long sum = 0;
    int gen = spec.N;
    for (size_t i = 0; i < spec.monodromies.size(); ++i) {
        const int m = mod(spec.monodromies[i], spec.N);
        sum += m;
        gen = std::gcd(gen, m);
        if (m % spec.holonomy != 0)
            throw InvalidArgument(point_str(i) + ": monodromy is not in the holonomy subgroup");
    }
    if (sum % spec.N != 0) throw InvalidArgument("monodromies must sum to 0 mod N");
    // in genus 0 the holonomy group is generated by the monodromies
    if (spec.genus == 0 && gen != spec.holonomy)
        throw InvalidArgument("genus 0: holonomy subgroup must be generated by the monodromies");
    for (size_t i = 0; i < spec.monodromies.size(); ++i) {
        const auto cls = power(spec.sigma, spec.monodromies[i]);
        const TwistedAffineType t = twisted_type_of(cls);
        const WeightList set = enumerate_twisted_level_weights(t, spec.level);
        if (static_cast<int>(spec.weights[i].size()) != set.type.rank || set.find(spec.weights[i]) == WeightList::npos)
            throw InvalidArgument(point_str(i) + ": weight is not in the level-" + std::to_string(spec.level) +
                                  " set of " + t.name());
    }
}

Complex verlinde_value(const CoverSpec& spec, const ComputeOptions& opt) {
    validate(spec);
    Store& store = Store::instance();
    std::lock_guard<std::mutex> lock(store.mutex());
    AlgebraData& d = store.data(spec.g, spec.level);
    const int order = spec.sigma.order;
    const bool all_mu = spec.holonomy % order == 0;

    // sum set: mu fixed by sigma^d, with its column index in the crossed table when relevant
    std::vector<size_t> p_index;
    std::vector<size_t> x_index;
    const SMatrixTable* crossed = nullptr;
    bool any_twisted = false;
    for (int m : spec.monodromies) any_twisted = any_twisted || mod(m, order) != 0;
    if (any_twisted) crossed = &store.crossed(spec.sigma, spec.level, opt);
    if (all_mu) {
        for (size_t i = 0; i < d.P.size(); ++i) p_index.push_back(i);
    } else {
        const WeightList fixed = fixed_weights(spec.g, spec.sigma, spec.level);
        for (size_t i = 0; i < fixed.size(); ++i) {
            p_index.push_back(d.P.index_of(fixed.weights[i]));
            x_index.push_back(crossed ? crossed->cols.index_of(fixed.weights[i]) : i);
        }
    }

    const int n = static_cast<int>(spec.monodromies.size());
    const int exponent = n + 2 * spec.genus - 2;
    std::vector<const std::vector<Complex>*> untwisted_rows(n, nullptr);
    std::vector<size_t> crossed_rows(n, 0);
    for (int i = 0; i < n; ++i) {
        if (mod(spec.monodromies[i], order) == 0)
            untwisted_rows[i] = &store.row(spec.g, spec.level, spec.weights[i], opt);
        else
            crossed_rows[i] = crossed->rows.index_of(spec.weights[i]);
    }
    std::vector<Complex> terms;
    for (size_t s = 0; s < p_index.size(); ++s) {
        const size_t pi = p_index[s];
        Complex t = 1;
        for (int i = 0; i < n; ++i) {
            if (untwisted_rows[i]) t *= (*untwisted_rows[i])[pi];
            else t *= (*crossed)(crossed_rows[i], x_index[s]);
        }
        t /= std::pow(d.s0[pi], exponent);
        terms.push_back(t);
    }
    // pairwise summation keeps the error independent of the ordering of mu
    while (terms.size() > 1) {
        std::vector<Complex> next;
        for (size_t i = 0; i + 1 < terms.size(); i += 2) next.push_back(terms[i] + terms[i + 1]);
        if (terms.size() % 2) next.push_back(terms.back());
        terms.swap(next);
    }
    return terms.empty() ? Complex(0) : terms.front();
}

RankResult rank(const CoverSpec& spec, const ComputeOptions& opt, double tol) {
    RankResult r;
    r.value = verlinde_value(spec, opt);
    r.rank = std::llround(r.value.real());
    r.residual = std::abs(r.value - Complex(static_cast<double>(r.rank)));
    if (!(r.residual < tol))
        throw NonIntegral("non-integral rank " + format_double(r.value.real()) + std::string(r.value.imag() < 0 ? "" : "+") +
                          format_double(r.value.imag()) + "i (residual " + format_double(r.residual) + ")");
    if (r.rank < 0) throw NonIntegral("negative rank " + std::to_string(r.rank));
    return r;
}

namespace {

// weights available on an edge of class k, with their duals
std::vector<std::pair<Coeffs, Coeffs>> edge_labels(const CoverSpec& spec, int k) {
    const auto cls = power(spec.sigma, k);
    const TwistedAffineType t = twisted_type_of(cls);
    const WeightList set = enumerate_twisted_level_weights(t, spec.level);
    std::vector<std::pair<Coeffs, Coeffs>> out;
    for (const auto& w : set.weights)
        out.emplace_back(w, dual_weight(t, spec.level, Weight{set.type, w}).coeffs);
    return out;
}

void check_holonomy_kept(const CoverSpec& piece) {
    if (piece.genus != 0) return;
    int gen = piece.N;
    for (int m : piece.monodromies) gen = std::gcd(gen, mod(m, piece.N));
    if (gen != piece.holonomy) throw InvalidArgument("degeneration changes the holonomy subgroup of a genus-0 piece");
}

}  // namespace

IdentityReport verify_factorization(const CoverSpec& spec, int edge_class, const ComputeOptions& opt) {
    validate(spec);
    if (spec.genus < 1) throw InvalidArgument("non-separating factorization needs genus >= 1");
    const int k = mod(edge_class, spec.N);
    if (k % spec.holonomy != 0) throw InvalidArgument("edge class is not in the holonomy subgroup");
    IdentityReport rep;
    rep.identity = "factorization (non-separating, edge class " + std::to_string(k) + ")";
    rep.lhs = rank(spec, opt).rank;
    CoverSpec base = spec;
    base.genus -= 1;
    base.monodromies.push_back(k);
    base.monodromies.push_back(mod(-k, spec.N));
    base.weights.emplace_back();
    base.weights.emplace_back();
    check_holonomy_kept(base);
    for (const auto& [mu, dual] : edge_labels(spec, k)) {
        base.weights[base.weights.size() - 2] = mu;
        base.weights.back() = dual;
        rep.rhs += rank(base, opt).rank;
    }
    rep.ok = rep.lhs == rep.rhs;
    rep.detail = "lhs " + std::to_string(rep.lhs) + ", rhs " + std::to_string(rep.rhs);
    return rep;
}

IdentityReport verify_factorization_separating(const CoverSpec& spec, const std::vector<size_t>& part_a, int genus_a,
                                               const ComputeOptions& opt) {
    validate(spec);
    if (genus_a < 0 || genus_a > spec.genus) throw InvalidArgument("genus split out of range");
    std::vector<bool> in_a(spec.monodromies.size(), false);
    for (size_t i : part_a) {
        if (i >= in_a.size()) throw InvalidArgument("point index out of range");
        in_a[i] = true;
    }
    CoverSpec a = spec, b = spec;
    a.genus = genus_a;
    b.genus = spec.genus - genus_a;
    a.monodromies.clear();
    a.weights.clear();
    b.monodromies.clear();
    b.weights.clear();
    int sum_a = 0;
    for (size_t i = 0; i < in_a.size(); ++i) {
        CoverSpec& side = in_a[i] ? a : b;
        side.monodromies.push_back(spec.monodromies[i]);
        side.weights.push_back(spec.weights[i]);
        if (in_a[i]) sum_a += spec.monodromies[i];
    }
    const int k = mod(-sum_a, spec.N);
    a.monodromies.push_back(k);
    b.monodromies.push_back(mod(-k, spec.N));
    a.weights.emplace_back();
    b.weights.emplace_back();
    check_holonomy_kept(a);
    check_holonomy_kept(b);
    IdentityReport rep;
    rep.identity = "factorization (separating, edge class " + std::to_string(k) + ")";
    rep.lhs = rank(spec, opt).rank;
    for (const auto& [mu, dual] : edge_labels(spec, k)) {
        a.weights.back() = mu;
        b.weights.back() = dual;
        rep.rhs += rank(a, opt).rank * rank(b, opt).rank;
    }
    rep.ok = rep.lhs == rep.rhs;
    rep.detail = "lhs " + std::to_string(rep.lhs) + ", rhs " + std::to_string(rep.rhs);
    return rep;
}

IdentityReport verify_propagation(const CoverSpec& spec, const ComputeOptions& opt) {
    IdentityReport rep;
    rep.identity = "propagation of vacua";
    rep.lhs = rank(spec, opt).rank;
    CoverSpec more = spec;
    more.monodromies.push_back(0);
    more.weights.push_back(Coeffs(spec.g.rank, 0));
    rep.rhs = rank(more, opt).rank;
    rep.ok = rep.lhs == rep.rhs;
    rep.detail = "lhs " + std::to_string(rep.lhs) + ", rhs " + std::to_string(rep.rhs);
    return rep;
}

CoverSpec cover_spec_from_json(const nlohmann::ordered_json& j) {
    try {
        if (!j.is_object()) throw InvalidArgument("cover spec must be a JSON object");
        for (const auto& [key, value] : j.items()) {
            static const std::vector<std::string> known = {"algebra", "sigma_order", "sigma_perm", "N", "level",
                                                           "genus", "points", "holonomy"};
            if (std::find(known.begin(), known.end(), key) == known.end())
                throw InvalidArgument("unknown field '" + key + "'");
        }
        CoverSpec s;
        s.g = parse_finite_type(j.at("algebra").get<std::string>());
        const int order = j.value("sigma_order", 1);
        s.sigma = standard_automorphism(s.g, order);
        if (j.contains("sigma_perm")) s.sigma.perm = j.at("sigma_perm").get<std::vector<int>>();
        s.N = j.value("N", order);
        s.level = j.at("level").get<int>();
        s.genus = j.value("genus", 0);
        for (const auto& p : j.at("points")) {
            s.monodromies.push_back(p.at("monodromy").get<int>());
            s.weights.push_back(p.at("weight").get<Coeffs>());
        }
        if (j.contains("holonomy")) {
            s.holonomy = j.at("holonomy").get<int>();
        } else if (s.genus == 0) {
            int gen = s.N;
            for (int m : s.monodromies) gen = std::gcd(gen, mod(m, s.N));
            s.holonomy = gen;
        } else {
            s.holonomy = 1;
        }
        validate(s);
        return s;
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidArgument(std::string("cover spec: ") + ex.what());
    }
}

nlohmann::ordered_json to_json(const CoverSpec& spec) {
    nlohmann::ordered_json j;
    j["algebra"] = spec.g.name();
    j["sigma_order"] = spec.sigma.order;
    j["sigma_perm"] = spec.sigma.perm;
    j["N"] = spec.N;
    j["level"] = spec.level;
    j["genus"] = spec.genus;
    j["holonomy"] = spec.holonomy;
    auto pts = nlohmann::ordered_json::array();
    for (size_t i = 0; i < spec.monodromies.size(); ++i) {
        nlohmann::ordered_json p;
        p["monodromy"] = spec.monodromies[i];
        p["weight"] = spec.weights[i];
        pts.push_back(p);
    }
    j["points"] = pts;
    return j;
}

nlohmann::ordered_json to_json(const RankResult& r) {
    nlohmann::ordered_json j;
    j["rank"] = r.rank;
    j["residual"] = r.residual;
    return j;
}

}  // namespace twv
