#include "twverlinde/lie_core.hpp"

#include "twverlinde/errors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <unordered_map>

namespace twv {

namespace {

char series_char(Series s) { return "ABCDEFG"[static_cast<int>(s)]; }

struct VecHash {
    size_t operator()(const std::vector<int>& v) const noexcept {
        size_t h = 1469598103934665603ull;
        for (int x : v) {
            h ^= static_cast<size_t>(static_cast<unsigned>(x));
            h *= 1099511628211ull;
        }
        return h;
    }
};

}  // namespace

std::string FiniteType::name() const { return std::string(1, series_char(series)) + std::to_string(rank); }

bool FiniteType::simply_laced() const {
    return series == Series::A || series == Series::D || series == Series::E;
}

void validate(const FiniteType& t) {
    bool ok = false;
    switch (t.series) {
        case Series::A: ok = t.rank >= 1; break;
        case Series::B: ok = t.rank >= 2; break;
        case Series::C: ok = t.rank >= 2; break;
        case Series::D: ok = t.rank >= 3; break;
        case Series::E: ok = t.rank >= 6 && t.rank <= 8; break;
        case Series::F: ok = t.rank == 4; break;
        case Series::G: ok = t.rank == 2; break;
    }
    if (!ok) throw InvalidArgument("inadmissible type " + t.name());
}

FiniteType make_type(Series s, int rank) {
    FiniteType t{s, rank};
    validate(t);
    return t;
}

FiniteType parse_finite_type(const std::string& s) {
    if (s.size() < 2) throw InvalidArgument("bad type string '" + s + "'");
    const std::string letters = "ABCDEFG";
    auto pos = letters.find(static_cast<char>(std::toupper(static_cast<unsigned char>(s[0]))));
    if (pos == std::string::npos) throw InvalidArgument("bad type string '" + s + "'");
    std::string digits = s.substr(1);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit) || digits.size() > 3)
        throw InvalidArgument("bad type string '" + s + "'");
    return make_type(static_cast<Series>(pos), std::stoi(digits));
}

IntMatrix cartan_matrix(const FiniteType& t) {
    validate(t);
    const int n = t.rank;
    IntMatrix A(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) A[i][i] = 2;
    if (n == 1) return A;
    switch (t.series) {
        case Series::A:
        case Series::B:
        case Series::C:
        case Series::D:
            for (int i = 0; i + 1 < n; ++i) A[i][i + 1] = A[i + 1][i] = -1;
            if (t.series == Series::B) A[n - 1][n - 2] = -2;
            if (t.series == Series::C) A[n - 2][n - 1] = -2;
            if (t.series == Series::D) {
                A[n - 2][n - 1] = A[n - 1][n - 2] = 0;
                A[n - 3][n - 1] = A[n - 1][n - 3] = -1;
            }
            break;
        case Series::E: {
            for (int i = 0; i + 2 < n; ++i) A[i][i + 1] = A[i + 1][i] = -1;
            const int branch = n - 4;  // node 3, 4, 5 (1-based) for E6, E7, E8
            A[branch][n - 1] = A[n - 1][branch] = -1;
            break;
        }
        case Series::F:
            A = {{2, -1, 0, 0}, {-1, 2, -1, 0}, {0, -2, 2, -1}, {0, 0, -1, 2}};
            break;
        case Series::G:
            A = {{2, -1}, {-3, 2}};
            break;
    }
    return A;
}

RatMatrix inverse(const IntMatrix& m) {
    const size_t n = m.size();
    RatMatrix a(n, std::vector<Rational>(2 * n, Rational(0)));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
        a[i][n + i] = 1;
    }
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && a[p][c] == Rational(0)) ++p;
        if (p == n) throw InvalidArgument("singular matrix");
        std::swap(a[p], a[c]);
        Rational piv = a[c][c];
        for (auto& x : a[c]) x /= piv;
        for (size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == Rational(0)) continue;
            Rational f = a[r][c];
            for (size_t j = 0; j < 2 * n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    RatMatrix inv(n, std::vector<Rational>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
    return inv;
}

Rational determinant(const RatMatrix& m) {
    RatMatrix a = m;
    const size_t n = a.size();
    Rational det = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && a[p][c] == Rational(0)) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            Rational f = a[r][c] / a[c][c];
            for (size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return det;
}

std::vector<Coeffs> positive_roots(const FiniteType& t) {
    const IntMatrix A = cartan_matrix(t);
    const int n = t.rank;
    std::set<Coeffs> all;
    std::vector<Coeffs> layer;
    for (int i = 0; i < n; ++i) {
        Coeffs e(n, 0);
        e[i] = 1;
        all.insert(e);
        layer.push_back(e);
    }
    // root strings: for a positive root r and simple alpha_i, r + alpha_i is a root iff p > 0,
    // where p - q = -<r, alpha_i^vee>
    while (!layer.empty()) {
        std::vector<Coeffs> next;
        for (const auto& r : layer) {
            for (int i = 0; i < n; ++i) {
                int q = 0;
                Coeffs down = r;
                while (true) {
                    down[i] -= 1;
                    if (all.count(down)) ++q;
                    else break;
                }
                int pr = 0;
                for (int j = 0; j < n; ++j) pr += A[i][j] * r[j];
                if (q - pr > 0) {
                    Coeffs up = r;
                    up[i] += 1;
                    if (all.insert(up).second) next.push_back(up);
                }
            }
        }
        layer = std::move(next);
    }
    std::vector<Coeffs> out(all.begin(), all.end());
    std::stable_sort(out.begin(), out.end(), [](const Coeffs& x, const Coeffs& y) {
        return std::accumulate(x.begin(), x.end(), 0) < std::accumulate(y.begin(), y.end(), 0);
    });
    return out;
}

Labels untwisted_labels(const FiniteType& t) {
    const IntMatrix A = cartan_matrix(t);
    const int n = t.rank;
    const Coeffs theta = positive_roots(t).back();
    // symmetrizer d_i = (alpha_i, alpha_i)/2 with d_i a_ij = d_j a_ji
    std::vector<Rational> d(n, Rational(0));
    d[0] = 1;
    for (bool changed = true; changed;) {
        changed = false;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (d[i] != Rational(0) && d[j] == Rational(0) && A[i][j] != 0) {
                    d[j] = d[i] * A[i][j] / A[j][i];
                    changed = true;
                }
    }
    Rational norm = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) norm += d[i] * A[i][j] * theta[i] * theta[j];
    Labels l;
    l.a = theta;
    for (int i = 0; i < n; ++i) {
        Rational v = theta[i] * d[i] * 2 / norm;
        l.av.push_back(static_cast<int>(boost::rational_cast<long long>(v)));
    }
    return l;
}

int dual_coxeter_number(const FiniteType& t) {
    auto l = untwisted_labels(t);
    return 1 + std::accumulate(l.av.begin(), l.av.end(), 0);
}

GramData gram_from_labels(const FiniteType& t, const std::vector<int>& a, const std::vector<int>& av) {
    const IntMatrix A = cartan_matrix(t);
    const int n = t.rank;
    if (static_cast<int>(a.size()) != n || static_cast<int>(av.size()) != n)
        throw InvalidArgument("label vector length does not match rank of " + t.name());
    GramData g{t, a, av, RatMatrix(n, std::vector<Rational>(n)), RatMatrix(n, std::vector<Rational>(n))};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.gram_roots[i][j] = Rational(A[i][j] * av[i], a[i]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (g.gram_roots[i][j] != g.gram_roots[j][i])
                throw InvalidArgument("labels do not symmetrize the Cartan matrix of " + t.name());
    // alpha_j = sum_i a_ij omega_i, so gram_roots = A^T G_w A
    const RatMatrix Ai = inverse(A);
    RatMatrix tmp(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) tmp[i][j] += g.gram_roots[i][k] * Ai[k][j];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rational s = 0;
            for (int k = 0; k < n; ++k) s += Ai[k][i] * tmp[k][j];
            g.gram_weights[i][j] = s;
        }
    return g;
}

GramData untwisted_gram(const FiniteType& t) {
    auto l = untwisted_labels(t);
    return gram_from_labels(t, l.a, l.av);
}

Coeffs WeylElement::apply(const Coeffs& v) const {
    Coeffs out(rank, 0);
    for (int i = 0; i < rank; ++i) {
        int s = 0;
        for (int j = 0; j < rank; ++j) s += at(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

std::vector<WeylElement> weyl_group(const FiniteType& t, int cap) {
    validate(t);
    if (t.rank > cap)
        throw GroupTooLarge("Weyl group of " + t.name() + " is too large (rank " + std::to_string(t.rank) +
                            " above cap " + std::to_string(cap) + ")");
    const IntMatrix A = cartan_matrix(t);
    const int n = t.rank;
    // s_i(lambda) = lambda - lambda_i alpha_i, alpha_i = column i of A
    std::vector<std::vector<int>> gens;
    for (int i = 0; i < n; ++i) {
        std::vector<int> m(n * n, 0);
        for (int k = 0; k < n; ++k) m[k * n + k] = 1;
        for (int j = 0; j < n; ++j) m[j * n + i] -= A[j][i];
        gens.push_back(std::move(m));
    }
    std::vector<int> id(n * n, 0);
    for (int k = 0; k < n; ++k) id[k * n + k] = 1;

    std::vector<WeylElement> out{WeylElement{n, id, 1}};
    std::unordered_map<std::vector<int>, size_t, VecHash> seen{{id, 0}};
    size_t frontier_begin = 0;
    while (frontier_begin < out.size()) {
        const size_t frontier_end = out.size();
        for (size_t e = frontier_begin; e < frontier_end; ++e) {
            for (const auto& g : gens) {
                std::vector<int> p(n * n, 0);
                const auto& m = out[e].matrix;
                for (int i = 0; i < n; ++i)
                    for (int k = 0; k < n; ++k) {
                        const int gik = g[i * n + k];
                        if (gik == 0) continue;
                        for (int j = 0; j < n; ++j) p[i * n + j] += gik * m[k * n + j];
                    }
                if (seen.count(p)) continue;
                const int sign = -out[e].sign;
                seen.emplace(p, out.size());
                out.push_back(WeylElement{n, std::move(p), sign});
            }
        }
        frontier_begin = frontier_end;
    }
    return out;
}

const std::vector<WeylElement>& cached_weyl_group(const FiniteType& t) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::vector<WeylElement>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(static_cast<int>(t.series), t.rank);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, weyl_group(t)).first;
    return it->second;
}

std::uint64_t weyl_group_order(const FiniteType& t) {
    validate(t);
    auto fact = [](int n) {
        std::uint64_t f = 1;
        for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
        return f;
    };
    const int n = t.rank;
    switch (t.series) {
        case Series::A: return fact(n + 1);
        case Series::B:
        case Series::C: return (std::uint64_t{1} << n) * fact(n);
        case Series::D: return (std::uint64_t{1} << (n - 1)) * fact(n);
        case Series::E: return n == 6 ? 51840 : n == 7 ? 2903040 : 696729600;
        case Series::F: return 1152;
        case Series::G: return 12;
    }
    return 0;
}

Weight weyl_vector(const FiniteType& t) {
    validate(t);
    return Weight{t, Coeffs(t.rank, 1)};
}

Rational pairing(const RatMatrix& gram, const std::vector<Rational>& x, const std::vector<Rational>& y) {
    Rational s = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] == Rational(0)) continue;
        Rational row = 0;
        for (size_t j = 0; j < y.size(); ++j) row += gram[i][j] * y[j];
        s += x[i] * row;
    }
    return s;
}

Rational pairing(const GramData& g, const Weight& lambda, const Weight& mu) {
    if (!(lambda.type == g.type) || !(mu.type == g.type))
        throw InvalidArgument("pairing: weight type does not match " + g.type.name());
    if (static_cast<int>(lambda.coeffs.size()) != g.type.rank || static_cast<int>(mu.coeffs.size()) != g.type.rank)
        throw InvalidArgument("pairing: coefficient vector has wrong length");
    std::vector<Rational> x(lambda.coeffs.begin(), lambda.coeffs.end());
    std::vector<Rational> y(mu.coeffs.begin(), mu.coeffs.end());
    return pairing(g.gram_weights, x, y);
}

std::vector<int> dual_permutation(const FiniteType& t) {
    validate(t);
    const int n = t.rank;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    if (t.series == Series::A) std::reverse(p.begin(), p.end());
    if (t.series == Series::D && n % 2 == 1) std::swap(p[n - 2], p[n - 1]);
    if (t.series == Series::E && n == 6) p = {4, 3, 2, 1, 0, 5};
    return p;
}

Weight longest_element_dual(const FiniteType& t, const Weight& lambda) {
    if (!(lambda.type == t) || static_cast<int>(lambda.coeffs.size()) != t.rank)
        throw InvalidArgument("longest_element_dual: weight does not belong to " + t.name());
    if (std::any_of(lambda.coeffs.begin(), lambda.coeffs.end(), [](int c) { return c < 0; }))
        throw InvalidArgument("longest_element_dual: weight is not dominant");
    const auto p = dual_permutation(t);
    Weight out{t, Coeffs(t.rank)};
    for (int i = 0; i < t.rank; ++i) out.coeffs[p[i]] = lambda.coeffs[i];
    return out;
}

}  // namespace twv
