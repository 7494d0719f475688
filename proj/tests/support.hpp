#pragma once

// spec generators shared by the unit tests and the acceptance runner

#include "twverlinde/verlinde.hpp"

#include <numeric>
#include <random>

namespace support {

using namespace twv;

inline CoverSpec make_spec(const DiagramAutomorphism& s, int N, int level, int genus, std::vector<int> m,
                    std::vector<Coeffs> w, int holonomy) {
    CoverSpec c;
    c.g = s.type;
    c.sigma = s;
    c.N = N;
    c.level = level;
    c.genus = genus;
    c.monodromies = std::move(m);
    c.weights = std::move(w);
    c.holonomy = holonomy;
    return c;
}

// ramified double covers of A_{2r-1} with all weights zero
inline CoverSpec double_cover(int r, int genus, int n) {
    const FiniteType a{Series::A, 2 * r - 1};
    const auto s = standard_automorphism(a, 2);
    return make_spec(s, 2, 1, genus, std::vector<int>(2 * n, 1), std::vector<Coeffs>(2 * n, Coeffs(r, 0)), 1);
}

inline long long ipow(long long b, int e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

inline std::vector<CoverSpec> paper_specs() {
    std::vector<CoverSpec> out;
    for (int r = 2; r <= 3; ++r)
        for (int g = 0; g <= 2; ++g)
            for (int n = 0; n <= 3; ++n)
                if (2 * g - 2 + 2 * n > 0 || (g >= 1 && n == 0)) out.push_back(double_cover(r, g, n));
    const FiniteType d4{Series::D, 4};
    const auto tri = standard_automorphism(d4, 3);
    for (int l = 1; l <= 2; ++l) {
        out.push_back(make_spec(tri, 3, l, 0, {1, 1, 1}, {{0, 0}, {0, 0}, {0, 0}}, 1));
        out.push_back(make_spec(tri, 3, l, 0, {1, 2, 0}, {{0, 0}, {0, 0}, {0, 0, 0, 0}}, 1));
    }
    return out;
}

// a random stable spec with weights drawn from the right level sets
inline CoverSpec random_spec(std::mt19937& rng) {
    static const std::vector<std::pair<FiniteType, int>> pool = {
        {{Series::A, 2}, 2}, {{Series::A, 3}, 2}, {{Series::A, 4}, 2}, {{Series::A, 5}, 2}, {{Series::D, 4}, 2},
        {{Series::D, 4}, 3}, {{Series::D, 5}, 2}, {{Series::E, 6}, 2}, {{Series::A, 2}, 1}, {{Series::B, 2}, 1}};
    auto uni = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
    for (;;) {
        const auto& [g, order] = pool[uni(0, static_cast<int>(pool.size()) - 1)];
        const auto s = standard_automorphism(g, order);
        const int N = order * uni(1, 2);
        const int level = uni(1, g.rank >= 5 ? 2 : 3);
        const int genus = uni(0, 2);
        const int n = uni(0, 4);
        if (!(2 * genus - 2 + n > 0 || (genus >= 1 && n == 0))) continue;
        std::vector<int> divisors;
        for (int d = 1; d <= N; ++d)
            if (N % d == 0) divisors.push_back(d);
        const int d = divisors[uni(0, static_cast<int>(divisors.size()) - 1)];
        std::vector<int> m(n);
        int sum = 0;
        for (int i = 0; i + 1 < n; ++i) {
            m[i] = d * uni(0, N / d - 1);
            sum += m[i];
        }
        if (n > 0) m[n - 1] = ((-sum) % N + N) % N;
        if (genus == 0) {
            int gen = N;
            for (int x : m) gen = std::gcd(gen, x);
            if (gen != d) continue;
        }
        std::vector<Coeffs> w;
        for (int x : m) {
            const auto set = enumerate_twisted_level_weights(twisted_type_of(power(s, x)), level);
            w.push_back(set.weights[uni(0, static_cast<int>(set.size()) - 1)]);
        }
        return make_spec(s, N, level, genus, m, w, d);
    }
}


}  // namespace support
