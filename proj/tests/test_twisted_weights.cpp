#include "doctest.h"

#include "twverlinde/errors.hpp"
#include "twverlinde/twisted_weights.hpp"

#include <set>

using namespace twv;

namespace {

std::vector<TwistedAffineType> twisted_grid() {
    std::vector<TwistedAffineType> out;
    for (int n = 1; n <= 4; ++n) out.push_back(TwistedAffineType::make(AffineKind::A2n_2, n));
    for (int n = 2; n <= 4; ++n) out.push_back(TwistedAffineType::make(AffineKind::A2nm1_2, n));
    for (int n = 2; n <= 4; ++n) out.push_back(TwistedAffineType::make(AffineKind::Dnp1_2, n));
    out.push_back(TwistedAffineType::make(AffineKind::E6_2));
    out.push_back(TwistedAffineType::make(AffineKind::D4_3));
    return out;
}

std::vector<DiagramAutomorphism> automorphism_grid() {
    std::vector<DiagramAutomorphism> out;
    for (int r = 2; r <= 7; ++r) out.push_back(standard_automorphism({Series::A, r}, 2));
    for (int r = 4; r <= 6; ++r) out.push_back(standard_automorphism({Series::D, r}, 2));
    out.push_back(standard_automorphism({Series::E, 6}, 2));
    out.push_back(standard_automorphism({Series::D, 4}, 3));
    return out;
}

}  // namespace

TEST_CASE("affine type strings") {
    for (const char* s : {"A3~2", "A4~2", "D5~2", "E6~2", "D4~3", "A2~2", "D3~2"})
        CHECK(parse_affine_type(s).name() == s);
    CHECK(parse_affine_type("B3").name() == "B3");
    CHECK_FALSE(parse_affine_type("B3").is_twisted());
    CHECK(parse_affine_type("A3~2").kind == AffineKind::A2nm1_2);
    CHECK(parse_affine_type("A4~2").kind == AffineKind::A2n_2);
    CHECK(parse_affine_type("D4~3").order() == 3);
    for (const char* s : {"A3~3", "B3~2", "E7~2", "D5~3", "A1~2", "A3~", "A3~x", "Q3"})
        CHECK_THROWS_AS(parse_affine_type(s), InvalidArgument);
}

TEST_CASE("horizontal types and Coxeter numbers") {
    struct Row {
        const char* s;
        const char* horizontal;
        int hv;
        int h;
    };
    const Row rows[] = {{"A2~2", "A1", 3, 3}, {"A4~2", "C2", 5, 5}, {"A3~2", "C2", 4, 3},
                        {"A5~2", "C3", 6, 5}, {"D3~2", "B2", 4, 3}, {"D5~2", "B4", 8, 5},
                        {"E6~2", "F4", 12, 9}, {"D4~3", "G2", 6, 4}};
    for (const auto& r : rows) {
        const auto t = parse_affine_type(r.s);
        CHECK_MESSAGE(t.horizontal().name() == r.horizontal, r.s);
        CHECK_MESSAGE(t.dual_coxeter_number() == r.hv, r.s);
        CHECK_MESSAGE(t.coxeter_number() == r.h, r.s);
    }
    CHECK(paired_type(parse_affine_type("A5~2")).name() == "D4~2");
    CHECK(paired_type(parse_affine_type("D4~2")).name() == "A5~2");
    CHECK(paired_type(parse_affine_type("E6~2")).name() == "E6~2");
}

TEST_CASE("level-one and level-two examples") {
    auto w = enumerate_twisted_level_weights(parse_affine_type("A3~2"), 1);
    CHECK(w.weights == std::vector<Coeffs>{{0, 0}, {1, 0}});
    w = enumerate_twisted_level_weights(parse_affine_type("D4~3"), 2);
    CHECK(w.weights == std::vector<Coeffs>{{0, 0}, {0, 1}});
    for (int n = 1; n <= 4; ++n)
        CHECK(enumerate_twisted_level_weights(TwistedAffineType::make(AffineKind::A2n_2, n), 1).size() == 1);
    CHECK(enumerate_untwisted_level_weights({Series::A, 2}, 1).weights ==
          std::vector<Coeffs>{{0, 0}, {0, 1}, {1, 0}});
    CHECK(enumerate_untwisted_level_weights({Series::D, 4}, 1).weights ==
          std::vector<Coeffs>{{0, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}, {1, 0, 0, 0}});
    for (int l = 1; l <= 6; ++l) CHECK(enumerate_untwisted_level_weights({Series::A, 1}, l).size() == size_t(l + 1));
    CHECK_THROWS_AS(enumerate_untwisted_level_weights({Series::A, 1}, 0), InvalidArgument);
    CHECK(enumerate_untwisted_level_weights({Series::E, 6}, 1).size() == 3);
    CHECK(enumerate_untwisted_level_weights({Series::E, 8}, 1).size() == 1);
}

TEST_CASE("level sets agree with the highest-root oracle") {
    for (const auto& t : twisted_grid()) {
        size_t prev = 0;
        for (int l = 1; l <= 6; ++l) {
            const auto a = enumerate_twisted_level_weights(t, l);
            const auto b = level_weights_by_theta(t, l);
            CHECK_MESSAGE(a.weights == b.weights, t.name() << " level " << l);
            CHECK(a.size() >= prev);
            prev = a.size();
            CHECK(a.weights.front() == Coeffs(t.horizontal().rank, 0));
        }
    }
    for (const char* s : {"A3", "B3", "C3", "G2", "F4", "D4"}) {
        const auto g = parse_finite_type(s);
        for (int l = 1; l <= 4; ++l)
            CHECK_MESSAGE(enumerate_untwisted_level_weights(g, l).weights ==
                              level_weights_by_theta(TwistedAffineType::of_untwisted(g), l).weights,
                          s << " level " << l);
    }
}

TEST_CASE("sigma-fixed weights and iota") {
    const FiniteType a3{Series::A, 3}, d4{Series::D, 4};
    CHECK(fixed_weights(a3, standard_automorphism(a3, 2), 1).weights == std::vector<Coeffs>{{0, 0, 0}, {0, 1, 0}});
    const auto tri = standard_automorphism(d4, 3);
    CHECK(fixed_weights(d4, tri, 1).weights == std::vector<Coeffs>{{0, 0, 0, 0}});
    CHECK(fixed_weights(d4, tri, 2).weights == std::vector<Coeffs>{{0, 0, 0, 0}, {0, 1, 0, 0}});
    CHECK(iota(tri, {d4, {0, 1, 0, 0}}).coeffs == Coeffs{0, 1});
    CHECK_THROWS_AS(iota(tri, {d4, {1, 0, 0, 0}}), InvalidArgument);

    // iota is a bijection from fixed weights onto the paired twisted level set
    for (const auto& s : automorphism_grid()) {
        const auto paired = paired_type(twisted_type_of(s));
        CHECK(orbit_type(s) == paired.horizontal());
        const Weight rho{s.type, Coeffs(s.type.rank, 1)};
        CHECK(iota(s, rho).coeffs == Coeffs(paired.horizontal().rank, 1));
        for (int l = 1; l <= 4; ++l) {
            const auto fixed = fixed_weights(s.type, s, l);
            const auto target = enumerate_twisted_level_weights(paired, l);
            REQUIRE_MESSAGE(fixed.size() == target.size(), s.type.name() << " order " << s.order << " level " << l);
            std::set<Coeffs> image;
            for (const auto& w : fixed.weights) {
                const auto c = iota(s, {s.type, w}).coeffs;
                CHECK(target.find(c) != WeightList::npos);
                image.insert(c);
            }
            CHECK(image.size() == fixed.size());
        }
    }
}

TEST_CASE("dual weights") {
    const auto a3t = parse_affine_type("A3~2");
    CHECK(dual_weight(a3t, 1, {a3t.horizontal(), {1, 0}}).coeffs == Coeffs{1, 0});
    const FiniteType a2{Series::A, 2};
    const auto a2u = TwistedAffineType::of_untwisted(a2);
    CHECK(dual_weight(a2u, 1, {a2, {1, 0}}).coeffs == Coeffs{0, 1});
    CHECK(dual_weight(a2u, 1, {a2, {0, 0}}).coeffs == Coeffs{0, 0});
    CHECK_THROWS_AS(dual_weight(a2u, 1, {a2, {1, 1}}), InvalidArgument);
    for (const char* s : {"A4", "D5", "E6", "C3"}) {
        const auto g = parse_finite_type(s);
        const auto t = TwistedAffineType::of_untwisted(g);
        const auto set = enumerate_untwisted_level_weights(g, 2);
        for (const auto& w : set.weights) {
            const auto d = dual_weight(t, 2, {g, w});
            CHECK(set.find(d.coeffs) != WeightList::npos);
            CHECK(dual_weight(t, 2, d).coeffs == w);
        }
    }
    // the fixed sets are closed under duality
    for (const auto& s : automorphism_grid()) {
        const auto t = TwistedAffineType::of_untwisted(s.type);
        const auto fixed = fixed_weights(s.type, s, 2);
        for (const auto& w : fixed.weights) CHECK(fixed.find(dual_weight(t, 2, {s.type, w}).coeffs) != WeightList::npos);
    }
}

TEST_CASE("automorphisms") {
    const FiniteType a4{Series::A, 4}, d4{Series::D, 4}, e6{Series::E, 6};
    CHECK(standard_automorphism(a4, 2).perm == std::vector<int>{3, 2, 1, 0});
    CHECK(standard_automorphism(e6, 2).perm == std::vector<int>{4, 3, 2, 1, 0, 5});
    const auto tri = standard_automorphism(d4, 3);
    CHECK(power(tri, 3).trivial());
    CHECK(power(tri, 2).perm == std::vector<int>{3, 1, 0, 2});
    CHECK(power(tri, -1).perm == power(tri, 2).perm);
    CHECK(twisted_type_of(power(tri, 2)).name() == "D4~3");
    CHECK(twisted_type_of(standard_automorphism({Series::D, 5}, 2)).name() == "D5~2");
    CHECK(twisted_type_of(standard_automorphism({Series::A, 5}, 2)).name() == "A5~2");
    CHECK_THROWS_AS(standard_automorphism({Series::B, 3}, 2), InvalidArgument);
    CHECK_THROWS_AS(standard_automorphism({Series::D, 5}, 3), InvalidArgument);
    DiagramAutomorphism bad = standard_automorphism(a4, 2);
    bad.perm = {1, 0, 2, 3};
    CHECK_THROWS_AS(validate(bad), InvalidArgument);
}

TEST_CASE("B labelling of A2n~2 weights") {
    CHECK(a2n_b_labelling(1, 1, {0}) == Coeffs{1});
    CHECK(a2n_b_labelling(2, 1, {0, 0}) == Coeffs{0, 1});
    CHECK(a2n_b_labelling(3, 4, {1, 0, 1}) == Coeffs{0, 1, 0});
    CHECK_THROWS_AS(a2n_b_labelling(2, 1, {1, 0}), InvalidArgument);
}

TEST_CASE("weight list JSON") {
    const auto w = enumerate_twisted_level_weights(parse_affine_type("D4~3"), 2);
    CHECK(to_json(w).dump() == R"({"type":"D4~3","coordinates":"G2","level":2,"weights":[[0,0],[0,1]]})");
    CHECK_THROWS_AS(w.index_of({1, 1}), InvalidArgument);
}
