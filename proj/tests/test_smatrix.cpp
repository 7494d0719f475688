#include "doctest.h"

#include "twverlinde/errors.hpp"
#include "twverlinde/smatrix.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <unistd.h>

using namespace twv;

namespace {

constexpr double kTol = 1e-8;

double max_diff(const SMatrixTable& s, const std::vector<std::vector<double>>& expected) {
    double d = 0;
    for (size_t i = 0; i < s.nrows(); ++i)
        for (size_t j = 0; j < s.ncols(); ++j) d = std::max(d, std::abs(s(i, j) - Complex(expected[i][j])));
    return d;
}

std::vector<DiagramAutomorphism> automorphisms() {
    std::vector<DiagramAutomorphism> out;
    for (int r = 2; r <= 7; ++r) out.push_back(standard_automorphism({Series::A, r}, 2));
    for (int r = 4; r <= 6; ++r) out.push_back(standard_automorphism({Series::D, r}, 2));
    out.push_back(standard_automorphism({Series::E, 6}, 2));
    out.push_back(standard_automorphism({Series::D, 4}, 3));
    return out;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() / ("twv_test_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("A1 agrees with the closed sine formula") {
    const FiniteType a1{Series::A, 1};
    for (int l = 1; l <= 8; ++l) {
        const auto s = untwisted_smatrix(a1, l);
        const double k = l + 2;
        for (int a = 0; a <= l; ++a)
            for (int b = 0; b <= l; ++b)
                CHECK(std::abs(s(a, b) - Complex(std::sqrt(2 / k) * std::sin(M_PI * (a + 1) * (b + 1) / k))) < 1e-12);
    }
}

TEST_CASE("level-one vacuum rows") {
    for (int n = 1; n <= 6; ++n) {
        const auto s = untwisted_smatrix({Series::A, n}, 1);
        for (size_t j = 0; j < s.ncols(); ++j) CHECK(std::abs(std::abs(s(0, j)) - 1 / std::sqrt(n + 1.0)) < 1e-12);
    }
    CHECK(std::abs(untwisted_smatrix({Series::D, 5}, 1)(0, 0) - Complex(0.5)) < 1e-12);
    CHECK(std::abs(untwisted_smatrix({Series::E, 6}, 1)(0, 0) - Complex(1 / std::sqrt(3.0))) < 1e-12);
    CHECK(std::abs(untwisted_smatrix({Series::D, 4}, 2)(0, 0) - Complex(1 / (4 * std::sqrt(2.0)))) < 1e-12);
}

TEST_CASE("vacuum row from the product formula matches the Weyl sum") {
    for (const char* g : {"A2", "A4", "B3", "C3", "D4", "G2", "F4", "E6"}) {
        const auto t = parse_finite_type(g);
        for (int l = 1; l <= 2; ++l) {
            const auto s = untwisted_smatrix(t, l);
            const auto v = vacuum_row(t, l);
            REQUIRE(v.size() == s.ncols());
            for (size_t j = 0; j < v.size(); ++j) CHECK_MESSAGE(std::abs(s(0, j) - Complex(v[j])) < 1e-12, g);
        }
    }
    // no Weyl group is built for the vacuum row
    const auto v = vacuum_row({Series::A, 9}, 1);
    CHECK(v.size() == 10);
    CHECK(std::abs(v[0] - 1 / std::sqrt(10.0)) < 1e-12);
}

TEST_CASE("untwisted unitarity and symmetry") {
    for (const char* g : {"A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "G2"})
        for (int l = 1; l <= 4; ++l) {
            const auto s = untwisted_smatrix(parse_finite_type(g), l);
            CHECK_MESSAGE(unitarity_error(s) < kTol, g << " level " << l);
            CHECK_MESSAGE(symmetry_error(s) < kTol, g << " level " << l);
        }
    for (const char* g : {"F4", "E6", "D5"})
        for (int l = 1; l <= 2; ++l) CHECK(unitarity_error(untwisted_smatrix(parse_finite_type(g), l)) < kTol);
}

TEST_CASE("twisted unitarity, A2n~2 symmetry") {
    for (const char* t : {"A2~2", "A4~2", "A6~2", "A3~2", "A5~2", "A7~2", "D3~2", "D4~2", "D5~2", "D4~3"})
        for (int l = 1; l <= 4; ++l) {
            const auto tt = parse_affine_type(t);
            const auto s = twisted_km_smatrix(tt, l);
            CHECK_MESSAGE(unitarity_error(s) < kTol, t << " level " << l);
            if (tt.kind == AffineKind::A2n_2) CHECK_MESSAGE(symmetry_error(s) < kTol, t << " level " << l);
        }
    for (int l = 1; l <= 2; ++l) CHECK(unitarity_error(twisted_km_smatrix(parse_affine_type("E6~2"), l)) < kTol);
}

TEST_CASE("crossed matrices are unitary with a positive zero column") {
    for (const auto& s : automorphisms())
        for (int l = 1; l <= 3; ++l) {
            const auto x = crossed_smatrix(s.type, s, l);
            CHECK_MESSAGE(unitarity_error(x) < kTol, s.type.name() << " level " << l);
            for (size_t i = 0; i < x.nrows(); ++i) {
                CHECK(x(i, 0).real() > 0);
                CHECK(std::abs(x(i, 0).imag()) < kTol);
            }
        }
}

TEST_CASE("crossed examples") {
    const double h = std::sqrt(2.0) / 2;
    for (int r = 2; r <= 5; ++r) {
        const FiniteType a{Series::A, 2 * r - 1};
        const auto x = crossed_smatrix(a, standard_automorphism(a, 2), 1);
        REQUIRE(x.nrows() == 2);
        CHECK(max_diff(x, {{h, h}, {h, -h}}) < 1e-9);
    }
    const FiniteType d4{Series::D, 4};
    const double t = std::sqrt(3.0) / std::sqrt(6.0);
    const auto x = crossed_smatrix(d4, standard_automorphism(d4, 3), 2);
    REQUIRE(x.nrows() == 2);
    CHECK(max_diff(x, {{t, t}, {t, -t}}) < 1e-9);
    CHECK(x.meta.type == "D4/3");
    CHECK(max_diff(crossed_smatrix(d4, standard_automorphism(d4, 3), 1), {{1.0}}) < 1e-12);
}

TEST_CASE("direct and transpose routes agree") {
    for (const char* t : {"A3~2", "A5~2", "A7~2", "D3~2", "D4~2", "D5~2", "D4~3"})
        for (int l = 1; l <= 3; ++l) {
            const auto tt = parse_affine_type(t);
            const auto d = twisted_km_smatrix(tt, l);
            const auto v = twisted_km_smatrix_via_transpose(tt, l);
            CHECK(v.meta.formula == "twisted-transpose");
            CHECK(d.rows.weights == v.rows.weights);
            CHECK(d.cols.weights == v.cols.weights);
            CHECK_MESSAGE(phase_fixed_distance(d, v) < kTol, t << " level " << l);
        }
    const auto e6 = parse_affine_type("E6~2");
    CHECK(phase_fixed_distance(twisted_km_smatrix(e6, 1), twisted_km_smatrix_via_transpose(e6, 1)) < kTol);
    CHECK_THROWS_AS(twisted_km_smatrix_via_transpose(parse_affine_type("A4~2"), 1), InvalidArgument);
}

TEST_CASE("transpose data") {
    CHECK(transpose_type(parse_affine_type("A5~2")).name() == "B3");
    CHECK(transpose_type(parse_affine_type("D5~2")).name() == "C4");
    CHECK(transpose_type(parse_affine_type("E6~2")).name() == "F4");
    CHECK(transpose_type(parse_affine_type("D4~3")).name() == "G2");
    CHECK(tau_ring(parse_affine_type("A3~2"), {0, 0}) == Coeffs{0, 1});
    CHECK(tau_ring(parse_affine_type("A7~2"), {0, 0, 0, 0}) == Coeffs{0, 0, 0, 1});
    CHECK(tau_ring(parse_affine_type("D4~3"), {0, 0}) == Coeffs{0, 2});
    CHECK(tau_ring(parse_affine_type("E6~2"), {0, 0, 0, 0}) == Coeffs{0, 0, 1, 1});
    CHECK(tau_ring(parse_affine_type("D5~2"), {0, 0, 0, 0}) == Coeffs{1, 1, 1, 0});
    CHECK(std::abs(index_factor(parse_affine_type("D4~3")) - std::sqrt(3.0)) < 1e-15);
    CHECK(std::abs(index_factor(parse_affine_type("A3~2")) - std::sqrt(2.0)) < 1e-15);
    CHECK(index_factor(parse_affine_type("A4~2")) == 2.0);
}

TEST_CASE("A2n~2 denominator sign equals the row phase") {
    for (int n = 1; n <= 3; ++n)
        for (int l = 1; l <= 4; ++l) {
            const auto s = twisted_km_smatrix(TwistedAffineType::make(AffineKind::A2n_2, n), l);
            for (size_t i = 0; i < s.nrows(); ++i)
                CHECK_MESSAGE(a2n_denominator_sign(n, l, s.rows.weights[i]) == row_phase(s, i), "n " << n << " level " << l);
        }
}

TEST_CASE("ambiguous phase is reported") {
    auto s = twisted_km_smatrix(parse_affine_type("A3~2"), 1);
    s(1, 0) = Complex(0, 0.7);
    CHECK_THROWS_AS(row_phase(s, 1), AmbiguousPhase);
    s(1, 0) = Complex(0, 0);
    CHECK_THROWS_AS(row_phase(s, 1), AmbiguousPhase);
    CHECK(row_phase(s, 0) == 1);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(untwisted_smatrix({Series::A, 7}, 1), GroupTooLarge);
    ComputeOptions opt;
    opt.weyl_cap = 2;
    CHECK_THROWS_AS(untwisted_smatrix({Series::B, 3}, 1, opt), GroupTooLarge);
    // a zero tolerance turns every rounding error into a failure
    opt = {};
    opt.unitarity_fail = 0;
    CHECK_THROWS_AS(untwisted_smatrix({Series::A, 2}, 2, opt), NotUnitary);
    CHECK_THROWS_AS(untwisted_smatrix({Series::A, 2}, 0), InvalidArgument);
    CHECK_THROWS_AS(twisted_km_smatrix(parse_affine_type("A3"), 1), InvalidArgument);
    const FiniteType a3{Series::A, 3};
    CHECK_THROWS_AS(crossed_smatrix(a3, identity_automorphism(a3), 1), InvalidArgument);
    CHECK_THROWS_AS(untwisted_smatrix_rows(a3, 1, {{1, 1, 0}}), InvalidArgument);
}

TEST_CASE("deterministic output, also with worker threads") {
    const FiniteType c3{Series::C, 3};
    ComputeOptions four;
    four.workers = 4;
    const auto a = to_json(untwisted_smatrix(c3, 3)).dump();
    const auto b = to_json(untwisted_smatrix(c3, 3)).dump();
    const auto c = to_json(untwisted_smatrix(c3, 3, four)).dump();
    CHECK(a == b);
    CHECK(a == c);
    const auto e6 = parse_affine_type("E6~2");
    CHECK(to_json(twisted_km_smatrix(e6, 2)).dump() == to_json(twisted_km_smatrix(e6, 2, four)).dump());
}

TEST_CASE("float formatting") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-0.0) == "0");
    CHECK(format_double(0.1) == "0.1");
    CHECK(std::stod(format_double(M_PI)) == M_PI);
}

TEST_CASE("JSON round trip") {
    const FiniteType d4{Series::D, 4};
    const auto x = crossed_smatrix(d4, standard_automorphism(d4, 3), 2);
    const auto j = to_json(x);
    CHECK(j["formula"] == "crossed");
    CHECK(j["row_type"] == "D4~3");
    CHECK(j["col_coordinates"] == "D4");
    const auto y = smatrix_from_json(j);
    CHECK(y.entries == x.entries);
    CHECK(y.rows.weights == x.rows.weights);
    CHECK(to_json(y).dump() == j.dump());
    auto bad = j;
    bad["entries"].erase(0);
    CHECK_THROWS_AS(smatrix_from_json(bad), InvalidArgument);
    CHECK_THROWS_AS(smatrix_from_json(nlohmann::ordered_json::object()), InvalidArgument);
}

TEST_CASE("CSV layout") {
    const auto csv = to_csv(untwisted_smatrix({Series::A, 2}, 1));
    CHECK(csv.rfind("weight,0 0,0 1,1 0\n0 0,", 0) == 0);
    size_t lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == 4);
    CHECK(csv.find("j,") != std::string::npos);
}

TEST_CASE("content-addressed cache") {
    TempDir dir;
    SMatrixCache cache(dir.path);
    const auto key = SMatrixCache::key("twisted-direct", "D4~3", 3);
    CHECK(key == "smatrix-v1|twisted-direct|D4~3|3");
    CHECK_FALSE(cache.load(key).has_value());
    const auto s = twisted_km_smatrix(parse_affine_type("D4~3"), 3);
    cache.store(key, s);
    CHECK(std::filesystem::exists(cache.path_for(key)));
    // nothing but the final file is left behind
    size_t files = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir.path)) {
        ++files;
        CHECK(e.path().extension() == ".json");
    }
    CHECK(files == 1);
    const auto hit = cache.load(key);
    REQUIRE(hit.has_value());
    CHECK(to_json(*hit).dump() == to_json(s).dump());
    CHECK_FALSE(cache.load(SMatrixCache::key("twisted-direct", "D4~3", 2)).has_value());
    // a truncated entry is treated as a miss
    {
        std::ofstream out(cache.path_for(key));
        out << "{\"key\":";
    }
    CHECK_FALSE(cache.load(key).has_value());
    CHECK(content_hash("") == 14695981039346656037ull);
    CHECK(content_hash("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("cache root from the environment") {
    ::setenv("TWV_CACHE_DIR", "/tmp/twv-env-root", 1);
    CHECK(SMatrixCache::default_root() == std::filesystem::path("/tmp/twv-env-root"));
    ::unsetenv("TWV_CACHE_DIR");
    ::setenv("XDG_CACHE_HOME", "/tmp/xdg", 1);
    CHECK(SMatrixCache::default_root() == std::filesystem::path("/tmp/xdg/twverlinde"));
    ::unsetenv("XDG_CACHE_HOME");
}
