#pragma once

#include "twverlinde/lie_core.hpp"

#include "json.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace twv {

enum class AffineKind { Untwisted, A2n_2, A2nm1_2, Dnp1_2, E6_2, D4_3 };

struct TwistedAffineType {
    AffineKind kind = AffineKind::Untwisted;
    int n = 0;                // family parameter for A2n_2, A2nm1_2, Dnp1_2
    FiniteType untwisted{};   // meaningful for AffineKind::Untwisted only

    static TwistedAffineType of_untwisted(const FiniteType& g);
    static TwistedAffineType make(AffineKind kind, int n = 0);

    bool is_twisted() const { return kind != AffineKind::Untwisted; }
    int order() const;                // m in X_N^(m)
    std::string name() const;         // "A3~2", "D4~3", "B3"
    FiniteType horizontal() const;    // type of the horizontal subalgebra
    FiniteType ambient() const;       // X_N
    Labels labels() const;            // a_i, a_i^vee on horizontal vertices (Kac numbering)
    int a0() const;
    int dual_coxeter_number() const;  // h^vee
    int coxeter_number() const;       // h
    friend bool operator==(const TwistedAffineType&, const TwistedAffineType&) = default;
};

// "A3~2", "A4~2", "D5~2", "E6~2", "D4~3"; plain "B3" gives the untwisted type
TwistedAffineType parse_affine_type(const std::string& s);
void validate(const TwistedAffineType& t);

GramData gram_data(const TwistedAffineType& t);

// the twisted type whose level set indexes the columns of the twisted S-matrix
TwistedAffineType paired_type(const TwistedAffineType& t);

struct DiagramAutomorphism {
    FiniteType type;
    int order = 1;
    std::vector<int> perm;  // vertex i goes to perm[i] (0-based)

    bool trivial() const { return order == 1; }
};

DiagramAutomorphism identity_automorphism(const FiniteType& g);
// the flip of A_N, D_N, E6 (order 2) or the triality of D4 (order 3)
DiagramAutomorphism standard_automorphism(const FiniteType& g, int order);
void validate(const DiagramAutomorphism& s);
DiagramAutomorphism power(const DiagramAutomorphism& s, int k);

// X_N^(m) determined by the class of sigma; untwisted when sigma is trivial
TwistedAffineType twisted_type_of(const DiagramAutomorphism& s);
// one vertex per sigma-orbit, in the order of the orbit Lie algebra's Kac numbering
std::vector<int> orbit_representatives(const DiagramAutomorphism& s);
// finite type carrying iota's image
FiniteType orbit_type(const DiagramAutomorphism& s);

struct WeightList {
    std::string label;  // type string of the set, e.g. "A3~2" or "A3"
    FiniteType type;    // finite type whose coordinates are used
    int level = 0;
    std::vector<Coeffs> weights;

    size_t size() const { return weights.size(); }
    static constexpr size_t npos = static_cast<size_t>(-1);
    size_t find(const Coeffs& c) const;
    size_t index_of(const Coeffs& c) const;  // throws InvalidArgument when absent
};

// all dominant b with sum_i a_i^vee b_i <= level, lexicographic, zero first
WeightList enumerate_twisted_level_weights(const TwistedAffineType& t, int level);
WeightList enumerate_untwisted_level_weights(const FiniteType& g, int level);
// independent route: brute force over a box with kappa(lambda, theta) <= level,
// theta = sum_{i>0} a_i alpha_i built from the root data
WeightList level_weights_by_theta(const TwistedAffineType& t, int level);

WeightList fixed_weights(const FiniteType& g, const DiagramAutomorphism& s, int level);

Weight iota(const DiagramAutomorphism& s, const Weight& mu);

// lambda^* in the level set of t (identity on twisted families)
Weight dual_weight(const TwistedAffineType& t, int level, const Weight& lambda);

// read-only B_n labelling of an A_{2n}^(2) weight given in C_n coordinates
Coeffs a2n_b_labelling(int n, int level, const Coeffs& c);

nlohmann::ordered_json to_json(const WeightList& w);

}  // namespace twv
