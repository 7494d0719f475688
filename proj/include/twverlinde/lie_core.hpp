#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace twv {

using Rational = boost::rational<long long>;
using IntMatrix = std::vector<std::vector<int>>;
using RatMatrix = std::vector<std::vector<Rational>>;
// coefficients over the fundamental weights (or simple roots, where stated)
using Coeffs = std::vector<int>;

enum class Series { A, B, C, D, E, F, G };

struct FiniteType {
    Series series = Series::A;
    int rank = 1;

    std::string name() const;  // "A3", "E6", ...
    bool simply_laced() const;
    friend bool operator==(const FiniteType&, const FiniteType&) = default;
};

// throws InvalidArgument for an inadmissible (series, rank) pair
void validate(const FiniteType& t);
FiniteType make_type(Series s, int rank);
FiniteType parse_finite_type(const std::string& s);

struct Weight {
    FiniteType type;
    Coeffs coeffs;
    friend bool operator==(const Weight&, const Weight&) = default;
};

IntMatrix cartan_matrix(const FiniteType& t);

// exact inverse of an integer matrix
RatMatrix inverse(const IntMatrix& m);
Rational determinant(const RatMatrix& m);

// positive roots in simple-root coordinates, sorted by height; the last is the highest root
std::vector<Coeffs> positive_roots(const FiniteType& t);

// Coxeter labels a_i (highest root coefficients) and dual labels a_i^vee of X_N^(1),
// restricted to the finite vertices
struct Labels {
    std::vector<int> a;
    std::vector<int> av;
};
Labels untwisted_labels(const FiniteType& t);
int dual_coxeter_number(const FiniteType& t);

struct GramData {
    FiniteType type;
    std::vector<int> a;
    std::vector<int> av;
    RatMatrix gram_roots;    // kappa(alpha_i, alpha_j)
    RatMatrix gram_weights;  // kappa(omega_i, omega_j)
};

// kappa(alpha_i, alpha_j) = a_ij a_i^vee / a_i, then conjugated by the inverse Cartan matrix
GramData gram_from_labels(const FiniteType& t, const std::vector<int>& a, const std::vector<int>& av);
GramData untwisted_gram(const FiniteType& t);

struct WeylElement {
    int rank = 0;
    std::vector<int> matrix;  // row-major, acts on fundamental-weight coordinates
    int sign = 1;

    int at(int i, int j) const { return matrix[static_cast<size_t>(i * rank + j)]; }
    Coeffs apply(const Coeffs& v) const;
};

inline constexpr int kDefaultWeylCap = 6;

// breadth-first closure from the simple reflections; throws GroupTooLarge above the cap
std::vector<WeylElement> weyl_group(const FiniteType& t, int cap = kDefaultWeylCap);
// shared, memoized copy of weyl_group(t) at the default cap
const std::vector<WeylElement>& cached_weyl_group(const FiniteType& t);
std::uint64_t weyl_group_order(const FiniteType& t);

Weight weyl_vector(const FiniteType& t);

Rational pairing(const GramData& g, const Weight& lambda, const Weight& mu);
Rational pairing(const RatMatrix& gram, const std::vector<Rational>& x, const std::vector<Rational>& y);

// vertex permutation induced by -w_0 (identity unless A_n, D_odd, E6)
std::vector<int> dual_permutation(const FiniteType& t);
Weight longest_element_dual(const FiniteType& t, const Weight& lambda);

}  // namespace twv
