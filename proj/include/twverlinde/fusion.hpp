#pragma once

#include "twverlinde/smatrix.hpp"

#include <string>
#include <vector>

namespace twv {

struct FusionTable {
    WeightList basis;
    std::string ring;  // "untwisted" or "twisted"
    int order = 1;     // order of sigma; selects Z (1, 2) or Z[omega_3] (3) for rounding
    size_t dim = 0;
    std::vector<Complex> constants;  // N_{lambda mu}^nu at [(l * dim + m) * dim + n], rounded
    std::vector<Complex> raw;        // same before rounding
    double max_residual = 0.0;
    bool valid = true;               // every constant within tolerance of the lattice
    // character data: chars[t * dim + lambda] = S_{t,lambda}
    size_t n_chars = 0;
    std::vector<Complex> chars;

    const Complex& operator()(size_t l, size_t m, size_t n) const { return constants[(l * dim + m) * dim + n]; }
    Complex& operator()(size_t l, size_t m, size_t n) { return constants[(l * dim + m) * dim + n]; }
};

// nearest point of Z (order 1, 2) or Z[omega_3] (order 3)
Complex nearest_lattice_point(Complex c, int order);

// N_{lambda mu}^nu = sum_t S_{t,lambda} S_{t,mu} conj(S_{t,nu}) / S_{t,0}; basis = columns of S
FusionTable fusion_from_characters(const SMatrixTable& s, const std::string& ring, int order, double tol = 1e-6);

FusionTable untwisted_fusion(const FiniteType& g, int level, const ComputeOptions& opt = {});
FusionTable twisted_fusion(const FiniteType& g, const DiagramAutomorphism& sigma, int level,
                           const ComputeOptions& opt = {});

struct FrobeniusReport {
    bool ok = true;
    std::vector<std::string> violations;
};

FrobeniusReport verify_frobenius(const FusionTable& t, double tol = 1e-6, size_t assoc_limit = 12);

nlohmann::ordered_json to_json(const FusionTable& t);

}  // namespace twv
