#pragma once

#include "twverlinde/smatrix.hpp"

#include <string>
#include <vector>

namespace twv {

struct CoverSpec {
    FiniteType g;
    DiagramAutomorphism sigma;
    int N = 1;          // order of Gamma, a multiple of sigma's order
    int level = 1;
    int genus = 0;
    std::vector<int> monodromies;
    std::vector<Coeffs> weights;  // twisted horizontal coordinates when sigma^m is nontrivial
    int holonomy = 1;   // d with Gamma^o = <d> in Z/N
};

// throws InvalidArgument naming the first violated condition
void validate(const CoverSpec& spec);

struct RankResult {
    Complex value;
    long long rank = 0;
    double residual = 0.0;
};

// raw sum of prod_i S^{m_i}_{lambda_i, mu} / S_{0,mu}^{n + 2g - 2} over Gamma^o-fixed mu
Complex verlinde_value(const CoverSpec& spec, const ComputeOptions& opt = {});
// rounds verlinde_value; throws NonIntegral when the residual reaches tol or the value is negative
RankResult rank(const CoverSpec& spec, const ComputeOptions& opt = {}, double tol = 1e-6);

struct IdentityReport {
    bool ok = true;
    std::string identity;
    long long lhs = 0;
    long long rhs = 0;
    std::string detail;
};

// rank(g, n) = sum_mu rank(g - 1, n + 2) with edge monodromies (k, -k) and weights (mu, mu*)
IdentityReport verify_factorization(const CoverSpec& spec, int edge_class, const ComputeOptions& opt = {});
// points in part_a (with genus_a) on one side of a separating node, the rest on the other
IdentityReport verify_factorization_separating(const CoverSpec& spec, const std::vector<size_t>& part_a, int genus_a,
                                               const ComputeOptions& opt = {});
// adding an unramified vacuum point leaves the rank unchanged
IdentityReport verify_propagation(const CoverSpec& spec, const ComputeOptions& opt = {});

CoverSpec cover_spec_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const CoverSpec& spec);
nlohmann::ordered_json to_json(const RankResult& r);

}  // namespace twv
