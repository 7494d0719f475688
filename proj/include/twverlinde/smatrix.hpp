#pragma once

#include "twverlinde/twisted_weights.hpp"

#include "json.hpp"

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace twv {

using Complex = std::complex<double>;

struct SMatrixMeta {
    std::string formula;  // "untwisted", "twisted-direct", "twisted-transpose", "crossed"
    std::string type;     // type label, e.g. "A3~2"; crossed tables use "A3/2"
    int level = 0;
    double normalization = 0.0;  // N in S = i^p N^-1 sum ...
    bool normalized = true;
};

struct SMatrixTable {
    WeightList rows;
    WeightList cols;
    std::vector<Complex> entries;  // row-major
    SMatrixMeta meta;

    size_t nrows() const { return rows.size(); }
    size_t ncols() const { return cols.size(); }
    Complex& operator()(size_t i, size_t j) { return entries[i * ncols() + j]; }
    const Complex& operator()(size_t i, size_t j) const { return entries[i * ncols() + j]; }
};

struct ComputeOptions {
    int workers = 1;
    int weyl_cap = kDefaultWeylCap;
    double unitarity_fail = 1e-6;  // constructors throw NotUnitary above this
    double phase_tol = 1e-8;
};

SMatrixTable untwisted_smatrix(const FiniteType& g, int level, const ComputeOptions& opt = {});
// only the requested rows of the untwisted S-matrix, all columns of P_l(g)
SMatrixTable untwisted_smatrix_rows(const FiniteType& g, int level, const std::vector<Coeffs>& rows,
                                    const ComputeOptions& opt = {});
// S_{0,mu} for every mu in P_l(g), from the Weyl denominator product (no Weyl group needed)
std::vector<double> vacuum_row(const FiniteType& g, int level);

SMatrixTable twisted_km_smatrix(const TwistedAffineType& t, int level, const ComputeOptions& opt = {});
SMatrixTable twisted_km_smatrix_via_transpose(const TwistedAffineType& t, int level,
                                              const ComputeOptions& opt = {});
SMatrixTable crossed_smatrix(const FiniteType& g, const DiagramAutomorphism& s, int level,
                             const ComputeOptions& opt = {});

// +-1 making conj(S_{lambda,0}) real positive; throws AmbiguousPhase
int row_phase(const SMatrixTable& twisted, size_t row, double tol = 1e-8);
// Weyl denominator sign at the torus element of lambda for A_{2n}^(2)
int a2n_denominator_sign(int n, int level, const Coeffs& lambda);

// |nu(Q^vee)/Q|^{1/2}, the index factor in front of the twisted formulas
double index_factor(const TwistedAffineType& t);
// transpose type A^t and its level shift l -> l + h^vee - h^vee(A^t)
FiniteType transpose_type(const TwistedAffineType& t);
// tau-ring(lambda) = tau(lambda + rho) - rho^t
Coeffs tau_ring(const TwistedAffineType& t, const Coeffs& lambda);

double unitarity_error(const SMatrixTable& s);  // max |S S^dagger - I|
double symmetry_error(const SMatrixTable& s);   // max |S - S^T|
// max entrywise difference after fixing each row's phase by 0-column positivity
double phase_fixed_distance(const SMatrixTable& a, const SMatrixTable& b, double tol = 1e-8);

nlohmann::ordered_json to_json(const SMatrixTable& s);
SMatrixTable smatrix_from_json(const nlohmann::ordered_json& j);
std::string to_csv(const SMatrixTable& s);
std::string format_double(double x);  // shortest round-trip

std::uint64_t content_hash(const std::string& s);

// content-addressed store of serialized tables; writes are atomic (temp file + rename)
class SMatrixCache {
public:
    explicit SMatrixCache(std::filesystem::path root);
    static std::filesystem::path default_root();  // $TWV_CACHE_DIR, else ~/.cache/twverlinde
    static std::string key(const std::string& formula, const std::string& type, int level);

    std::filesystem::path path_for(const std::string& key) const;
    std::optional<SMatrixTable> load(const std::string& key) const;
    void store(const std::string& key, const SMatrixTable& s) const;
    const std::filesystem::path& root() const { return root_; }

private:
    std::filesystem::path root_;
};

}  // namespace twv
