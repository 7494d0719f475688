#include "twverlinde/fusion.hpp"

#include "twverlinde/errors.hpp"

#include <cmath>

namespace twv {

namespace {

const Complex kOmega3(-0.5, 0.86602540378443864676);

std::string triple(const WeightList& b, size_t l, size_t m, size_t n) {
    auto w = [&](size_t i) {
        std::string s = "(";
        for (size_t k = 0; k < b.weights[i].size(); ++k) s += (k ? "," : "") + std::to_string(b.weights[i][k]);
        return s + ")";
    };
    return w(l) + " x " + w(m) + " -> " + w(n);
}

}  // namespace

Complex nearest_lattice_point(Complex c, int order) {
    if (order != 3) return {std::round(c.real()), 0.0};
    // c = a + b omega
    const double b = c.imag() / kOmega3.imag();
    const double a = c.real() + b / 2;
    Complex best;
    double best_d = INFINITY;
    for (double aa : {std::floor(a), std::ceil(a)})
        for (double bb : {std::floor(b), std::ceil(b)}) {
            const Complex p = aa + bb * kOmega3;
            const double d = std::abs(c - p);
            if (d < best_d) {
                best_d = d;
                best = p;
            }
        }
    return best;
}

FusionTable fusion_from_characters(const SMatrixTable& s, const std::string& ring, int order, double tol) {
    FusionTable f;
    f.basis = s.cols;
    f.ring = ring;
    f.order = order;
    f.dim = s.ncols();
    f.n_chars = s.nrows();
    f.chars = s.entries;
    const size_t zero = s.cols.find(Coeffs(s.cols.type.rank, 0));
    if (zero != 0) throw InvalidArgument("fusion basis must start with the zero weight");
    std::vector<Complex> inv0(f.n_chars);
    for (size_t t = 0; t < f.n_chars; ++t) {
        if (std::abs(s(t, 0)) < tol) throw Error("0-column entry of the character table vanishes");
        inv0[t] = 1.0 / s(t, 0);
    }
    const size_t d = f.dim;
    f.raw.resize(d * d * d);
    f.constants.resize(d * d * d);
    for (size_t l = 0; l < d; ++l)
        for (size_t m = 0; m < d; ++m)
            for (size_t n = 0; n < d; ++n) {
                Complex acc = 0;
                for (size_t t = 0; t < f.n_chars; ++t) acc += s(t, l) * s(t, m) * std::conj(s(t, n)) * inv0[t];
                const size_t idx = (l * d + m) * d + n;
                f.raw[idx] = acc;
                f.constants[idx] = nearest_lattice_point(acc, order);
                const double r = std::abs(acc - f.constants[idx]);
                f.max_residual = std::max(f.max_residual, r);
                if (!(r < tol)) f.valid = false;
                if (ring == "untwisted" && f.constants[idx].real() < 0) f.valid = false;
            }
    return f;
}

FusionTable untwisted_fusion(const FiniteType& g, int level, const ComputeOptions& opt) {
    return fusion_from_characters(untwisted_smatrix(g, level, opt), "untwisted", 1);
}

FusionTable twisted_fusion(const FiniteType& g, const DiagramAutomorphism& sigma, int level, const ComputeOptions& opt) {
    return fusion_from_characters(crossed_smatrix(g, sigma, level, opt), "twisted", sigma.order);
}

FrobeniusReport verify_frobenius(const FusionTable& t, double tol, size_t assoc_limit) {
    FrobeniusReport rep;
    auto fail = [&](const std::string& s) {
        rep.ok = false;
        if (rep.violations.size() < 50) rep.violations.push_back(s);
    };
    const size_t d = t.dim;
    for (size_t m = 0; m < d; ++m)
        for (size_t n = 0; n < d; ++n)
            if (std::abs(t(0, m, n) - Complex(m == n ? 1.0 : 0.0)) > tol) fail("unit: " + triple(t.basis, 0, m, n));
    for (size_t l = 0; l < d; ++l)
        for (size_t m = 0; m < d; ++m)
            for (size_t n = 0; n < d; ++n)
                if (std::abs(t(l, m, n) - t(m, l, n)) > tol) fail("commutativity: " + triple(t.basis, l, m, n));
    const size_t lim = std::min(d, assoc_limit);
    for (size_t a = 0; a < lim; ++a)
        for (size_t b = 0; b < lim; ++b)
            for (size_t c = 0; c < lim; ++c)
                for (size_t p = 0; p < d; ++p) {
                    Complex left = 0, right = 0;
                    for (size_t n = 0; n < d; ++n) {
                        left += t(a, b, n) * t(n, c, p);
                        right += t(b, c, n) * t(a, n, p);
                    }
                    if (std::abs(left - right) > tol) fail("associativity: (" + triple(t.basis, a, b, p) + ") with " +
                                                           std::to_string(c));
                }
    // sum_lambda chi_t(lambda) conj(chi_t'(lambda)) = delta f_t, f_t = 1 / |S_{t,0}|^2
    for (size_t x = 0; x < t.n_chars; ++x)
        for (size_t y = 0; y < t.n_chars; ++y) {
            Complex acc = 0;
            const Complex sx0 = t.chars[x * d], sy0 = t.chars[y * d];
            for (size_t l = 0; l < d; ++l) acc += (t.chars[x * d + l] / sx0) * std::conj(t.chars[y * d + l] / sy0);
            const double f = x == y ? 1.0 / std::norm(sx0) : 0.0;
            if (std::abs(acc - f) > tol * std::max(1.0, f))
                fail("orthogonality: characters " + std::to_string(x) + ", " + std::to_string(y));
        }
    if (!t.valid) fail("constants off the lattice (max residual " + std::to_string(t.max_residual) + ")");
    return rep;
}

nlohmann::ordered_json to_json(const FusionTable& t) {
    nlohmann::ordered_json j;
    j["ring"] = t.ring;
    j["order"] = t.order;
    j["basis"] = to_json(t.basis);
    j["max_residual"] = t.max_residual;
    j["valid"] = t.valid;
    auto c = nlohmann::ordered_json::array();
    for (size_t l = 0; l < t.dim; ++l)
        for (size_t m = 0; m < t.dim; ++m)
            for (size_t n = 0; n < t.dim; ++n) {
                const Complex v = t(l, m, n);
                if (v == Complex(0)) continue;
                nlohmann::ordered_json e;
                e["lambda"] = l;
                e["mu"] = m;
                e["nu"] = n;
                if (t.order == 3) {
                    // a + b omega
                    const double b = v.imag() / kOmega3.imag();
                    e["value"] = nlohmann::ordered_json::array({std::llround(v.real() + b / 2), std::llround(b)});
                } else {
                    e["value"] = std::llround(v.real());
                }
                c.push_back(e);
            }
    j["constants"] = c;
    return j;
}

}  // namespace twv
