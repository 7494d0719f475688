#include "twverlinde/smatrix.hpp"

#include "twverlinde/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace twv {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Complex pairwise_sum(const Complex* p, size_t n) {
    if (n <= 8) {
        Complex s = 0;
        for (size_t i = 0; i < n; ++i) s += p[i];
        return s;
    }
    const size_t h = n / 2;
    return pairwise_sum(p, h) + pairwise_sum(p + h, n - h);
}

Complex i_power(int p) {
    switch (((p % 4) + 4) % 4) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

double to_double(const Rational& r) { return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()); }

// exp(-2 pi i kappa(w x, y) / k) with kappa(w x, y) = (w x) . Z / D exactly
struct Column {
    long long D = 1;
    std::vector<long long> Z;
    std::vector<Complex> table;
};

Column make_column(const RatMatrix& gw, const std::vector<Rational>& y, int k) {
    const size_t n = y.size();
    std::vector<Rational> z(n, Rational(0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) z[i] += gw[i][j] * y[j];
        z[i] /= k;
    }
    Column c;
    for (const auto& q : z) c.D = std::lcm(c.D, q.denominator());
    for (const auto& q : z) c.Z.push_back(q.numerator() * (c.D / q.denominator()));
    c.table.resize(static_cast<size_t>(c.D));
    for (long long j = 0; j < c.D; ++j) {
        // reduce to [-D/2, D/2] before the transcendental call
        long long m = j <= c.D / 2 ? j : j - c.D;
        const double ang = -kTwoPi * static_cast<double>(m) / static_cast<double>(c.D);
        c.table[static_cast<size_t>(j)] = Complex(std::cos(ang), std::sin(ang));
    }
    return c;
}

const std::vector<WeylElement>& group_for(const FiniteType& h, const ComputeOptions& opt,
                                          std::vector<WeylElement>& storage) {
    if (h.rank > opt.weyl_cap)
        throw GroupTooLarge("Weyl group of " + h.name() + " is too large (rank " + std::to_string(h.rank) +
                            " above cap " + std::to_string(opt.weyl_cap) + ")");
    if (h.rank <= kDefaultWeylCap) return cached_weyl_group(h);
    storage = weyl_group(h, opt.weyl_cap);
    return storage;
}

// raw[r][c] = sum_w eps(w) exp(-2 pi i kappa(w xs[r], ys[c]) / k)
std::vector<Complex> weyl_sum_matrix(const FiniteType& h, const RatMatrix& gw, int k,
                                     const std::vector<Coeffs>& xs,
                                     const std::vector<std::vector<Rational>>& ys,
                                     const ComputeOptions& opt) {
    std::vector<WeylElement> storage;
    const auto& W = group_for(h, opt, storage);
    const int r = h.rank;
    std::vector<Column> cols;
    cols.reserve(ys.size());
    for (const auto& y : ys) cols.push_back(make_column(gw, y, k));

    std::vector<Complex> out(xs.size() * ys.size());
    auto work = [&](size_t row) {
        std::vector<long long> wx(W.size() * static_cast<size_t>(r));
        for (size_t w = 0; w < W.size(); ++w) {
            const auto v = W[w].apply(xs[row]);
            std::copy(v.begin(), v.end(), wx.begin() + static_cast<long>(w * r));
        }
        std::vector<long long> counts;
        std::vector<Complex> terms;
        for (size_t c = 0; c < cols.size(); ++c) {
            const Column& col = cols[c];
            counts.assign(static_cast<size_t>(col.D), 0);
            for (size_t w = 0; w < W.size(); ++w) {
                long long num = 0;
                for (int i = 0; i < r; ++i) num += wx[w * r + i] * col.Z[i];
                long long res = num % col.D;
                if (res < 0) res += col.D;
                counts[static_cast<size_t>(res)] += W[w].sign;
            }
            terms.clear();
            for (size_t j = 0; j < counts.size(); ++j)
                if (counts[j] != 0) terms.push_back(static_cast<double>(counts[j]) * col.table[j]);
            out[row * ys.size() + c] = pairwise_sum(terms.data(), terms.size());
        }
    };
    const size_t nworkers = std::max<size_t>(1, std::min<size_t>(static_cast<size_t>(std::max(opt.workers, 1)), xs.size()));
    if (nworkers == 1) {
        for (size_t i = 0; i < xs.size(); ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        for (size_t t = 0; t < nworkers; ++t)
            pool.emplace_back([&, t] {
                for (size_t i = t; i < xs.size(); i += nworkers) work(i);
            });
        for (auto& th : pool) th.join();
    }
    return out;
}

std::vector<Rational> shifted(const Coeffs& c) {
    std::vector<Rational> v;
    for (int x : c) v.emplace_back(x + 1);
    return v;
}

Coeffs shifted_int(const Coeffs& c) {
    Coeffs v = c;
    for (auto& x : v) x += 1;
    return v;
}

long long ipow(long long b, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

// untwisted normalizer: N^2 = k^r det(gram_roots) / (prod a_i^vee / a_i)^2
double untwisted_normalizer(const GramData& gd, int k) {
    Rational d = 1;
    for (size_t i = 0; i < gd.a.size(); ++i) d *= Rational(gd.av[i], gd.a[i]);
    const Rational det = determinant(gd.gram_roots);
    return std::sqrt(static_cast<double>(ipow(k, gd.type.rank)) * to_double(det / (d * d)));
}

double twisted_normalizer(const TwistedAffineType& t, const GramData& gd, int k) {
    const Rational det = determinant(gd.gram_roots);
    return std::sqrt(static_cast<double>(ipow(k, gd.type.rank)) * to_double(det)) / index_factor(t);
}

// vertex map pi between column and row horizontal diagrams
std::vector<int> family_perm(const TwistedAffineType& t) {
    const int r = t.horizontal().rank;
    std::vector<int> p(r);
    std::iota(p.begin(), p.end(), 0);
    if (t.kind == AffineKind::D4_3 || t.kind == AffineKind::E6_2) std::reverse(p.begin(), p.end());
    return p;
}

void check_unitary(const SMatrixTable& s, const ComputeOptions& opt) {
    if (s.nrows() != s.ncols()) return;
    const double e = unitarity_error(s);
    if (!(e < opt.unitarity_fail))
        throw NotUnitary(s.meta.formula + " S-matrix of " + s.meta.type + " at level " + std::to_string(s.meta.level) +
                         " is not unitary (error " + std::to_string(e) + ")");
}

std::vector<Complex> phase_fixed(const SMatrixTable& s, double tol) {
    std::vector<Complex> out(s.entries.size());
    for (size_t i = 0; i < s.nrows(); ++i) {
        const int e = row_phase(s, i, tol);
        for (size_t j = 0; j < s.ncols(); ++j) out[i * s.ncols() + j] = static_cast<double>(e) * std::conj(s(i, j));
    }
    return out;
}

std::string weight_string(const Coeffs& c) {
    std::string s;
    for (size_t i = 0; i < c.size(); ++i) s += (i ? " " : "") + std::to_string(c[i]);
    return s;
}

double clean_zero(double x) { return x == 0.0 ? 0.0 : x; }

}  // namespace

double index_factor(const TwistedAffineType& t) {
    if (!t.is_twisted()) return 1.0;
    if (t.kind == AffineKind::A2n_2) return 2.0;
    const auto l = t.labels();
    Rational d = 1;
    for (size_t i = 0; i < l.a.size(); ++i) d *= Rational(l.av[i], l.a[i]);
    return std::sqrt(to_double(d));
}

FiniteType transpose_type(const TwistedAffineType& t) {
    switch (t.kind) {
        case AffineKind::A2nm1_2: return {Series::B, t.n};
        case AffineKind::Dnp1_2: return {Series::C, t.n};
        case AffineKind::E6_2: return {Series::F, 4};
        case AffineKind::D4_3: return {Series::G, 2};
        default: break;
    }
    throw InvalidArgument("no transpose route for " + t.name());
}

Coeffs tau_ring(const TwistedAffineType& t, const Coeffs& lambda) {
    transpose_type(t);
    const auto l = t.labels();
    const auto p = family_perm(t);
    Coeffs v(lambda.size(), 0);
    for (size_t j = 0; j < lambda.size(); ++j) {
        const long long num = static_cast<long long>(lambda[j] + 1) * l.av[j];
        if (num % l.a[j] != 0) throw InvalidArgument("tau does not map into the weight lattice");
        v[p[j]] = static_cast<int>(num / l.a[j]) - 1;
    }
    return v;
}

SMatrixTable untwisted_smatrix_rows(const FiniteType& g, int level, const std::vector<Coeffs>& rows,
                                    const ComputeOptions& opt) {
    if (level < 1) throw InvalidArgument("level must be positive");
    const GramData gd = untwisted_gram(g);
    const int k = level + dual_coxeter_number(g);
    SMatrixTable s;
    s.cols = enumerate_untwisted_level_weights(g, level);
    s.rows = s.cols;
    s.rows.weights = rows;
    for (const auto& r : rows) s.cols.index_of(r);
    std::vector<Coeffs> xs;
    for (const auto& r : rows) xs.push_back(shifted_int(r));
    std::vector<std::vector<Rational>> ys;
    for (const auto& c : s.cols.weights) ys.push_back(shifted(c));
    s.entries = weyl_sum_matrix(g, gd.gram_weights, k, xs, ys, opt);
    const double N = untwisted_normalizer(gd, k);
    const Complex pre = i_power(static_cast<int>(positive_roots(g).size())) / N;
    for (auto& e : s.entries) e *= pre;
    s.meta = SMatrixMeta{"untwisted", g.name(), level, N, true};
    return s;
}

SMatrixTable untwisted_smatrix(const FiniteType& g, int level, const ComputeOptions& opt) {
    const auto all = enumerate_untwisted_level_weights(g, level);
    SMatrixTable s = untwisted_smatrix_rows(g, level, all.weights, opt);
    check_unitary(s, opt);
    return s;
}

std::vector<double> vacuum_row(const FiniteType& g, int level) {
    const GramData gd = untwisted_gram(g);
    const int k = level + dual_coxeter_number(g);
    const auto roots = positive_roots(g);
    const auto P = enumerate_untwisted_level_weights(g, level);
    const double N = untwisted_normalizer(gd, k);
    std::vector<double> out;
    for (const auto& mu : P.weights) {
        // S_{mu,0} = 2^p / N * prod_{alpha>0} sin(pi kappa(alpha, mu + rho) / k)
        double log_abs = static_cast<double>(roots.size()) * std::log(2.0) - std::log(N);
        int sign = 1;
        for (const auto& a : roots) {
            Rational q = 0;
            for (int j = 0; j < g.rank; ++j) q += Rational(a[j] * (mu[j] + 1)) * gd.gram_roots[j][j] / 2;
            q /= k;
            const double s = std::sin(M_PI * to_double(q));
            if (s < 0) sign = -sign;
            log_abs += std::log(std::abs(s));
        }
        out.push_back(sign * std::exp(log_abs));
    }
    return out;
}

SMatrixTable twisted_km_smatrix(const TwistedAffineType& t, int level, const ComputeOptions& opt) {
    if (!t.is_twisted()) throw InvalidArgument("twisted_km_smatrix needs a twisted type, got " + t.name());
    if (level < 1) throw InvalidArgument("level must be positive");
    const GramData gd = gram_data(t);
    const FiniteType h = t.horizontal();
    const int k = level + t.dual_coxeter_number();
    SMatrixTable s;
    s.rows = enumerate_twisted_level_weights(t, level);
    s.cols = enumerate_twisted_level_weights(paired_type(t), level);
    std::vector<Coeffs> xs;
    for (const auto& r : s.rows.weights) xs.push_back(shifted_int(r));
    // column weight mu + rho' mapped into the row space by tau_kappa
    const auto l = t.labels();
    const auto p = family_perm(t);
    std::vector<std::vector<Rational>> ys;
    for (const auto& c : s.cols.weights) {
        std::vector<Rational> y(c.size(), Rational(0));
        for (size_t i = 0; i < c.size(); ++i) {
            if (t.kind == AffineKind::A2n_2) {
                y[i] = c[i] + 1;
            } else {
                const int j = p[i];
                y[j] = Rational(c[i] + 1) * Rational(l.a[j], l.av[j]);
            }
        }
        ys.push_back(y);
    }
    s.entries = weyl_sum_matrix(h, gd.gram_weights, k, xs, ys, opt);
    const double N = twisted_normalizer(t, gd, k);
    const Complex pre = i_power(static_cast<int>(positive_roots(h).size())) / N;
    for (auto& e : s.entries) e *= pre;
    s.meta = SMatrixMeta{"twisted-direct", t.name(), level, N, true};
    check_unitary(s, opt);
    return s;
}

SMatrixTable twisted_km_smatrix_via_transpose(const TwistedAffineType& t, int level, const ComputeOptions& opt) {
    const FiniteType at = transpose_type(t);
    if (level < 1) throw InvalidArgument("level must be positive");
    const int shifted_level = level + t.dual_coxeter_number() - dual_coxeter_number(at);
    SMatrixTable s;
    s.rows = enumerate_twisted_level_weights(t, level);
    s.cols = enumerate_twisted_level_weights(paired_type(t), level);
    std::vector<Coeffs> needed;
    for (const auto& r : s.rows.weights) needed.push_back(tau_ring(t, r));
    const SMatrixTable st = untwisted_smatrix_rows(at, shifted_level, needed, opt);
    const double c = index_factor(t);
    s.entries.resize(s.nrows() * s.ncols());
    for (size_t i = 0; i < s.nrows(); ++i)
        for (size_t j = 0; j < s.ncols(); ++j) s(i, j) = c * st(i, st.cols.index_of(s.cols.weights[j]));
    s.meta = SMatrixMeta{"twisted-transpose", t.name(), level, st.meta.normalization / c, true};
    check_unitary(s, opt);
    return s;
}

int row_phase(const SMatrixTable& twisted, size_t row, double tol) {
    const size_t zero = twisted.cols.find(Coeffs(twisted.cols.type.rank, 0));
    if (zero == WeightList::npos) throw InvalidArgument("row_phase: table has no zero column");
    const Complex v = std::conj(twisted(row, zero));
    if (!(std::abs(v.imag()) < tol) || !(std::abs(v.real()) > tol))
        throw AmbiguousPhase("ambiguous phase for row (" + weight_string(twisted.rows.weights[row]) + ") of " +
                             twisted.meta.type + " at level " + std::to_string(twisted.meta.level));
    return v.real() > 0 ? 1 : -1;
}

int a2n_denominator_sign(int n, int level, const Coeffs& lambda) {
    const auto t = TwistedAffineType::make(AffineKind::A2n_2, n);
    const GramData gd = gram_data(t);
    const int k = level + t.dual_coxeter_number();
    const FiniteType h = t.horizontal();
    int sign = 1;
    for (const auto& a : positive_roots(h)) {
        Rational q = 0;
        for (int j = 0; j < h.rank; ++j) q += Rational(a[j] * (lambda[j] + 1)) * gd.gram_roots[j][j] / 2;
        q /= k;
        // sign of sin(pi q) from q mod 2, exactly
        Rational f = q - Rational(2 * static_cast<long long>(std::floor(to_double(q) / 2)));
        while (f < Rational(0)) f += 2;
        while (f >= Rational(2)) f -= 2;
        if (f == Rational(0) || f == Rational(1)) throw AmbiguousPhase("Weyl denominator vanishes");
        if (f > Rational(1)) sign = -sign;
    }
    return sign;
}

SMatrixTable crossed_smatrix(const FiniteType& g, const DiagramAutomorphism& sigma, int level,
                             const ComputeOptions& opt) {
    if (!(sigma.type == g)) throw InvalidArgument("automorphism does not belong to " + g.name());
    validate(sigma);
    if (sigma.trivial()) throw InvalidArgument("crossed_smatrix needs a nontrivial automorphism");
    const TwistedAffineType t = twisted_type_of(sigma);
    const SMatrixTable tw = twisted_km_smatrix(t, level, opt);
    SMatrixTable s;
    s.rows = tw.rows;
    s.cols = fixed_weights(g, sigma, level);
    std::vector<size_t> col_map;
    for (const auto& mu : s.cols.weights) col_map.push_back(tw.cols.index_of(iota(sigma, Weight{g, mu}).coeffs));
    s.entries.resize(s.nrows() * s.ncols());
    for (size_t i = 0; i < s.nrows(); ++i) {
        const double e = row_phase(tw, i, opt.phase_tol);
        for (size_t j = 0; j < s.ncols(); ++j) s(i, j) = e * std::conj(tw(i, col_map[j]));
    }
    s.meta = SMatrixMeta{"crossed", g.name() + "/" + std::to_string(sigma.order), level, tw.meta.normalization, true};
    check_unitary(s, opt);
    return s;
}

double unitarity_error(const SMatrixTable& s) {
    double e = 0;
    const size_t n = s.nrows(), m = s.ncols();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Complex acc = 0;
            for (size_t c = 0; c < m; ++c) acc += s(i, c) * std::conj(s(j, c));
            e = std::max(e, std::abs(acc - Complex(i == j ? 1.0 : 0.0)));
        }
    return e;
}

double symmetry_error(const SMatrixTable& s) {
    if (s.nrows() != s.ncols()) throw InvalidArgument("symmetry_error needs a square matrix");
    double e = 0;
    for (size_t i = 0; i < s.nrows(); ++i)
        for (size_t j = 0; j < s.ncols(); ++j) e = std::max(e, std::abs(s(i, j) - s(j, i)));
    return e;
}

double phase_fixed_distance(const SMatrixTable& a, const SMatrixTable& b, double tol) {
    if (a.nrows() != b.nrows() || a.ncols() != b.ncols()) throw InvalidArgument("shape mismatch");
    const auto x = phase_fixed(a, tol);
    const auto y = phase_fixed(b, tol);
    double d = 0;
    for (size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
    return d;
}

std::string format_double(double x) {
    x = clean_zero(x);
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

nlohmann::ordered_json to_json(const SMatrixTable& s) {
    nlohmann::ordered_json j;
    j["formula"] = s.meta.formula;
    j["type"] = s.meta.type;
    j["level"] = s.meta.level;
    j["normalization"] = s.meta.normalization;
    j["normalized"] = s.meta.normalized;
    j["row_type"] = s.rows.label;
    j["row_coordinates"] = s.rows.type.name();
    j["col_type"] = s.cols.label;
    j["col_coordinates"] = s.cols.type.name();
    j["rows"] = s.rows.weights;
    j["cols"] = s.cols.weights;
    auto rows = nlohmann::ordered_json::array();
    for (size_t i = 0; i < s.nrows(); ++i) {
        auto row = nlohmann::ordered_json::array();
        for (size_t c = 0; c < s.ncols(); ++c)
            row.push_back(nlohmann::ordered_json::array({clean_zero(s(i, c).real()), clean_zero(s(i, c).imag())}));
        rows.push_back(row);
    }
    j["entries"] = rows;
    return j;
}

SMatrixTable smatrix_from_json(const nlohmann::ordered_json& j) {
    try {
        SMatrixTable s;
        s.meta.formula = j.at("formula").get<std::string>();
        s.meta.type = j.at("type").get<std::string>();
        s.meta.level = j.at("level").get<int>();
        s.meta.normalization = j.at("normalization").get<double>();
        s.meta.normalized = j.at("normalized").get<bool>();
        s.rows = WeightList{j.at("row_type").get<std::string>(), parse_finite_type(j.at("row_coordinates").get<std::string>()),
                            s.meta.level, j.at("rows").get<std::vector<Coeffs>>()};
        s.cols = WeightList{j.at("col_type").get<std::string>(), parse_finite_type(j.at("col_coordinates").get<std::string>()),
                            s.meta.level, j.at("cols").get<std::vector<Coeffs>>()};
        const auto& e = j.at("entries");
        if (e.size() != s.nrows()) throw InvalidArgument("entries row count mismatch");
        for (const auto& row : e) {
            if (row.size() != s.ncols()) throw InvalidArgument("entries column count mismatch");
            for (const auto& z : row) s.entries.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
        }
        return s;
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidArgument(std::string("malformed S-matrix JSON: ") + ex.what());
    }
}

std::string to_csv(const SMatrixTable& s) {
    std::ostringstream os;
    os << "weight";
    for (const auto& c : s.cols.weights) os << "," << weight_string(c);
    os << "\n";
    for (size_t i = 0; i < s.nrows(); ++i) {
        os << weight_string(s.rows.weights[i]);
        for (size_t j = 0; j < s.ncols(); ++j) {
            const double re = clean_zero(s(i, j).real()), im = clean_zero(s(i, j).imag());
            os << "," << format_double(re) << (std::signbit(im) ? "-" : "+") << format_double(std::abs(im)) << "j";
        }
        os << "\n";
    }
    return os.str();
}

std::uint64_t content_hash(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

SMatrixCache::SMatrixCache(std::filesystem::path root) : root_(std::move(root)) {}

std::filesystem::path SMatrixCache::default_root() {
    if (const char* env = std::getenv("TWV_CACHE_DIR"); env && *env) return env;
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "twverlinde";
    if (const char* home = std::getenv("HOME"); home && *home)
        return std::filesystem::path(home) / ".cache" / "twverlinde";
    return std::filesystem::temp_directory_path() / "twverlinde";
}

std::string SMatrixCache::key(const std::string& formula, const std::string& type, int level) {
    return "smatrix-v1|" + formula + "|" + type + "|" + std::to_string(level);
}

std::filesystem::path SMatrixCache::path_for(const std::string& key) const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(content_hash(key)));
    return root_ / (std::string(buf) + ".json");
}

std::optional<SMatrixTable> SMatrixCache::load(const std::string& key) const {
    const auto p = path_for(key);
    std::ifstream in(p);
    if (!in) return std::nullopt;
    try {
        auto j = nlohmann::ordered_json::parse(in);
        if (j.at("key").get<std::string>() != key) return std::nullopt;
        return smatrix_from_json(j.at("table"));
    } catch (const std::exception&) {
        return std::nullopt;  // unreadable entries are recomputed
    }
}

void SMatrixCache::store(const std::string& key, const SMatrixTable& s) const {
    std::filesystem::create_directories(root_);
    const auto final_path = path_for(key);
    std::random_device rd;
    auto tmp = final_path;
    tmp += ".tmp" + std::to_string(rd());
    {
        std::ofstream out(tmp);
        if (!out) throw Error("cannot write cache file " + tmp.string());
        nlohmann::ordered_json j;
        j["key"] = key;
        j["table"] = to_json(s);
        out << j.dump() << "\n";
        if (!out) throw Error("cannot write cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, final_path);
}

}  // namespace twv
