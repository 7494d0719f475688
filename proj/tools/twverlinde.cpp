// twverlinde: weights, S-matrices, fusion rings and twisted Verlinde ranks from the command line.

#include "CLI11.hpp"
#include "twverlinde/errors.hpp"
#include "twverlinde/fusion.hpp"
#include "twverlinde/verlinde.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace twv;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kCap = 3, kPhase = 4, kNonIntegral = 5 };

struct Config {
    std::string format = "json";
    std::string cache_dir;
    bool no_cache = false;
    int workers = 1;
    double rank_tol = 1e-6;
    double unitarity_tol = 1e-8;
    double phase_tol = 1e-8;
    std::string output;

    ComputeOptions compute() const {
        ComputeOptions o;
        o.workers = workers;
        o.phase_tol = phase_tol;
        return o;
    }
};

const char* kTypeHelp =
    "Type strings: finite types A1, B3, C2, D4, E6, F4, G2, ...; twisted affine types\n"
    "A3~2, A5~2 (A_{2n-1}^(2)), A2~2, A4~2 (A_{2n}^(2)), D3~2, D5~2 (D_{n+1}^(2)), E6~2, D4~3.\n"
    "Twisted weights use coordinates of the horizontal subalgebra (see the 'coordinates' field).";

std::string weight_str(const Coeffs& c) {
    std::string s = "[";
    for (size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
    return s + "]";
}

std::string complex_str(Complex z) {
    char buf[64];
    const double re = std::abs(z.real()) < 5e-13 ? 0.0 : z.real();
    const double im = std::abs(z.imag()) < 5e-13 ? 0.0 : z.imag();
    if (im == 0.0) std::snprintf(buf, sizeof buf, "%.6f", re);
    else std::snprintf(buf, sizeof buf, "%.6f%+.6fi", re, im);
    return buf;
}

void emit(const Config& cfg, const std::string& text) {
    if (cfg.output.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(cfg.output);
    if (!out) throw Error("cannot write " + cfg.output);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

// ---- weights

std::string render(const WeightList& w, const std::string& format) {
    if (format == "json") return to_json(w).dump();
    std::ostringstream os;
    if (format == "csv") {
        os << "index,weight\n";
        for (size_t i = 0; i < w.size(); ++i) {
            os << i << ",";
            for (size_t k = 0; k < w.weights[i].size(); ++k) os << (k ? " " : "") << w.weights[i][k];
            os << "\n";
        }
        return os.str();
    }
    os << w.label << " level " << w.level << " (" << w.type.name() << " coordinates): " << w.size() << " weights\n";
    for (size_t i = 0; i < w.size(); ++i) os << "  " << i << "  " << weight_str(w.weights[i]) << "\n";
    return os.str();
}

// ---- S-matrices

std::string render(const SMatrixTable& s, const std::string& format) {
    if (format == "json") return to_json(s).dump();
    if (format == "csv") return to_csv(s);
    std::ostringstream os;
    os << s.meta.formula << " S-matrix of " << s.meta.type << " at level " << s.meta.level << " (" << s.nrows() << " x "
       << s.ncols() << ")\n";
    size_t width = 0;
    for (const auto& r : s.rows.weights) width = std::max(width, weight_str(r).size());
    for (size_t i = 0; i < s.nrows(); ++i) {
        const std::string w = weight_str(s.rows.weights[i]);
        os << "  " << w << std::string(width - w.size(), ' ');
        for (size_t j = 0; j < s.ncols(); ++j) {
            const std::string c = complex_str(s(i, j));
            os << "  " << std::string(c.size() < 20 ? 20 - c.size() : 0, ' ') << c;
        }
        os << "\n";
    }
    return os.str();
}

SMatrixTable cached(const Config& cfg, const std::string& formula, const std::string& type, int level,
                    const std::function<SMatrixTable()>& compute) {
    if (cfg.no_cache) return compute();
    const SMatrixCache cache(cfg.cache_dir.empty() ? SMatrixCache::default_root() : std::filesystem::path(cfg.cache_dir));
    const std::string key = SMatrixCache::key(formula, type, level);
    if (auto hit = cache.load(key)) return *hit;
    SMatrixTable s = compute();
    try {
        cache.store(key, s);
    } catch (const std::exception& e) {
        std::cerr << "warning: cache not written: " << e.what() << "\n";
    }
    return s;
}

int cmd_smatrix(const Config& cfg, const std::string& kind, const std::vector<std::string>& args, const std::string& via) {
    auto level_of = [](const std::string& s) {
        try {
            size_t pos = 0;
            const int v = std::stoi(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw InvalidArgument("expected an integer, got '" + s + "'");
        }
    };
    const ComputeOptions opt = cfg.compute();
    SMatrixTable s;
    if (kind == "untwisted") {
        if (args.size() != 2) throw InvalidArgument("usage: smatrix untwisted TYPE LEVEL");
        const FiniteType g = parse_finite_type(args[0]);
        const int level = level_of(args[1]);
        s = cached(cfg, "untwisted", g.name(), level, [&] { return untwisted_smatrix(g, level, opt); });
    } else if (kind == "twisted") {
        if (args.size() != 2) throw InvalidArgument("usage: smatrix twisted TYPE LEVEL [--via direct|transpose]");
        const TwistedAffineType t = parse_affine_type(args[0]);
        const int level = level_of(args[1]);
        if (via == "transpose")
            s = cached(cfg, "twisted-transpose", t.name(), level,
                       [&] { return twisted_km_smatrix_via_transpose(t, level, opt); });
        else
            s = cached(cfg, "twisted-direct", t.name(), level, [&] { return twisted_km_smatrix(t, level, opt); });
    } else {
        if (args.size() != 3) throw InvalidArgument("usage: smatrix crossed TYPE ORDER LEVEL");
        const FiniteType g = parse_finite_type(args[0]);
        const int order = level_of(args[1]);
        const int level = level_of(args[2]);
        const auto sigma = standard_automorphism(g, order);
        s = cached(cfg, "crossed", g.name() + "/" + std::to_string(order), level,
                   [&] { return crossed_smatrix(g, sigma, level, opt); });
    }
    const double e = unitarity_error(s);
    if (!(e < cfg.unitarity_tol)) std::cerr << "warning: unitarity error " << e << " above " << cfg.unitarity_tol << "\n";
    emit(cfg, render(s, cfg.format));
    return kOk;
}

// ---- fusion

std::string render(const FusionTable& f, const std::string& format) {
    if (format == "json") return to_json(f).dump();
    auto value = [&](Complex v) {
        if (f.order != 3) return std::to_string(std::llround(v.real()));
        const double b = v.imag() / (std::sqrt(3.0) / 2);
        const long long a = std::llround(v.real() + b / 2), bb = std::llround(b);
        std::string s = std::to_string(a);
        if (bb) s += (bb > 0 ? "+" : "") + std::to_string(bb) + "w";
        return s;
    };
    std::ostringstream os;
    if (format == "csv") {
        os << "lambda,mu,nu,value\n";
    } else {
        os << f.ring << " fusion ring on " << f.basis.label << " at level " << f.basis.level << ": " << f.dim
           << " basis elements, max residual " << f.max_residual << (f.valid ? "" : " (INVALID)") << "\n";
    }
    for (size_t l = 0; l < f.dim; ++l)
        for (size_t m = l; m < f.dim; ++m)
            for (size_t n = 0; n < f.dim; ++n) {
                const Complex v = f(l, m, n);
                if (v == Complex(0)) continue;
                if (format == "csv")
                    os << weight_str(f.basis.weights[l]) << "," << weight_str(f.basis.weights[m]) << ","
                       << weight_str(f.basis.weights[n]) << "," << value(v) << "\n";
                else
                    os << "  " << weight_str(f.basis.weights[l]) << " x " << weight_str(f.basis.weights[m]) << " -> "
                       << value(v) << " " << weight_str(f.basis.weights[n]) << "\n";
            }
    return os.str();
}

// ---- verify

struct Report {
    std::string suite;
    json checks = json::array();
    int failures = 0;

    void add(const std::string& name, const std::string& metric, double value, double tol, bool ok,
             const std::string& detail = "") {
        json c;
        c["suite"] = suite;
        c["case"] = name;
        c["metric"] = metric;
        c["value"] = value;
        c["tolerance"] = tol;
        c["ok"] = ok;
        if (!detail.empty()) c["detail"] = detail;
        checks.push_back(c);
        if (!ok) ++failures;
    }
};

std::vector<DiagramAutomorphism> automorphism_grid() {
    std::vector<DiagramAutomorphism> out;
    for (int r = 2; r <= 7; ++r) out.push_back(standard_automorphism({Series::A, r}, 2));
    for (int r = 4; r <= 6; ++r) out.push_back(standard_automorphism({Series::D, r}, 2));
    out.push_back(standard_automorphism({Series::E, 6}, 2));
    out.push_back(standard_automorphism({Series::D, 4}, 3));
    return out;
}

std::string label(const DiagramAutomorphism& s) { return s.type.name() + "/" + std::to_string(s.order); }

// the negative control: a flipped sign in the last entry of every computed matrix
void inject(SMatrixTable& s, bool on) {
    if (on && !s.entries.empty()) s.entries.back() = -s.entries.back();
}

// largest deviation of S S^dagger from the identity, with its location
std::pair<double, std::string> unitarity_located(const SMatrixTable& s) {
    double worst = 0;
    std::string where;
    for (size_t i = 0; i < s.nrows(); ++i)
        for (size_t j = 0; j < s.nrows(); ++j) {
            Complex acc = 0;
            for (size_t c = 0; c < s.ncols(); ++c) acc += s(i, c) * std::conj(s(j, c));
            const double e = std::abs(acc - Complex(i == j ? 1.0 : 0.0));
            if (e > worst) {
                worst = e;
                where = "rows " + weight_str(s.rows.weights[i]) + " and " + weight_str(s.rows.weights[j]);
            }
        }
    return {worst, where};
}

void suite_unitarity(Report& r, const Config& cfg, bool bug) {
    const ComputeOptions opt = [&] {
        ComputeOptions o = cfg.compute();
        o.unitarity_fail = INFINITY;  // the suite reports instead of throwing
        return o;
    }();
    auto check = [&](SMatrixTable s, const std::string& name, bool symmetric) {
        inject(s, bug);
        const auto [e, where] = unitarity_located(s);
        r.add(name, "unitarity", e, cfg.unitarity_tol, e < cfg.unitarity_tol, e < cfg.unitarity_tol ? "" : where);
        if (symmetric) {
            const double d = symmetry_error(s);
            r.add(name, "symmetry", d, cfg.unitarity_tol, d < cfg.unitarity_tol);
        }
    };
    for (const char* g : {"A1", "A2", "A3", "A4", "B2", "B3", "C2", "C3", "D4", "G2"})
        for (int l = 1; l <= 3; ++l)
            check(untwisted_smatrix(parse_finite_type(g), l, opt), std::string(g) + " level " + std::to_string(l), true);
    for (const char* t : {"A2~2", "A4~2", "A6~2", "A3~2", "A5~2", "D3~2", "D4~2", "D5~2", "D4~3", "E6~2"}) {
        const auto tt = parse_affine_type(t);
        for (int l = 1; l <= 3; ++l)
            check(twisted_km_smatrix(tt, l, opt), std::string(t) + " level " + std::to_string(l),
                  tt.kind == AffineKind::A2n_2);
    }
    for (const auto& s : automorphism_grid())
        for (int l = 1; l <= 3; ++l)
            check(crossed_smatrix(s.type, s, l, opt), "crossed " + label(s) + " level " + std::to_string(l), false);
}

void suite_dualroute(Report& r, const Config& cfg, bool bug) {
    ComputeOptions opt = cfg.compute();
    opt.unitarity_fail = INFINITY;
    auto check = [&](const char* t, int l) {
        const auto tt = parse_affine_type(t);
        SMatrixTable a = twisted_km_smatrix(tt, l, opt);
        inject(a, bug);
        const SMatrixTable b = twisted_km_smatrix_via_transpose(tt, l, opt);
        // locate the worst entry after phase fixing
        double worst = 0;
        std::string where;
        for (size_t i = 0; i < a.nrows(); ++i) {
            const int ea = row_phase(a, i, cfg.phase_tol), eb = row_phase(b, i, cfg.phase_tol);
            for (size_t j = 0; j < a.ncols(); ++j) {
                const double d = std::abs(static_cast<double>(ea) * a(i, j) - static_cast<double>(eb) * b(i, j));
                if (d > worst) {
                    worst = d;
                    where = "entry " + weight_str(a.rows.weights[i]) + ", " + weight_str(a.cols.weights[j]);
                }
            }
        }
        const bool ok = worst < cfg.unitarity_tol;
        r.add(std::string(t) + " level " + std::to_string(l), "direct vs transpose", worst, cfg.unitarity_tol, ok,
              ok ? "" : where);
    };
    for (const char* t : {"A3~2", "A5~2", "A7~2", "D3~2", "D4~2", "D5~2", "D4~3"})
        for (int l = 1; l <= 3; ++l) check(t, l);
    check("E6~2", 1);
}

CoverSpec spec_of(const DiagramAutomorphism& s, int N, int level, int genus, std::vector<int> m, std::vector<Coeffs> w,
                  int holonomy) {
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

std::vector<CoverSpec> example_specs() {
    std::vector<CoverSpec> out;
    for (int r = 2; r <= 3; ++r) {
        const FiniteType a{Series::A, 2 * r - 1};
        const auto s = standard_automorphism(a, 2);
        for (int g = 0; g <= 2; ++g)
            for (int n = 0; n <= 3; ++n)
                if (2 * g - 2 + 2 * n > 0 || (g >= 1 && n == 0))
                    out.push_back(spec_of(s, 2, 1, g, std::vector<int>(2 * n, 1), std::vector<Coeffs>(2 * n, Coeffs(r, 0)), 1));
    }
    const FiniteType d4{Series::D, 4};
    const auto tri = standard_automorphism(d4, 3);
    for (int l = 1; l <= 2; ++l) {
        out.push_back(spec_of(tri, 3, l, 0, {1, 1, 1}, {{0, 0}, {0, 0}, {0, 0}}, 1));
        out.push_back(spec_of(tri, 3, l, 0, {1, 2, 0}, {{0, 0}, {0, 0}, {0, 0, 0, 0}}, 1));
    }
    for (int r = 1; r <= 3; ++r) {
        const FiniteType a{Series::A, 2 * r};
        const auto s = standard_automorphism(a, 2);
        for (const auto& w : enumerate_untwisted_level_weights(a, 1).weights)
            out.push_back(spec_of(s, 2, 1, 0, {1, 1, 0}, {Coeffs(r, 0), Coeffs(r, 0), w}, 1));
    }
    return out;
}

void add_identity(Report& r, const CoverSpec& spec, const IdentityReport& rep) {
    r.add(rep.identity + " " + to_json(spec).dump(), "lhs - rhs", static_cast<double>(rep.lhs - rep.rhs), 0, rep.ok,
          rep.detail);
}

void suite_factorization(Report& r, const Config& cfg) {
    const ComputeOptions opt = cfg.compute();
    for (const auto& spec : example_specs()) {
        if (spec.genus < 1) continue;
        for (int k = 0; k < spec.N; k += spec.holonomy) {
            try {
                add_identity(r, spec, verify_factorization(spec, k, opt));
            } catch (const InvalidArgument&) {
                // this node would leave a genus-0 piece with smaller holonomy; not a degeneration of the cover
            }
        }
    }
    const FiniteType d4{Series::D, 4};
    const auto tri = standard_automorphism(d4, 3);
    for (int l = 1; l <= 3; ++l) {
        const auto e = spec_of(tri, 3, l, 1, {0}, {{0, 0, 0, 0}}, 1);
        for (int k = 1; k <= 2; ++k) add_identity(r, e, verify_factorization(e, k, opt));
        const auto f = spec_of(tri, 3, l, 0, {1, 2, 1, 2}, {{0, 0}, {0, 0}, {0, 0}, {0, 0}}, 1);
        add_identity(r, f, verify_factorization_separating(f, {0, 1}, 0, opt));
        add_identity(r, f, verify_factorization_separating(f, {0, 2}, 0, opt));
    }
    for (int l = 1; l <= 3; ++l) {
        const FiniteType a2{Series::A, 2};
        const auto u = spec_of(identity_automorphism(a2), 1, l, 1, {0}, {{1, 0}}, 1);
        add_identity(r, u, verify_factorization(u, 0, opt));
    }
}

void suite_propagation(Report& r, const Config& cfg) {
    for (const auto& spec : example_specs()) add_identity(r, spec, verify_propagation(spec, cfg.compute()));
}

void suite_frobenius(Report& r, const Config& cfg, bool bug) {
    ComputeOptions opt = cfg.compute();
    opt.unitarity_fail = INFINITY;
    for (const auto& s : automorphism_grid())
        for (int l = 1; l <= 3; ++l) {
            if (s.type.rank >= 6 && l > 2) continue;
            SMatrixTable x = crossed_smatrix(s.type, s, l, opt);
            inject(x, bug);
            const auto f = fusion_from_characters(x, "twisted", s.order, cfg.rank_tol);
            const auto rep = verify_frobenius(f, cfg.rank_tol);
            r.add(label(s) + " level " + std::to_string(l), "max residual", f.max_residual, cfg.rank_tol, rep.ok,
                  rep.violations.empty() ? "" : rep.violations.front());
        }
}

int cmd_verify(const Config& cfg, const std::string& suite, bool bug) {
    static const std::vector<std::string> all = {"unitarity", "dualroute", "factorization", "propagation", "frobenius"};
    std::vector<std::string> run = suite == "all" ? all : std::vector<std::string>{suite};
    json out;
    out["suite"] = suite;
    json suites = json::array();
    int failures = 0;
    for (const auto& name : run) {
        Report r;
        r.suite = name;
        try {
            if (name == "unitarity") suite_unitarity(r, cfg, bug);
            else if (name == "dualroute") suite_dualroute(r, cfg, bug);
            else if (name == "factorization") suite_factorization(r, cfg);
            else if (name == "propagation") suite_propagation(r, cfg);
            else suite_frobenius(r, cfg, bug);
        } catch (const Error& e) {
            r.add("suite aborted", "exception", 0, 0, false, e.what());
        }
        json s;
        s["name"] = name;
        s["passed"] = r.failures == 0;
        s["checks"] = r.checks.size();
        s["failures"] = r.failures;
        json failed = json::array();
        for (const auto& c : r.checks)
            if (!c["ok"].get<bool>()) failed.push_back(c);
        s["failed_checks"] = failed;
        if (cfg.format == "pretty") {
            std::cerr << (r.failures ? "FAIL " : "PASS ") << name << ": " << r.checks.size() << " checks, " << r.failures
                      << " failures\n";
            size_t shown = 0;
            for (const auto& c : failed)
                if (shown++ < 10)
                    std::cerr << "  " << c["case"].get<std::string>() << " [" << c["metric"].get<std::string>()
                          << " = " << c["value"].dump() << "]" << (c.contains("detail") ? " at " + c["detail"].get<std::string>() : "")
                          << "\n";
            if (failed.size() > 10) std::cerr << "  ... " << failed.size() - 10 << " more\n";
        }
        suites.push_back(s);
        failures += r.failures;
    }
    out["passed"] = failures == 0;
    out["failures"] = failures;
    out["suites"] = suites;
    emit(cfg, out.dump());
    return failures ? kFailure : kOk;
}

nlohmann::ordered_json read_json(const std::string& path) {
    std::ifstream in_file;
    std::istream* in = &std::cin;
    if (path != "-") {
        in_file.open(path);
        if (!in_file) throw InvalidArgument("cannot read " + path);
        in = &in_file;
    }
    try {
        return nlohmann::ordered_json::parse(*in);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(path + ": " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Twisted Verlinde ranks, crossed S-matrices and twisted fusion rings.", "twverlinde"};
    app.footer(kTypeHelp);
    app.require_subcommand(1);
    app.fallthrough();

    Config cfg;
    app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv", "pretty"}));
    app.add_option("--cache-dir", cfg.cache_dir, "S-matrix cache root (default: $TWV_CACHE_DIR or ~/.cache/twverlinde)");
    app.add_flag("--no-cache", cfg.no_cache, "neither read nor write the S-matrix cache");
    app.add_option("--workers", cfg.workers, "worker threads for Weyl sums")->check(CLI::PositiveNumber);
    app.add_option("--rank-tol", cfg.rank_tol, "rounding tolerance for ranks and fusion constants")
        ->check(CLI::PositiveNumber);
    app.add_option("--unitarity-tol", cfg.unitarity_tol, "tolerance of the unitarity and dual-route checks")
        ->check(CLI::PositiveNumber);
    app.add_option("--phase-tol", cfg.phase_tol, "tolerance when reading row phases")->check(CLI::PositiveNumber);
    app.add_option("-o,--output", cfg.output, "write to a file instead of stdout");

    std::string type_s;
    int level = 0;
    auto* weights = app.add_subcommand("weights", "list the level-l dominant weights of a (twisted) affine type");
    weights->add_option("TYPE", type_s, "type string, e.g. A3~2 or A2")->required();
    weights->add_option("LEVEL", level, "level")->required()->check(CLI::PositiveNumber);

    std::string kind, via = "direct";
    std::vector<std::string> sargs;
    auto* smatrix = app.add_subcommand("smatrix", "compute an S-matrix");
    smatrix->add_option("KIND", kind, "untwisted, twisted or crossed")
        ->required()
        ->check(CLI::IsMember({"untwisted", "twisted", "crossed"}));
    smatrix->add_option("ARGS", sargs, "TYPE LEVEL, or TYPE ORDER LEVEL for crossed")->required();
    smatrix->add_option("--via", via, "route for twisted matrices")->check(CLI::IsMember({"direct", "transpose"}));

    auto* fusion = app.add_subcommand("fusion", "untwisted fusion ring");
    fusion->add_option("TYPE", type_s, "finite type")->required();
    fusion->add_option("LEVEL", level, "level")->required()->check(CLI::PositiveNumber);

    int order = 2;
    auto* tfusion = app.add_subcommand("twisted-fusion", "twisted fusion ring of a diagram automorphism");
    tfusion->add_option("TYPE", type_s, "finite type")->required();
    tfusion->add_option("ORDER", order, "order of the automorphism (2, or 3 for D4 triality)")->required();
    tfusion->add_option("LEVEL", level, "level")->required()->check(CLI::PositiveNumber);

    std::string spec_path;
    auto* rank_cmd = app.add_subcommand("rank", "rank of twisted conformal blocks for a cover spec (JSON)");
    rank_cmd->add_option("SPEC", spec_path, "cover spec file, or - for stdin")->required();

    std::string suite;
    bool inject_bug = false;
    auto* verify = app.add_subcommand("verify", "run a property suite over the built-in parameter grid");
    verify->add_option("SUITE", suite, "unitarity, dualroute, factorization, propagation, frobenius or all")
        ->required()
        ->check(CLI::IsMember({"unitarity", "dualroute", "factorization", "propagation", "frobenius", "all"}));
    verify->add_flag("--inject-sign-bug", inject_bug, "negative control: flip one sign in every computed matrix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        const ComputeOptions opt = cfg.compute();
        if (*weights) {
            emit(cfg, render(enumerate_twisted_level_weights(parse_affine_type(type_s), level), cfg.format));
        } else if (*smatrix) {
            return cmd_smatrix(cfg, kind, sargs, via);
        } else if (*fusion) {
            const auto f = untwisted_fusion(parse_finite_type(type_s), level, opt);
            emit(cfg, render(f, cfg.format));
            if (!f.valid) return kNonIntegral;
        } else if (*tfusion) {
            const FiniteType g = parse_finite_type(type_s);
            const auto f = twisted_fusion(g, standard_automorphism(g, order), level, opt);
            emit(cfg, render(f, cfg.format));
            if (!f.valid) return kNonIntegral;
        } else if (*rank_cmd) {
            const CoverSpec spec = cover_spec_from_json(read_json(spec_path));
            const RankResult r = rank(spec, opt, cfg.rank_tol);
            if (cfg.format == "pretty")
                emit(cfg, "rank " + std::to_string(r.rank) + " (residual " + format_double(r.residual) + ")");
            else if (cfg.format == "csv")
                emit(cfg, "rank,residual\n" + std::to_string(r.rank) + "," + format_double(r.residual));
            else
                emit(cfg, to_json(r).dump());
        } else if (*verify) {
            return cmd_verify(cfg, suite, inject_bug);
        }
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return kUsage;
    } catch (const GroupTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCap;
    } catch (const AmbiguousPhase& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kPhase;
    } catch (const NonIntegral& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNonIntegral;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kOk;
}
