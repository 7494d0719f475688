#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twverlinde/errors.hpp"
#include "twverlinde/fusion.hpp"
#include "twverlinde/verlinde.hpp"

namespace py = pybind11;
using namespace twv;

namespace {

ComputeOptions options(int workers) {
    ComputeOptions o;
    o.workers = workers;
    return o;
}

py::dict table_dict(const SMatrixTable& s) {
    py::array_t<std::complex<double>> a({s.nrows(), s.ncols()});
    auto m = a.mutable_unchecked<2>();
    for (size_t i = 0; i < s.nrows(); ++i)
        for (size_t j = 0; j < s.ncols(); ++j) m(i, j) = s(i, j);
    py::dict d;
    d["formula"] = s.meta.formula;
    d["type"] = s.meta.type;
    d["level"] = s.meta.level;
    d["rows"] = s.rows.weights;
    d["cols"] = s.cols.weights;
    d["matrix"] = a;
    return d;
}

SMatrixTable compute_smatrix(const std::string& kind, const std::string& type, int level, int order,
                             const std::string& via, int workers) {
    const ComputeOptions opt = options(workers);
    if (kind == "untwisted") return untwisted_smatrix(parse_finite_type(type), level, opt);
    if (kind == "twisted") {
        const auto t = parse_affine_type(type);
        if (via == "transpose") return twisted_km_smatrix_via_transpose(t, level, opt);
        if (via != "direct") throw InvalidArgument("via must be 'direct' or 'transpose'");
        return twisted_km_smatrix(t, level, opt);
    }
    if (kind == "crossed") {
        const auto g = parse_finite_type(type);
        return crossed_smatrix(g, standard_automorphism(g, order), level, opt);
    }
    throw InvalidArgument("kind must be 'untwisted', 'twisted' or 'crossed'");
}

CoverSpec spec_of(const std::string& json_text) { return cover_spec_from_json(nlohmann::ordered_json::parse(json_text)); }

py::dict identity_dict(const IdentityReport& r) {
    py::dict d;
    d["ok"] = r.ok;
    d["identity"] = r.identity;
    d["lhs"] = r.lhs;
    d["rhs"] = r.rhs;
    return d;
}

}  // namespace

PYBIND11_MODULE(_twverlinde, m) {
    m.doc() = "Twisted Verlinde ranks, crossed S-matrices and twisted fusion rings";

    static py::exception<Error> base(m, "TwverlindeError");
    static py::exception<InvalidArgument> invalid(m, "InvalidArgument", PyExc_ValueError);
    static py::exception<GroupTooLarge> cap(m, "GroupTooLarge", base.ptr());
    static py::exception<AmbiguousPhase> phase(m, "AmbiguousPhase", base.ptr());
    static py::exception<NonIntegral> nonint(m, "NonIntegral", base.ptr());
    static py::exception<NotUnitary> unitary(m, "NotUnitary", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InvalidArgument& e) {
            py::set_error(invalid, e.what());
        } catch (const GroupTooLarge& e) {
            py::set_error(cap, e.what());
        } catch (const AmbiguousPhase& e) {
            py::set_error(phase, e.what());
        } catch (const NonIntegral& e) {
            py::set_error(nonint, e.what());
        } catch (const NotUnitary& e) {
            py::set_error(unitary, e.what());
        } catch (const nlohmann::json::exception& e) {
            py::set_error(invalid, e.what());
        } catch (const Error& e) {
            py::set_error(base, e.what());
        }
    });

    m.def(
        "weights",
        [](const std::string& type, int level) { return to_json(enumerate_twisted_level_weights(parse_affine_type(type), level)).dump(); },
        py::arg("type"), py::arg("level"), "level-l weight set as JSON");

    m.def(
        "smatrix",
        [](const std::string& kind, const std::string& type, int level, int order, const std::string& via, int workers) {
            SMatrixTable s;
            {
                py::gil_scoped_release release;
                s = compute_smatrix(kind, type, level, order, via, workers);
            }
            return table_dict(s);
        },
        py::arg("kind"), py::arg("type"), py::arg("level"), py::arg("order") = 2, py::arg("via") = "direct",
        py::arg("workers") = 1);

    m.def(
        "smatrix_json",
        [](const std::string& kind, const std::string& type, int level, int order, const std::string& via) {
            return to_json(compute_smatrix(kind, type, level, order, via, 1)).dump();
        },
        py::arg("kind"), py::arg("type"), py::arg("level"), py::arg("order") = 2, py::arg("via") = "direct");

    m.def(
        "fusion",
        [](const std::string& type, int level) { return to_json(untwisted_fusion(parse_finite_type(type), level)).dump(); },
        py::arg("type"), py::arg("level"));

    m.def(
        "twisted_fusion",
        [](const std::string& type, int order, int level) {
            const auto g = parse_finite_type(type);
            return to_json(twisted_fusion(g, standard_automorphism(g, order), level)).dump();
        },
        py::arg("type"), py::arg("order"), py::arg("level"));

    m.def(
        "rank",
        [](const std::string& spec, double tol) {
            const RankResult r = rank(spec_of(spec), {}, tol);
            py::dict d;
            d["rank"] = r.rank;
            d["residual"] = r.residual;
            d["value"] = r.value;
            return d;
        },
        py::arg("spec"), py::arg("tol") = 1e-6, "rank for a cover spec given as JSON text");

    m.def(
        "verify_factorization",
        [](const std::string& spec, int edge_class) { return identity_dict(verify_factorization(spec_of(spec), edge_class)); },
        py::arg("spec"), py::arg("edge_class"));

    m.def(
        "verify_propagation", [](const std::string& spec) { return identity_dict(verify_propagation(spec_of(spec))); },
        py::arg("spec"));
}
