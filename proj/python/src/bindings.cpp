// Python bindings. Slopes, intercepts and contraction factors are passed in
// the same notation the command-line tool accepts; exact rationals come back
// as fractions.Fraction and integers as Python ints.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sturmian/cli.hpp"
#include "sturmian/contraction.hpp"
#include "sturmian/notation.hpp"
#include "sturmian/sturmnum.hpp"

namespace py = pybind11;
using namespace sturm;

namespace {

py::object to_py(const Integer& z) {
    return py::reinterpret_steal<py::object>(PyLong_FromString(z.get_str().c_str(), nullptr, 10));
}

py::object to_py(const Rational& q) {
    static py::object fraction = py::module_::import("fractions").attr("Fraction");
    return fraction(to_py(Integer(q.get_num())), to_py(Integer(q.get_den())));
}

py::tuple to_py(const Interval& iv) { return py::make_tuple(to_py(iv.lo), to_py(iv.hi)); }

Alphabet alphabet_of(int a, int b, int base) {
    Alphabet al{a, b, base ? base : std::max(2, std::max(a, b) + 1)};
    al.validate();
    return al;
}

using OptStr = std::optional<std::string>;

SturmianSource source_of(const std::string& theta, const OptStr& rho, const OptStr& variant, const Alphabet& al) {
    Theta th = parse_theta(theta);
    if (!rho) {
        if (variant && parse_variant(*variant) != Variant::Characteristic)
            throw ParseError("variant " + *variant + " needs rho");
        return SturmianSource::characteristic(th, al);
    }
    return SturmianSource(th, parse_rho(*rho, th), variant ? parse_variant(*variant) : Variant::Lower, al);
}

QuadraticSurd point_of(const std::string& text) {
    if (text.rfind("quad:", 0) == 0) return parse_surd(text.substr(5));
    return QuadraticSurd(parse_rational(text));
}

py::object surd_to_py(const QuadraticSurd& s) {
    if (s.is_rational()) return to_py(s.a());
    return py::str(s.to_string());
}

py::dict approximant_dict(const Approximant& a, int base) {
    py::dict d;
    d["k"] = a.k;
    d["m"] = to_py(a.m);
    d["r"] = a.r;
    d["q"] = a.q;
    d["t"] = a.t;
    d["value"] = to_py(a.value(base));
    d["residual"] = to_py(a.bound.residual);
    d["delta"] = to_py(a.bound.delta);
    d["status"] = to_string(a.bound.status);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Sturmian words, Sturmian numbers and contracted rotations";

    static py::exception<Error> error(m, "Error");
    static py::exception<ResolutionExceeded> resolution(m, "ResolutionExceeded", error.ptr());
    static py::exception<DomainError> domain(m, "DomainError", error.ptr());
    static py::exception<ParseError> parse(m, "ParseError", error.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ResolutionExceeded& e) {
            py::set_error(resolution, e.what());
        } catch (const DomainError& e) {
            py::set_error(domain, e.what());
        } catch (const ParseError& e) {
            py::set_error(parse, e.what());
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    m.def(
        "expand",
        [](const std::string& theta, std::size_t depth) {
            py::list out;
            for (const auto& a : expand(parse_theta(theta), depth).prefix(depth)) out.append(to_py(a));
            return out;
        },
        py::arg("theta"), py::arg("depth"), "Partial quotients a_1..a_depth.");

    m.def(
        "convergents",
        [](const std::string& theta, std::size_t depth) {
            py::list out;
            ConvergentTable t = convergents(parse_theta(theta).cf(), depth);
            for (const auto& row : t.rows()) out.append(py::make_tuple(to_py(row.p), to_py(row.q)));
            return out;
        },
        py::arg("theta"), py::arg("depth"), "(p_k, q_k) for k = 0..depth.");

    m.def(
        "standard_word",
        [](const std::string& theta, std::size_t k) {
            return StandardWordFamily(parse_theta(theta).cf()).M(k).to_letters();
        },
        py::arg("theta"), py::arg("k"), "M_k over the letters a, b.");

    m.def(
        "word_variants",
        [](const std::string& theta, std::size_t k) {
            WordVariants v = word_variants(StandardWordFamily(parse_theta(theta).cf()), k);
            py::dict d;
            d["minus2"] = v.minus2.to_letters();
            d["star"] = v.star.to_letters();
            d["prime"] = v.prime.to_letters();
            return d;
        },
        py::arg("theta"), py::arg("k"));

    m.def(
        "word",
        [](const std::string& theta, std::size_t n, OptStr rho, OptStr variant,
           int a, int b) {
            Alphabet al = alphabet_of(a, b, 0);
            return sturmian_prefix(source_of(theta, rho, variant, al), n).to_digits(al);
        },
        py::arg("theta"), py::arg("n"), py::arg("rho") = py::none(), py::arg("variant") = py::none(), py::arg("a") = 0,
        py::arg("b") = 1, "First n letters as digits; without rho the characteristic word.");

    m.def(
        "decompose",
        [](const std::string& theta, std::size_t k, OptStr rho, OptStr variant) {
            Decomposition d = decompose(source_of(theta, rho, variant, Alphabet{}), k);
            py::dict out;
            out["k"] = d.k;
            out["U"] = d.U.to_letters();
            out["d"] = to_py(d.d);
            out["case"] = d.case_tag;
            out["candidates_matched"] = d.candidates_matched;
            return out;
        },
        py::arg("theta"), py::arg("k"), py::arg("rho") = py::none(), py::arg("variant") = py::none());

    m.def(
        "evaluate",
        [](const std::string& theta, std::size_t digits, OptStr rho, OptStr variant,
           int base, int a, int b) {
            Truncation t = evaluate(source_of(theta, rho, variant, alphabet_of(a, b, base)), digits);
            return py::make_tuple(to_py(t.value), to_py(t.tail));
        },
        py::arg("theta"), py::arg("digits"), py::arg("rho") = py::none(), py::arg("variant") = py::none(),
        py::arg("base") = 2, py::arg("a") = 0, py::arg("b") = 1,
        "(value of the first digits, range of the tail).");

    m.def(
        "schedule",
        [](const std::string& theta, std::size_t k, OptStr rho, int base) {
            ApproximantSchedule s = schedule(source_of(theta, rho, std::nullopt, alphabet_of(0, 1, base)), k);
            py::dict d;
            d["k"] = s.k;
            d["r"] = s.r;
            d["t"] = s.t;
            d["q"] = s.q;
            d["q_next"] = s.q_next;
            d["long_branch"] = s.long_branch;
            d["in_K"] = s.in_K;
            return d;
        },
        py::arg("theta"), py::arg("k"), py::arg("rho") = py::none(), py::arg("base") = 2);

    m.def(
        "approximant",
        [](const std::string& theta, std::size_t k, OptStr rho, int base) {
            Alphabet al = alphabet_of(0, 1, base);
            return approximant_dict(approximant_general(source_of(theta, rho, std::nullopt, al), k), base);
        },
        py::arg("theta"), py::arg("k"), py::arg("rho") = py::none(), py::arg("base") = 2);

    m.def(
        "dependence_witness",
        [](const std::string& theta, const std::string& rho, std::size_t bound, int base) -> py::object {
            auto w = dependence_witness(source_of(theta, rho, std::nullopt, alphabet_of(0, 1, base)), bound);
            if (!w) return py::none();
            py::dict d;
            d["r"] = to_py(w->r);
            d["s"] = to_py(w->s);
            d["p"] = w->relation.p;
            d["j"] = to_py(w->relation.j);
            d["direction"] = to_string(w->relation.direction);
            d["verified"] = w->verified;
            return d;
        },
        py::arg("theta"), py::arg("rho"), py::arg("bound") = 50, py::arg("base") = 2);

    m.def(
        "delta_of",
        [](const std::string& lambda, const std::string& theta, int digits) {
            return to_py(delta_of(parse_lambda(lambda), parse_theta(theta), digits));
        },
        py::arg("lam"), py::arg("theta"), py::arg("digits") = 50, "Enclosure (lo, hi).");

    m.def(
        "phi",
        [](const std::string& lambda, const std::string& theta, const std::string& y, int digits) {
            Theta th = parse_theta(theta);
            return to_py(phi(CantorParams(parse_lambda(lambda), th), parse_argument(y, th), digits));
        },
        py::arg("lam"), py::arg("theta"), py::arg("y"), py::arg("digits") = 50,
        "phi(y) with y in rat:/mult:/dec: notation.");

    m.def(
        "cantor_gaps",
        [](const std::string& lambda, const std::string& theta, std::size_t L, int digits) {
            py::list out;
            for (const auto& g : cantor_gaps(CantorParams(parse_lambda(lambda), parse_theta(theta)), L, digits)) {
                py::dict d;
                d["l"] = g.l;
                d["left"] = to_py(g.left);
                d["right"] = to_py(g.right);
                d["width"] = surd_to_py(g.width);
                out.append(d);
            }
            return out;
        },
        py::arg("lam"), py::arg("theta"), py::arg("L"), py::arg("digits") = 50);

    m.def(
        "membership",
        [](const std::string& lambda, const std::string& theta, const std::string& z, int digits) {
            CantorParams cp(parse_lambda(lambda), parse_theta(theta));
            Real point = z.rfind("dec:", 0) == 0 ? Real::from_interval(parse_decimal_interval(z.substr(4)), z)
                                                  : Real(parse_rational(z));
            MembershipVerdict v = membership(cp, point, digits);
            py::dict d;
            d["kind"] = to_string(v.kind);
            d["l"] = v.l;
            d["digits"] = v.digits;
            return d;
        },
        py::arg("lam"), py::arg("theta"), py::arg("z"), py::arg("digits") = 30);

    m.def(
        "orbit",
        [](const std::string& lambda, const std::string& delta, const std::string& x0, std::size_t n) {
            ContractionParams p(parse_lambda(lambda), Real(point_of(delta)));
            Orbit o = orbit(p, Real(point_of(x0)), n);
            py::list pts;
            for (const auto& iv : o.points) pts.append(to_py(iv));
            py::dict d;
            d["points"] = pts;
            d["wrapped"] = o.wrapped;
            d["wraps"] = o.wraps;
            return d;
        },
        py::arg("lam"), py::arg("delta"), py::arg("x0") = "0", py::arg("n") = 10);

    m.def(
        "rotation_number",
        [](const std::string& lambda, std::size_t n, OptStr delta, OptStr theta) {
            if (delta.has_value() == theta.has_value()) throw ParseError("give exactly one of delta and theta");
            ContractionParams p = delta ? ContractionParams(parse_lambda(lambda), Real(point_of(*delta)))
                                        : CantorParams(parse_lambda(lambda), parse_theta(*theta)).contraction();
            RotationEstimate r = rotation_number_estimate(p, n);
            py::dict d;
            d["n"] = r.n;
            d["wraps"] = r.wraps;
            d["estimate"] = to_py(r.estimate);
            d["safe"] = to_py(r.safe);
            d["exact"] = r.exact ? to_py(*r.exact) : py::none();
            d["period"] = r.period;
            return d;
        },
        py::arg("lam"), py::arg("n"), py::arg("delta") = py::none(), py::arg("theta") = py::none());

    m.def(
        "transcendence_form",
        [](unsigned long b, const std::string& theta, long mm) {
            TranscendenceForm t = transcendence_form(b, parse_theta(theta), mm);
            return py::make_tuple(to_py(t.coefficient), to_py(t.A));
        },
        py::arg("b"), py::arg("theta"), py::arg("m"), "(coefficient, A_m).");

    m.def(
        "run_suite",
        [](const std::string& name, const std::string& theta, std::size_t kmax) {
            cli::SuiteOptions o;
            o.theta = theta;
            o.kmax = kmax;
            py::list out;
            for (const auto& r : cli::run_suite(name, o)) {
                py::dict d;
                d["suite"] = r.suite;
                d["checks"] = r.checks;
                d["failures"] = r.failures;
                d["passed"] = r.passed();
                out.append(d);
            }
            return out;
        },
        py::arg("name") = "all", py::arg("theta") = "quad:(-1+sqrt(5))/2", py::arg("kmax") = 12);

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line tool in process: (exit code, stdout, stderr).");
}
