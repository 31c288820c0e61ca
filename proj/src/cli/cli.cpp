#include "sturmian/cli.hpp"

#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sturmian/contraction.hpp"
#include "sturmian/notation.hpp"
#include "sturmian/sturmnum.hpp"

namespace sturm::cli {

namespace {

using json = nlohmann::ordered_json;

struct Globals {
    int digits = 50;
    long max_bits = 1L << 20;
    long initial_bits = 256;
    std::string format = "json";

    PrecisionBudget budget() const {
        PrecisionBudget b{initial_bits, max_bits};
        b.validate();
        return b;
    }
};

// Storage for every subcommand flag; only the selected subcommand writes to it.
struct Opts {
    std::string theta, rho, variant, alphabet = "0,1", lambda, delta, y, z, x0 = "0", suite = "all";
    int base = 0;
    std::size_t n = 0, k = 0, kmin = 3, kmax = 12, L = 0, bound = 50;
    long multiple = 0, form = 0;
    std::string alpha0 = "1", alpha1 = "1";
    bool closed_form = false, pair = false, residuals = false, witnesses = false, figure = false;
};

struct Ctx {
    CLI::App& sub;
    Opts& o;
    Globals& g;
    std::ostream& out;

    bool given(const std::string& flag) const { return sub.count(flag) > 0; }
};

std::string dec_down(const Rational& x, int d) { return to_decimal(x, d); }

std::string dec_up(const Rational& x, int d) {
    std::string s = to_decimal(-x, d);
    if (s[0] == '-') return s.substr(1);
    if (s.find_first_not_of("0.") == std::string::npos) return s;
    return "-" + s;
}

json interval_json(const Interval& iv, int d) { return json{{"lo", dec_down(iv.lo, d)}, {"hi", dec_up(iv.hi, d)}}; }

json interval_sci(const Interval& iv) {
    return json{{"lo", to_scientific(iv.lo, 12)}, {"hi", to_scientific(iv.hi, 12)}};
}

void emit(const Ctx& c, const json& j) { c.out << j.dump() << '\n'; }

Alphabet parse_alphabet(const Opts& o) {
    std::vector<int> v;
    std::stringstream ss(o.alphabet);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            v.push_back(std::stoi(part));
        } catch (const std::exception&) {
            throw ParseError("alphabet entry '" + part + "' is not an integer");
        }
    }
    if (v.size() != 2 && v.size() != 3) throw ParseError("alphabet must be 'a,b' or 'a,b,base'");
    Alphabet al{v[0], v[1], v.size() == 3 ? v[2] : std::max(2, std::max(v[0], v[1]) + 1)};
    if (o.base) al.base = o.base;
    al.validate();
    return al;
}

QuadraticSurd parse_point(const std::string& text) {
    if (text.rfind("quad:", 0) == 0) return parse_surd(text.substr(5));
    return QuadraticSurd(parse_rational(text));
}

Theta theta_of(const Ctx& c) {
    if (c.o.theta.empty()) throw ParseError("--theta is required");
    return parse_theta(c.o.theta, c.g.budget());
}

SturmianSource source_of(const Ctx& c, const Theta& th) {
    Alphabet al = parse_alphabet(c.o);
    if (!c.given("--rho")) {
        if (!c.o.variant.empty() && parse_variant(c.o.variant) != Variant::Characteristic)
            throw ParseError("--variant " + c.o.variant + " needs --rho");
        return SturmianSource::characteristic(th, al);
    }
    Variant v = c.o.variant.empty() ? Variant::Lower : parse_variant(c.o.variant);
    return SturmianSource(th, parse_rho(c.o.rho, th), v, al);
}

CantorParams cantor_of(const Ctx& c) {
    if (c.o.lambda.empty()) throw ParseError("--lambda is required");
    return CantorParams(parse_lambda(c.o.lambda), theta_of(c));
}

ContractionParams contraction_of(const Ctx& c) {
    if (c.o.lambda.empty()) throw ParseError("--lambda is required");
    if (c.given("--delta")) {
        if (c.given("--theta")) throw ParseError("give either --delta or --theta");
        return ContractionParams(parse_lambda(c.o.lambda), Real(parse_point(c.o.delta)), c.g.budget());
    }
    return cantor_of(c).contraction(c.g.budget());
}

std::string word_digits(const Word& w, const Alphabet& al) {
    if (al.sym_a <= 9 && al.sym_b <= 9) return w.to_digits(al);
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(al.digit(w[i]));
    return s;
}

json report_json(const ResidualReport& r) {
    return json{{"k", r.k},
                {"context", r.context},
                {"lhs", interval_sci(r.lhs)},
                {"bound_scale", r.rhs_scale.get_str()},
                {"bound_exponent", r.rhs_exponent.get_str()},
                {"satisfied", r.satisfied},
                {"status", to_string(r.status)},
                {"precision_digits", r.precision_digits}};
}

json approx_json(const Approximant& a, int base) {
    return json{{"k", a.k},
                {"m", a.m.get_str()},
                {"r", a.r},
                {"q", a.q},
                {"t", a.t},
                {"c", a.c},
                {"periodic_branch", a.periodic_branch},
                {"value", a.value(base).get_str()},
                {"exponent", a.bound.exponent},
                {"residual", interval_sci(a.bound.residual)},
                {"delta", interval_sci(a.bound.delta)},
                {"truncation", a.bound.digits},
                {"status", to_string(a.bound.status)}};
}

json optional_k(const std::optional<std::size_t>& k) { return k ? json(*k) : json(nullptr); }

// ---- subcommand handlers ----

int cmd_word(Ctx& c) {
    Theta th = theta_of(c);
    SturmianSource x = source_of(c, th);
    Word w = sturmian_prefix(x, c.o.n);
    if (c.g.format == "plot") {
        c.out << "n,letter\n";
        std::vector<int> d = w.digits(x.alphabet());
        for (std::size_t i = 0; i < d.size(); ++i) c.out << i + 1 << ',' << d[i] << '\n';
    } else {
        c.out << word_digits(w, x.alphabet()) << '\n';
    }
    return exit_code::ok;
}

int cmd_variants(Ctx& c) {
    Theta th = theta_of(c);
    Alphabet al = parse_alphabet(c.o);
    StandardWordFamily f(th.cf());
    WordVariants v = word_variants(f, c.o.k);
    emit(c, json{{"k", c.o.k},
                 {"q", f.q(c.o.k).get_str()},
                 {"M", word_digits(f.M(c.o.k), al)},
                 {"minus2", word_digits(v.minus2, al)},
                 {"star", word_digits(v.star, al)},
                 {"prime", word_digits(v.prime, al)}});
    return exit_code::ok;
}

int cmd_decompose(Ctx& c) {
    Theta th = theta_of(c);
    Decomposition d = c.o.closed_form ? characteristic_decomposition(StandardWordFamily(th.cf()), c.o.k)
                                      : decompose(source_of(c, th), c.o.k);
    Alphabet al = parse_alphabet(c.o);
    emit(c, json{{"k", d.k},
                 {"case", d.case_tag},
                 {"d", d.d.get_str()},
                 {"U_length", d.U.size()},
                 {"U", word_digits(d.U, al)},
                 {"w", d.w},
                 {"candidates_matched", d.candidates_matched},
                 {"reconstruction_length", d.reconstruction_length}});
    return exit_code::ok;
}

int cmd_number(Ctx& c) {
    Theta th = theta_of(c);
    SturmianSource x = source_of(c, th);
    Truncation t = evaluate(x, c.o.n);
    emit(c, json{{"digits", t.digits},
                 {"value", t.value.get_str()},
                 {"decimal", dec_down(t.value, c.g.digits)},
                 {"tail", interval_sci(t.tail)},
                 {"tail_bound", t.tail_bound.get_str()},
                 {"enclosure", interval_json(t.enclosure(), c.g.digits)}});
    return exit_code::ok;
}

int cmd_approx(Ctx& c) {
    Theta th = theta_of(c);
    SturmianSource x = source_of(c, th);
    const int b = x.alphabet().base;
    if (c.o.pair) {
        DeltaPair p = approximant_pair(x, c.o.k);
        emit(c, json{{"k", p.k}, {"case", p.dec.case_tag}, {"y", approx_json(p.y, b)},
                     {"y_prime", approx_json(p.y_prime, b)}});
    } else if (x.variant() == Variant::Characteristic) {
        emit(c, approx_json(approximant_characteristic(th, x.alphabet(), c.o.k), b));
    } else {
        emit(c, approx_json(approximant_general(x, c.o.k), b));
    }
    return exit_code::ok;
}

int cmd_schedule(Ctx& c) {
    Theta th = theta_of(c);
    SturmianSource x = source_of(c, th);
    if (c.o.witnesses) {
        emit(c, json{{"kmin", c.o.kmin},
                     {"kmax", c.o.kmax},
                     {"first_in_K", optional_k(first_in_K(x, c.o.kmin, c.o.kmax))},
                     {"growth_witness", optional_k(growth_witness(th.cf(), c.o.kmin, c.o.kmax))},
                     {"long_prefix_witness", optional_k(long_prefix_witness(x, c.o.kmin, c.o.kmax))}});
        return exit_code::ok;
    }
    if (c.o.residuals) {
        bool all = true;
        for (const auto& r : index_set_report(x, c.o.kmin, c.o.kmax)) {
            all = all && r.satisfied;
            emit(c, report_json(r));
        }
        return all ? exit_code::ok : exit_code::check_failed;
    }
    if (c.g.format == "csv") c.out << "k,q,q_next,r,t,long_branch,in_K,case,d\n";
    for (std::size_t k = c.o.kmin; k <= c.o.kmax; ++k) {
        ApproximantSchedule s = schedule(x, k);
        if (c.g.format == "csv") {
            c.out << k << ',' << s.q << ',' << s.q_next << ',' << s.r << ',' << s.t << ',' << s.long_branch << ','
                  << s.in_K << ',' << s.dec.case_tag << ',' << s.dec.d.get_str() << '\n';
        } else {
            emit(c, json{{"k", k}, {"q", s.q}, {"q_next", s.q_next}, {"r", s.r}, {"t", s.t},
                         {"long_branch", s.long_branch}, {"in_K", s.in_K}, {"case", s.dec.case_tag},
                         {"d", s.dec.d.get_str()}, {"U_length", s.dec.U.size()}});
        }
    }
    return exit_code::ok;
}

int cmd_witness(Ctx& c) {
    Theta th = theta_of(c);
    SturmianSource x = source_of(c, th);
    auto w = dependence_witness(x, c.o.bound);
    if (!w) {
        emit(c, json{{"witness", false}, {"bound", c.o.bound}});
        return exit_code::ok;
    }
    json checks = json::array();
    for (const auto& [n, bd] : w->checks) checks.push_back(json{{"N", n}, {"bound", to_scientific(bd, 12)}});
    emit(c, json{{"witness", true},
                 {"r", w->r.get_str()},
                 {"s", w->s.get_str()},
                 {"p", w->relation.p},
                 {"direction", to_string(w->relation.direction)},
                 {"j", w->relation.j.get_str()},
                 {"checks", checks},
                 {"verified", w->verified}});
    return w->verified ? exit_code::ok : exit_code::check_failed;
}

int cmd_subspace(Ctx& c) {
    Theta th = theta_of(c);
    SturmianSource x = source_of(c, th);
    std::size_t k = c.o.k;
    if (!c.given("--k")) {
        auto first = first_in_K(x, 3, c.o.kmax);
        if (!first) throw DomainError("no k in K within [3, " + std::to_string(c.o.kmax) + "]");
        k = *first;
    }
    SubspaceReport r = subspace_residual_report(parse_rational(c.o.alpha0), parse_rational(c.o.alpha1), x, k);
    json quad = json::array();
    for (const auto& v : r.quadruple) quad.push_back(v.get_str());
    emit(c, json{{"k", k},
                 {"pre_form", report_json(r.pre_form)},
                 {"linear_form", report_json(r.linear_form)},
                 {"quadruple", quad},
                 {"height", r.height.get_str()},
                 {"adic_product", r.adic_product.get_str()},
                 {"archimedean_product", interval_sci(r.archimedean_product)}});
    return r.pre_form.satisfied && r.linear_form.satisfied ? exit_code::ok : exit_code::check_failed;
}

int cmd_delta(Ctx& c) {
    CantorParams cp = cantor_of(c);
    Interval d = cp.delta(c.g.digits);
    emit(c, json{{"lambda", cp.lambda().to_string()}, {"digits", c.g.digits}, {"delta", interval_json(d, c.g.digits)}});
    return exit_code::ok;
}

int cmd_phi(Ctx& c) {
    CantorParams cp = cantor_of(c);
    const int d = c.g.digits;
    int modes = c.given("--y") + c.given("--multiple") + c.given("--form");
    if (modes != 1) throw ParseError("phi needs exactly one of --y, --multiple, --form");
    if (c.given("--y")) {
        Interval v = phi(cp, parse_argument(c.o.y, cp.theta()), d);
        emit(c, json{{"y", c.o.y}, {"digits", d}, {"phi", interval_json(v, d)}});
    } else if (c.given("--multiple")) {
        PhiMultiple pm = phi_at_multiples(cp, c.o.multiple, d);
        json j{{"l", pm.l}, {"u", pm.u.to_string()}, {"v", pm.v.to_string()}, {"digits", d},
               {"value", interval_json(pm.value, d)}};
        if (pm.left_limit) j["left_limit"] = interval_json(*pm.left_limit, d);
        emit(c, j);
    } else {
        const QuadraticSurd& lam = cp.lambda();
        if (!lam.is_rational() || lam.a().get_num() != 1) throw DomainError("--form needs lambda = 1/b");
        unsigned long b = lam.a().get_den().get_ui();
        TranscendenceForm t = transcendence_form(b, cp.theta(), c.o.form);
        Interval rec = Interval::point(t.coefficient) * cp.delta(d + 4) + Interval::point(t.A);
        Interval direct = phi(cp, ThetaOffset::multiple(cp.theta(), c.o.form), d + 4);
        emit(c, json{{"m", t.m},
                     {"coefficient", t.coefficient.get_str()},
                     {"A", t.A.get_str()},
                     {"reconstruction", interval_json(rec, d)},
                     {"phi", interval_json(direct, d)},
                     {"difference", interval_sci(rec - direct)}});
    }
    return exit_code::ok;
}

int cmd_gaps(Ctx& c) {
    CantorParams cp = cantor_of(c);
    const int d = c.g.digits;
    auto gaps = cantor_gaps(cp, c.o.L, d);
    if (c.g.format == "csv") {
        c.out << "l,left_decimal,right_decimal,width_exact_num,width_exact_den\n";
        for (const auto& g : gaps) {
            c.out << g.l << ',' << dec_down(g.left.mid(), d) << ',' << dec_down(g.right.mid(), d) << ',';
            if (g.width.is_rational())
                c.out << g.width.a().get_num().get_str() << ',' << g.width.a().get_den().get_str() << '\n';
            else
                c.out << g.width.to_string() << ",\n";
        }
        return exit_code::ok;
    }
    if (c.g.format == "plot") {
        std::vector<const CantorGap*> sorted;
        for (const auto& g : gaps) sorted.push_back(&g);
        std::sort(sorted.begin(), sorted.end(), [](const CantorGap* a, const CantorGap* b) { return a->left.lo < b->left.lo; });
        c.out << "left,right,precision\n";
        for (const auto* g : sorted) c.out << dec_down(g->left.mid(), d) << ',' << dec_down(g->right.mid(), d) << ',' << d << '\n';
        return exit_code::ok;
    }
    QuadraticSurd total;
    for (const auto& g : gaps) {
        total = total + g.width;
        emit(c, json{{"l", g.l}, {"left", interval_json(g.left, d)}, {"right", interval_json(g.right, d)},
                     {"width", g.width.to_string()}});
    }
    bool disjoint = gaps_certified_disjoint(gaps);
    emit(c, json{{"gaps", gaps.size()}, {"total_width", total.to_string()}, {"disjoint", disjoint}});
    return disjoint ? exit_code::ok : exit_code::check_failed;
}

Real point_of(const Ctx& c, const CantorParams& cp) {
    const std::string& z = c.o.z;
    for (const char* prefix : {"gap-left:", "gap-right:"}) {
        std::string p(prefix);
        if (z.rfind(p, 0) != 0) continue;
        long l = std::stol(z.substr(p.size()));
        bool left = p == "gap-left:";
        return Real::from_generator(
            [cp, l, left](long bits) {
                PhiMultiple pm = phi_at_multiples(cp, l, static_cast<int>(bits / 3) + 2);
                return left ? *pm.left_limit : pm.value;
            },
            z);
    }
    if (z.rfind("dec:", 0) == 0) return Real::from_interval(parse_decimal_interval(z.substr(4)), z);
    return Real(parse_rational(z));
}

int cmd_member(Ctx& c) {
    CantorParams cp = cantor_of(c);
    if (c.o.z.empty()) throw ParseError("--z is required");
    MembershipVerdict v = membership(cp, point_of(c, cp), c.g.digits);
    json j{{"z", c.o.z}, {"verdict", to_string(v.kind)}};
    if (v.kind == MembershipKind::InGap) j["l"] = v.l;
    j["digits"] = v.digits;
    j["gaps_checked"] = v.gaps_checked;
    emit(c, j);
    return exit_code::ok;
}

int cmd_orbit(Ctx& c) {
    ContractionParams p = contraction_of(c);
    const int d = c.g.digits;
    if (c.o.figure) {
        Interval delta = eval_enclosure(p.delta, static_cast<long>(d * 3.33) + 16, p.budget);
        Interval lam = enclose(p.lambda, static_cast<long>(d * 3.33) + 16);
        Interval bp = (Interval::point(1) - delta) / lam;
        c.out << "segment,x,f,precision\n";
        for (int seg = 0; seg < 2; ++seg) {
            for (int i = 0; i < 100; ++i) {
                Rational t = ratio(i, 100);
                Interval x = seg == 0 ? bp * Interval::point(t)
                                      : bp + (Interval::point(1) - bp) * Interval::point(t);
                Interval f = lam * x + delta - Interval::point(seg);
                c.out << seg + 1 << ',' << dec_down(x.mid(), d) << ',' << dec_down(f.mid(), d) << ',' << d << '\n';
            }
        }
        c.out << "breakpoint," << dec_down(bp.mid(), d) << ",," << d << '\n';
        return exit_code::ok;
    }
    Orbit o = orbit(p, Real(parse_point(c.o.x0)), c.o.n);
    if (c.g.format == "csv") c.out << "n,x_lo,x_hi,wrapped\n";
    if (c.g.format == "plot") c.out << "n,x,precision\n";
    for (std::size_t i = 0; i < o.points.size(); ++i) {
        const Interval& x = o.points[i];
        bool wrapped = i > 0 && o.wrapped[i - 1];
        if (c.g.format == "csv") {
            c.out << i << ',' << dec_down(x.lo, d) << ',' << dec_up(x.hi, d) << ',' << wrapped << '\n';
        } else if (c.g.format == "plot") {
            c.out << i << ',' << dec_down(x.mid(), d) << ',' << d << '\n';
        } else {
            json j{{"n", i}, {"x", interval_json(x, d)}, {"wrapped", wrapped}};
            if (!o.exact_points.empty()) j["exact"] = o.exact_points[i].to_string();
            emit(c, j);
        }
    }
    if (c.g.format == "json")
        emit(c, json{{"steps", c.o.n}, {"wraps", o.wraps}, {"mode", o.bits ? "dyadic" : "exact"}, {"bits", o.bits}});
    return exit_code::ok;
}

int cmd_rotnum(Ctx& c) {
    ContractionParams p = contraction_of(c);
    if (c.o.n == 0) throw ParseError("--n must be at least 1");
    RotationEstimate r = rotation_number_estimate(p, c.o.n);
    const int d = c.g.digits;
    emit(c, json{{"n", r.n},
                 {"wraps", r.wraps},
                 {"estimate", json{{"lo", r.estimate.lo.get_str()}, {"hi", r.estimate.hi.get_str()}}},
                 {"estimate_decimal", interval_json(r.estimate, d)},
                 {"safe", json{{"lo", r.safe.lo.get_str()}, {"hi", r.safe.hi.get_str()}}},
                 {"exact", r.exact ? json(r.exact->get_str()) : json(nullptr)},
                 {"period", r.period},
                 {"bits", r.bits}});
    return exit_code::ok;
}

int cmd_verify(Ctx& c) {
    SuiteOptions so;
    if (c.given("--theta")) so.theta = c.o.theta;
    so.kmax = c.o.kmax;
    so.digits = c.g.digits;
    so.budget = c.g.budget();
    bool all = true;
    for (const SuiteResult& r : run_suite(c.o.suite, so)) {
        all = all && r.passed();
        emit(c, json{{"suite", r.suite},
                     {"property", r.property},
                     {"checks", r.checks},
                     {"failures", r.failures},
                     {"passed", r.passed()},
                     {"failed", r.failed}});
    }
    emit(c, json{{"suite", c.o.suite}, {"theta", so.theta}, {"kmax", so.kmax}, {"passed", all}});
    return all ? exit_code::ok : exit_code::check_failed;
}

// ---- option wiring ----

void slope_opts(CLI::App* s, Opts& o, bool required = true) {
    auto* t = s->add_option("--theta", o.theta, "Slope: quad:(p+sqrt(d))/q, cf:[a1,a2|b1], dec:x±e");
    if (required) t->required();
}

void alphabet_opts(CLI::App* s, Opts& o) {
    s->add_option("--alphabet", o.alphabet, "Digits for the letters a,b and optionally the base")->capture_default_str();
    s->add_option("--base", o.base, "Base b >= 2; default is the larger digit plus one");
}

void word_opts(CLI::App* s, Opts& o) {
    slope_opts(s, o);
    s->add_option("--rho", o.rho, "Intercept: rat:p/q, mult:j ({j theta}), dec:x±e; omit for the characteristic word");
    s->add_option("--variant", o.variant, "lower, upper or characteristic")
        ->check(CLI::IsMember({"lower", "upper", "characteristic"}));
    alphabet_opts(s, o);
}

void lambda_opts(CLI::App* s, Opts& o) {
    s->add_option("--lambda", o.lambda, "Contraction factor in (0,1): p/q or quad:(p+sqrt(d))/q")->required();
    slope_opts(s, o);
}

using Configure = std::function<void(CLI::App*, Opts&)>;
using Handler = std::function<int(Ctx&)>;

struct Entry {
    CommandInfo info;
    Configure configure;
    Handler handler;
};

const std::vector<Entry>& entries() {
    static const std::vector<Entry> e = {
        {{"word", "sturmian_prefix", "Print the first n letters of a Sturmian word"},
         [](CLI::App* s, Opts& o) {
             word_opts(s, o);
             s->add_option("--n", o.n, "Number of letters")->required();
         },
         cmd_word},
        {{"variants", "word_variants", "Print M_k, M_k^--, M_k^* and M'_k"},
         [](CLI::App* s, Opts& o) {
             slope_opts(s, o);
             alphabet_opts(s, o);
             s->add_option("--k", o.k, "Level k >= 2")->required();
         },
         cmd_variants},
        {{"decompose", "decompose", "Split a Sturmian word as U_k M_k^d M_{k-1} M_k M_k ..."},
         [](CLI::App* s, Opts& o) {
             word_opts(s, o);
             s->add_option("--k", o.k, "Level k >= 2")->required();
             s->add_flag("--closed-form", o.closed_form, "Use the closed form for the characteristic word");
         },
         cmd_decompose},
        {{"number", "evaluate", "Exact value of the first n digits and the tail range"},
         [](CLI::App* s, Opts& o) {
             word_opts(s, o);
             s->add_option("--n", o.n, "Number of digits")->required();
         },
         cmd_number},
        {{"approx", "approximant_general", "Rational approximant at level k with a certified residual"},
         [](CLI::App* s, Opts& o) {
             word_opts(s, o);
             s->add_option("--k", o.k, "Level k >= 3")->required();
             s->add_flag("--pair", o.pair, "Report both approximants y and y'");
         },
         cmd_approx},
        {{"schedule", "schedule", "r_k, t_k and membership in K over a range of k"},
         [](CLI::App* s, Opts& o) {
             word_opts(s, o);
             s->add_option("--kmin", o.kmin, "First level")->capture_default_str();
             s->add_option("--kmax", o.kmax, "Last level")->capture_default_str();
             s->add_flag("--residuals", o.residuals, "Check both approximation inequalities on K");
             s->add_flag("--witnesses", o.witnesses, "Search for the growth and long-prefix witnesses");
         },
         cmd_schedule},
        {{"witness", "dependence_witness", "xi_1 = r + s xi_0 when the word is a shift of c_theta"},
         [](CLI::App* s, Opts& o) {
             word_opts(s, o);
             s->add_option("--bound", o.bound, "Largest |j| searched for rho = {j theta}")->capture_default_str();
         },
         cmd_witness},
        {{"subspace", "subspace_residual_report", "Linear-form residuals at the approximant quadruple"},
         [](CLI::App* s, Opts& o) {
             word_opts(s, o);
             s->add_option("--alpha0", o.alpha0, "Coefficient of xi_0")->capture_default_str();
             s->add_option("--alpha1", o.alpha1, "Coefficient of xi_1")->capture_default_str();
             s->add_option("--k", o.k, "Level in K; default is the first one");
             s->add_option("--kmax", o.kmax, "Search limit for the default level")->capture_default_str();
         },
         cmd_subspace},
        {{"delta", "delta_of", "Enclosure of delta(lambda, theta)"}, lambda_opts, cmd_delta},
        {{"phi", "phi", "phi(y), phi({l theta}) with its left limit, or the transcendence form"},
         [](CLI::App* s, Opts& o) {
             lambda_opts(s, o);
             s->add_option("--y", o.y, "Argument: rat:p/q (any rational), mult:l or dec:x±e");
             s->add_option("--multiple", o.multiple, "Evaluate at {l theta} through the closed formulas");
             s->add_option("--form", o.form, "Coefficient and A_m for lambda = 1/b");
         },
         cmd_phi},
        {{"gaps", "cantor_gaps", "The gaps (phi({l theta}^-), phi({l theta})) for l = 1..L"},
         [](CLI::App* s, Opts& o) {
             lambda_opts(s, o);
             s->add_option("--L", o.L, "Number of gaps")->required();
         },
         cmd_gaps},
        {{"member", "membership", "Cantor-set membership at the --digits resolution"},
         [](CLI::App* s, Opts& o) {
             lambda_opts(s, o);
             s->add_option("--z", o.z, "Point: p/q, dec:x±e, gap-left:l or gap-right:l")->required();
         },
         cmd_member},
        {{"orbit", "orbit", "Iterate f(x) = {lambda x + delta}; --figure samples the graph of f"},
         [](CLI::App* s, Opts& o) {
             s->add_option("--lambda", o.lambda, "Contraction factor in (0,1)")->required();
             s->add_option("--delta", o.delta, "Translation in (1 - lambda, 1): p/q or quad:...");
             slope_opts(s, o, false);
             s->add_option("--x0", o.x0, "Starting point")->capture_default_str();
             s->add_option("--n", o.n, "Number of steps");
             s->add_flag("--figure", o.figure, "Emit the two branches of f sampled at 100 points each");
         },
         cmd_orbit},
        {{"rotnum", "rotation_number_estimate", "Wrap-count estimate of the rotation number"},
         [](CLI::App* s, Opts& o) {
             s->add_option("--lambda", o.lambda, "Contraction factor in (0,1)")->required();
             s->add_option("--delta", o.delta, "Translation in (1 - lambda, 1): p/q or quad:...");
             slope_opts(s, o, false);
             s->add_option("--n", o.n, "Number of steps")->required();
         },
         cmd_rotnum},
        {{"verify", "run_suite", "Run a verification suite; exit 1 on any failed check"},
         [](CLI::App* s, Opts& o) {
             s->add_option("--suite", o.suite, "Suite name")->capture_default_str()->check(CLI::IsMember(suite_names()));
             slope_opts(s, o, false);
             s->add_option("--kmax", o.kmax, "Largest level checked")->capture_default_str();
         },
         cmd_verify},
    };
    return e;
}

std::unique_ptr<CLI::App> build_app(Opts& o, Globals& g) {
    auto app = std::make_unique<CLI::App>("Sturmian words, Sturmian numbers and contracted rotations", "sturmctl");
    app->set_config("--config", "", "Read options from a key = value file");
    app->add_option("--digits", g.digits, "Decimal digits of printed enclosures")
        ->capture_default_str()
        ->check(CLI::Range(1, 100000));
    app->add_option("--max-bits", g.max_bits, "Precision cap in bits")->capture_default_str();
    app->add_option("--initial-bits", g.initial_bits, "Starting precision in bits")->capture_default_str();
    app->add_option("--format", g.format, "json, csv or plot")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "csv", "plot"}));
    app->fallthrough();
    app->require_subcommand(1, 1);
    for (const auto& e : entries()) e.configure(app->add_subcommand(e.info.name, e.info.summary), o);
    return app;
}

}  // namespace

const std::vector<CommandInfo>& command_table() {
    static const std::vector<CommandInfo> t = [] {
        std::vector<CommandInfo> v;
        for (const auto& e : entries()) v.push_back(e.info);
        return v;
    }();
    return t;
}

std::vector<std::string> registered_subcommands() {
    Opts o;
    Globals g;
    auto app = build_app(o, g);
    std::vector<std::string> names;
    for (const CLI::App* s : app->get_subcommands([](CLI::App*) { return true; })) names.push_back(s->get_name());
    return names;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Opts o;
    Globals g;
    auto app = build_app(o, g);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app->parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app->help();
        return exit_code::ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app->help("", CLI::AppFormatMode::All);
        return exit_code::ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app->help("", CLI::AppFormatMode::All);
        return exit_code::usage;
    }

    for (const auto& e : entries()) {
        CLI::App* sub = app->get_subcommand(e.info.name);
        if (!sub->parsed()) continue;
        Ctx ctx{*sub, o, g, out};
        auto fail = [&](const char* kind, const std::string& msg) {
            err << json{{"error", kind}, {"operation", e.info.operation}, {"message", msg}}.dump() << '\n';
        };
        try {
            return e.handler(ctx);
        } catch (const ResolutionExceeded& ex) {
            err << json{{"error", "resolution-exceeded"},
                        {"operation", e.info.operation},
                        {"bits_reached", ex.bits_reached()},
                        {"message", ex.what()}}
                       .dump()
                << '\n';
            return exit_code::resolution;
        } catch (const ParseError& ex) {
            fail("usage", ex.what());
            err << sub->help();
            return exit_code::usage;
        } catch (const DomainError& ex) {
            fail("domain", ex.what());
            return exit_code::usage;
        } catch (const InvariantViolation& ex) {
            fail("invariant", ex.what());
            return exit_code::check_failed;
        } catch (const std::exception& ex) {
            fail("failure", ex.what());
            return exit_code::check_failed;
        }
    }
    err << app->help();
    return exit_code::usage;
}

}  // namespace sturm::cli
