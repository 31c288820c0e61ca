#include <random>

#include "sturmian/cli.hpp"
#include "sturmian/contraction.hpp"
#include "sturmian/notation.hpp"
#include "sturmian/sturmnum.hpp"

namespace sturm::cli {

namespace {

const std::vector<std::string> kRhos = {"rat:0", "rat:1/2", "rat:1/3", "mult:2", "dec:0.3±1e-60"};

class Tally {
  public:
    explicit Tally(SuiteResult& r) : r_(r) {}

    void check(bool ok, const std::string& what) {
        ++r_.checks;
        if (!ok) {
            ++r_.failures;
            if (r_.failed.size() < 5) r_.failed.push_back(what);
        }
    }

    // Runs f and counts a library error as a failure of the named case.
    template <class F>
    void guarded(const std::string& what, F&& f) {
        try {
            f();
        } catch (const ResolutionExceeded&) {
            throw;
        } catch (const Error& e) {
            check(false, what + ": " + e.what());
        }
    }

  private:
    SuiteResult& r_;
};

SuiteResult named(std::string suite, std::string property) {
    SuiteResult r;
    r.suite = std::move(suite);
    r.property = std::move(property);
    return r;
}

std::string at(const std::string& label, std::size_t k) { return label + " k=" + std::to_string(k); }

SuiteResult word_identities(const SuiteOptions& o) {
    SuiteResult r = named("word-identities", "|M_k| = q_k, M_{k-1}M_k^{--} = M_kM_{k-1}^{--}, M_k = M_{k-1}M'_k = M'_kM^*_{k-1}");
    Tally t(r);
    Theta th = parse_theta(o.theta, o.budget);
    StandardWordFamily f(th.cf());
    for (std::size_t k = 3; k <= o.kmax; ++k) {
        t.guarded(at("word", k), [&] {
            WordVariants vk = word_variants(f, k);
            WordVariants vk1 = word_variants(f, k - 1);
            t.check(f.M(k).size() == f.qs(k), at("length", k));
            t.check(f.M(k - 1) + vk.minus2 == f.M(k) + vk1.minus2, at("commutation", k));
            t.check(f.M(k) == f.M(k - 1) + vk.prime, at("left factorization", k));
            t.check(f.M(k) == vk.prime + vk1.star, at("right factorization", k));
        });
    }
    return r;
}

SuiteResult decomposition(const SuiteOptions& o) {
    SuiteResult r = named("decomposition", "unique U_k with x = U_k M_k^d M_{k-1} M_k M_k ..., d in {a_{k+1}, a_{k+1}+1}");
    Tally t(r);
    Theta th = parse_theta(o.theta, o.budget);
    StandardWordFamily f(th.cf());
    for (const auto& rho : kRhos) {
        SturmianSource x(th, parse_rho(rho, th), Variant::Lower);
        for (std::size_t k = 3; k <= o.kmax; ++k) {
            t.guarded(at(rho, k), [&] {
                Decomposition d = decompose(x, k);
                Integer a = f.cf().a(k + 1);
                t.check(d.candidates_matched == 1, at(rho + " unique", k));
                t.check(d.d == a || d.d == a + 1, at(rho + " exponent", k));
            });
        }
    }
    SturmianSource c = SturmianSource::characteristic(th);
    for (std::size_t k = 3; k <= o.kmax; ++k) {
        t.guarded(at("characteristic", k), [&] {
            Decomposition g = decompose(c, k);
            Decomposition cf = characteristic_decomposition(f, k);
            t.check(g.U == cf.U && g.d == cf.d && g.U == f.M(k + 1), at("closed form", k));
        });
    }
    return r;
}

SuiteResult approximants(const SuiteOptions& o) {
    SuiteResult r = named("approximants", "|delta_k| < 1 and |delta'_k| < 1 at every k in K");
    Tally t(r);
    Theta th = parse_theta(o.theta, o.budget);
    for (int b : {2, 3, 10}) {
        for (const auto& rho : kRhos) {
            SturmianSource x(th, parse_rho(rho, th), Variant::Lower, Alphabet{0, 1, b});
            for (std::size_t k = 3; k <= o.kmax; ++k) {
                std::string what = "b=" + std::to_string(b) + " " + at(rho, k);
                t.guarded(what, [&] {
                    if (!schedule(x, k).in_K) return;
                    DeltaPair p = approximant_pair(x, k);
                    t.check(p.y.bound.status == Certificate::Verified, what + " y");
                    t.check(p.y_prime.bound.status == Certificate::Verified, what + " y'");
                });
            }
        }
    }
    return r;
}

SuiteResult index_set(const SuiteOptions& o) {
    SuiteResult r = named("index-set", "K meets [3,40] and both approximation inequalities hold on K");
    Tally t(r);
    Theta th = parse_theta(o.theta, o.budget);
    for (const auto& rho : kRhos) {
        SturmianSource x(th, parse_rho(rho, th), Variant::Lower);
        t.guarded(rho, [&] {
            t.check(first_in_K(x, 3, 40).has_value(), rho + " K empty");
            for (const auto& rep : index_set_report(x, 3, o.kmax))
                t.check(rep.satisfied, at(rho + " " + rep.context, rep.k));
        });
    }
    return r;
}

SuiteResult linear_form(const SuiteOptions& o) {
    SuiteResult r = named("linear-form", "scaled residual and linear-form bounds at the approximant quadruple");
    Tally t(r);
    Theta th = parse_theta(o.theta, o.budget);
    SturmianSource x(th, parse_rho("rat:1/2", th), Variant::Lower);
    const std::vector<std::pair<Rational, Rational>> alphas = {{1, 1}, {2, -3}};
    for (std::size_t k = 3; k <= std::min<std::size_t>(o.kmax, 10); ++k) {
        t.guarded(at("schedule", k), [&] {
            if (!schedule(x, k).in_K) return;
            for (const auto& [a0, a1] : alphas) {
                std::string what = at("alpha=(" + a0.get_str() + "," + a1.get_str() + ")", k);
                SubspaceReport rep = subspace_residual_report(a0, a1, x, k);
                t.check(rep.pre_form.satisfied, what + " scaled");
                t.check(rep.linear_form.satisfied, what + " form");
            }
        });
    }
    return r;
}

SuiteResult phi_feq(const SuiteOptions& o) {
    SuiteResult r = named("phi-feq", "|{phi(y+theta)} - f({phi(y)})| < 10^-40 at random rational y");
    Tally t(r);
    Theta th = parse_theta(o.theta, o.budget);
    CantorParams cp(Rational(ratio(1, 2)), th);
    std::mt19937_64 rng(2024);
    const Rational tol = ratio(1, pow_z(10, 40));
    for (int i = 0; i < 20; ++i) {
        long den = std::uniform_int_distribution<long>(2, 100000)(rng);
        long num = std::uniform_int_distribution<long>(1, den - 1)(rng);
        Rational y = ratio(num, den);
        t.guarded("y=" + y.get_str(), [&] {
            Interval res = functional_equation_residual(cp, ThetaOffset::rational(th, y), std::max(o.digits, 60));
            t.check(res.magnitude() < tol, "y=" + y.get_str());
        });
    }
    return r;
}

SuiteResult gaps(const SuiteOptions& o) {
    SuiteResult r = named("gaps", "phi(0) = 0, phi(1) = 1, monotone, widths telescope to 1 - lambda^L, gaps disjoint");
    Tally t(r);
    Theta th = parse_theta(o.theta, o.budget);
    const Rational lam = ratio(1, 2);
    CantorParams cp(Rational(lam), th);
    t.check(phi(cp, ThetaOffset::rational(th, 0), 40) == Interval::point(0), "phi(0)");
    t.check(phi(cp, ThetaOffset::rational(th, 1), 40) == Interval::point(1), "phi(1)");
    for (long i = 1; i <= 100; ++i) {
        ThetaOffset y0 = ThetaOffset::rational(th, ratio(i - 1, 100));
        ThetaOffset y1 = ThetaOffset::rational(th, ratio(i, 100));
        bool certified = false;
        for (int digits = 40; digits <= 6400 && !certified; digits *= 2)
            certified = phi(cp, y0, digits).hi <= phi(cp, y1, digits).lo;
        t.check(certified, "monotone at " + std::to_string(i) + "/100");
    }
    auto gs = cantor_gaps(cp, 50, 40);
    QuadraticSurd total;
    for (const auto& g : gs) total = total + g.width;
    t.check(total == QuadraticSurd(1 - pow_q(lam, 50)), "telescoping");
    t.check(gaps_certified_disjoint(gs), "disjoint");
    return r;
}

using Runner = SuiteResult (*)(const SuiteOptions&);

const std::vector<std::pair<std::string, Runner>>& runners() {
    static const std::vector<std::pair<std::string, Runner>> r = {
        {"word-identities", word_identities}, {"decomposition", decomposition}, {"approximants", approximants},
        {"index-set", index_set},             {"linear-form", linear_form},     {"phi-feq", phi_feq},
        {"gaps", gaps},
    };
    return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [name, fn] : runners()) n.push_back(name);
        n.push_back("all");
        return n;
    }();
    return names;
}

std::vector<SuiteResult> run_suite(const std::string& name, const SuiteOptions& options) {
    std::vector<SuiteResult> out;
    for (const auto& [n, fn] : runners())
        if (name == "all" || name == n) out.push_back(fn(options));
    if (out.empty()) throw DomainError("unknown suite '" + name + "'");
    return out;
}

}  // namespace sturm::cli
