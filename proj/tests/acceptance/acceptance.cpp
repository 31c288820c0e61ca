// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Every tolerance and time limit is fixed below.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sturmian/contraction.hpp"
#include "sturmian/notation.hpp"
#include "sturmian/sturmnum.hpp"

using namespace sturm;

namespace {

constexpr double kLimitWordIdentities = 10;
constexpr double kLimitCrossOracle = 30;
constexpr double kLimitDecomposition = 120;
constexpr double kLimitApproximants = 300;
constexpr double kLimitWitness = 60;
constexpr double kLimitLinearForm = 120;
constexpr double kLimitFunctionalEq = 120;
constexpr double kLimitRotation = 30;

constexpr std::size_t kCrossOracleMaxQ = 10'000'000;  // random surds above this q_12 are redrawn
constexpr int kFeqDigits = 200;
constexpr int kFeqExponent = 40;   // residual < 10^-40
constexpr int kWitnessExponent = 50;  // residual < 10^-50 at N = 200
constexpr int kEndpointExponent = 40;
constexpr int kFormExponent = 40;
constexpr int kMonotoneMaxDigits = 6400;

const char* const kGolden = "quad:(-1+sqrt(5))/2";
const std::vector<std::string> kThetas = {kGolden, "quad:(3-sqrt(5))/2", "quad:sqrt(2)-1"};
const std::vector<std::string> kRhos = {"rat:0", "rat:1/2", "rat:1/3", "mult:2", "dec:0.3±1e-60"};
const std::vector<std::string> kPeriodicCfs = {"cf:[2]", "cf:[1,2]", "cf:[3]", "cf:[1,1,2]", "cf:[2,1,3]"};

Rational ten_to_minus(int e) { return ratio(1, pow_z(10, e)); }

struct Check {
    std::size_t total = 0;
    std::size_t failed = 0;
    std::string first_failure;

    void operator()(bool ok, const std::string& what) {
        ++total;
        if (!ok && failed++ == 0) first_failure = what;
    }
};

struct Criterion {
    int id;
    std::string name;
    double limit_s;  // 0: no time limit
    std::function<std::string(Check&)> body;  // returns a short detail string
};

// ---------------------------------------------------------------- words

Word power(const Word& w, std::size_t times) {
    WordBuilder b;
    b.append(w, times);
    return b.build();
}

Word swap_last_two(const Word& w) {
    WordBuilder b;
    b.append(w.drop_last(2));
    b.push(w[w.size() - 1]);
    b.push(w[w.size() - 2]);
    return b.build();
}

std::string word_identities(Check& check) {
    std::mt19937_64 rng(20240901);
    std::uniform_int_distribution<int> quotient(1, 5);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Integer> a;
        for (int i = 0; i < 16; ++i) a.emplace_back(quotient(rng));
        StandardWordFamily f(ContinuedFraction::periodic(a, {Integer(1)}));
        // q_k from the recurrence, independently of the family
        std::vector<Integer> q = {1, a[0]};
        for (std::size_t k = 2; k <= 14; ++k) q.push_back(a[k - 1] * q[k - 1] + q[k - 2]);
        std::string tag = "cf#" + std::to_string(trial);
        for (std::size_t k = 3; k <= 14; ++k) {
            Word mk = f.M(k), mk1 = f.M(k - 1), mk2 = f.M(k - 2);
            std::string at = tag + " k=" + std::to_string(k);
            check(Integer(static_cast<unsigned long>(mk.size())) == q[k], at + " |M_k| = q_k");
            check(mk == power(mk1, a[k - 1].get_ui()) + mk2, at + " recurrence");
            Word prime = power(mk1, a[k - 1].get_ui() - 1) + mk2;
            check(mk1 + mk.drop_last(2) == mk + mk1.drop_last(2), at + " commutation");
            check(mk == mk1 + prime, at + " M_k = M_{k-1} M'_k");
            check(mk == prime + swap_last_two(mk1), at + " M_k = M'_k M*_{k-1}");
            WordVariants v = word_variants(f, k);
            check(v.prime == prime && v.minus2 == mk.drop_last(2) && v.star == swap_last_two(mk), at + " variants");
        }
    }
    return "20 CFs, k = 3..14";
}

// floor(n * theta) for a surd theta = (A + B sqrt(d)) / Q, Q > 0, by integer square roots.
class SurdFloor {
  public:
    explicit SurdFloor(const QuadraticSurd& t) : d_(t.d()) {
        Q_ = lcm_z(t.a().get_den(), t.b().get_den());
        A_ = Rational(t.a() * Q_).get_num();
        B_ = Rational(t.b() * Q_).get_num();
    }

    Integer operator()(unsigned long n) {
        mpz_mul_ui(x_.get_mpz_t(), B_.get_mpz_t(), n);
        x_ *= x_;
        x_ *= d_;
        mpz_sqrt(s_.get_mpz_t(), x_.get_mpz_t());
        mpz_mul_ui(t_.get_mpz_t(), A_.get_mpz_t(), n);
        if (B_ > 0)
            t_ += s_;
        else
            t_ -= s_ + 1;
        mpz_fdiv_q(t_.get_mpz_t(), t_.get_mpz_t(), Q_.get_mpz_t());
        return t_;
    }

  private:
    static Integer lcm_z(const Integer& x, const Integer& y) {
        Integer r;
        mpz_lcm(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
        return r;
    }

    Integer A_, B_, Q_, d_, x_, s_, t_;
};

std::string cross_oracle(Check& check) {
    std::vector<Theta> thetas = {parse_theta(kGolden), parse_theta("quad:(3-sqrt(5))/2")};
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> quotient(1, 4), len(0, 2);
    std::size_t redrawn = 0;
    while (thetas.size() < 12) {
        std::vector<Integer> pre, period;
        for (int i = len(rng); i > 0; --i) pre.emplace_back(quotient(rng));
        for (int i = len(rng) + 1; i > 0; --i) period.emplace_back(quotient(rng));
        ContinuedFraction cf = ContinuedFraction::periodic(pre, period);
        if (cf.convergent(12).second > Integer(static_cast<unsigned long>(kCrossOracleMaxQ))) {
            ++redrawn;
            continue;
        }
        thetas.push_back(Theta::from_surd(*cf.to_surd()));
    }
    std::size_t letters = 0;
    for (const Theta& th : thetas) {
        StandardWordFamily f(th.cf());
        Word m12 = f.M(12);
        SturmianSource c = SturmianSource::characteristic(th);
        Word generated = sturmian_prefix(c, m12.size());
        SurdFloor fl(*th.exact());
        Integer prev = fl(1);
        bool same = true;
        for (std::size_t n = 1; n <= m12.size() && same; ++n) {
            Integer next = fl(n + 1);
            int letter = next == prev ? 0 : 1;
            same = m12.letter(n) == letter && generated.letter(n) == letter;
            prev = next;
        }
        check(same, th.label());
        letters += m12.size();
    }
    return std::to_string(thetas.size()) + " slopes, " + std::to_string(letters) + " letters, " +
           std::to_string(redrawn) + " redrawn";
}

// ---------------------------------------------------------------- Sturmian numbers

std::string decomposition_grid(Check& check) {
    for (const auto& ts : kThetas) {
        Theta th = parse_theta(ts);
        StandardWordFamily f(th.cf());
        for (const auto& rs : kRhos) {
            SturmianSource x(th, parse_rho(rs, th), Variant::Lower);
            for (std::size_t k = 3; k <= 12; ++k) {
                std::string at = ts + " " + rs + " k=" + std::to_string(k);
                Decomposition d = decompose(x, k);
                Integer a = f.cf().a(k + 1);
                check(d.candidates_matched == 1, at + " unique");
                check(d.d == a || d.d == a + 1, at + " exponent");
                Word rebuilt = d.U + power(f.M(k), d.d.get_ui()) + f.M(k - 1) + f.M(k) + f.M(k);
                check(rebuilt == sturmian_prefix(x, rebuilt.size()), at + " reconstruction");
            }
        }
        SturmianSource c = SturmianSource::characteristic(th);
        for (std::size_t k = 3; k <= 12; ++k) {
            Decomposition g = decompose(c, k);
            Decomposition closed = characteristic_decomposition(f, k);
            check(g.U == f.M(k + 1) && g.U == closed.U && g.d == closed.d,
                  ts + " characteristic k=" + std::to_string(k));
        }
    }
    return "3 slopes x 5 intercepts x k = 3..12";
}

std::string approximants(Check& check) {
    std::size_t verified = 0, unresolved = 0;
    for (const auto& ts : kThetas) {
        Theta th = parse_theta(ts);
        for (int b : {2, 3, 10}) {
            for (const auto& rs : kRhos) {
                SturmianSource x(th, parse_rho(rs, th), Variant::Lower, Alphabet{0, 1, b});
                for (std::size_t k = 3; k <= 12; ++k) {
                    if (!schedule(x, k).in_K) continue;
                    DeltaPair p = approximant_pair(x, k);
                    std::string at = ts + " " + rs + " b=" + std::to_string(b) + " k=" + std::to_string(k);
                    for (const Approximant* ap : {&p.y, &p.y_prime}) {
                        if (ap->bound.status == Certificate::Verified) ++verified;
                        if (ap->bound.status == Certificate::Unresolved) ++unresolved;
                        check(ap->bound.status == Certificate::Verified, at);
                    }
                }
            }
        }
    }
    return std::to_string(verified) + " bounds verified, " + std::to_string(unresolved) + " unresolved";
}

std::string index_set(Check& check) {
    std::vector<std::string> cfs = kThetas;
    cfs.insert(cfs.end(), kPeriodicCfs.begin(), kPeriodicCfs.end());
    std::size_t reports = 0;
    for (const auto& ts : cfs) {
        Theta th = parse_theta(ts);
        for (const auto& rs : kRhos) {
            SturmianSource x(th, parse_rho(rs, th), Variant::Lower);
            check(first_in_K(x, 3, 40).has_value(), ts + " " + rs + " K empty on [3,40]");
            for (const auto& rep : index_set_report(x, 3, 12)) {
                ++reports;
                check(rep.satisfied, ts + " " + rs + " " + rep.context + " k=" + std::to_string(rep.k));
            }
        }
    }
    return std::to_string(cfs.size()) + " CFs, " + std::to_string(reports) + " inequalities";
}

std::string growth_proxies(Check& check) {
    std::string detail;
    for (const auto& ts : kPeriodicCfs) {
        auto k = growth_witness(parse_theta(ts).cf(), 3, 40);
        check(k.has_value(), ts + " growth");
        detail += ts + ":" + (k ? std::to_string(*k) : std::string("-")) + " ";
    }
    Theta g = parse_theta(kGolden);
    for (const char* rs : {"rat:1/2", "rat:1/3", "dec:0.3±1e-60"}) {
        auto k = long_prefix_witness(SturmianSource(g, parse_rho(rs, g), Variant::Lower), 3, 40);
        check(k.has_value(), std::string("all-ones ") + rs + " long prefix");
        detail += std::string(rs) + ":" + (k ? std::to_string(*k) : std::string("-")) + " ";
    }
    return detail;
}

std::string witness(Check& check) {
    Theta g = parse_theta(kGolden);
    const Rational tol = ten_to_minus(kWitnessExponent);
    for (int j = -8; j <= 8; ++j) {
        SturmianSource x(g, ThetaOffset::multiple(g, Integer(j)), Variant::Lower);
        auto w = dependence_witness(x, 50);
        std::string at = "j=" + std::to_string(j);
        check(w.has_value() && w->verified, at + " witness");
        if (!w) continue;
        bool at200 = false;
        for (const auto& [n, bound] : w->checks)
            if (n == 200) at200 = bound < tol;
        check(at200, at + " residual at N=200");
    }
    for (const char* rs : {"rat:1/2", "rat:1/3"})
        check(!dependence_witness(SturmianSource(g, parse_rho(rs, g), Variant::Lower), 50).has_value(),
              std::string(rs) + " has no witness");
    return "17 multiples, 2 rational intercepts";
}

std::string linear_form(Check& check) {
    Theta g = parse_theta(kGolden);
    SturmianSource x(g, parse_rho("rat:1/2", g), Variant::Lower);
    std::size_t levels = 0;
    for (std::size_t k = 3; k <= 10; ++k) {
        if (!schedule(x, k).in_K) continue;
        ++levels;
        for (auto [a0, a1] : {std::pair<long, long>{1, 1}, {2, -3}}) {
            SubspaceReport r = subspace_residual_report(Rational(a0), Rational(a1), x, k);
            std::string at = "(" + std::to_string(a0) + "," + std::to_string(a1) + ") k=" + std::to_string(k);
            check(r.pre_form.satisfied && r.pre_form.status == Certificate::Verified, at + " scaled residual");
            check(r.linear_form.satisfied && r.linear_form.status == Certificate::Verified, at + " linear form");
        }
    }
    check(levels > 0, "K meets [3,10]");
    return std::to_string(levels) + " levels in K";
}

// ---------------------------------------------------------------- contraction

std::string functional_equation(Check& check) {
    const Rational tol = ten_to_minus(kFeqExponent);
    std::mt19937_64 rng(99);
    Rational worst = 0;
    for (auto [lam, ts] : {std::pair<Rational, std::string>{ratio(1, 2), kGolden}, {ratio(1, 3), "quad:sqrt(2)-1"}}) {
        Theta th = parse_theta(ts);
        CantorParams cp(lam, th);
        for (int i = 0; i < 100; ++i) {
            long den = std::uniform_int_distribution<long>(2, 1'000'000)(rng);
            long num = std::uniform_int_distribution<long>(1, den - 1)(rng);
            Rational y = ratio(num, den);
            Rational res = functional_equation_residual(cp, ThetaOffset::rational(th, y), kFeqDigits).magnitude();
            if (res > worst) worst = res;
            check(res < tol, ts + " y=" + y.get_str());
        }
    }
    return "200 points, worst residual " + to_scientific(worst, 3);
}

std::string endpoints(Check& check) {
    Theta g = parse_theta(kGolden);
    const Rational lam = ratio(1, 2);
    CantorParams cp(lam, g);
    const Rational tol = ten_to_minus(kEndpointExponent);
    Interval p0 = phi(cp, ThetaOffset::rational(g, 0), 50);
    Interval p1 = phi(cp, ThetaOffset::rational(g, 1), 50);
    check(p0.magnitude() < tol, "phi(0)");
    check((p1 - Interval::point(1)).magnitude() < tol, "phi(1)");
    // Neighbouring values can agree to ~lambda^2000, so each step is certified
    // at the lowest precision that separates the two enclosures.
    int max_digits = 50;
    for (long i = 1; i <= 1000; ++i) {
        ThetaOffset y0 = ThetaOffset::rational(g, ratio(i - 1, 1000));
        ThetaOffset y1 = ThetaOffset::rational(g, ratio(i, 1000));
        bool certified = false;
        for (int digits = 50; digits <= kMonotoneMaxDigits && !certified; digits *= 2) {
            certified = phi(cp, y0, digits).hi <= phi(cp, y1, digits).lo;
            max_digits = std::max(max_digits, digits);
        }
        check(certified, "monotone at " + std::to_string(i) + "/1000");
    }
    auto gaps = cantor_gaps(cp, 50, 50);
    QuadraticSurd total;
    for (const auto& gp : gaps) {
        total = total + gp.width;
        QuadraticSurd expect = QuadraticSurd(pow_q(lam, static_cast<long>(gp.l) - 1) * (1 - lam));
        check(gp.width == expect, "width l=" + std::to_string(gp.l));
        Interval measured = gp.right - gp.left;
        check(measured.contains(expect.a()), "endpoints l=" + std::to_string(gp.l));
    }
    check(total == QuadraticSurd(1 - pow_q(lam, 50)), "telescoping");
    check(gaps_certified_disjoint(gaps), "disjoint");
    return "1000 grid steps certified, up to " + std::to_string(max_digits) + " digits";
}

std::string transcendence(Check& check) {
    Theta g = parse_theta(kGolden);
    CantorParams cp(Rational(ratio(1, 2)), g);
    const Rational tol = ten_to_minus(kFormExponent);
    Interval delta = cp.delta(60);
    for (long m = -5; m <= 5; ++m) {
        if (m == 0) continue;
        TranscendenceForm t = transcendence_form(2, g, m);
        std::string at = "m=" + std::to_string(m);
        check(t.coefficient != 0, at + " coefficient");
        Interval lhs = Interval::point(t.coefficient) * delta + Interval::point(t.A);
        Interval rhs = phi(cp, ThetaOffset::multiple(g, Integer(m)), 60);
        check((lhs - rhs).magnitude() < tol, at);
    }
    return "m = -5..5 without 0";
}

std::string rotation(Check& check) {
    Theta g = parse_theta(kGolden);
    CantorParams cp(Rational(ratio(1, 2)), g);
    RotationEstimate r = rotation_number_estimate(cp.contraction(), 100'000);
    Interval th = g.enclose(256);
    check(th.subset_of(r.estimate), "estimate contains theta");
    return "wraps " + std::to_string(r.wraps) + ", " + std::to_string(r.bits) + " bits, [" +
           to_decimal(r.estimate.lo, 6) + ", " + to_decimal(r.estimate.hi, 6) + "]";
}

// ---------------------------------------------------------------- CLI

std::string capture(const std::string& command) {
    std::string out;
    FILE* p = popen(command.c_str(), "r");
    if (!p) return out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
    pclose(p);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string cli_determinism(Check& check) {
    const std::string tool = STURMCTL_PATH;
    const std::string dir = STURMIAN_GOLDEN_DIR;
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"word.txt", "word --theta 'cf:[1]' --n 8 --alphabet 0,1"},
        {"verify_word_identities.txt", "verify --suite word-identities --theta 'quad:(-1+sqrt(5))/2' --kmax 12"},
        {"gaps.csv", "gaps --lambda 1/2 --theta 'cf:[1]' --L 5 --format csv"},
    };
    for (const auto& [file, args] : cases) {
        std::string first = capture(tool + " " + args);
        std::string second = capture(tool + " " + args);
        std::string golden = read_file(dir + "/" + file);
        check(!golden.empty(), file + " golden missing");
        check(first == golden && second == golden, file);
    }
    return "3 examples, 2 runs each";
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "word identities", kLimitWordIdentities, word_identities},
        {2, "cross-oracle word generation", kLimitCrossOracle, cross_oracle},
        {3, "decomposition grid", kLimitDecomposition, decomposition_grid},
        {4, "approximant residual bounds", kLimitApproximants, approximants},
        {5, "index set and approximation inequalities", 0, index_set},
        {6, "growth and long-prefix witnesses", 0, growth_proxies},
        {7, "dependence witness", kLimitWitness, witness},
        {8, "linear-form residuals", kLimitLinearForm, linear_form},
        {9, "functional equation", kLimitFunctionalEq, functional_equation},
        {10, "endpoints, monotonicity and gaps", 0, endpoints},
        {11, "transcendence form", 0, transcendence},
        {12, "rotation number round trip", kLimitRotation, rotation},
        {13, "CLI determinism", 0, cli_determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Check check;
        std::string detail;
        auto start = std::chrono::steady_clock::now();
        try {
            detail = c.body(check);
        } catch (const std::exception& e) {
            check(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool slow = c.limit_s > 0 && secs > c.limit_s;
        bool ok = check.failed == 0 && check.total > 0 && !slow;
        if (!ok) ++failures;
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(2);
        line << (ok ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << "  (" << check.total - check.failed << "/"
             << check.total << " checks, " << secs << " s";
        if (c.limit_s > 0) line << " of " << c.limit_s << " s";
        line << ")";
        if (!detail.empty()) line << "  " << detail;
        if (check.failed) line << "  first failure: " << check.first_failure;
        if (slow) line << "  over time limit";
        std::cout << line.str() << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
