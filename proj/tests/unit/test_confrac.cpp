#include <random>

#include "doctest.h"
#include "sturmian/confrac.hpp"
#include "sturmian/notation.hpp"

using namespace sturm;

namespace {

std::vector<long> as_longs(const std::vector<Integer>& v) {
    std::vector<long> out;
    for (const auto& x : v) out.push_back(x.get_si());
    return out;
}

// Oracle: CF of a very accurate rational approximation of (p + sqrt(d))/q built
// by exact Newton iteration; its leading quotients agree with the surd's.
std::vector<long> oracle_cf(long p, long q, long d, std::size_t n) {
    Rational s(1);
    for (int i = 0; i < 12; ++i) {
        s = (s + Rational(d) / s) / 2;
        s.canonicalize();
    }
    Rational x = (Rational(p) + s) / Rational(q);
    std::vector<long> out;
    x -= Rational(floor_of(x));
    while (out.size() < n) {
        x = 1 / x;
        Integer a = floor_of(x);
        out.push_back(a.get_si());
        x -= Rational(a);
    }
    return out;
}

}  // namespace

TEST_CASE("expand golden conjugate and (3-sqrt5)/2") {
    Theta g = parse_theta("quad:(-1+sqrt(5))/2");
    CHECK(as_longs(expand(g, 6).prefix(6)) == std::vector<long>{1, 1, 1, 1, 1, 1});
    Theta t = parse_theta("quad:(3-sqrt(5))/2");
    CHECK(as_longs(expand(t, 6).prefix(6)) == std::vector<long>{2, 1, 1, 1, 1, 1});
    CHECK(as_longs(expand(t, 6).prefix(6)) == oracle_cf(-3, -2, 5, 6));
    Theta s2 = parse_theta("quad:sqrt(2)-1");
    CHECK(as_longs(expand(s2, 8).prefix(8)) == std::vector<long>(8, 2));
}

TEST_CASE("surd expansion matches the Newton oracle for random surds") {
    std::mt19937_64 rng(5);
    int checked = 0;
    while (checked < 20) {
        long d = std::uniform_int_distribution<long>(2, 200)(rng);
        if (mpz_perfect_square_p(Integer(d).get_mpz_t()) != 0) continue;
        long q = std::uniform_int_distribution<long>(1, 9)(rng);
        long p = std::uniform_int_distribution<long>(-30, 30)(rng);
        QuadraticSurd s = QuadraticSurd::from_pqd(p, q, d);
        Integer f = s.floor();
        s = s - QuadraticSurd(Rational(f));  // move into (0,1)
        p -= f.get_si() * q;
        Theta th = Theta::from_surd(s);
        CHECK(as_longs(expand(th, 10).prefix(10)) == oracle_cf(p, q, d, 10));
        ++checked;
    }
}

TEST_CASE("rational slopes terminate") {
    Theta r = Theta::from_surd(QuadraticSurd(Rational(3, 7)));
    try {
        expand(r, 10);
        FAIL("expected TerminatingExpansion");
    } catch (const TerminatingExpansion& e) {
        CHECK(as_longs(e.quotients()) == std::vector<long>{2, 3});
    }
    CHECK_THROWS_AS(Theta::from_surd(QuadraticSurd::from_pqd(1, 1, 5)), DomainError);
    CHECK_THROWS_AS(parse_theta("dec:1.5±0.1"), DomainError);
}

TEST_CASE("convergent tables") {
    auto ones = ContinuedFraction::periodic({}, {1});
    ConvergentTable t = convergents(ones, 5);
    std::vector<long> q, p;
    for (std::size_t k = 1; k <= 5; ++k) {
        q.push_back(t.q(k).get_si());
        p.push_back(t.p(k).get_si());
    }
    CHECK(q == std::vector<long>{1, 2, 3, 5, 8});
    CHECK(p == std::vector<long>{1, 1, 2, 3, 5});

    auto two = ContinuedFraction::periodic({2}, {1});
    ConvergentTable t2 = convergents(two, 5);
    std::vector<long> q2;
    for (std::size_t k = 1; k <= 5; ++k) q2.push_back(t2.q(k).get_si());
    CHECK(q2 == std::vector<long>{2, 3, 5, 8, 13});
}

TEST_CASE("property: recurrence and determinant identities") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        auto cf = ContinuedFraction::from_function(
            [seed = rng()](std::size_t k) {
                std::mt19937_64 r(seed + k);
                return Integer(static_cast<long>(r() % 9 + 1));
            },
            "random");
        ConvergentTable t = convergents(cf, 30);
        for (std::size_t k = 1; k <= 30; ++k) {
            Integer det = t.p(k) * t.q(k - 1) - t.p(k - 1) * t.q(k);
            CHECK(det == ((k - 1) % 2 == 0 ? 1 : -1));
            if (k >= 2) {
                CHECK(t.q(k) == cf.a(k) * t.q(k - 1) + t.q(k - 2));
                CHECK(t.p(k) == cf.a(k) * t.p(k - 1) + t.p(k - 2));
                CHECK(t.q(k) > t.q(k - 1));
            }
        }
    }
}

TEST_CASE("convergents approximate theta within 1/(q_k q_{k+1})") {
    Theta th = parse_theta("quad:(-3+sqrt(13))/2");
    ConvergentTable t = convergents(expand(th, 21), 21);
    for (std::size_t k = 1; k <= 20; ++k) {
        QuadraticSurd err = *th.exact() - QuadraticSurd(Rational(t.p(k), t.q(k)));
        QuadraticSurd bound(Rational(Integer(1), t.q(k) * t.q(k + 1)));
        CHECK(err.sign() != 0);
        CHECK((err.sign() > 0 ? err : -err) < bound);
    }
}

TEST_CASE("interval-backed slope expansion and enclosure consistency") {
    Theta dec = parse_theta("dec:0.61803398874989484820458683436563811772±1e-38");
    auto cf = expand(dec, 20);
    CHECK(as_longs(cf.prefix(20)) == std::vector<long>(20, 1));
    // eventually the fixed enclosure cannot decide another quotient
    CHECK_THROWS_AS(expand(dec, 200), ResolutionExceeded);
    ConvergentTable t = convergents(cf, 20);
    Interval iv = dec.enclose(256);
    for (std::size_t k = 1; k < 20; ++k) {
        Rational c(t.p(k), t.q(k));
        Rational slack(Integer(1), t.q(k) * t.q(k + 1));
        CHECK(c >= iv.lo - slack);
        CHECK(c <= iv.hi + slack);
    }
}

TEST_CASE("period detection reproduces three further periods") {
    for (const char* text : {"quad:(-1+sqrt(5))/2", "quad:sqrt(2)-1", "quad:(-4+sqrt(19))/3", "quad:(1+sqrt(94))/11"}) {
        Theta th = parse_theta(text);
        auto info = th.cf().period();
        REQUIRE(info.has_value());
        CHECK(info->period >= 1);
        std::size_t start = info->preperiod;
        std::size_t n = start + 4 * info->period;
        auto quotients = th.cf().prefix(n);
        for (std::size_t i = start + info->period; i < n; ++i) {
            CHECK(quotients[i] == quotients[i - info->period]);
        }
        CHECK(th.cf().to_surd() == th.exact());
    }
}

TEST_CASE("periodic lists convert to their exact surds") {
    CHECK(*parse_theta("cf:[1]").cf().to_surd() == QuadraticSurd::from_pqd(-1, 2, 5));
    CHECK(*parse_theta("cf:[2|1]").cf().to_surd() == QuadraticSurd(Rational(3, 2), Rational(-1, 2), 5));
    CHECK(*parse_theta("cf:[2]").cf().to_surd() == QuadraticSurd(Rational(-1), Rational(1), 2));
}

TEST_CASE("stream enclosures bracket the exact value") {
    Theta stream = parse_theta("cf:[1,2|3,1]");
    QuadraticSurd exact = *stream.cf().to_surd();
    for (long bits : {16L, 64L, 200L}) {
        Interval iv = stream.enclose(bits);
        CHECK(QuadraticSurd(iv.lo) < exact);
        CHECK(exact < QuadraticSurd(iv.hi));
        CHECK(iv.width() <= Rational(Integer(4), pow_z(2, static_cast<unsigned long>(bits))));
    }
    // affine floors through the stream agree with exact surd floors
    for (long j = -20; j <= 20; ++j) {
        Rational alpha = ratio(j, 3);
        CHECK(stream.floor_affine(alpha, Rational(j)) ==
              (QuadraticSurd(alpha) + QuadraticSurd(Rational(j)) * exact).floor());
    }
}

TEST_CASE("offsets and notation") {
    Theta g = parse_theta("quad:(-1+sqrt(5))/2");
    ThetaOffset m2 = parse_rho("mult:2", g);
    // {2 theta_g} = 2 theta_g - 1
    CHECK(m2.affine_form()->first == -1);
    CHECK(m2.affine_form()->second == 2);
    ThetaOffset mm = parse_rho("mult:-1", g);
    CHECK(mm.floor_at(1) == 1);  // theta + {-theta} = 1 exactly
    CHECK(mm.ceil_at(1) == 1);
    ThetaOffset half = parse_rho("rat:1/2", g);
    CHECK(half.floor_at(3) == 2);  // 3*0.618 + 0.5 = 2.354
    ThetaOffset dec = parse_rho("dec:0.3±1e-60", g);
    CHECK(dec.floor_at(1) == 0);
    CHECK(dec.floor_at(2) == 1);
    CHECK_THROWS_AS(parse_rho("rat:3/2", g), DomainError);
    CHECK_THROWS_AS(parse_rho("foo:1", g), ParseError);
    CHECK(parse_argument("rat:3/2", g).floor_at(1) == 2);  // 0.618 + 1.5
    CHECK(parse_argument("rat:-1/2", g).floor_at(0) == -1);
    CHECK_THROWS_AS(parse_argument("foo:1", g), ParseError);
    CHECK_THROWS_AS(parse_theta("cf:[0,1]"), ParseError);
    CHECK_THROWS_AS(parse_theta("cf:1,2"), ParseError);
}
