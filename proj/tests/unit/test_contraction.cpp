#include <random>

#include "doctest.h"
#include "sturmian/contraction.hpp"
#include "sturmian/notation.hpp"
#include "sturmian/sturmnum.hpp"

using namespace sturm;

namespace {

const char* kGolden = "quad:(-1+sqrt(5))/2";

// delta straight from its defining series, floors from the slope itself.
Interval delta_oracle(const Rational& lam, const Theta& th, std::size_t K) {
    Rational s = 1, p = 1;
    for (std::size_t k = 1; k <= K; ++k) {
        p *= lam;
        Integer c = th.floor_affine(0, Rational(static_cast<long>(k + 1))) - th.floor_affine(0, Rational(static_cast<long>(k)));
        s += Rational(c) * p;
    }
    Rational head = (1 - lam) * s;
    return {head, head + p * lam};
}

// phi(y) = delta/(1-lambda) + (1-lambda) sum_{k>=0} floor(y - (k+1) theta) lambda^k for
// y = alpha + beta theta; with left = true every floor is replaced by its left limit.
Interval phi_oracle(const Rational& lam, const Theta& th, const Rational& alpha, const Rational& beta, std::size_t K,
                    bool left = false) {
    Interval d = delta_oracle(lam, th, K);
    Rational s = 0, p = 1;
    for (std::size_t k = 0; k <= K; ++k) {
        Rational b = beta - Rational(static_cast<long>(k + 1));
        Integer f = left ? th.ceil_affine(alpha, b) - 1 : th.floor_affine(alpha, b);
        s += Rational(f) * p;
        p *= lam;
    }
    // |floor(y - (k+1)theta)| <= |alpha| + (|beta| + k + 2)
    Rational c = abs_q(alpha) + abs_q(beta) + 2;
    Rational tail = p * (c + Rational(static_cast<long>(K + 1))) / (1 - lam) + p * lam / ((1 - lam) * (1 - lam));
    Interval body = Interval{(1 - lam) * (s - tail), (1 - lam) * (s + tail)};
    return Interval{d.lo / (1 - lam), d.hi / (1 - lam)} + body;
}

bool overlap(const Interval& a, const Interval& b) { return a.lo <= b.hi && b.lo <= a.hi; }

Rational eps(int digits) { return ratio(1, pow_z(10, static_cast<unsigned long>(digits))); }

}  // namespace

TEST_CASE("step and orbit on exact parameters") {
    ContractionParams p(Rational(ratio(1, 2)), Real(ratio(3, 4)));
    StepResult s0 = step(p, Real(0L));
    CHECK(*s0.value.exact_rational() == ratio(3, 4));
    CHECK_FALSE(s0.wrapped);
    StepResult s1 = step(p, Real(ratio(3, 4)));
    CHECK(*s1.value.exact_rational() == ratio(1, 8));
    CHECK(s1.wrapped);
    // breakpoint (1 - delta)/lambda = 1/2 maps to {1} = 0
    CHECK(*p.breakpoint().exact_rational() == ratio(1, 2));
    StepResult sb = step(p, p.breakpoint());
    CHECK(*sb.value.exact_rational() == 0);
    CHECK(sb.wrapped);

    Orbit o0 = orbit(p, Real(0L), 0);
    CHECK(o0.points.size() == 1);
    CHECK(o0.wraps == 0);
    Orbit o = orbit(p, Real(0L), 3);
    REQUIRE(o.exact_points.size() == 4);
    CHECK(o.exact_points[1] == QuadraticSurd(ratio(3, 4)));
    CHECK(o.exact_points[2] == QuadraticSurd(ratio(1, 8)));
    CHECK(o.exact_points[3] == QuadraticSurd(ratio(13, 16)));
    CHECK(o.wraps == 1);

    // dyadic mode agrees with the exact orbit
    Orbit e = orbit(p, Real(0L), 200, OrbitMode::Exact);
    Orbit d = orbit(p, Real(0L), 200, OrbitMode::Dyadic);
    CHECK(e.wraps == d.wraps);
    CHECK(e.wrapped == d.wrapped);
    for (std::size_t i = 0; i <= 200; ++i) CHECK(d.points[i].contains(e.exact_points[i].a()));

    CHECK_THROWS_AS(ContractionParams(Rational(ratio(1, 2)), Real(ratio(1, 4))), DomainError);
    CHECK_THROWS_AS(step(p, Real(1L)), DomainError);
}

TEST_CASE("rotation numbers") {
    ContractionParams p(Rational(ratio(1, 2)), Real(ratio(3, 4)));
    RotationEstimate r = rotation_number_estimate(p, 1000);
    REQUIRE(r.exact.has_value());
    // the cycle 5/6 -> 1/6 -> 5/6 wraps once every two steps
    CHECK(*r.exact == ratio(1, 2));
    CHECK(r.period == 2);
    CHECK(r.estimate.contains(*r.exact));
    CHECK(r.estimate.width() == ratio(2, 1000));
    CHECK(rotation_number_estimate(p, 2000).estimate.width() * 2 == r.estimate.width());

    Theta g = parse_theta(kGolden);
    CantorParams cp(Rational(ratio(1, 2)), g);
    RotationEstimate rg = rotation_number_estimate(cp.contraction(), 10000);
    Interval th = g.enclose(128);
    CHECK(rg.estimate.lo < th.lo);
    CHECK(th.hi < rg.estimate.hi);
    CHECK_FALSE(rg.exact.has_value());
}

TEST_CASE("delta series") {
    Theta g = parse_theta(kGolden);
    Interval d = delta_of(Rational(ratio(1, 2)), g, 30);
    CHECK(d.width() <= eps(30));
    CHECK(d.lo >= parse_rational("0.8540"));
    CHECK(d.hi <= parse_rational("0.8555"));
    CHECK(overlap(d, delta_oracle(ratio(1, 2), g, 12)));
    CHECK(overlap(d, delta_oracle(ratio(1, 2), g, 200)));

    for (const char* t : {kGolden, "quad:sqrt(2)-1", "cf:[1,2,3]", "quad:(3-sqrt(5))/2"}) {
        Theta th = parse_theta(t);
        for (const char* l : {"1/2", "1/3", "9/10", "quad:(3-sqrt(5))/2"}) {
            QuadraticSurd lam = parse_lambda(l);
            Interval dv = delta_of(lam, th, 40);
            Interval one_minus = enclose(QuadraticSurd(Rational(1)) - lam, 200);
            CHECK(dv.lo > one_minus.hi);
            CHECK(dv.hi < 1);
            CHECK(dv.width() <= eps(40));
        }
    }

    // lambda = 1/b: delta = (1 - 1/b)(1 + xi_0) with xi_0 the base-b characteristic number
    for (int b : {2, 3, 10}) {
        Theta th = parse_theta("quad:sqrt(2)-1");
        Truncation xi = evaluate(SturmianSource::characteristic(th, Alphabet{0, 1, b}), 400);
        Interval rel = Interval{1 - ratio(1, b), 1 - ratio(1, b)} * (Interval::point(1) + xi.enclosure());
        CHECK(overlap(delta_of(Rational(ratio(1, b)), th, 60), rel));
    }
    CHECK_THROWS_AS(delta_of(Rational(1), g, 10), DomainError);
}

TEST_CASE("phi against the defining series") {
    Theta g = parse_theta(kGolden);
    CantorParams cp(Rational(ratio(1, 2)), g);
    CHECK(phi(cp, ThetaOffset::rational(g, 0), 40) == Interval::point(0));
    CHECK(phi(cp, ThetaOffset::rational(g, 1), 40) == Interval::point(1));

    std::mt19937_64 rng(7);
    for (int i = 0; i < 30; ++i) {
        long den = std::uniform_int_distribution<long>(2, 997)(rng);
        long num = std::uniform_int_distribution<long>(-2 * den, 3 * den)(rng);
        Rational y = ratio(num, den);
        Interval v = phi(cp, ThetaOffset::rational(g, y), 40);
        CHECK(v.width() <= eps(40));
        CHECK(overlap(v, phi_oracle(ratio(1, 2), g, y, 0, 200)));
    }

    // right value at {l theta}; the left limit only through phi_at_multiples
    for (long l = -10; l <= 10; ++l) {
        if (l == 0) continue;
        ThetaOffset y = ThetaOffset::multiple(g, l);
        const auto& af = *y.affine_form();
        Interval direct = phi(cp, y, 40);
        PhiMultiple pm = phi_at_multiples(cp, l, 40);
        CHECK(overlap(direct, pm.value));
        CHECK(overlap(direct, phi_oracle(ratio(1, 2), g, af.first, af.second, 200)));
        if (l > 0) {
            REQUIRE(pm.left_limit.has_value());
            CHECK(overlap(*pm.left_limit, phi_oracle(ratio(1, 2), g, af.first, af.second, 200, true)));
            Rational w = pow_q(ratio(1, 2), l - 1) * ratio(1, 2);
            CHECK(pm.v - (pm.v - QuadraticSurd(w)) == QuadraticSurd(w));
        } else {
            CHECK_FALSE(pm.left_limit.has_value());
        }
    }
    // l = -1: (1 - 1/lambda) delta / (1 - lambda) + 1/lambda
    PhiMultiple m1 = phi_at_multiples(cp, -1, 40);
    CHECK(m1.u == QuadraticSurd(Rational(-2)));
    CHECK(m1.v == QuadraticSurd(Rational(2)));
    CHECK_THROWS_AS(phi_at_multiples(cp, 0, 10), DomainError);
}

TEST_CASE("property: phi is non-decreasing and satisfies the functional equation") {
    for (auto [l, t] : {std::pair{"1/2", kGolden}, std::pair{"1/3", "quad:sqrt(2)-1"},
                        std::pair{"quad:(3-sqrt(5))/2", "cf:[2,1,3]"}}) {
        Theta th = parse_theta(t);
        CantorParams cp(parse_lambda(l), th);
        Interval prev = phi(cp, ThetaOffset::rational(th, 0), 30);
        for (long i = 1; i <= 200; ++i) {
            Interval cur = phi(cp, ThetaOffset::rational(th, ratio(i, 200)), 30);
            CHECK(prev.lo <= cur.hi);
            prev = cur;
        }
        std::mt19937_64 rng(11);
        for (int i = 0; i < 20; ++i) {
            long den = std::uniform_int_distribution<long>(2, 10007)(rng);
            long num = std::uniform_int_distribution<long>(1, den - 1)(rng);
            Interval r = functional_equation_residual(cp, ThetaOffset::rational(th, ratio(num, den)), 60);
            CHECK(r.magnitude() < eps(40));
        }
    }
}

TEST_CASE("gaps") {
    Theta g = parse_theta(kGolden);
    CantorParams cp(Rational(ratio(1, 2)), g);
    auto gaps = cantor_gaps(cp, 50, 40);
    REQUIRE(gaps.size() == 50);
    QuadraticSurd total;
    for (const auto& gp : gaps) {
        total = total + gp.width;
        CHECK(gp.width == QuadraticSurd(pow_q(ratio(1, 2), static_cast<long>(gp.l))));
        CHECK(gp.left.lo > 0);
        CHECK(gp.right.hi < 1);
    }
    CHECK(total == QuadraticSurd(1 - pow_q(ratio(1, 2), 50)));
    CHECK(gaps_certified_disjoint(gaps));

    QuadraticSurd lam = parse_lambda("quad:(3-sqrt(5))/2");
    auto sg = cantor_gaps(CantorParams(lam, parse_theta("quad:sqrt(2)-1")), 30, 40);
    CHECK(gaps_certified_disjoint(sg));
    QuadraticSurd stotal;
    for (const auto& gp : sg) stotal = stotal + gp.width;
    QuadraticSurd l30(Rational(1));
    for (int i = 0; i < 30; ++i) l30 = l30 * lam;
    CHECK(stotal == QuadraticSurd(Rational(1)) - l30);

    // overlapping intervals are not certified
    auto bad = gaps;
    bad[1].left = bad[0].left;
    bad[1].right = bad[0].right;
    CHECK_FALSE(gaps_certified_disjoint(bad));
}

TEST_CASE("membership") {
    Theta g = parse_theta(kGolden);
    CantorParams cp(Rational(ratio(1, 2)), g);
    CHECK(membership(cp, Real(0L), 20).kind == MembershipKind::InCantor);
    CHECK(membership(cp, Real(1L), 20).kind == MembershipKind::InCantor);

    auto gaps = cantor_gaps(cp, 3, 40);
    Rational mid1 = (gaps[0].left.hi + gaps[0].right.lo) / 2;
    MembershipVerdict v1 = membership(cp, Real(mid1), 20);
    CHECK(v1.kind == MembershipKind::InGap);
    CHECK(v1.l == 1);

    Real endpoint = Real::from_generator(
        [cp](long bits) { return *phi_at_multiples(cp, 3, static_cast<int>(bits / 3) + 2).left_limit; }, "phi3-");
    MembershipVerdict ve = membership(cp, endpoint, 20);
    CHECK(ve.kind == MembershipKind::InCantor);
    CHECK(ve.digits == 20);
    CHECK(ve.gaps_checked > 50);

    Real wide = Real::from_interval({ratio(1, 10), ratio(9, 10)});
    CHECK(membership(cp, wide, 20).kind == MembershipKind::Unresolved);
}

TEST_CASE("transcendence form") {
    Theta g = parse_theta(kGolden);
    TranscendenceForm t1 = transcendence_form(2, g, 1);
    CHECK(t1.coefficient == 1);
    CHECK(t1.A == 0);
    for (unsigned long b : {2UL, 3UL, 10UL}) {
        CantorParams cp(Rational(ratio(1, b)), g);
        for (long m = -5; m <= 5; ++m) {
            if (m == 0) continue;
            TranscendenceForm t = transcendence_form(b, g, m);
            CHECK(t.coefficient != 0);
            PhiMultiple pm = phi_at_multiples(cp, m, 40);
            CHECK(pm.u == QuadraticSurd(t.coefficient));
            CHECK(pm.v == QuadraticSurd(t.A));
            Interval rec = Interval::point(t.coefficient) * cp.delta(45) + Interval::point(t.A);
            Interval direct = phi(cp, ThetaOffset::multiple(g, m), 45);
            CHECK((rec - direct).magnitude() < eps(40));
        }
    }
    CHECK_THROWS_AS(transcendence_form(2, g, 0), DomainError);
    CHECK_THROWS_AS(transcendence_form(1, g, 1), DomainError);
}
