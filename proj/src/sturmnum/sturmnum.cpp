#include "sturmian/sturmnum.hpp"

#include <algorithm>

namespace sturm {

namespace {

std::size_t to_size_checked(const Integer& v) {
    if (v < 0 || !v.fits_ulong_p()) throw DomainError("value " + v.get_str() + " out of range");
    return static_cast<std::size_t>(v.get_ui());
}

Integer bpow(int base, std::size_t e) { return pow_z(Integer(base), static_cast<unsigned long>(e)); }

Interval times(const Interval& x, const Rational& s) {
    Rational a = x.lo * s, b = x.hi * s;
    return a <= b ? Interval{a, b} : Interval{b, a};
}

Interval plus(const Interval& x, const Rational& s) { return {x.lo + s, x.hi + s}; }

Rational min_abs(const Interval& x) {
    if (x.contains_zero()) return 0;
    return std::min(abs_q(x.lo), abs_q(x.hi));
}

// Decides |x| <= scale * b^(-e10/10) (or < when strict) by raising both sides
// to the 10th power, so the fractional exponents stay exact.
Certificate check_bound(const Interval& x, const Rational& scale, const Integer& e10, int base, bool strict) {
    Integer bp = pow_z(Integer(base), e10.get_ui());
    Rational rhs = pow_q(scale, 10);
    auto holds = [&](const Rational& m) {
        Rational lhs = pow_q(m, 10) * Rational(bp);
        return strict ? lhs < rhs : lhs <= rhs;
    };
    if (holds(x.magnitude())) return Certificate::Verified;
    if (!holds(min_abs(x))) return Certificate::Violated;
    return Certificate::Unresolved;
}

int parity_sign(std::size_t k) { return k % 2 == 0 ? 1 : -1; }

// Encloses delta with xi - A = (s c + delta b^(2-q)) / b^E, refining the
// truncation length up to 8 times the initial choice.
DeltaBound certify_delta(const SturmianSource& source, const Rational& A, std::size_t E, std::size_t q,
                         std::size_t k) {
    const Alphabet& al = source.alphabet();
    const Rational bE(bpow(al.base, E));
    const Rational bq2(bpow(al.base, q - 2));
    const Rational sc(parity_sign(k) * al.c());
    const std::size_t n0 = E + q + 4;
    DeltaBound out;
    out.exponent = E;
    for (std::size_t f = 1; f <= 8; f *= 2) {
        Truncation tr = evaluate(source, n0 * f);
        out.digits = n0 * f;
        out.residual = plus(tr.enclosure(), -A);
        out.delta = times(plus(times(out.residual, bE), -sc), bq2);
        if (out.delta.lo > -1 && out.delta.hi < 1) {
            out.status = Certificate::Verified;
            return out;
        }
        if (out.delta.hi <= -1 || out.delta.lo >= 1) {
            out.status = Certificate::Violated;
            return out;
        }
    }
    out.status = Certificate::Unresolved;
    return out;
}

Approximant periodic_tail_approximant(const SturmianSource& source, const StandardWordFamily& fam,
                                      const Decomposition& dec) {
    // y = U M_k M_k ...
    const Alphabet& al = source.alphabet();
    const std::size_t k = dec.k;
    const Word Mk = fam.M(k);
    const std::size_t q = Mk.size();
    Approximant a;
    a.k = k;
    a.q = q;
    a.r = dec.U.size();
    a.t = to_size_checked(dec.d) * q + fam.qs(k - 1);
    a.c = al.c();
    const Integer bq1 = bpow(al.base, q) - 1;
    a.m = digits_to_integer(dec.U, al) * bq1 + digits_to_integer(Mk, al);
    const Rational A = a.value(al.base);
    if (A != eventually_periodic_value(dec.U, Mk, al)) throw InvariantViolation("approximant value mismatch");
    a.bound = certify_delta(source, A, a.r + q + a.t, q, k);
    return a;
}

Approximant purely_periodic_approximant(const SturmianSource& source, const StandardWordFamily& fam,
                                        const Decomposition& dec) {
    // y' = U M'_k M_k M_k ... is purely periodic with period q_k
    const Alphabet& al = source.alphabet();
    const std::size_t k = dec.k;
    const Word Mk = fam.M(k);
    const std::size_t q = Mk.size();
    const WordVariants v = word_variants(fam, k);
    const Word head = dec.U + v.prime;
    Approximant a;
    a.k = k;
    a.q = q;
    a.r = 0;
    a.t = dec.U.size();
    a.c = al.c();
    a.periodic_branch = true;
    const Word period = (head + Mk).prefix(q);
    a.m = digits_to_integer(period, al);
    const Rational A = a.value(al.base);
    if (A != eventually_periodic_value(head, Mk, al)) {
        throw InvariantViolation("U M'_k M_k M_k ... is not purely periodic at k = " + std::to_string(k));
    }
    a.bound = certify_delta(source, A, dec.U.size() + q, q, k);
    return a;
}

}  // namespace

Truncation evaluate(const SturmianSource& source, std::size_t digits) {
    if (digits < 1) throw DomainError("evaluate needs at least one digit");
    const Alphabet& al = source.alphabet();
    Truncation t;
    t.digits = digits;
    const Integer bn = bpow(al.base, digits);
    t.value = ratio(digits_to_integer(source.prefix(digits), al), bn);
    const Rational unit = ratio(1, bn * (al.base - 1));
    t.tail = {unit * std::min(al.sym_a, al.sym_b), unit * std::max(al.sym_a, al.sym_b)};
    t.tail_bound = ratio(1, bn);
    return t;
}

Rational eventually_periodic_value(const Word& preperiod, const Word& period, const Alphabet& al) {
    if (period.empty()) throw DomainError("empty period");
    const Integer bp = bpow(al.base, preperiod.size());
    const Integer bq1 = bpow(al.base, period.size()) - 1;
    return ratio(digits_to_integer(preperiod, al) * bq1 + digits_to_integer(period, al), bp * bq1);
}

ApproximantSchedule schedule(const SturmianSource& source, std::size_t k) {
    ApproximantSchedule s;
    s.k = k;
    s.dec = decompose(source, k);
    StandardWordFamily fam(source.theta().cf());
    s.q = fam.qs(k);
    s.q_next = fam.qs(k + 1);
    const std::size_t u = s.dec.U.size();
    s.long_branch = 10 * s.q_next > 11 * (u + s.q);
    if (s.long_branch) {
        s.r = u;
        s.t = to_size_checked(s.dec.d) * s.q + fam.qs(k - 1);
    } else {
        s.r = 0;
        s.t = u;
    }
    s.in_K = 10 * s.t > 10 * s.q + s.r + s.q && 10 * s.q_next > 11 * (s.r + s.q);
    return s;
}

std::string to_string(Certificate c) {
    switch (c) {
        case Certificate::Verified:
            return "verified";
        case Certificate::Violated:
            return "violated";
        case Certificate::Unresolved:
            return "unresolved";
    }
    return "?";
}

Rational Approximant::value(int base) const {
    return ratio(m, bpow(base, r) * (bpow(base, q) - 1));
}

Approximant approximant_characteristic(const Theta& theta, const Alphabet& alphabet, std::size_t k) {
    if (k < 3) throw DomainError("approximants need k >= 3");
    SturmianSource c = SturmianSource::characteristic(theta, alphabet);
    StandardWordFamily fam(theta.cf());
    const Word Mk = fam.M(k);
    Approximant a;
    a.k = k;
    a.q = Mk.size();
    a.r = 0;
    a.t = fam.qs(k + 1);
    a.c = alphabet.c();
    a.periodic_branch = true;
    a.m = digits_to_integer(Mk, alphabet);
    a.bound = certify_delta(c, a.value(alphabet.base), a.q + a.t, a.q, k);
    return a;
}

Approximant approximant_general(const SturmianSource& source, std::size_t k) {
    if (k < 3) throw DomainError("approximants need k >= 3");
    ApproximantSchedule s = schedule(source, k);
    StandardWordFamily fam(source.theta().cf());
    return s.long_branch ? periodic_tail_approximant(source, fam, s.dec)
                         : purely_periodic_approximant(source, fam, s.dec);
}

DeltaPair approximant_pair(const SturmianSource& source, std::size_t k) {
    if (k < 3) throw DomainError("approximants need k >= 3");
    DeltaPair p;
    p.k = k;
    p.dec = decompose(source, k);
    StandardWordFamily fam(source.theta().cf());
    p.y = periodic_tail_approximant(source, fam, p.dec);
    p.y_prime = purely_periodic_approximant(source, fam, p.dec);
    return p;
}

Rational two_term_eta(const StandardWordFamily& family, const Alphabet& alphabet, const Word& V, std::size_t k) {
    if (k < 3) throw DomainError("two-term residual needs k >= 3");
    const Word Mk = family.M(k);
    const std::size_t q = Mk.size();
    const Word prime = word_variants(family, k).prime;
    const Rational x = eventually_periodic_value(V, Mk, alphabet);
    const Rational y = eventually_periodic_value(V + prime, Mk, alphabet);
    const Rational sc(parity_sign(k) * alphabet.c());
    const Integer bq = bpow(alphabet.base, q);
    return (x - y) * Rational(bpow(alphabet.base, V.size() + 2 * q)) - sc * Rational(bq) - sc;
}

std::vector<ResidualReport> index_set_report(const SturmianSource& source, std::size_t kmin, std::size_t kmax) {
    std::vector<ResidualReport> out;
    const Alphabet& al = source.alphabet();
    for (std::size_t k = std::max<std::size_t>(kmin, 3); k <= kmax; ++k) {
        ApproximantSchedule s = schedule(source, k);
        if (!s.in_K) continue;
        // bound 1 / b^(r + 2q + eps(r+q) - 2)
        const Integer e10 = Integer(10) * (s.r + 2 * s.q - 2) + (s.r + s.q);
        const Rational exponent = ratio(e10, 10);
        Approximant a0 = approximant_characteristic(source.theta(), al, k);
        Approximant ax = approximant_general(source, k);
        for (int which = 0; which < 2; ++which) {
            const Approximant& a = which == 0 ? a0 : ax;
            ResidualReport r;
            r.k = k;
            r.context = which == 0 ? "characteristic-approximant" : "general-approximant";
            r.lhs = a.bound.residual;
            r.rhs_scale = 1;
            r.rhs_exponent = exponent;
            r.status = check_bound(r.lhs, 1, e10, al.base, false);
            r.satisfied = r.status == Certificate::Verified;
            r.precision_digits = a.bound.digits;
            out.push_back(r);
        }
    }
    return out;
}

std::optional<std::size_t> first_in_K(const SturmianSource& source, std::size_t kmin, std::size_t kmax) {
    for (std::size_t k = std::max<std::size_t>(kmin, 3); k <= kmax; ++k) {
        if (schedule(source, k).in_K) return k;
    }
    return std::nullopt;
}

std::optional<std::size_t> growth_witness(const ContinuedFraction& cf, std::size_t kmin, std::size_t kmax) {
    // (1 + 1/10)(2 + 1/10) = 231/100
    for (std::size_t k = kmin; k <= kmax; ++k) {
        if (100 * cf.convergent(k + 1).second > 231 * cf.convergent(k).second) return k;
    }
    return std::nullopt;
}

std::optional<std::size_t> long_prefix_witness(const SturmianSource& source, std::size_t kmin, std::size_t kmax) {
    StandardWordFamily fam(source.theta().cf());
    for (std::size_t k = std::max<std::size_t>(kmin, 3); k <= kmax; ++k) {
        if (10 * decompose(source, k).U.size() > 11 * fam.qs(k)) return k;
    }
    return std::nullopt;
}

std::optional<DependenceWitness> dependence_witness(const SturmianSource& source, std::size_t search_bound) {
    std::optional<ShiftRelation> rel = shift_relation(source, search_bound);
    if (!rel) return std::nullopt;
    const Alphabet& al = source.alphabet();
    SturmianSource c = SturmianSource::characteristic(source.theta(), al);
    DependenceWitness w;
    w.relation = *rel;
    const std::size_t p = rel->p;
    if (rel->direction == ShiftDirection::WordShifted) {
        // x = V c  =>  xi_1 = int(V) / b^p + b^-p xi_0
        w.r = ratio(digits_to_integer(source.prefix(std::max<std::size_t>(p, 1)).prefix(p), al), bpow(al.base, p));
        w.s = ratio(1, bpow(al.base, p));
    } else {
        // c = C x  =>  xi_1 = b^p xi_0 - int(C)
        w.r = -Rational(digits_to_integer(c.prefix(std::max<std::size_t>(p, 1)).prefix(p), al));
        w.s = Rational(bpow(al.base, p));
    }
    w.verified = true;
    for (std::size_t n : {50, 100, 200}) {
        const std::size_t m = n + p + 4;
        Interval x1 = evaluate(source, m).enclosure();
        Interval x0 = evaluate(c, m).enclosure();
        Interval res = plus(x1 - times(x0, w.s), -w.r);
        Rational bound = res.magnitude();
        w.checks.emplace_back(n, bound);
        if (!(bound < ratio(1, bpow(al.base, n)))) w.verified = false;
    }
    return w;
}

std::vector<unsigned long> prime_divisors(unsigned long b) {
    std::vector<unsigned long> out;
    for (unsigned long p = 2; p * p <= b; ++p) {
        if (b % p == 0) {
            out.push_back(p);
            while (b % p == 0) b /= p;
        }
    }
    if (b > 1) out.push_back(b);
    return out;
}

Rational adic_abs(const Integer& x, unsigned long l) {
    if (x == 0) return 0;
    Integer rest = x;
    std::size_t v = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), l) != 0) {
        rest /= l;
        ++v;
    }
    return ratio(1, pow_z(Integer(l), v));
}

SubspaceReport subspace_residual_report(const Rational& alpha0, const Rational& alpha1, const SturmianSource& source,
                                        std::size_t k) {
    if (alpha0 == 0 || alpha1 == 0) throw DomainError("coefficients must be nonzero");
    ApproximantSchedule s = schedule(source, k);
    if (!s.in_K) throw DomainError("k = " + std::to_string(k) + " is not in the index set K");
    const Alphabet& al = source.alphabet();
    const int b = al.base;
    Approximant a0 = approximant_characteristic(source.theta(), al, k);
    Approximant ax = approximant_general(source, k);
    SturmianSource c = SturmianSource::characteristic(source.theta(), al);

    SubspaceReport rep;
    const Integer br = bpow(b, s.r), brq = bpow(b, s.r + s.q), bq1 = bpow(b, s.q) - 1;
    rep.quadruple = {brq, br, a0.m * br, ax.m};
    rep.height = 0;
    for (const auto& x : rep.quadruple) rep.height = std::max(rep.height, Integer(abs(x)));
    rep.adic_product = 1;
    for (unsigned long l : prime_divisors(static_cast<unsigned long>(b))) {
        for (const auto& x : rep.quadruple) rep.adic_product *= adic_abs(x, l);
    }

    const Rational C = Rational(b * b) * (abs_q(alpha0) + abs_q(alpha1));
    const Integer pre_e10 = Integer(10) * (s.r + 2 * s.q) + (s.r + s.q);
    const Integer lin_e10 = Integer(10) * s.q + (s.r + s.q);
    const Rational approx = alpha0 * ratio(a0.m, bq1) + alpha1 * ratio(ax.m, br * bq1);
    const std::size_t n0 = 2 * (s.r + 2 * s.q + s.t) + 16;

    for (std::size_t f = 1; f <= 8; f *= 2) {
        const std::size_t n = n0 * f;
        Interval form = times(evaluate(c, n).enclosure(), alpha0) + times(evaluate(source, n).enclosure(), alpha1);
        Interval pre = plus(form, -approx);
        Interval lin = plus(times(form, Rational(brq - br)), -(alpha0 * Rational(rep.quadruple[2]) +
                                                               alpha1 * Rational(rep.quadruple[3])));
        rep.pre_form = ResidualReport{k, "linear-form-scaled", pre, C, ratio(pre_e10, 10), false,
                                      check_bound(pre, C, pre_e10, b, true), n};
        rep.linear_form = ResidualReport{k, "linear-form", lin, C, ratio(lin_e10, 10), false,
                                         check_bound(lin, C, lin_e10, b, true), n};
        rep.pre_form.satisfied = rep.pre_form.status == Certificate::Verified;
        rep.linear_form.satisfied = rep.linear_form.status == Certificate::Verified;
        Interval absl = lin.contains_zero() ? Interval{0, lin.magnitude()} : Interval{min_abs(lin), lin.magnitude()};
        Rational prod = Rational(rep.quadruple[0]) * Rational(rep.quadruple[1]) * abs_q(Rational(rep.quadruple[2]));
        rep.archimedean_product = times(absl, prod);
        if (rep.pre_form.status != Certificate::Unresolved && rep.linear_form.status != Certificate::Unresolved) break;
    }
    return rep;
}

}  // namespace sturm
