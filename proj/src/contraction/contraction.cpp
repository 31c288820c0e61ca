#include "sturmian/contraction.hpp"

#include <algorithm>
#include <cmath>

#include "sturmian/sturmword.hpp"

namespace sturm {

namespace {

long digits_to_bits(int digits) { return static_cast<long>(std::ceil(digits * 3.3219280948873623)) + 8; }

Rational ten_to_minus(int digits) { return ratio(1, pow_z(10, static_cast<unsigned long>(digits))); }

void require_unit_lambda(const QuadraticSurd& lambda) {
    if (lambda.sign() <= 0 || lambda >= QuadraticSurd(Rational(1))) throw DomainError("lambda must lie in (0,1)");
}

// A rational upper bound for lambda that is still below 1.
Rational lambda_upper(const QuadraticSurd& lambda) {
    if (lambda.is_rational()) return lambda.a();
    for (long bits = 64;; bits *= 2) {
        Rational hi = enclose(lambda, bits).hi;
        if (hi < 1) return hi;
    }
}

// Smallest K with lam^(K+1) / (1 - lam)^div <= target, lam an upper bound for lambda.
std::size_t terms_for(const Rational& lam, const Rational& target, bool divide) {
    double l = lam.get_d();
    double t = std::log(target.get_d() > 0 ? target.get_d() : 1e-300);
    double est = divide ? (t + std::log(1 - l)) / std::log(l) : t / std::log(l);
    std::size_t K = est > 1 ? static_cast<std::size_t>(est) : 1;
    auto ok = [&](std::size_t k) {
        Rational p = pow_q(lam, static_cast<long>(k + 1));
        return divide ? p <= target * (1 - lam) : p <= target;
    };
    while (K > 1 && ok(K - 1)) --K;
    while (!ok(K)) ++K;
    return K;
}

// sum_{k=1}^{K} e_k lambda^k with e[k-1] = e_k, exactly.
QuadraticSurd power_sum(const QuadraticSurd& lambda, const std::vector<int>& e) {
    if (lambda.is_rational()) {
        const Rational& l = lambda.a();
        if (l.get_num().fits_ulong_p() && l.get_den().fits_ulong_p()) {
            // sum e_k p^k q^(K-k) / q^K with one small multiplication per term
            const unsigned long p = l.get_num().get_ui(), q = l.get_den().get_ui();
            Integer N = 0, pk = 1;
            for (int ek : e) {
                N *= q;
                pk *= p;
                if (ek > 0) N += pk;
                if (ek < 0) N -= pk;
            }
            return ratio(N, pow_z(Integer(q), static_cast<unsigned long>(e.size())));
        }
        Rational s = 0;
        for (std::size_t i = e.size(); i-- > 0;) s = (s + e[i]) * l;
        return s;
    }
    QuadraticSurd s;
    for (std::size_t i = e.size(); i-- > 0;) s = (s + QuadraticSurd(Rational(e[i]))) * lambda;
    return s;
}

Interval enclose_surd(const QuadraticSurd& s, long bits) {
    if (s.is_rational()) return Interval::point(s.a());
    return enclose(s, bits);
}

QuadraticSurd surd_pow(const QuadraticSurd& x, long e) {
    QuadraticSurd base = e < 0 ? QuadraticSurd(Rational(1)) / x : x;
    unsigned long n = static_cast<unsigned long>(e < 0 ? -e : e);
    QuadraticSurd out(Rational(1));
    while (n) {
        if (n & 1U) out = out * base;
        base = base * base;
        n >>= 1U;
    }
    return out;
}

std::vector<int> letters_of(const Word& w) {
    std::vector<int> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i];
    return out;
}

// floor(k theta) - floor((k-1) theta)
Integer lower_letter(const Theta& theta, long k) {
    return theta.floor_affine(0, Rational(k)) - theta.floor_affine(0, Rational(k - 1));
}

PhiMultiple multiple_form(const QuadraticSurd& lambda, const Theta& theta, long l) {
    if (l == 0) throw DomainError("phi_at_multiples needs l != 0");
    const QuadraticSurd one(Rational(1));
    PhiMultiple out;
    out.l = l;
    if (l > 0) {
        out.u = (one - surd_pow(lambda, l)) / (one - lambda);
        QuadraticSurd s;
        for (long k = 1; k <= l; ++k) s = s + surd_pow(lambda, l - k) * QuadraticSurd(Rational(lower_letter(theta, k)));
        out.v = -s;
    } else {
        long L = -l;
        out.u = (one - surd_pow(lambda, -L)) / (one - lambda);
        QuadraticSurd s = surd_pow(lambda, -L);
        for (long k = 1; k <= L - 1; ++k)
            s = s + surd_pow(lambda, k - L) * QuadraticSurd(Rational(lower_letter(theta, k + 1)));
        out.v = s;
    }
    return out;
}

void fill_multiple(PhiMultiple& pm, const QuadraticSurd& lambda, const Interval& delta, long bits) {
    pm.value = enclose_surd(pm.u, bits) * delta + enclose_surd(pm.v, bits);
    if (pm.l > 0) {
        QuadraticSurd width = surd_pow(lambda, pm.l - 1) * (QuadraticSurd(Rational(1)) - lambda);
        pm.left_limit = enclose_surd(pm.u, bits) * delta + enclose_surd(pm.v - width, bits);
    }
}

// Digits of delta needed so that u * delta is known to 10^-digits.
int delta_digits_for(const QuadraticSurd& u, int digits) {
    double mag = std::abs(u.a().get_d()) + std::abs(u.b().get_d()) * std::sqrt(u.d().get_d());
    return digits + static_cast<int>(std::ceil(std::log10(mag + 1))) + 2;
}

struct DyadicRun {
    std::vector<Interval> points;
    std::vector<bool> wrapped;
    std::size_t wraps = 0;
    long bits = 0;
};

// Fixed-point orbit with numerators over 2^bits; restarts at twice the
// precision whenever a branch cannot be decided.
DyadicRun dyadic_orbit(const ContractionParams& p, const Real& x0, std::size_t n, bool keep_points) {
    for (long bits = std::max(128L, p.budget.initial_bits);; bits *= 2) {
        if (bits > p.budget.max_bits) throw ResolutionExceeded("orbit branch", bits / 2);
        auto scaled = [bits](const Interval& iv, Integer& lo, Integer& hi) {
            Interval r = iv.rounded(bits);
            Rational slo = r.lo * Rational(pow_z(2, static_cast<unsigned long>(bits)));
            Rational shi = r.hi * Rational(pow_z(2, static_cast<unsigned long>(bits)));
            lo = floor_of(slo);
            hi = ceil_of(shi);
        };
        Integer Llo, Lhi, Dlo, Dhi, xlo, xhi;
        scaled(enclose_surd(p.lambda, bits + 8), Llo, Lhi);
        scaled(eval_enclosure(p.delta, bits + 8, p.budget), Dlo, Dhi);
        scaled(eval_enclosure(x0, bits + 8, p.budget), xlo, xhi);
        if (xlo < 0) xlo = 0;
        if (Llo < 0) Llo = 0;
        const Integer one = pow_z(2, static_cast<unsigned long>(bits));

        DyadicRun run;
        run.bits = bits;
        run.wrapped.reserve(n);
        if (keep_points) run.points.push_back({ratio(xlo, one), ratio(xhi, one)});
        bool ambiguous = false;
        Integer ylo, yhi;
        // a small rational lambda = lp/lq scales exactly without a full-width product
        const bool small = p.lambda.is_rational() && p.lambda.a().get_num().fits_ulong_p() &&
                           p.lambda.a().get_den().fits_ulong_p();
        const unsigned long lp = small ? p.lambda.a().get_num().get_ui() : 0;
        const unsigned long lq = small ? p.lambda.a().get_den().get_ui() : 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (small) {
                mpz_mul_ui(ylo.get_mpz_t(), xlo.get_mpz_t(), lp);
                mpz_fdiv_q_ui(ylo.get_mpz_t(), ylo.get_mpz_t(), lq);
                mpz_mul_ui(yhi.get_mpz_t(), xhi.get_mpz_t(), lp);
                mpz_cdiv_q_ui(yhi.get_mpz_t(), yhi.get_mpz_t(), lq);
            } else {
                ylo = Llo * xlo;
                mpz_fdiv_q_2exp(ylo.get_mpz_t(), ylo.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
                yhi = Lhi * xhi;
                mpz_cdiv_q_2exp(yhi.get_mpz_t(), yhi.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
            }
            ylo += Dlo;
            yhi += Dhi;
            bool wrap;
            if (yhi < one) {
                wrap = false;
            } else if (ylo >= one) {
                wrap = true;
                ylo -= one;
                yhi -= one;
            } else {
                ambiguous = true;
                break;
            }
            xlo = ylo;
            xhi = yhi;
            run.wrapped.push_back(wrap);
            run.wraps += wrap ? 1 : 0;
            if (keep_points) run.points.push_back({ratio(xlo, one), ratio(xhi, one)});
        }
        if (!ambiguous) return run;
    }
}

// Looks for a period P of the tail of the itinerary and confirms it by
// computing the periodic point exactly and following it for P steps.
std::optional<std::pair<std::size_t, std::size_t>> verified_cycle(const QuadraticSurd& lambda, const QuadraticSurd& delta,
                                                                  const std::vector<bool>& itin) {
    const std::size_t n = itin.size();
    const QuadraticSurd one(Rational(1));
    for (std::size_t P = 1; 3 * P <= n && P <= 1024; ++P) {
        bool periodic = true;
        for (std::size_t i = n - 3 * P; i + P < n && periodic; ++i) periodic = itin[i] == itin[i + P];
        if (!periodic) continue;
        QuadraticSurd A = one, C;
        std::size_t w = 0;
        for (std::size_t i = n - P; i < n; ++i) {
            A = A * lambda;
            C = C * lambda + delta - (itin[i] ? one : QuadraticSurd());
            w += itin[i] ? 1 : 0;
        }
        QuadraticSurd x = C / (one - A);
        const QuadraticSurd start = x;
        if (x.sign() < 0 || x >= one) continue;
        bool ok = true;
        for (std::size_t i = n - P; i < n && ok; ++i) {
            QuadraticSurd v = lambda * x + delta;
            bool wrap = v >= one;
            ok = wrap == itin[i];
            x = wrap ? v - one : v;
        }
        if (ok && x == start) return std::make_pair(P, w);
    }
    return std::nullopt;
}

}  // namespace

ContractionParams::ContractionParams(QuadraticSurd lambda_, Real delta_, const PrecisionBudget& budget_)
    : lambda(std::move(lambda_)), delta(std::move(delta_)), budget(budget_) {
    require_unit_lambda(lambda);
    budget.validate();
    if (certified_compare(delta, Real(QuadraticSurd(Rational(1)) - lambda), budget) <= 0 ||
        certified_compare(delta, Real(1L), budget) >= 0)
        throw DomainError("delta must lie in (1 - lambda, 1)");
}

Real ContractionParams::breakpoint() const { return (Real(1L) - delta) / Real(lambda); }

StepResult step(const ContractionParams& params, const Real& x) {
    if (x.exact()) {
        const QuadraticSurd& e = *x.exact();
        if (e.sign() < 0 || e >= QuadraticSurd(Rational(1))) throw DomainError("step needs 0 <= x < 1");
    }
    Real v = Real(params.lambda) * x + params.delta;
    StepResult out;
    out.wrapped = certified_compare(v, Real(1L), params.budget) >= 0;
    out.value = out.wrapped ? v - Real(1L) : v;
    return out;
}

Orbit orbit(const ContractionParams& params, const Real& x0, std::size_t n, OrbitMode mode) {
    const bool exact_ok = params.delta.exact().has_value() && x0.exact().has_value();
    if (mode == OrbitMode::Exact && !exact_ok) throw DomainError("exact orbit needs exact delta and x0");
    if (mode == OrbitMode::Auto) mode = exact_ok && n <= 2048 ? OrbitMode::Exact : OrbitMode::Dyadic;

    Orbit out;
    if (mode == OrbitMode::Exact) {
        const QuadraticSurd one(Rational(1));
        const QuadraticSurd& d = *params.delta.exact();
        QuadraticSurd x = *x0.exact();
        if (x.sign() < 0 || x >= one) throw DomainError("orbit needs 0 <= x0 < 1");
        out.exact_points.push_back(x);
        out.points.push_back(enclose_surd(x, 256));
        for (std::size_t i = 0; i < n; ++i) {
            QuadraticSurd v = params.lambda * x + d;
            bool wrap = v >= one;
            x = wrap ? v - one : v;
            out.wrapped.push_back(wrap);
            out.wraps += wrap ? 1 : 0;
            out.exact_points.push_back(x);
            out.points.push_back(enclose_surd(x, 256));
        }
        return out;
    }
    DyadicRun run = dyadic_orbit(params, x0, n, true);
    out.points = std::move(run.points);
    out.wrapped = std::move(run.wrapped);
    out.wraps = run.wraps;
    out.bits = run.bits;
    return out;
}

RotationEstimate rotation_number_estimate(const ContractionParams& params, std::size_t n) {
    if (n == 0) throw DomainError("rotation_number_estimate needs n >= 1");
    DyadicRun run = dyadic_orbit(params, Real(0L), n, false);
    RotationEstimate out;
    out.n = n;
    out.wraps = run.wraps;
    out.bits = run.bits;
    const Rational w(static_cast<unsigned long>(run.wraps));
    const Rational nn(static_cast<unsigned long>(n));
    out.estimate = {(w - 1) / nn, (w + 1) / nn};
    out.safe = {(w - 2) / nn, (w + 2) / nn};
    if (params.delta.exact()) {
        if (auto cyc = verified_cycle(params.lambda, *params.delta.exact(), run.wrapped)) {
            out.period = cyc->first;
            out.exact = ratio(static_cast<unsigned long>(cyc->second), static_cast<unsigned long>(cyc->first));
        }
    }
    return out;
}

Interval delta_of(const QuadraticSurd& lambda, const Theta& theta, int digits) {
    require_unit_lambda(lambda);
    if (digits < 1) throw DomainError("delta_of needs digits >= 1");
    const Rational target = ten_to_minus(digits);
    const Rational lam = lambda_upper(lambda);
    std::size_t K = terms_for(lam, target / 2, false);
    std::vector<int> c = letters_of(SturmianSource::characteristic(theta).prefix(K));
    const QuadraticSurd one(Rational(1));
    QuadraticSurd D = (one - lambda) * (one + power_sum(lambda, c));
    Interval head = enclose_surd(D, digits_to_bits(digits) + 2);
    return head + Interval{0, pow_q(lam, static_cast<long>(K + 1))};
}

CantorParams::CantorParams(QuadraticSurd lambda, Theta theta) : lambda_(std::move(lambda)), theta_(std::move(theta)) {
    require_unit_lambda(lambda_);
}

Real CantorParams::delta_real() const {
    QuadraticSurd lambda = lambda_;
    Theta theta = theta_;
    return Real::from_generator(
        [lambda, theta](long bits) {
            int digits = static_cast<int>(static_cast<double>(bits) * 0.30103) + 2;
            return delta_of(lambda, theta, digits);
        },
        "delta(" + lambda_.to_string() + ", " + theta_.label() + ")");
}

ContractionParams CantorParams::contraction(const PrecisionBudget& budget) const {
    return ContractionParams(lambda_, delta_real(), budget);
}

Interval phi(const CantorParams& params, const ThetaOffset& y, int digits) {
    if (digits < 1) throw DomainError("phi needs digits >= 1");
    if (const auto& af = y.affine_form(); af && af->second == 0 && is_integer(af->first))
        return Interval::point(af->first);

    const Theta& theta = params.theta();
    const QuadraticSurd& lambda = params.lambda();
    const Rational target = ten_to_minus(digits);
    const Rational lam = lambda_upper(lambda);
    std::size_t K = terms_for(lam, target / 2, true);

    Word c = SturmianSource::characteristic(theta).prefix(K);
    Word x = SturmianSource(theta, y.negated().shifted(1), Variant::Upper).prefix(K);
    std::vector<int> e(K);
    for (std::size_t i = 0; i < K; ++i) e[i] = c[i] - x[i];

    Integer fl = y.shifted(-1).floor_at(0);
    QuadraticSurd body = QuadraticSurd(Rational(fl + 1)) + power_sum(lambda, e);
    Rational tail = pow_q(lam, static_cast<long>(K + 1)) / (1 - lam);
    return enclose_surd(body, digits_to_bits(digits) + 2) + Interval{-tail, tail};
}

PhiMultiple phi_at_multiples(const CantorParams& params, long l, int digits) {
    PhiMultiple pm = multiple_form(params.lambda(), params.theta(), l);
    Interval delta = params.delta(delta_digits_for(pm.u, digits));
    fill_multiple(pm, params.lambda(), delta, digits_to_bits(digits) + 4);
    return pm;
}

std::vector<CantorGap> cantor_gaps(const CantorParams& params, std::size_t L, int digits) {
    if (L < 1) throw DomainError("cantor_gaps needs L >= 1");
    const QuadraticSurd& lambda = params.lambda();
    const QuadraticSurd one(Rational(1));
    // 0 < u_l < 1 / (1 - lambda) for every l >= 1
    Interval delta = params.delta(delta_digits_for(one / (one - lambda), digits));
    std::vector<CantorGap> gaps;
    gaps.reserve(L);
    QuadraticSurd width = one - lambda;
    for (std::size_t l = 1; l <= L; ++l) {
        PhiMultiple pm = multiple_form(lambda, params.theta(), static_cast<long>(l));
        fill_multiple(pm, lambda, delta, digits_to_bits(digits) + 4);
        gaps.push_back({l, *pm.left_limit, pm.value, width});
        width = width * lambda;
    }
    return gaps;
}

bool gaps_certified_disjoint(const std::vector<CantorGap>& gaps) {
    for (const auto& g : gaps)
        if (!(g.left.lo > 0 && g.right.hi < 1 && g.left.hi < g.right.lo)) return false;
    for (std::size_t i = 0; i < gaps.size(); ++i)
        for (std::size_t j = i + 1; j < gaps.size(); ++j) {
            const auto& a = gaps[i];
            const auto& b = gaps[j];
            if (!(a.right.hi < b.left.lo || b.right.hi < a.left.lo)) return false;
        }
    return true;
}

std::string to_string(MembershipKind k) {
    switch (k) {
        case MembershipKind::InCantor: return "in-cantor";
        case MembershipKind::InGap: return "in-gap";
        case MembershipKind::Unresolved: return "unresolved";
    }
    return "unresolved";
}

MembershipVerdict membership(const CantorParams& params, const Real& z, int digits) {
    MembershipVerdict out;
    out.digits = digits;
    if (digits < 1) return out;
    const Rational eps = ten_to_minus(digits);
    Interval zi;
    try {
        zi = eval_enclosure(z, digits_to_bits(digits) + 4);
    } catch (const Error&) {
        zi = z.enclose(digits_to_bits(digits) + 4);
    }
    if (zi.hi < 0 || zi.lo > 1) return out;

    // widths lambda^(l-1)(1-lambda) >= eps
    const QuadraticSurd& lambda = params.lambda();
    const QuadraticSurd one(Rational(1));
    std::size_t L = 0;
    Rational w = enclose_surd(one - lambda, 64).lo;
    const Rational lam = lambda_upper(lambda);
    while (w >= eps) {
        ++L;
        w *= lam;
    }
    if (L > 0) {
        for (const CantorGap& g : cantor_gaps(params, L, digits + 3)) {
            ++out.gaps_checked;
            if (g.left.hi < zi.lo && zi.hi < g.right.lo) {
                out.kind = MembershipKind::InGap;
                out.l = g.l;
                return out;
            }
        }
    }
    out.kind = zi.width() <= eps ? MembershipKind::InCantor : MembershipKind::Unresolved;
    return out;
}

TranscendenceForm transcendence_form(unsigned long b, const Theta& theta, long m) {
    if (b < 2) throw DomainError("transcendence_form needs b >= 2");
    if (m == 0) throw DomainError("transcendence_form needs m != 0");
    const Rational B(b);
    TranscendenceForm out;
    out.m = m;
    out.coefficient = (1 - pow_q(B, -m)) / (1 - pow_q(B, -1));
    Rational A = 0;
    if (m > 0) {
        for (long k = 1; k <= m; ++k) A -= pow_q(B, k - m) * Rational(lower_letter(theta, k));
    } else {
        A = pow_q(B, -m);
        for (long k = 1; k <= -m - 1; ++k) A += pow_q(B, -k - m) * Rational(lower_letter(theta, k + 1));
    }
    out.A = A;
    return out;
}

Interval functional_equation_residual(const CantorParams& params, const ThetaOffset& y, int digits) {
    const int work = digits + 3;
    Interval ahead = phi(params, y.shifted(1), work);
    Interval here = phi(params, y, work);
    // phi maps [n, n+1) into [n, n+1), so the floor of phi(y) is the floor of y
    // even when phi(y) is astronomically close to an integer.
    Integer fl = y.floor_at(0);
    Interval frac = here - Interval::point(Rational(fl));
    if (frac.lo < 0) frac.lo = 0;
    if (frac.hi > 1) frac.hi = 1;
    Interval lam = enclose_surd(params.lambda(), digits_to_bits(work) + 4);
    Interval image = lam * frac + params.delta(work);
    Interval r = ahead - image;
    Integer nearest = floor_of(r.mid() + ratio(1, 2));
    return r - Interval::point(Rational(nearest));
}

}  // namespace sturm
