#include <map>
#include <mutex>

#include "sturmian/confrac.hpp"

namespace sturm {

struct ContinuedFraction::Impl {
    std::mutex mutex;
    Producer producer;
    std::function<std::optional<PeriodInfo>()> period_probe;
    std::optional<QuadraticSurd> exact_value;
    std::vector<Integer> quotients;
    // convergents[k] = (p_k, q_k), k >= 0
    std::vector<std::pair<Integer, Integer>> convergents{{Integer(0), Integer(1)}};
    bool terminated = false;
    std::string label;

    std::size_t ensure_locked(std::size_t n) {
        while (quotients.size() < n && !terminated) {
            std::optional<Integer> next = producer();
            if (!next) {
                terminated = true;
                break;
            }
            if (*next < 1) throw DomainError("partial quotient " + next->get_str() + " is not positive");
            quotients.push_back(std::move(*next));
        }
        return std::min(n, quotients.size());
    }
};

ContinuedFraction::ContinuedFraction(Producer producer, std::string label) : impl_(std::make_shared<Impl>()) {
    impl_->producer = std::move(producer);
    impl_->label = std::move(label);
}

ContinuedFraction ContinuedFraction::periodic(std::vector<Integer> preperiod, std::vector<Integer> period) {
    if (period.empty()) throw DomainError("periodic continued fraction needs a non-empty period");
    for (const auto& v : preperiod) {
        if (v < 1) throw DomainError("partial quotients must be positive");
    }
    for (const auto& v : period) {
        if (v < 1) throw DomainError("partial quotients must be positive");
    }
    std::string label = "cf:[";
    for (std::size_t i = 0; i < preperiod.size(); ++i) label += (i ? "," : "") + preperiod[i].get_str();
    if (!preperiod.empty()) label += "|";
    for (std::size_t i = 0; i < period.size(); ++i) label += (i ? "," : "") + period[i].get_str();
    label += "]";
    auto state = std::make_shared<std::size_t>(0);
    PeriodInfo info{preperiod.size(), period.size()};
    ContinuedFraction cf(
        [state, preperiod, period]() -> std::optional<Integer> {
            std::size_t i = (*state)++;
            if (i < preperiod.size()) return preperiod[i];
            return period[(i - preperiod.size()) % period.size()];
        },
        label);
    cf.impl_->period_probe = [info]() { return std::optional<PeriodInfo>(info); };
    return cf;
}

namespace {

struct SurdState {
    Integer P, Q, D, root;  // x_k = (P + sqrt(D)) / Q, root = isqrt(D)
    std::map<std::pair<Integer, Integer>, std::size_t> seen;
    std::size_t index = 0;  // number of quotients produced so far
    std::optional<PeriodInfo> period;

    Integer floor_current() const {
        Integer r;
        if (Q > 0) {
            Integer num = P + root;
            mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), Q.get_mpz_t());
        } else {
            Integer num = P + root + 1;
            mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), Q.get_mpz_t());
        }
        return r;
    }

    void advance(const Integer& a) {
        P = a * Q - P;
        Integer num = D - P * P;
        mpz_divexact(Q.get_mpz_t(), num.get_mpz_t(), Q.get_mpz_t());
    }
};

}  // namespace

ContinuedFraction ContinuedFraction::from_surd(const QuadraticSurd& theta) {
    if (theta.is_rational()) {
        // finite expansion of a rational value
        auto rest = std::make_shared<Rational>(theta.a());
        {
            Integer a0 = floor_of(*rest);
            *rest -= a0;
        }
        return ContinuedFraction(
            [rest]() -> std::optional<Integer> {
                if (*rest == 0) return std::nullopt;
                Rational inv = 1 / *rest;
                Integer a = floor_of(inv);
                *rest = inv - a;
                return a;
            },
            theta.to_string());
    }
    const Rational& a = theta.a();
    const Rational& b = theta.b();
    Integer L;
    mpz_lcm(L.get_mpz_t(), a.get_den_mpz_t(), b.get_den_mpz_t());
    Integer A = a.get_num() * (L / a.get_den());
    Integer B = b.get_num() * (L / b.get_den());
    auto st = std::make_shared<SurdState>();
    st->D = B * B * theta.d();
    if (B > 0) {
        st->P = A;
        st->Q = L;
    } else {
        st->P = -A;
        st->Q = -L;
    }
    Integer rem = st->D - st->P * st->P;
    if (mpz_divisible_p(rem.get_mpz_t(), st->Q.get_mpz_t()) == 0) {
        Integer absq = abs(st->Q);
        st->P *= absq;
        st->D *= st->Q * st->Q;
        st->Q *= absq;
    }
    mpz_sqrt(st->root.get_mpz_t(), st->D.get_mpz_t());
    st->advance(st->floor_current());  // drop a_0
    ContinuedFraction cf(
        [st]() -> std::optional<Integer> {
            auto key = std::make_pair(st->P, st->Q);
            if (!st->period) {
                auto [it, inserted] = st->seen.emplace(key, st->index);
                if (!inserted) st->period = PeriodInfo{it->second, st->index - it->second};
            }
            Integer a = st->floor_current();
            st->advance(a);
            ++st->index;
            return a;
        },
        theta.to_string());
    cf.impl_->exact_value = theta;
    cf.impl_->period_probe = [st]() { return st->period; };
    return cf;
}

ContinuedFraction ContinuedFraction::from_real(const Real& theta, const PrecisionBudget& budget) {
    if (theta.exact()) return from_surd(*theta.exact());
    struct State {
        Real x;
        PrecisionBudget budget;
        long bits;
        Integer p1{0}, q1{1}, p2{1}, q2{0};  // (p_{m-1}, q_{m-1}), (p_{m-2}, q_{m-2})
    };
    auto st = std::make_shared<State>(State{theta, budget, budget.initial_bits});
    return ContinuedFraction(
        [st]() -> std::optional<Integer> {
            for (;;) {
                Interval iv = st->x.enclose(st->bits);
                // complete quotient x_m = (p_{m-2} - q_{m-2} x) / (q_{m-1} x - p_{m-1}), monotone in x
                auto complete = [&](const Rational& v) -> std::optional<Rational> {
                    Rational den = Rational(st->q1) * v - Rational(st->p1);
                    if (den == 0) return std::nullopt;
                    return (Rational(st->p2) - Rational(st->q2) * v) / den;
                };
                Rational dlo = Rational(st->q1) * iv.lo - Rational(st->p1);
                Rational dhi = Rational(st->q1) * iv.hi - Rational(st->p1);
                if (sgn(dlo) * sgn(dhi) > 0) {
                    Rational u = *complete(iv.lo), v = *complete(iv.hi);
                    if (u > v) std::swap(u, v);
                    Integer fa = floor_of(u);
                    if (fa == floor_of(v) && fa >= 1) {
                        Integer p = fa * st->p1 + st->p2;
                        Integer q = fa * st->q1 + st->q2;
                        st->p2 = st->p1;
                        st->q2 = st->q1;
                        st->p1 = p;
                        st->q1 = q;
                        return fa;
                    }
                }
                if (st->bits >= st->budget.max_bits) {
                    throw ResolutionExceeded("continued-fraction expansion of " + st->x.describe() +
                                                 " beyond the convergent " + st->p1.get_str() + "/" +
                                                 st->q1.get_str(),
                                             st->bits);
                }
                st->bits = std::min(st->bits * 2, st->budget.max_bits);
            }
        },
        theta.describe());
}

ContinuedFraction ContinuedFraction::from_function(std::function<Integer(std::size_t)> f, std::string label) {
    auto k = std::make_shared<std::size_t>(0);
    return ContinuedFraction([f = std::move(f), k]() -> std::optional<Integer> { return f(++*k); },
                             std::move(label));
}

std::size_t ContinuedFraction::ensure(std::size_t n) const {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    return impl_->ensure_locked(n);
}

Integer ContinuedFraction::a(std::size_t k) const {
    if (k == 0) return 0;
    std::lock_guard<std::mutex> lock(impl_->mutex);
    if (impl_->ensure_locked(k) < k) throw TerminatingExpansion(impl_->quotients);
    return impl_->quotients[k - 1];
}

std::vector<Integer> ContinuedFraction::prefix(std::size_t n) const {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    std::size_t have = impl_->ensure_locked(n);
    return {impl_->quotients.begin(), impl_->quotients.begin() + static_cast<std::ptrdiff_t>(have)};
}

std::pair<Integer, Integer> ContinuedFraction::convergent(std::size_t k) const {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    if (impl_->ensure_locked(k) < k) throw TerminatingExpansion(impl_->quotients);
    auto& conv = impl_->convergents;
    while (conv.size() <= k) {
        std::size_t m = conv.size();
        const Integer& a = impl_->quotients[m - 1];
        Integer pm2 = m >= 2 ? conv[m - 2].first : Integer(1);
        Integer qm2 = m >= 2 ? conv[m - 2].second : Integer(0);
        conv.emplace_back(a * conv[m - 1].first + pm2, a * conv[m - 1].second + qm2);
    }
    return conv[k];
}

std::optional<PeriodInfo> ContinuedFraction::period() const {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    if (!impl_->period_probe) return std::nullopt;
    auto info = impl_->period_probe();
    if (!info && impl_->exact_value) {
        // surd streams: drive the recurrence until the state repeats (bounded by the period length)
        for (std::size_t limit = impl_->quotients.size() + 64; !info && limit < (1U << 24); limit *= 2) {
            impl_->ensure_locked(limit);
            info = impl_->period_probe();
        }
    }
    return info;
}

std::optional<QuadraticSurd> ContinuedFraction::to_surd() const {
    if (impl_->exact_value) return impl_->exact_value;
    auto info = period();
    if (!info) return std::nullopt;
    std::vector<Integer> pre = prefix(info->preperiod);
    std::vector<Integer> all = prefix(info->preperiod + info->period);
    std::vector<Integer> per(all.begin() + static_cast<std::ptrdiff_t>(info->preperiod), all.end());
    // purely periodic y = [b1; b2, ..., bn, y]
    Integer h1 = 1, h2 = 0, k1 = 0, k2 = 1;
    for (const auto& b : per) {
        Integer h = b * h1 + h2, kk = b * k1 + k2;
        h2 = h1;
        k2 = k1;
        h1 = h;
        k1 = kk;
    }
    // k1*y^2 + (k2 - h1)*y - h2 = 0, y > 1
    Integer disc = (h1 - k2) * (h1 - k2) + 4 * k1 * h2;
    QuadraticSurd y(ratio(h1 - k2, 2 * k1), ratio(1, 2 * k1), disc);
    // theta = [0; pre..., y] = (p_m y + p_{m-1}) / (q_m y + q_{m-1})
    Integer p1 = 0, q1 = 1, p2 = 1, q2 = 0;
    for (const auto& a : pre) {
        Integer p = a * p1 + p2, q = a * q1 + q2;
        p2 = p1;
        q2 = q1;
        p1 = p;
        q1 = q;
    }
    return (QuadraticSurd(Rational(p1)) * y + QuadraticSurd(Rational(p2))) /
           (QuadraticSurd(Rational(q1)) * y + QuadraticSurd(Rational(q2)));
}

const std::string& ContinuedFraction::label() const { return impl_->label; }

ConvergentTable convergents(const ContinuedFraction& cf, std::size_t depth) {
    std::vector<ConvergentRow> rows;
    rows.reserve(depth + 1);
    for (std::size_t k = 0; k <= depth; ++k) {
        auto [p, q] = cf.convergent(k);
        rows.push_back({k, p, q});
    }
    return ConvergentTable(std::move(rows));
}

}  // namespace sturm
