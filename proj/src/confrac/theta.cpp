#include "sturmian/confrac.hpp"

namespace sturm {

Theta Theta::from_surd(const QuadraticSurd& s, const PrecisionBudget& budget) {
    budget.validate();
    if (s.sign() <= 0 || (s - QuadraticSurd(Rational(1))).sign() >= 0) {
        throw DomainError("slope " + s.to_string() + " is not in (0,1)");
    }
    Theta t;
    t.kind_ = s.is_rational() ? Kind::Enclosure : Kind::Surd;
    t.surd_ = s;
    t.cf_ = ContinuedFraction::from_surd(s);
    t.budget_ = budget;
    t.label_ = s.to_string();
    if (s.is_rational()) t.real_ = Real(s);
    return t;
}

Theta Theta::from_cf(const ContinuedFraction& cf, const PrecisionBudget& budget) {
    budget.validate();
    Theta t;
    t.kind_ = Kind::Stream;
    t.cf_ = cf;
    t.budget_ = budget;
    t.label_ = cf.label();
    return t;
}

Theta Theta::from_real(const Real& x, std::string label, const PrecisionBudget& budget) {
    if (x.exact()) return from_surd(*x.exact(), budget);
    budget.validate();
    Interval iv = x.enclose(budget.initial_bits);
    if (iv.hi <= 0 || iv.lo >= 1) throw DomainError("slope " + label + " is not in (0,1)");
    Theta t;
    t.kind_ = Kind::Enclosure;
    t.real_ = x;
    t.cf_ = ContinuedFraction::from_real(x, budget);
    t.budget_ = budget;
    t.label_ = std::move(label);
    return t;
}

Interval Theta::enclose(long bits) const {
    switch (kind_) {
        case Kind::Surd:
            return sturm::enclose(*surd_, bits);
        case Kind::Enclosure:
            return real_->enclose(bits);
        case Kind::Stream: {
            Integer target = pow_z(2, static_cast<unsigned long>(bits));
            std::size_t k = 1;
            for (;;) {
                auto [p0, q0] = cf_.convergent(k);
                auto [p1, q1] = cf_.convergent(k + 1);
                if (q0 * q1 >= target) {
                    Rational a = ratio(p0, q0), b = ratio(p1, q1);
                    if (a > b) std::swap(a, b);
                    return Interval{a, b}.rounded(bits);
                }
                ++k;
            }
        }
    }
    return {};
}

Real Theta::real() const {
    switch (kind_) {
        case Kind::Surd:
            return Real(*surd_);
        case Kind::Enclosure:
            return *real_;
        case Kind::Stream: {
            Theta self = *this;
            return Real::from_generator([self](long bits) { return self.enclose(bits); }, label_);
        }
    }
    return {};
}

Integer Theta::floor_affine(const Rational& alpha, const Rational& beta) const {
    if (beta == 0) return floor_of(alpha);
    if (surd_) return (QuadraticSurd(alpha) + QuadraticSurd(beta) * *surd_).floor();
    long extra = static_cast<long>(mpz_sizeinbase(beta.get_num_mpz_t(), 2));
    long bits = std::max(64L, budget_.initial_bits / 4);
    for (;;) {
        Interval v = Interval::point(alpha) + Interval::point(beta) * enclose(bits + extra);
        Integer f = floor_of(v.lo);
        if (f == floor_of(v.hi)) return f;
        if (bits >= budget_.max_bits) {
            throw ResolutionExceeded("floor(" + alpha.get_str() + " + " + beta.get_str() + "*theta) for theta = " +
                                         label_,
                                     bits);
        }
        bits = std::min(bits * 2, budget_.max_bits);
    }
}

Integer Theta::ceil_affine(const Rational& alpha, const Rational& beta) const {
    return -floor_affine(-alpha, -beta);
}

ContinuedFraction expand(const Theta& theta, std::size_t depth) {
    if (theta.kind() == Theta::Kind::Enclosure) {
        Interval iv = theta.enclose(theta.budget().initial_bits);
        if (iv.hi <= 0 || iv.lo >= 1) throw DomainError("slope " + theta.label() + " is not in (0,1)");
        if (certified_floor(theta.real(), theta.budget()) != 0) {
            throw DomainError("slope " + theta.label() + " is not in (0,1)");
        }
    }
    const ContinuedFraction& cf = theta.cf();
    if (cf.ensure(depth) < depth) throw TerminatingExpansion(cf.prefix(depth));
    return cf;
}

ThetaOffset ThetaOffset::rational(const Theta& theta, const Rational& r) { return affine(theta, r, 0); }

ThetaOffset ThetaOffset::multiple(const Theta& theta, const Integer& j) {
    Integer f = theta.floor_affine(0, Rational(j));
    return affine(theta, Rational(-f), Rational(j));
}

ThetaOffset ThetaOffset::affine(const Theta& theta, const Rational& alpha, const Rational& beta) {
    ThetaOffset o(theta);
    o.affine_ = std::make_pair(alpha, beta);
    return o;
}

ThetaOffset ThetaOffset::enclosure(const Theta& theta, const Real& value) {
    if (auto q = value.exact_rational()) return rational(theta, *q);
    ThetaOffset o(theta);
    o.value_ = value;
    return o;
}

Integer ThetaOffset::floor_at(const Integer& n) const {
    if (affine_) return theta_.floor_affine(affine_->first, affine_->second + Rational(n));
    return certified_floor(Real(Rational(n)) * theta_.real() + *value_, theta_.budget());
}

Integer ThetaOffset::ceil_at(const Integer& n) const {
    if (affine_) return theta_.ceil_affine(affine_->first, affine_->second + Rational(n));
    return certified_ceil(Real(Rational(n)) * theta_.real() + *value_, theta_.budget());
}

Interval ThetaOffset::enclose(long bits) const {
    if (affine_) {
        const auto& [alpha, beta] = *affine_;
        if (beta == 0) return Interval::point(alpha);
        long extra = static_cast<long>(mpz_sizeinbase(beta.get_num_mpz_t(), 2)) + 1;
        Interval t = theta_.enclose(bits + extra);
        return (Interval::point(alpha) + Interval::point(beta) * t).rounded(bits);
    }
    return value_->enclose(bits);
}

Real ThetaOffset::real() const {
    if (affine_) {
        const auto& [alpha, beta] = *affine_;
        if (beta == 0) return Real(alpha);
        return Real(alpha) + Real(beta) * theta_.real();
    }
    return *value_;
}

ThetaOffset ThetaOffset::negated() const {
    if (affine_) return affine(theta_, -affine_->first, -affine_->second);
    return enclosure(theta_, -*value_);
}

ThetaOffset ThetaOffset::shifted(const Integer& n) const {
    if (affine_) return affine(theta_, affine_->first, affine_->second + Rational(n));
    return enclosure(theta_, *value_ + Real(Rational(n)) * theta_.real());
}

std::string ThetaOffset::describe() const {
    if (affine_) {
        const auto& [alpha, beta] = *affine_;
        if (beta == 0) return alpha.get_str();
        return alpha.get_str() + " + " + beta.get_str() + "*theta";
    }
    return value_->describe();
}

}  // namespace sturm
