#include <sstream>

#include "sturmian/exactnum.hpp"

namespace sturm {

namespace {

// Splits d = s^2 * f with f squarefree. Trial division covers factors up to
// 10^6; a larger leftover is only tested for being a perfect square.
void squarefree_split(const Integer& d, Integer& square_root_part, Integer& free_part) {
    square_root_part = 1;
    free_part = 1;
    Integer rest = d;
    for (unsigned long p = 2; p <= 1000000UL; ++p) {
        Integer pp = Integer(p) * p;
        if (pp > rest) break;
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p * p) != 0) {
            rest /= p * p;
            square_root_part *= p;
        }
        if (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
            rest /= p;
            free_part *= p;
        }
    }
    if (mpz_perfect_square_p(rest.get_mpz_t()) != 0) {
        Integer r;
        mpz_sqrt(r.get_mpz_t(), rest.get_mpz_t());
        square_root_part *= r;
    } else {
        free_part *= rest;
    }
}

Integer common_d(const QuadraticSurd& x, const QuadraticSurd& y) {
    if (x.is_rational()) return y.d();
    if (y.is_rational() || x.d() == y.d()) return x.d();
    throw DomainError("quadratic surds from different fields: sqrt(" + x.d().get_str() +
                      ") and sqrt(" + y.d().get_str() + ")");
}

}  // namespace

QuadraticSurd::QuadraticSurd(Rational a) : a_(std::move(a)) {}

QuadraticSurd::QuadraticSurd(Rational a, Rational b, Integer d)
    : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)) {
    canonicalize();
}

QuadraticSurd QuadraticSurd::from_pqd(const Integer& p, const Integer& q, const Integer& d) {
    if (q == 0) throw DomainError("surd denominator q must be nonzero");
    if (d <= 0) throw DomainError("surd radicand d must be positive");
    if (mpz_perfect_square_p(d.get_mpz_t()) != 0) {
        throw DomainError("surd radicand " + d.get_str() + " is a perfect square");
    }
    return {ratio(p, q), ratio(1, q), d};
}

void QuadraticSurd::canonicalize() {
    a_.canonicalize();
    b_.canonicalize();
    if (b_ == 0) {
        d_ = 0;
        return;
    }
    if (d_ < 0) throw DomainError("negative radicand");
    if (d_ == 0) {
        b_ = 0;
        return;
    }
    Integer s, f;
    squarefree_split(d_, s, f);
    b_ *= Rational(s);
    d_ = f;
    if (d_ == 1) {
        a_ += b_;
        b_ = 0;
        d_ = 0;
    }
}

QuadraticSurd QuadraticSurd::operator-() const { return {-a_, -b_, d_}; }

QuadraticSurd operator+(const QuadraticSurd& x, const QuadraticSurd& y) {
    return {x.a_ + y.a_, x.b_ + y.b_, common_d(x, y)};
}

QuadraticSurd operator-(const QuadraticSurd& x, const QuadraticSurd& y) { return x + (-y); }

QuadraticSurd operator*(const QuadraticSurd& x, const QuadraticSurd& y) {
    Integer d = common_d(x, y);
    return {x.a_ * y.a_ + x.b_ * y.b_ * Rational(d), x.a_ * y.b_ + x.b_ * y.a_, d};
}

QuadraticSurd operator/(const QuadraticSurd& x, const QuadraticSurd& y) {
    Rational norm = y.a_ * y.a_ - y.b_ * y.b_ * Rational(y.d_);
    if (norm == 0) throw DivisionByPossibleZero("division by zero surd");
    QuadraticSurd num = x * y.conjugate();
    return {num.a_ / norm, num.b_ / norm, num.d_};
}

QuadraticSurd QuadraticSurd::conjugate() const { return {a_, -b_, d_}; }

int QuadraticSurd::sign() const {
    int sa = sgn(a_);
    int sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // opposite signs: compare a^2 with b^2 d (never equal since d is not a square)
    return (a_ * a_ > b_ * b_ * Rational(d_)) ? sa : sb;
}

std::strong_ordering operator<=>(const QuadraticSurd& x, const QuadraticSurd& y) {
    int s = (x - y).sign();
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Integer QuadraticSurd::floor() const {
    if (is_rational()) return floor_of(a_);
    Interval iv = enclose(*this, 64);
    Integer n = floor_of(iv.lo);
    while ((*this - QuadraticSurd(Rational(n + 1))).sign() >= 0) ++n;
    while ((*this - QuadraticSurd(Rational(n))).sign() < 0) --n;
    return n;
}

Integer QuadraticSurd::ceil() const { return -((-*this).floor()); }

std::string QuadraticSurd::to_string() const {
    std::ostringstream os;
    if (is_rational()) {
        os << a_.get_str();
    } else {
        os << a_.get_str() << (b_ < 0 ? " - " : " + ") << abs_q(b_).get_str() << "*sqrt(" << d_.get_str()
           << ")";
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const QuadraticSurd& s) { return os << s.to_string(); }

Rational Interval::magnitude() const { return std::max(abs_q(lo), abs_q(hi)); }

Interval Interval::rounded(long bits) const {
    Rational scale(pow_z(2, static_cast<unsigned long>(bits)));
    return {Rational(floor_of(lo * scale)) / scale, Rational(ceil_of(hi * scale)) / scale};
}

Interval operator*(const Interval& x, const Interval& y) {
    Rational p1 = x.lo * y.lo, p2 = x.lo * y.hi, p3 = x.hi * y.lo, p4 = x.hi * y.hi;
    return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
}

Interval operator/(const Interval& x, const Interval& y) {
    if (y.contains_zero()) throw DivisionByPossibleZero("divisor enclosure contains 0");
    return x * Interval{1 / y.hi, 1 / y.lo};
}

Interval sqrt_enclosure(const Integer& d, long bits) {
    Integer scaled = d << static_cast<mp_bitcnt_t>(2 * bits);
    Integer s;
    mpz_sqrt(s.get_mpz_t(), scaled.get_mpz_t());
    Rational den(pow_z(2, static_cast<unsigned long>(bits)));
    if (s * s == scaled) return Interval::point(Rational(s) / den);
    return {Rational(s) / den, Rational(s + 1) / den};
}

Interval enclose(const QuadraticSurd& s, long bits) {
    if (s.is_rational()) return Interval::point(s.a());
    long extra = static_cast<long>(mpz_sizeinbase(s.b().get_num_mpz_t(), 2)) + 2;
    Interval root = sqrt_enclosure(s.d(), bits + extra);
    Interval v = Interval::point(s.a()) + Interval::point(s.b()) * root;
    return v.rounded(bits);
}

}  // namespace sturm
