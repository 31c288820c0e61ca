#include <algorithm>
#include <cctype>
#include <string>

#include "sturmian/exactnum.hpp"

namespace sturm {

void PrecisionBudget::validate() const {
    if (initial_bits <= 0 || max_bits <= 0 || initial_bits > max_bits) {
        throw DomainError("precision budget requires 0 < initial_bits <= max_bits");
    }
}

Rational ratio(const Integer& n, const Integer& d) {
    if (d == 0) throw DivisionByPossibleZero("zero denominator");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

Integer parse_integer(const std::string& digits) {
    Integer r;
    if (digits.empty() || mpz_set_str(r.get_mpz_t(), digits.c_str(), 10) != 0) {
        throw ParseError("malformed integer '" + digits + "'");
    }
    return r;
}

Integer floor_of(const Rational& x) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

Integer ceil_of(const Rational& x) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

bool is_integer(const Rational& x) { return mpz_divisible_p(x.get_num_mpz_t(), x.get_den_mpz_t()) != 0; }

Integer pow_z(const Integer& b, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

Rational pow_q(const Rational& x, long e) {
    if (e < 0) {
        if (x == 0) throw DivisionByPossibleZero("pow_q: zero to a negative power");
        return pow_q(ratio(x.get_den(), x.get_num()), -e);
    }
    Rational r(pow_z(x.get_num(), static_cast<unsigned long>(e)),
               pow_z(x.get_den(), static_cast<unsigned long>(e)));
    r.canonicalize();
    return r;
}

Rational abs_q(const Rational& x) { return x < 0 ? Rational(-x) : x; }

Rational parse_rational(const std::string& raw) {
    std::string text;
    for (char c : raw) {
        if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
    }
    if (text.empty()) throw ParseError("empty number");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Rational num = parse_rational(text.substr(0, slash));
        Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator in '" + raw + "'");
        return num / den;
    }
    std::size_t i = 0;
    bool neg = false;
    if (text[i] == '+' || text[i] == '-') {
        neg = text[i] == '-';
        ++i;
    }
    std::string digits;
    long scale = 0;
    bool seen_digit = false;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            seen_digit = true;
            if (seen_point) ++scale;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) throw ParseError("malformed number '" + raw + "'");
    long exponent = 0;
    if (i < text.size()) {
        if (text[i] != 'e' && text[i] != 'E') throw ParseError("malformed number '" + raw + "'");
        ++i;
        std::string e = text.substr(i);
        if (e.empty()) throw ParseError("malformed exponent in '" + raw + "'");
        try {
            std::size_t used = 0;
            exponent = std::stol(e, &used);
            if (used != e.size()) throw ParseError("malformed exponent in '" + raw + "'");
        } catch (const std::logic_error&) {
            throw ParseError("malformed exponent in '" + raw + "'");
        }
    }
    Rational value{parse_integer(digits)};
    value *= pow_q(Rational(10), exponent - scale);
    return neg ? Rational(-value) : value;
}

std::string to_decimal(const Rational& x, int digits) {
    digits = std::max(digits, 0);
    Integer scaled = floor_of(x * Rational(pow_z(10, static_cast<unsigned long>(digits))));
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string s = scaled.get_str();
    if (digits > 0) {
        if (s.size() <= static_cast<std::size_t>(digits)) {
            s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
        }
        s.insert(s.size() - static_cast<std::size_t>(digits), 1, '.');
    }
    return neg ? "-" + s : s;
}

std::string to_scientific(const Rational& x, int sig) {
    if (x == 0) return "0";
    sig = std::max(sig, 1);
    Rational ax = abs_q(x);
    long e = static_cast<long>(mpz_sizeinbase(ax.get_num_mpz_t(), 10)) -
             static_cast<long>(mpz_sizeinbase(ax.get_den_mpz_t(), 10));
    // settle e so that 10^e <= ax < 10^(e+1)
    while (pow_q(Rational(10), e) > ax) --e;
    while (pow_q(Rational(10), e + 1) <= ax) ++e;
    Integer mant = floor_of(ax * pow_q(Rational(10), sig - 1 - e));
    std::string m = mant.get_str();
    std::string out = x < 0 ? "-" : "";
    out += m.substr(0, 1);
    if (m.size() > 1) out += "." + m.substr(1);
    out += "e" + std::to_string(e);
    return out;
}

}  // namespace sturm
