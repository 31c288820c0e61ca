#include <regex>

#include "sturmian/notation.hpp"

namespace sturm {

namespace {

std::string strip(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c != ' ' && c != '\t') out.push_back(c);
    }
    return out;
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::vector<Integer> parse_list(const std::string& s, const std::string& whole) {
    std::vector<Integer> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = s.find(',', start);
        std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
            throw ParseError("bad partial quotient '" + item + "' in '" + whole + "'");
        }
        out.push_back(parse_integer(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

QuadraticSurd parse_surd(const std::string& raw) {
    std::string body = strip(raw);
    static const std::regex lead(R"(^\(?([+-]?\d+)?([+-])sqrt\((\d+)\)\)?(?:/([+-]?\d+))?$)");
    static const std::regex trail(R"(^\(?([+-]?)sqrt\((\d+)\)([+-]\d+)?\)?(?:/([+-]?\d+))?$)");
    std::smatch m;
    Integer p = 0, q = 1, d;
    int sign = 1;
    if (std::regex_match(body, m, lead)) {
        if (m[1].matched) p = parse_integer(m[1].str().front() == '+' ? m[1].str().substr(1) : m[1].str());
        sign = m[2].str() == "-" ? -1 : 1;
        d = parse_integer(m[3].str());
        if (m[4].matched) q = parse_integer(m[4].str().front() == '+' ? m[4].str().substr(1) : m[4].str());
    } else if (std::regex_match(body, m, trail)) {
        sign = m[1].str() == "-" ? -1 : 1;
        d = parse_integer(m[2].str());
        if (m[3].matched) p = parse_integer(m[3].str().front() == '+' ? m[3].str().substr(1) : m[3].str());
        if (m[4].matched) q = parse_integer(m[4].str().front() == '+' ? m[4].str().substr(1) : m[4].str());
    } else {
        throw ParseError("expected (p+sqrt(d))/q, got '" + raw + "'");
    }
    if (mpz_perfect_square_p(d.get_mpz_t()) != 0) throw ParseError("sqrt(" + d.get_str() + ") is rational");
    // (p + sign*sqrt(d))/q  ==  (sign*p + sqrt(d)) / (sign*q)
    return QuadraticSurd::from_pqd(sign * p, sign * q, d);
}

Interval parse_decimal_interval(const std::string& raw) {
    std::string body = strip(raw);
    std::size_t pm = body.find("\xC2\xB1");
    std::size_t skip = 2;
    if (pm == std::string::npos) {
        pm = body.find("+-");
        skip = 2;
    }
    if (pm == std::string::npos) throw ParseError("expected <decimal>±<error>, got '" + raw + "'");
    Rational v = parse_rational(body.substr(0, pm));
    Rational e = parse_rational(body.substr(pm + skip));
    if (e < 0) throw ParseError("negative error bound in '" + raw + "'");
    return {v - e, v + e};
}

Theta parse_theta(const std::string& raw, const PrecisionBudget& budget) {
    std::string text = strip(raw);
    if (starts_with(text, "quad:")) return Theta::from_surd(parse_surd(text.substr(5)), budget);
    if (starts_with(text, "cf:")) {
        std::string body = text.substr(3);
        if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
            throw ParseError("expected cf:[a1,...] or cf:[a1,...|b1,...], got '" + raw + "'");
        }
        body = body.substr(1, body.size() - 2);
        std::size_t bar = body.find('|');
        std::vector<Integer> pre, per;
        if (bar == std::string::npos) {
            per = parse_list(body, raw);
        } else {
            pre = parse_list(body.substr(0, bar), raw);
            per = parse_list(body.substr(bar + 1), raw);
        }
        if (per.empty()) throw ParseError("empty period in '" + raw + "'");
        for (const auto& v : pre) {
            if (v < 1) throw ParseError("partial quotients must be positive in '" + raw + "'");
        }
        for (const auto& v : per) {
            if (v < 1) throw ParseError("partial quotients must be positive in '" + raw + "'");
        }
        return Theta::from_cf(ContinuedFraction::periodic(pre, per), budget);
    }
    if (starts_with(text, "dec:")) {
        Interval iv = parse_decimal_interval(text.substr(4));
        return Theta::from_real(Real::from_interval(iv, text), text, budget);
    }
    throw ParseError("unknown slope notation '" + raw + "' (expected quad:, cf: or dec:)");
}

namespace {

ThetaOffset parse_offset(const std::string& raw, const Theta& theta, bool unit_range) {
    std::string text = strip(raw);
    if (starts_with(text, "rat:")) {
        Rational r = parse_rational(text.substr(4));
        if (unit_range && (r < 0 || r >= 1)) throw DomainError("intercept " + r.get_str() + " is not in [0,1)");
        return ThetaOffset::rational(theta, r);
    }
    if (starts_with(text, "mult:")) {
        std::string j = text.substr(5);
        if (j.empty() || j.find_first_not_of("+-0123456789") != std::string::npos) {
            throw ParseError("expected mult:<integer>, got '" + raw + "'");
        }
        return ThetaOffset::multiple(theta, parse_integer(j.front() == '+' ? j.substr(1) : j));
    }
    if (starts_with(text, "dec:")) {
        Interval iv = parse_decimal_interval(text.substr(4));
        if (unit_range && (iv.lo < 0 || iv.hi >= 1)) throw DomainError("intercept enclosure is not inside [0,1)");
        return ThetaOffset::enclosure(theta, Real::from_interval(iv, text));
    }
    throw ParseError("unknown intercept notation '" + raw + "' (expected rat:, mult: or dec:)");
}

}  // namespace

ThetaOffset parse_rho(const std::string& text, const Theta& theta) { return parse_offset(text, theta, true); }

ThetaOffset parse_argument(const std::string& text, const Theta& theta) { return parse_offset(text, theta, false); }

QuadraticSurd parse_lambda(const std::string& raw) {
    std::string text = strip(raw);
    QuadraticSurd v = starts_with(text, "quad:") ? parse_surd(text.substr(5)) : QuadraticSurd(parse_rational(text));
    if (v.sign() <= 0 || (v - QuadraticSurd(Rational(1))).sign() >= 0) {
        throw DomainError("contraction factor " + v.to_string() + " is not in (0,1)");
    }
    return v;
}

}  // namespace sturm
