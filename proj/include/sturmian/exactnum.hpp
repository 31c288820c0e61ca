#pragma once

// Exact rationals, quadratic surds and refinable interval reals.
//
// Rational is GMP's mpq_class; build fractions through ratio() so they are canonical. QuadraticSurd is an
// element a + b*sqrt(d) of a real quadratic field. Real is an immutable
// expression over those, refinable to any precision through enclose().

#include <compare>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>

#include <gmpxx.h>

#include "sturmian/errors.hpp"

namespace sturm {

using Integer = mpz_class;
using Rational = mpq_class;

struct PrecisionBudget {
    long initial_bits = 256;
    long max_bits = 1L << 20;

    void validate() const;
};

// Integer helpers on rationals.
/// n/d in canonical form (the two-argument mpq_class constructor does not reduce).
Rational ratio(const Integer& n, const Integer& d);
/// Base-10 parse; mpz_class(string) treats a leading 0 as octal.
Integer parse_integer(const std::string& digits);
Integer floor_of(const Rational& x);
Integer ceil_of(const Rational& x);
bool is_integer(const Rational& x);
Rational pow_q(const Rational& x, long e);
Integer pow_z(const Integer& b, unsigned long e);
Rational abs_q(const Rational& x);

/// Parses "p/q", "p" or a plain decimal "0.125" / "1e-60" into an exact rational.
Rational parse_rational(const std::string& text);

/// Fixed-notation decimal rendering truncated toward -inf at `digits` places.
std::string to_decimal(const Rational& x, int digits);
/// Scientific rendering with `sig` significant digits; exact zero prints "0".
std::string to_scientific(const Rational& x, int sig);

/// a + b*sqrt(d). Canonical form: b == 0 implies d == 0; otherwise d > 1 is
/// squarefree, so equal field elements have equal representations.
class QuadraticSurd {
  public:
    QuadraticSurd() = default;
    QuadraticSurd(Rational a);  // NOLINT(implicit)
    QuadraticSurd(Rational a, Rational b, Integer d);

    /// (p + sqrt(d)) / q, the surd notation used by ThetaSpec.
    static QuadraticSurd from_pqd(const Integer& p, const Integer& q, const Integer& d);

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    const Integer& d() const { return d_; }
    bool is_rational() const { return b_ == 0; }

    QuadraticSurd operator-() const;
    friend QuadraticSurd operator+(const QuadraticSurd& x, const QuadraticSurd& y);
    friend QuadraticSurd operator-(const QuadraticSurd& x, const QuadraticSurd& y);
    friend QuadraticSurd operator*(const QuadraticSurd& x, const QuadraticSurd& y);
    friend QuadraticSurd operator/(const QuadraticSurd& x, const QuadraticSurd& y);
    friend bool operator==(const QuadraticSurd& x, const QuadraticSurd& y) = default;
    friend std::strong_ordering operator<=>(const QuadraticSurd& x, const QuadraticSurd& y);

    QuadraticSurd conjugate() const;
    int sign() const;
    Integer floor() const;
    Integer ceil() const;

    std::string to_string() const;

  private:
    void canonicalize();

    Rational a_{0};
    Rational b_{0};
    Integer d_{0};
};

std::ostream& operator<<(std::ostream& os, const QuadraticSurd& s);

/// Closed interval with rational endpoints.
struct Interval {
    Rational lo;
    Rational hi;

    static Interval point(const Rational& x) { return {x, x}; }

    Rational width() const { return hi - lo; }
    Rational mid() const { return (lo + hi) / 2; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    bool contains_zero() const { return lo <= 0 && hi >= 0; }
    bool subset_of(const Interval& o) const { return o.lo <= lo && hi <= o.hi; }
    /// max(|lo|, |hi|)
    Rational magnitude() const;

    /// Outward rounding of both endpoints to multiples of 2^-bits.
    Interval rounded(long bits) const;

    friend Interval operator+(const Interval& x, const Interval& y) { return {x.lo + y.lo, x.hi + y.hi}; }
    friend Interval operator-(const Interval& x, const Interval& y) { return {x.lo - y.hi, x.hi - y.lo}; }
    friend Interval operator-(const Interval& x) { return {-x.hi, -x.lo}; }
    friend Interval operator*(const Interval& x, const Interval& y);
    /// Throws DivisionByPossibleZero when y contains 0.
    friend Interval operator/(const Interval& x, const Interval& y);
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Enclosure of sqrt(d) with both endpoints multiples of 2^-bits.
Interval sqrt_enclosure(const Integer& d, long bits);
Interval enclose(const QuadraticSurd& s, long bits);

/// Immutable real-number expression. Leaves are exact rationals, quadratic
/// surds, or generators returning enclosures that tighten as bits grow.
/// Arithmetic keeps an exact QuadraticSurd form whenever the operands allow.
class Real {
  public:
    using Generator = std::function<Interval(long bits)>;

    Real();
    Real(const Rational& x);       // NOLINT(implicit)
    Real(const QuadraticSurd& s);  // NOLINT(implicit)
    Real(long x);                  // NOLINT(implicit)

    /// Generator-backed real. Successive calls with growing bits must return
    /// nested enclosures.
    static Real from_generator(Generator g, std::string label = "interval");
    /// A fixed enclosure that cannot be refined.
    static Real from_interval(const Interval& iv, std::string label = "interval");

    const std::optional<QuadraticSurd>& exact() const;
    std::optional<Rational> exact_rational() const;

    /// Enclosure computed at working precision `bits`; no width guarantee.
    Interval enclose(long bits) const;

    std::string describe() const;

    friend Real operator+(const Real& x, const Real& y);
    friend Real operator-(const Real& x, const Real& y);
    friend Real operator*(const Real& x, const Real& y);
    friend Real operator/(const Real& x, const Real& y);
    Real operator-() const;

    struct Node;

  private:
    explicit Real(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

/// Enclosure of width <= 2^(1-bits) * max(1, |value|), refining the working
/// precision by doubling up to budget.max_bits.
Interval eval_enclosure(const Real& x, long bits, const PrecisionBudget& budget = {});

Integer certified_floor(const Rational& x);
Integer certified_floor(const QuadraticSurd& x);
Integer certified_floor(const Real& x, const PrecisionBudget& budget = {});
Integer certified_ceil(const Rational& x);
Integer certified_ceil(const QuadraticSurd& x);
Integer certified_ceil(const Real& x, const PrecisionBudget& budget = {});

/// Certified sign of x - y; refines until the enclosures separate.
/// Throws ResolutionExceeded at the cap (which includes x == y for inexact inputs).
int certified_compare(const Real& x, const Real& y, const PrecisionBudget& budget = {});

}  // namespace sturm
