#pragma once

// The contracted rotation f(x) = {lambda x + delta} on [0,1), the series
// delta(lambda, theta) that makes theta its rotation number, the increasing
// parametrization phi and the gaps of the Cantor attractor.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sturmian/confrac.hpp"

namespace sturm {

/// 0 < lambda < 1 and 1 - lambda < delta < 1; both are checked on construction.
struct ContractionParams {
    ContractionParams(QuadraticSurd lambda, Real delta, const PrecisionBudget& budget = {});

    QuadraticSurd lambda;
    Real delta;
    PrecisionBudget budget;

    /// (1 - delta) / lambda, where lambda x + delta reaches 1.
    Real breakpoint() const;
};

struct StepResult {
    Real value;
    bool wrapped = false;  // lambda x + delta >= 1
};

/// One application of f; ResolutionExceeded when lambda x + delta cannot be separated from 1.
StepResult step(const ContractionParams& params, const Real& x);

enum class OrbitMode {
    Auto,   // exact when every input is a quadratic surd and n is small
    Exact,  // quadratic-surd arithmetic, points are exact
    Dyadic  // fixed-point intervals, precision doubled until every branch is certified
};

struct Orbit {
    std::vector<Interval> points;            // x_0 .. x_n
    std::vector<QuadraticSurd> exact_points;  // filled in exact mode
    std::vector<bool> wrapped;                // wrapped[i]: the step x_i -> x_{i+1} wrapped
    std::size_t wraps = 0;
    long bits = 0;  // working precision of the dyadic run, 0 when exact
};

Orbit orbit(const ContractionParams& params, const Real& x0, std::size_t n, OrbitMode mode = OrbitMode::Auto);

struct RotationEstimate {
    std::size_t n = 0;
    std::size_t wraps = 0;
    Interval estimate;  // [w/n - 1/n, w/n + 1/n]
    Interval safe;      // [w/n - 2/n, w/n + 2/n]
    /// Set when an attracting cycle was found and verified exactly: its wrap count over its period.
    std::optional<Rational> exact;
    std::size_t period = 0;
    long bits = 0;
};

/// Wraps of the orbit of 0 over n steps; detects and verifies a periodic
/// itinerary when lambda and delta are exact.
RotationEstimate rotation_number_estimate(const ContractionParams& params, std::size_t n);

/// Enclosure of delta(lambda, theta) of width <= 10^-digits.
Interval delta_of(const QuadraticSurd& lambda, const Theta& theta, int digits);

/// lambda in (0,1) and an irrational slope; delta is derived.
class CantorParams {
  public:
    CantorParams(QuadraticSurd lambda, Theta theta);

    const QuadraticSurd& lambda() const { return lambda_; }
    const Theta& theta() const { return theta_; }

    Interval delta(int digits) const { return delta_of(lambda_, theta_, digits); }
    /// delta as a refinable real.
    Real delta_real() const;
    ContractionParams contraction(const PrecisionBudget& budget = {}) const;

  private:
    QuadraticSurd lambda_;
    Theta theta_;
};

/// phi(y) = 1 + xi_{0,lambda} + floor(y - theta) - xi_{-y,lambda}, width <= 10^-digits.
/// Exact for integer y; right value at y = {l theta}.
Interval phi(const CantorParams& params, const ThetaOffset& y, int digits);

/// phi({l theta}) = u delta + v with u, v exact.
struct PhiMultiple {
    long l = 0;
    QuadraticSurd u;
    QuadraticSurd v;
    Interval value;
    std::optional<Interval> left_limit;  // phi({l theta}^-) for l > 0
};

PhiMultiple phi_at_multiples(const CantorParams& params, long l, int digits);

/// The open gap (phi({l theta}^-), phi({l theta})).
struct CantorGap {
    std::size_t l = 0;
    Interval left;
    Interval right;
    QuadraticSurd width;  // lambda^(l-1) (1 - lambda)
};

std::vector<CantorGap> cantor_gaps(const CantorParams& params, std::size_t L, int digits);

/// True when every gap lies in (0,1) and the gaps are pairwise separated, all certified.
bool gaps_certified_disjoint(const std::vector<CantorGap>& gaps);

enum class MembershipKind { InCantor, InGap, Unresolved };
std::string to_string(MembershipKind k);

struct MembershipVerdict {
    MembershipKind kind = MembershipKind::Unresolved;
    std::size_t l = 0;  // gap index for InGap
    int digits = 0;     // resolution of the claim
    std::size_t gaps_checked = 0;
};

/// InGap(l) when z is certified inside a gap; InCantor when no gap of width
/// >= 10^-digits separates z from the complement at that resolution.
MembershipVerdict membership(const CantorParams& params, const Real& z, int digits);

/// For lambda = 1/b: phi({m theta}) = coefficient * delta(1/b, theta) + A_m.
struct TranscendenceForm {
    long m = 0;
    Rational coefficient;
    Rational A;
};

TranscendenceForm transcendence_form(unsigned long b, const Theta& theta, long m);

/// Distance from phi(y + theta) - f({phi(y)}) to the nearest integer.
Interval functional_equation_residual(const CantorParams& params, const ThetaOffset& y, int digits);

}  // namespace sturm
