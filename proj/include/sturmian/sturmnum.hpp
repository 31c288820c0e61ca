#pragma once

// Sturmian numbers xi_x = sum x_n b^-n, their rational approximants with
// certified residuals, the index set of good levels k, dependence witnesses
// and the linear-form residuals built on top of them.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sturmian/sturmword.hpp"

namespace sturm {

/// Exact value of the first N digits plus the range of the remaining tail.
struct Truncation {
    std::size_t digits = 0;
    Rational value;
    Interval tail;  // the tail lies in [lo, hi]; hi <= b^-N
    Rational tail_bound;  // b^-N, the worst case over all digits in [0, b)

    Interval enclosure() const { return Interval::point(value) + tail; }
};

Truncation evaluate(const SturmianSource& source, std::size_t digits);

/// Value of the eventually periodic word P S S S ...
Rational eventually_periodic_value(const Word& preperiod, const Word& period, const Alphabet& alphabet);

/// epsilon = 1/10 throughout; all comparisons are done on integers scaled by 10.
struct ApproximantSchedule {
    std::size_t k = 0;
    std::size_t r = 0;
    std::size_t t = 0;
    std::size_t q = 0;       // q_k
    std::size_t q_next = 0;  // q_{k+1}
    bool long_branch = false;  // q_{k+1} > (1+eps)(|U_k| + q_k), so r = |U_k|
    bool in_K = false;
    Decomposition dec;
};

ApproximantSchedule schedule(const SturmianSource& source, std::size_t k);

enum class Certificate { Verified, Violated, Unresolved };
std::string to_string(Certificate c);

/// delta = (residual * b^E - (-1)^k c) * b^(q_k - 2) given xi - A = ((-1)^k c + delta b^(2-q_k)) / b^E.
struct DeltaBound {
    Interval residual;  // xi - A
    Interval delta;
    std::size_t exponent = 0;   // E
    std::size_t digits = 0;     // truncation length that settled the question
    Certificate status = Certificate::Unresolved;
};

struct Approximant {
    std::size_t k = 0;
    Integer m;
    std::size_t r = 0;
    std::size_t q = 0;
    std::size_t t = 0;
    long c = 0;
    bool periodic_branch = false;  // approximant is the purely periodic word U M'_k M_k M_k ...
    DeltaBound bound;

    /// m / (b^r (b^q - 1))
    Rational value(int base) const;
};

/// xi_0 against m0 / (b^q_k - 1) with m0 the integer spelled by M_k.
Approximant approximant_characteristic(const Theta& theta, const Alphabet& alphabet, std::size_t k);
/// xi_x against the approximant selected by the schedule.
Approximant approximant_general(const SturmianSource& source, std::size_t k);

/// Both residuals for y = U M_k M_k ... and y' = U M'_k M_k M_k ...
struct DeltaPair {
    std::size_t k = 0;
    Decomposition dec;
    Approximant y;
    Approximant y_prime;
};

DeltaPair approximant_pair(const SturmianSource& source, std::size_t k);

/// x = V M_k M_k ..., y = V M'_k M_k M_k ...:
/// xi_x - xi_y = s c / b^(|V|+q) + (s c + eta) / b^(|V|+2q), s = (-1)^k. Returns eta exactly.
Rational two_term_eta(const StandardWordFamily& family, const Alphabet& alphabet, const Word& V, std::size_t k);

struct ResidualReport {
    std::size_t k = 0;
    std::string context;
    Interval lhs;             // enclosure of the quantity being bounded
    Rational rhs_scale;       // bound = rhs_scale * b^-rhs_exponent
    Rational rhs_exponent;
    bool satisfied = false;
    Certificate status = Certificate::Unresolved;
    std::size_t precision_digits = 0;
};

/// Checks both approximation inequalities at every k in K within [kmin, kmax].
std::vector<ResidualReport> index_set_report(const SturmianSource& source, std::size_t kmin, std::size_t kmax);

/// First k in [kmin, kmax] that lies in K.
std::optional<std::size_t> first_in_K(const SturmianSource& source, std::size_t kmin, std::size_t kmax);
/// First k in [kmin, kmax] with q_{k+1} > (1+eps)(2+eps) q_k.
std::optional<std::size_t> growth_witness(const ContinuedFraction& cf, std::size_t kmin, std::size_t kmax);
/// First k in [kmin, kmax] with |U_k| > (1+eps) q_k.
std::optional<std::size_t> long_prefix_witness(const SturmianSource& source, std::size_t kmin, std::size_t kmax);

struct DependenceWitness {
    Rational r;
    Rational s;
    ShiftRelation relation;
    std::vector<std::pair<std::size_t, Rational>> checks;  // (N, upper bound on |xi_1 - r - s xi_0|)
    bool verified = false;
};

/// xi_1 = r + s xi_0 when the word is a shift of the characteristic word (or vice versa).
std::optional<DependenceWitness> dependence_witness(const SturmianSource& source, std::size_t search_bound);

struct SubspaceReport {
    ResidualReport pre_form;     // |a0 xi0 + a1 xi1 - a0 m0/(b^q-1) - a1 m/(b^r(b^q-1))| < C b^-(r+2q+eps(r+q))
    ResidualReport linear_form;  // |L4(b^(r+q), b^r, m0 b^r, m)| < C b^-(q+eps(r+q))
    std::vector<Integer> quadruple;
    Integer height;               // H_k
    Rational adic_product;        // product over j and primes l | b of |X_j|_l
    Interval archimedean_product; // product of |L_j| at the quadruple
};

SubspaceReport subspace_residual_report(const Rational& alpha0, const Rational& alpha1, const SturmianSource& source,
                                        std::size_t k);

/// Prime divisors of b.
std::vector<unsigned long> prime_divisors(unsigned long b);
/// |x|_l = l^-v_l(x) for x != 0.
Rational adic_abs(const Integer& x, unsigned long l);

}  // namespace sturm
