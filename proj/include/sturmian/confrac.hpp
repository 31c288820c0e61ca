#pragma once

// Continued fractions of slopes theta in (0,1), their convergents, and the
// three slope backends (exact quadratic surd, lazy partial-quotient stream,
// refinable interval) behind one Theta handle.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sturmian/exactnum.hpp"

namespace sturm {

/// Preperiod/period layout of an eventually periodic expansion, counted in
/// partial quotients a_1, a_2, ... (a_0 = 0 is not part of the stream).
struct PeriodInfo {
    std::size_t preperiod = 0;
    std::size_t period = 0;
};

/// Lazily generated, memoized stream of partial quotients a_1, a_2, ...
/// Copies share one cache; extending the prefix is internally synchronized.
class ContinuedFraction {
  public:
    /// Produces a_1, a_2, ... in order; nullopt marks a terminated (rational) expansion.
    using Producer = std::function<std::optional<Integer>()>;

    explicit ContinuedFraction(Producer producer, std::string label = "stream");

    /// [0; pre..., period, period, ...]; an empty preperiod makes the whole list periodic.
    static ContinuedFraction periodic(std::vector<Integer> preperiod, std::vector<Integer> period);
    /// Exact expansion of a surd via the complete-quotient recurrence, with period detection.
    static ContinuedFraction from_surd(const QuadraticSurd& theta);
    /// Adaptive expansion of a refinable real.
    static ContinuedFraction from_real(const Real& theta, const PrecisionBudget& budget = {});
    /// a_k = f(k) for k >= 1.
    static ContinuedFraction from_function(std::function<Integer(std::size_t)> f, std::string label);

    /// Partial quotient a_k, k >= 1. Throws TerminatingExpansion past the end.
    Integer a(std::size_t k) const;
    /// Number of partial quotients available among the first n (less than n only for terminating input).
    std::size_t ensure(std::size_t n) const;
    std::vector<Integer> prefix(std::size_t n) const;
    bool terminated_within(std::size_t n) const { return ensure(n) < n; }

    /// Convergent (p_k, q_k) with p_0/q_0 = 0/1.
    std::pair<Integer, Integer> convergent(std::size_t k) const;

    /// Known period layout (periodic lists and surds once the state repeats).
    std::optional<PeriodInfo> period() const;
    /// Exact value when the expansion is eventually periodic.
    std::optional<QuadraticSurd> to_surd() const;

    const std::string& label() const;

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

struct ConvergentRow {
    std::size_t k;
    Integer p;
    Integer q;
};

class ConvergentTable {
  public:
    explicit ConvergentTable(std::vector<ConvergentRow> rows) : rows_(std::move(rows)) {}

    const std::vector<ConvergentRow>& rows() const { return rows_; }
    /// q_k for 0 <= k <= depth
    const Integer& q(std::size_t k) const { return rows_.at(k).q; }
    const Integer& p(std::size_t k) const { return rows_.at(k).p; }
    std::size_t depth() const { return rows_.size() - 1; }

  private:
    std::vector<ConvergentRow> rows_;
};

/// Rows k = 0..depth; throws TerminatingExpansion when fewer quotients exist.
ConvergentTable convergents(const ContinuedFraction& cf, std::size_t depth);

/// An irrational slope in (0,1).
class Theta {
  public:
    enum class Kind { Surd, Stream, Enclosure };

    static Theta from_surd(const QuadraticSurd& s, const PrecisionBudget& budget = {});
    static Theta from_cf(const ContinuedFraction& cf, const PrecisionBudget& budget = {});
    static Theta from_real(const Real& x, std::string label, const PrecisionBudget& budget = {});

    Kind kind() const { return kind_; }
    const ContinuedFraction& cf() const { return cf_; }
    const std::optional<QuadraticSurd>& exact() const { return surd_; }
    const PrecisionBudget& budget() const { return budget_; }
    const std::string& label() const { return label_; }

    /// Enclosure with endpoints on the 2^-bits grid (stream: between convergents).
    Interval enclose(long bits) const;
    Real real() const;

    /// Certified floor(alpha + beta * theta).
    Integer floor_affine(const Rational& alpha, const Rational& beta) const;
    Integer ceil_affine(const Rational& alpha, const Rational& beta) const;

  private:
    Theta() = default;

    Kind kind_ = Kind::Surd;
    std::optional<QuadraticSurd> surd_;
    ContinuedFraction cf_{[]() -> std::optional<Integer> { return std::nullopt; }};
    std::optional<Real> real_;
    PrecisionBudget budget_;
    std::string label_;
};

/// expand(theta, depth): the first `depth` partial quotients are available.
/// DomainError outside (0,1), TerminatingExpansion for rational input.
ContinuedFraction expand(const Theta& theta, std::size_t depth);

/// A real offset tied to a slope: either exactly alpha + beta*theta (rational
/// intercepts, {j theta}, gap abscissas) or a refinable enclosure.
class ThetaOffset {
  public:
    static ThetaOffset rational(const Theta& theta, const Rational& r);
    /// {j theta} = j theta - floor(j theta)
    static ThetaOffset multiple(const Theta& theta, const Integer& j);
    static ThetaOffset affine(const Theta& theta, const Rational& alpha, const Rational& beta);
    static ThetaOffset enclosure(const Theta& theta, const Real& value);

    const Theta& theta() const { return theta_; }
    bool is_affine() const { return affine_.has_value(); }
    /// (alpha, beta) when exact.
    const std::optional<std::pair<Rational, Rational>>& affine_form() const { return affine_; }

    /// floor(n*theta + offset) and ceil(n*theta + offset), certified.
    Integer floor_at(const Integer& n) const;
    Integer ceil_at(const Integer& n) const;

    Interval enclose(long bits) const;
    Real real() const;

    ThetaOffset negated() const;
    /// offset + n*theta
    ThetaOffset shifted(const Integer& n) const;

    std::string describe() const;

  private:
    ThetaOffset(Theta theta) : theta_(std::move(theta)) {}

    Theta theta_;
    std::optional<std::pair<Rational, Rational>> affine_;
    std::optional<Real> value_;
};

}  // namespace sturm
