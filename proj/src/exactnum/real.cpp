#include <utility>

#include "sturmian/exactnum.hpp"

namespace sturm {

struct Real::Node {
    enum class Kind { Exact, Generated, Add, Sub, Mul, Div, Neg };

    Kind kind = Kind::Exact;
    std::optional<QuadraticSurd> exact;
    Generator generator;
    std::string label;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;

    Interval enclose(long bits) const {
        switch (kind) {
            case Kind::Exact:
                return sturm::enclose(*exact, bits);
            case Kind::Generated:
                return generator(bits);
            case Kind::Neg:
                return -lhs->enclose(bits);
            case Kind::Add:
                return (lhs->enclose(bits + 2) + rhs->enclose(bits + 2)).rounded(bits + 1);
            case Kind::Sub:
                return (lhs->enclose(bits + 2) - rhs->enclose(bits + 2)).rounded(bits + 1);
            case Kind::Mul: {
                Interval x = lhs->enclose(bits + 4);
                Interval y = rhs->enclose(bits + 4);
                long extra = magnitude_bits(x) + magnitude_bits(y);
                if (extra > 0) {
                    x = lhs->enclose(bits + 4 + extra);
                    y = rhs->enclose(bits + 4 + extra);
                }
                return (x * y).rounded(bits + 1);
            }
            case Kind::Div: {
                Interval y = rhs->enclose(bits + 4);
                long guard = 4;
                while (y.contains_zero() && guard < 4 * bits + 64) {
                    guard *= 2;
                    y = rhs->enclose(bits + guard);
                }
                if (y.contains_zero()) {
                    throw DivisionByPossibleZero("divisor enclosure " + rhs->describe() + " contains 0");
                }
                // 1/|y| amplifies errors by roughly 1/min|y|^2
                Rational m = std::min(abs_q(y.lo), abs_q(y.hi));
                long amp = static_cast<long>(mpz_sizeinbase(m.get_den_mpz_t(), 2)) -
                           static_cast<long>(mpz_sizeinbase(m.get_num_mpz_t(), 2)) + 1;
                amp = std::max(0L, 2 * amp);
                Interval x = lhs->enclose(bits + 4 + amp);
                long extra = magnitude_bits(x);
                y = rhs->enclose(bits + guard + amp + extra);
                return (x / y).rounded(bits + 1);
            }
        }
        return {};
    }

    std::string describe() const {
        switch (kind) {
            case Kind::Exact:
                return exact->to_string();
            case Kind::Generated:
                return label;
            case Kind::Neg:
                return "-(" + lhs->describe() + ")";
            case Kind::Add:
                return "(" + lhs->describe() + " + " + rhs->describe() + ")";
            case Kind::Sub:
                return "(" + lhs->describe() + " - " + rhs->describe() + ")";
            case Kind::Mul:
                return "(" + lhs->describe() + " * " + rhs->describe() + ")";
            case Kind::Div:
                return "(" + lhs->describe() + " / " + rhs->describe() + ")";
        }
        return {};
    }

    static long magnitude_bits(const Interval& iv) {
        Rational m = iv.magnitude();
        if (m <= 1) return 0;
        return static_cast<long>(mpz_sizeinbase(floor_of(m).get_mpz_t(), 2));
    }
};

namespace {

using NodePtr = std::shared_ptr<const Real::Node>;

NodePtr exact_node(QuadraticSurd s) {
    auto n = std::make_shared<Real::Node>();
    n->kind = Real::Node::Kind::Exact;
    n->exact = std::move(s);
    return n;
}

}  // namespace

Real::Real() : node_(exact_node(QuadraticSurd())) {}
Real::Real(const Rational& x) : node_(exact_node(QuadraticSurd(x))) {}
Real::Real(const QuadraticSurd& s) : node_(exact_node(s)) {}
Real::Real(long x) : node_(exact_node(QuadraticSurd(Rational(x)))) {}

Real Real::from_generator(Generator g, std::string label) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Generated;
    n->generator = std::move(g);
    n->label = std::move(label);
    return Real(NodePtr(n));
}

Real Real::from_interval(const Interval& iv, std::string label) {
    if (iv.lo > iv.hi) throw DomainError("interval lower bound exceeds upper bound");
    if (iv.lo == iv.hi) return Real(iv.lo);
    return from_generator([iv](long) { return iv; }, std::move(label));
}

const std::optional<QuadraticSurd>& Real::exact() const { return node_->exact; }

std::optional<Rational> Real::exact_rational() const {
    if (node_->exact && node_->exact->is_rational()) return node_->exact->a();
    return std::nullopt;
}

Interval Real::enclose(long bits) const { return node_->enclose(bits); }

std::string Real::describe() const { return node_->describe(); }

namespace {

// Exact combination when both sides are exact and live in one field.
template <class Op>
std::optional<QuadraticSurd> try_exact(const std::optional<QuadraticSurd>& x,
                                       const std::optional<QuadraticSurd>& y, Op op) {
    if (!x || !y) return std::nullopt;
    if (!x->is_rational() && !y->is_rational() && x->d() != y->d()) return std::nullopt;
    return op(*x, *y);
}

NodePtr binary(Real::Node::Kind kind, const NodePtr& l, const NodePtr& r) {
    auto n = std::make_shared<Real::Node>();
    n->kind = kind;
    n->lhs = l;
    n->rhs = r;
    return n;
}

}  // namespace

Real operator+(const Real& x, const Real& y) {
    if (auto e = try_exact(x.exact(), y.exact(), [](auto& a, auto& b) { return a + b; })) return Real(*e);
    return Real(binary(Real::Node::Kind::Add, x.node_, y.node_));
}

Real operator-(const Real& x, const Real& y) {
    if (auto e = try_exact(x.exact(), y.exact(), [](auto& a, auto& b) { return a - b; })) return Real(*e);
    return Real(binary(Real::Node::Kind::Sub, x.node_, y.node_));
}

Real operator*(const Real& x, const Real& y) {
    if (auto e = try_exact(x.exact(), y.exact(), [](auto& a, auto& b) { return a * b; })) return Real(*e);
    return Real(binary(Real::Node::Kind::Mul, x.node_, y.node_));
}

Real operator/(const Real& x, const Real& y) {
    if (y.exact() && y.exact()->sign() == 0) throw DivisionByPossibleZero("division by exact zero");
    if (auto e = try_exact(x.exact(), y.exact(), [](auto& a, auto& b) { return a / b; })) return Real(*e);
    return Real(binary(Real::Node::Kind::Div, x.node_, y.node_));
}

Real Real::operator-() const {
    if (node_->exact) return Real(-*node_->exact);
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Neg;
    n->lhs = node_;
    return Real(NodePtr(n));
}

Interval eval_enclosure(const Real& x, long bits, const PrecisionBudget& budget) {
    budget.validate();
    if (bits <= 0) throw DomainError("eval_enclosure requires positive bits");
    if (auto q = x.exact_rational()) return Interval::point(*q);
    Rational target_unit(Integer(1), pow_z(2, static_cast<unsigned long>(bits - 1)));
    long work = std::max(bits + 8, std::min(budget.initial_bits, budget.max_bits));
    for (;;) {
        Interval iv = x.enclose(work);
        Rational scale = std::max(Rational(1), std::min(abs_q(iv.lo), abs_q(iv.hi)));
        if (iv.width() <= target_unit * scale) return iv;
        if (work >= budget.max_bits) {
            throw ResolutionExceeded("eval_enclosure of " + x.describe() + " to " + std::to_string(bits) +
                                         " bits",
                                     work);
        }
        work = std::min(work * 2, budget.max_bits);
    }
}

Integer certified_floor(const Rational& x) { return floor_of(x); }
Integer certified_floor(const QuadraticSurd& x) { return x.floor(); }
Integer certified_ceil(const Rational& x) { return ceil_of(x); }
Integer certified_ceil(const QuadraticSurd& x) { return x.ceil(); }

Integer certified_floor(const Real& x, const PrecisionBudget& budget) {
    budget.validate();
    if (x.exact()) return x.exact()->floor();
    long work = budget.initial_bits;
    for (;;) {
        Interval iv = x.enclose(work);
        Integer f = floor_of(iv.lo);
        if (f == floor_of(iv.hi)) return f;
        if (work >= budget.max_bits) {
            throw ResolutionExceeded("certified_floor of " + x.describe() + ": enclosure straddles an integer",
                                     work);
        }
        work = std::min(work * 2, budget.max_bits);
    }
}

Integer certified_ceil(const Real& x, const PrecisionBudget& budget) {
    return -certified_floor(-x, budget);
}

int certified_compare(const Real& x, const Real& y, const PrecisionBudget& budget) {
    budget.validate();
    Real diff = x - y;
    if (diff.exact()) return diff.exact()->sign();
    long work = budget.initial_bits;
    for (;;) {
        Interval iv = diff.enclose(work);
        if (iv.lo > 0) return 1;
        if (iv.hi < 0) return -1;
        if (work >= budget.max_bits) {
            throw ResolutionExceeded("certified_compare: " + diff.describe() + " indistinguishable from 0", work);
        }
        work = std::min(work * 2, budget.max_bits);
    }
}

}  // namespace sturm
