#pragma once

#include "fairdiv/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace fairdiv {

enum class Ordering { Less, Equal, Greater };

inline Ordering ordering_of_sign(int s) {
    return s < 0 ? Ordering::Less : (s == 0 ? Ordering::Equal : Ordering::Greater);
}

/// Quadratic irrational threshold: the unique positive root of a*x^2 + b*x + c.
/// Construction rejects quadratics with no positive root or two of them, so the
/// sign trick in surd_compare is always valid.
class SurdThreshold {
public:
    SurdThreshold(BigInt a, BigInt b, BigInt c)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
        if (a_ == 0) throw std::invalid_argument("SurdThreshold: not a quadratic (a = 0)");
        if (a_ < 0) {
            a_ = -a_;
            b_ = -b_;
            c_ = -c_;
        }
        // With a > 0: c < 0 gives roots of opposite signs; c = 0 and b < 0 gives
        // roots {0, -b/a}. Anything else has zero or two positive roots.
        bool ok = c_ < 0 || (c_ == 0 && b_ < 0);
        if (!ok)
            throw std::invalid_argument(
                "SurdThreshold: quadratic must have exactly one positive root");
    }
    SurdThreshold(long long a, long long b, long long c)
        : SurdThreshold(BigInt(a), BigInt(b), BigInt(c)) {}

    const BigInt& a() const { return a_; }
    const BigInt& b() const { return b_; }
    const BigInt& c() const { return c_; }

    /// phi = (1 + sqrt(5)) / 2, root of x^2 - x - 1.
    static SurdThreshold golden_ratio() { return SurdThreshold(1, -1, -1); }

    /// Evaluates a*q^2 + b*q + c at a rational point, exactly.
    Rational evaluate(const Rational& q) const {
        return Rational(a_) * q * q + Rational(b_) * q + Rational(c_);
    }

    bool same_quadratic(const SurdThreshold& o) const {
        // Both stored with a > 0; compare primitive forms.
        BigInt g1 = boost::multiprecision::gcd(boost::multiprecision::gcd(a_, abs_(b_)), abs_(c_));
        BigInt g2 = boost::multiprecision::gcd(boost::multiprecision::gcd(o.a_, abs_(o.b_)), abs_(o.c_));
        return a_ * g2 == o.a_ * g1 && b_ * g2 == o.b_ * g1 && c_ * g2 == o.c_ * g1;
    }

private:
    static BigInt abs_(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

    BigInt a_, b_, c_;
};

/// Sign of x - r*y where r is the positive root of t. Requires y >= 0.
inline Ordering surd_compare(const Rational& x, const Rational& y, const SurdThreshold& t) {
    if (y.is_negative()) throw std::invalid_argument("surd_compare: y must be >= 0");
    if (y.is_zero()) return ordering_of_sign(x.sign());
    if (!x.is_positive()) return Ordering::Less;  // r > 0, y > 0
    // x > 0, y > 0: both x - r1*y and x - r2*y cannot be negative together
    // (r2 <= 0 < x/y), so sign(a*x^2 + b*x*y + c*y^2) = sign(x - r1*y).
    Rational s = Rational(t.a()) * x * x + Rational(t.b()) * x * y + Rational(t.c()) * y * y;
    return ordering_of_sign(s.sign());
}

/// Swap threshold lambda(n): phi for n = 2; for n >= 3 the positive root of
/// (2n-2) x^2 + (n-3) x - 2, which lies strictly in (1/(n-1), 2/(n-1)).
inline SurdThreshold lambda_threshold(long long n) {
    if (n < 2) throw std::invalid_argument("lambda_threshold: requires n >= 2");
    if (n == 2) return SurdThreshold::golden_ratio();
    return SurdThreshold(2 * n - 2, n - 3, -2);
}

/// Rational interval (lo, hi) with lo < root(t) < hi.
inline std::pair<Rational, Rational> root_bracket(const SurdThreshold& t, int halvings = 80) {
    Rational lo(0), hi(1);
    while (surd_compare(hi, Rational(1), t) != Ordering::Greater) hi *= Rational(2);
    for (int i = 0; i < halvings; ++i) {
        Rational mid = (lo + hi) / Rational(2);
        Ordering o = surd_compare(mid, Rational(1), t);
        if (o == Ordering::Equal) {
            // Rational root: return a tight enclosing interval.
            Rational eps(1, 1000000);
            return {mid - eps, mid + eps};
        }
        (o == Ordering::Less ? lo : hi) = mid;
    }
    return {lo, hi};
}

/// Exact threshold value: offset + scale * root, with scale > 0, plus the two
/// degenerate kinds needed by the checkers (exact rational, infinity).
class FactorBound {
public:
    enum class Kind { ExactRational, SurdScaled, Infinite };

    static FactorBound exact(Rational v) {
        FactorBound b;
        b.kind_ = Kind::ExactRational;
        b.value_ = std::move(v);
        return b;
    }
    static FactorBound infinite() {
        FactorBound b;
        b.kind_ = Kind::Infinite;
        return b;
    }
    static FactorBound surd_scaled(SurdThreshold t, Rational offset, Rational scale) {
        if (!scale.is_positive())
            throw std::invalid_argument("FactorBound: scale must be positive");
        FactorBound b;
        b.kind_ = Kind::SurdScaled;
        b.surd_ = std::move(t);
        b.offset_ = std::move(offset);
        b.scale_ = std::move(scale);
        return b;
    }

    Kind kind() const { return kind_; }
    bool is_infinite() const { return kind_ == Kind::Infinite; }
    const Rational& exact_value() const {
        if (kind_ != Kind::ExactRational)
            throw std::logic_error("FactorBound: not an exact rational");
        return value_;
    }
    const SurdThreshold& surd() const { return *surd_; }
    const Rational& offset() const { return offset_; }
    const Rational& scale() const { return scale_; }

    std::string str() const {
        switch (kind_) {
            case Kind::ExactRational: return value_.str();
            case Kind::Infinite: return "inf";
            case Kind::SurdScaled:
                return offset_.str() + " + " + scale_.str() + " * root(" + surd_->a().str() +
                       "," + surd_->b().str() + "," + surd_->c().str() + ")";
        }
        return "";
    }

private:
    FactorBound() = default;

    Kind kind_ = Kind::ExactRational;
    Rational value_;
    std::optional<SurdThreshold> surd_;
    Rational offset_, scale_;
};

inline Ordering compare_rationals(const Rational& x, const Rational& y) {
    BigInt lhs = x.num() * y.den();
    BigInt rhs = y.num() * x.den();
    return lhs < rhs ? Ordering::Less : (lhs == rhs ? Ordering::Equal : Ordering::Greater);
}

/// Sign of q - bound, exact for every kind.
inline Ordering compare(const Rational& q, const FactorBound& b) {
    switch (b.kind()) {
        case FactorBound::Kind::Infinite:
            return Ordering::Less;
        case FactorBound::Kind::ExactRational:
            return compare_rationals(q, b.exact_value());
        case FactorBound::Kind::SurdScaled:
            // q vs offset + scale*r  <=>  (q - offset)/scale vs r
            return surd_compare((q - b.offset()) / b.scale(), Rational(1), b.surd());
    }
    return Ordering::Equal;
}

/// Sign of x/y - bound for y > 0, without forming the quotient in the surd case.
inline Ordering compare_ratio(const Rational& x, const Rational& y, const FactorBound& b) {
    if (!y.is_positive()) throw std::invalid_argument("compare_ratio: y must be > 0");
    switch (b.kind()) {
        case FactorBound::Kind::Infinite:
            return Ordering::Less;
        case FactorBound::Kind::ExactRational:
            return ordering_of_sign((x - b.exact_value() * y).sign());
        case FactorBound::Kind::SurdScaled:
            return surd_compare(x - b.offset() * y, b.scale() * y, b.surd());
    }
    return Ordering::Equal;
}

namespace detail {

/// Decides offset + scale*root(t) == q for rational q.
inline bool surd_value_equals_rational(const FactorBound& s, const Rational& q) {
    Rational root = (q - s.offset()) / s.scale();
    if (!root.is_positive()) return false;
    return s.surd().evaluate(root).is_zero();
}

}  // namespace detail

/// Total exact comparison of two factor bounds.
inline Ordering compare(const FactorBound& x, const FactorBound& y) {
    using K = FactorBound::Kind;
    if (x.kind() == K::Infinite && y.kind() == K::Infinite) return Ordering::Equal;
    if (x.kind() == K::Infinite) return Ordering::Greater;
    if (y.kind() == K::Infinite) return Ordering::Less;
    if (x.kind() == K::ExactRational) {
        if (y.kind() == K::ExactRational)
            return compare_rationals(x.exact_value(), y.exact_value());
        Ordering o = compare(x.exact_value(), y);
        return o;
    }
    if (y.kind() == K::ExactRational) {
        Ordering o = compare(y.exact_value(), x);
        return o == Ordering::Less ? Ordering::Greater
                                   : (o == Ordering::Greater ? Ordering::Less : Ordering::Equal);
    }
    // Surd vs surd: refine disjoint rational brackets; on persistent overlap the
    // values are equal iff reducing one root through the other's quadratic pins
    // it to a rational, which is then checked exactly.
    auto bracket_value = [](const FactorBound& s) {
        auto [lo, hi] = root_bracket(s.surd());
        return std::pair<Rational, Rational>{s.offset() + s.scale() * lo,
                                             s.offset() + s.scale() * hi};
    };
    auto [xlo, xhi] = bracket_value(x);
    auto [ylo, yhi] = bracket_value(y);
    if (xhi <= ylo) {
        if (xhi == ylo && detail::surd_value_equals_rational(x, xhi) &&
            detail::surd_value_equals_rational(y, ylo))
            return Ordering::Equal;
        return Ordering::Less;
    }
    if (yhi <= xlo) {
        if (yhi == xlo && detail::surd_value_equals_rational(x, xlo) &&
            detail::surd_value_equals_rational(y, yhi))
            return Ordering::Equal;
        return Ordering::Greater;
    }
    // Overlapping at 2^-80 width: test equality via substitution. Write
    // r2 = (off1 - off2 + sc1*r1)/sc2 and reduce A2 at that point with
    // r1^2 = -(b1*r1 + c1)/a1 to alpha + beta*r1.
    const SurdThreshold& t1 = x.surd();
    const SurdThreshold& t2 = y.surd();
    Rational p = (x.offset() - y.offset()) / y.scale();   // r2 = p + u*r1
    Rational u = x.scale() / y.scale();
    Rational a2(t2.a()), b2(t2.b()), c2(t2.c());
    Rational a1(t1.a()), b1(t1.b()), c1(t1.c());
    // A2(p + u r1) = a2(p^2 + 2pu r1 + u^2 r1^2) + b2 p + b2 u r1 + c2
    Rational r1sq_const = -c1 / a1;       // r1^2 = r1sq_lin * r1 + r1sq_const
    Rational r1sq_lin = -b1 / a1;
    Rational alpha = a2 * (p * p + u * u * r1sq_const) + b2 * p + c2;
    Rational beta = a2 * (Rational(2) * p * u + u * u * r1sq_lin) + b2 * u;
    bool equal;
    if (beta.is_zero()) {
        equal = alpha.is_zero();
    } else {
        Rational candidate = -alpha / beta;  // forced rational value of r1
        equal = candidate.is_positive() && t1.evaluate(candidate).is_zero() &&
                detail::surd_value_equals_rational(y, x.offset() + x.scale() * candidate);
    }
    if (equal) return Ordering::Equal;
    // Not equal: keep refining until separation.
    auto [lo1, hi1] = root_bracket(x.surd(), 160);
    auto [lo2, hi2] = root_bracket(y.surd(), 160);
    Rational xl = x.offset() + x.scale() * lo1, xh = x.offset() + x.scale() * hi1;
    Rational yl = y.offset() + y.scale() * lo2, yh = y.offset() + y.scale() * hi2;
    if (xh <= yl) return Ordering::Less;
    if (yh <= xl) return Ordering::Greater;
    throw std::logic_error("FactorBound::compare: could not separate surd values");
}

/// Decimal rendering of offset + scale*root to `digits` places (display only;
/// all decisions in the library go through the exact comparisons above).
inline std::string decimal_string(const FactorBound& b, int digits) {
    if (b.is_infinite()) return "inf";
    BigInt pow10 = 1;
    for (int i = 0; i < digits; ++i) pow10 *= 10;
    Rational value;
    if (b.kind() == FactorBound::Kind::ExactRational) {
        value = b.exact_value();
    } else {
        // root = (-B + sqrt(B^2 - 4AC)) / (2A), computed with guard digits.
        const SurdThreshold& t = b.surd();
        BigInt disc = t.b() * t.b() - 4 * t.a() * t.c();
        int guard = digits + 12;
        BigInt scale10 = 1;
        for (int i = 0; i < guard; ++i) scale10 *= 10;
        BigInt radicand = disc * scale10 * scale10;
        BigInt s = boost::multiprecision::sqrt(radicand);
        Rational root = (Rational(-t.b()) + Rational(s, scale10)) / Rational(2 * t.a());
        value = b.offset() + b.scale() * root;
    }
    bool neg = value.is_negative();
    if (neg) value = -value;
    // Round to nearest at the last digit (ties away from zero).
    BigInt scaled = (value.num() * pow10 * 2 + value.den()) / (value.den() * 2);
    BigInt ip = scaled / pow10;
    BigInt fp = scaled % pow10;
    std::string frac = fp.str();
    frac.insert(frac.begin(), static_cast<std::size_t>(digits) - frac.size(), '0');
    return (neg ? "-" : "") + ip.str() + "." + frac;
}

}  // namespace fairdiv
