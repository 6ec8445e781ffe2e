#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fairdiv {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number over arbitrary-precision integers.
/// Invariant: lowest terms, denominator > 0. All arithmetic is exact;
/// doubles appear only in display helpers.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long v) : num_(v), den_(1) {}
    Rational(BigInt v) : num_(std::move(v)), den_(1) {}
    Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
        normalize();
    }
    Rational(long long num, long long den) : Rational(BigInt(num), BigInt(den)) {}

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    bool is_positive() const { return num_ > 0; }
    int sign() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }

    friend Rational operator-(const Rational& x) {
        Rational r;
        r.num_ = -x.num_;
        r.den_ = x.den_;
        return r;
    }
    friend Rational operator+(const Rational& x, const Rational& y) {
        return Rational(x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_);
    }
    friend Rational operator-(const Rational& x, const Rational& y) {
        return Rational(x.num_ * y.den_ - y.num_ * x.den_, x.den_ * y.den_);
    }
    friend Rational operator*(const Rational& x, const Rational& y) {
        return Rational(x.num_ * y.num_, x.den_ * y.den_);
    }
    friend Rational operator/(const Rational& x, const Rational& y) {
        if (y.num_ == 0) throw std::invalid_argument("Rational: division by zero");
        return Rational(x.num_ * y.den_, x.den_ * y.num_);
    }

    Rational& operator+=(const Rational& x) { return *this = *this + x; }
    Rational& operator-=(const Rational& x) { return *this = *this - x; }
    Rational& operator*=(const Rational& x) { return *this = *this * x; }
    Rational& operator/=(const Rational& x) { return *this = *this / x; }

    friend bool operator==(const Rational& x, const Rational& y) {
        return x.num_ == y.num_ && x.den_ == y.den_;
    }
    friend bool operator!=(const Rational& x, const Rational& y) { return !(x == y); }
    friend bool operator<(const Rational& x, const Rational& y) {
        return x.num_ * y.den_ < y.num_ * x.den_;
    }
    friend bool operator>(const Rational& x, const Rational& y) { return y < x; }
    friend bool operator<=(const Rational& x, const Rational& y) { return !(y < x); }
    friend bool operator>=(const Rational& x, const Rational& y) { return !(x < y); }

    /// Serialized form: "p/q", or "p" when the denominator is 1.
    std::string str() const {
        std::string s = num_.str();
        if (den_ != 1) s += "/" + den_.str();
        return s;
    }

    /// Display only; never used for decisions.
    double to_double() const {
        return num_.convert_to<double>() / den_.convert_to<double>();
    }

    /// Parses "p" or "p/q". Rejects q <= 0, empty parts and any non-integer
    /// syntax (signs allowed on the numerator only).
    static Rational parse(std::string_view text) {
        auto bad = [&](const char* why) {
            throw std::invalid_argument("invalid rational \"" + std::string(text) + "\": " + why);
        };
        auto slash = text.find('/');
        std::string_view ns = text.substr(0, slash);
        std::string_view ds = slash == std::string_view::npos ? std::string_view("1")
                                                              : text.substr(slash + 1);
        auto parse_int = [&](std::string_view p, bool allow_sign) {
            if (p.empty()) bad("empty integer part");
            std::size_t i = 0;
            bool negative = false;
            if (allow_sign && (p[0] == '-' || p[0] == '+')) {
                negative = p[0] == '-';
                i = 1;
            }
            if (i == p.size()) bad("sign without digits");
            for (std::size_t k = i; k < p.size(); ++k)
                if (p[k] < '0' || p[k] > '9') bad("not an integer");
            BigInt v(std::string(p.substr(i)));
            return negative ? BigInt(-v) : v;
        };
        BigInt num = parse_int(ns, true);
        BigInt den = parse_int(ds, false);
        if (den <= 0) bad("denominator must be positive");
        return Rational(std::move(num), std::move(den));
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& x) {
        return os << x.str();
    }

private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_ == 0) {
            den_ = 1;
            return;
        }
        BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    BigInt num_;
    BigInt den_;
};

inline Rational abs(const Rational& x) { return x.is_negative() ? -x : x; }
inline const Rational& min(const Rational& x, const Rational& y) { return y < x ? y : x; }
inline const Rational& max(const Rational& x, const Rational& y) { return x < y ? y : x; }

}  // namespace fairdiv
