#pragma once

#include "cpcross/error.hpp"
#include "cpcross/rational.hpp"

#include <quadmath.h>

#include <string>

namespace cpcross {

using Float128 = __float128;

// a + b*sqrt(r) over the rationals with r a squarefree integer > 1. A radicand of
// zero means "not yet fixed": the value is rational and combines with any field.
class QuadraticSurd {
public:
    QuadraticSurd() = default;
    QuadraticSurd(long v) : a_(v) {}
    QuadraticSurd(const Rational& a) : a_(a) {}
    QuadraticSurd(const Rational& a, const Rational& b, unsigned long radicand);

    const Rational& rational_part() const { return a_; }
    const Rational& surd_part() const { return b_; }
    unsigned long radicand() const { return r_; }

    bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
    bool is_rational() const { return sgn(b_) == 0; }

    QuadraticSurd& operator+=(const QuadraticSurd& o);
    QuadraticSurd& operator-=(const QuadraticSurd& o);
    QuadraticSurd& operator*=(const QuadraticSurd& o);
    QuadraticSurd& operator/=(const QuadraticSurd& o);

    friend QuadraticSurd operator+(QuadraticSurd x, const QuadraticSurd& y) { return x += y; }
    friend QuadraticSurd operator-(QuadraticSurd x, const QuadraticSurd& y) { return x -= y; }
    friend QuadraticSurd operator*(QuadraticSurd x, const QuadraticSurd& y) { return x *= y; }
    friend QuadraticSurd operator/(QuadraticSurd x, const QuadraticSurd& y) { return x /= y; }
    QuadraticSurd operator-() const;

    friend bool operator==(const QuadraticSurd& x, const QuadraticSurd& y);

    long double approx() const;
    std::string str() const;

private:
    unsigned long join(const QuadraticSurd& o) const;

    Rational a_{0};
    Rational b_{0};
    unsigned long r_ = 0;
};

Float128 to_float128(const Rational& q);
std::string to_string(Float128 x);

// Uniform vocabulary over the three scalar fields used by the matrix code.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static Rational from(const Rational& q) { return q; }
    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
    static long double magnitude(const Rational& x) { return static_cast<long double>(Rational(abs(x)).get_d()); }
    static std::string str(const Rational& x) { return to_string(x); }
};

template <>
struct ScalarTraits<QuadraticSurd> {
    static constexpr bool exact = true;
    static QuadraticSurd from(const Rational& q) { return QuadraticSurd(q); }
    static bool is_zero(const QuadraticSurd& x) { return x.is_zero(); }
    static long double magnitude(const QuadraticSurd& x)
    {
        long double v = x.approx();
        return v < 0 ? -v : v;
    }
    static std::string str(const QuadraticSurd& x) { return x.str(); }
};

template <>
struct ScalarTraits<Float128> {
    static constexpr bool exact = false;
    static Float128 from(const Rational& q) { return to_float128(q); }
    static bool is_zero(Float128 x) { return x == 0; }
    static long double magnitude(Float128 x) { return static_cast<long double>(fabsq(x)); }
    static std::string str(Float128 x) { return to_string(x); }
};

}  // namespace cpcross
