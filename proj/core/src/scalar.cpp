#include "cpcross/scalar.hpp"

#include <cmath>

namespace cpcross {

QuadraticSurd::QuadraticSurd(const Rational& a, const Rational& b, unsigned long radicand)
    : a_(a), b_(b), r_(radicand)
{
    if (radicand == 1) {
        a_ += b_;
        b_ = 0;
        r_ = 0;
    }
    if (sgn(b_) != 0 && r_ == 0) throw PreconditionError("surd part without a radicand");
}

unsigned long QuadraticSurd::join(const QuadraticSurd& o) const
{
    if (r_ == 0) return o.r_;
    if (o.r_ == 0 || o.r_ == r_) return r_;
    throw PreconditionError("quadratic surds from different fields: sqrt(" + std::to_string(r_) + ") vs sqrt(" +
                            std::to_string(o.r_) + ")");
}

QuadraticSurd& QuadraticSurd::operator+=(const QuadraticSurd& o)
{
    r_ = join(o);
    a_ += o.a_;
    b_ += o.b_;
    return *this;
}

QuadraticSurd& QuadraticSurd::operator-=(const QuadraticSurd& o)
{
    r_ = join(o);
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
}

QuadraticSurd& QuadraticSurd::operator*=(const QuadraticSurd& o)
{
    unsigned long r = join(o);
    Rational a = a_ * o.a_ + b_ * o.b_ * Rational(r);
    Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = a;
    b_ = b;
    r_ = r;
    return *this;
}

QuadraticSurd& QuadraticSurd::operator/=(const QuadraticSurd& o)
{
    if (o.is_zero()) throw PreconditionError("division by zero");
    unsigned long r = join(o);
    // (a + b s)^{-1} = (a - b s) / (a^2 - r b^2); the norm is nonzero since r is not a square.
    Rational norm = o.a_ * o.a_ - o.b_ * o.b_ * Rational(r);
    QuadraticSurd conj(o.a_ / norm, -o.b_ / norm, r == 0 ? 0 : r);
    r_ = r;
    return *this *= conj;
}

QuadraticSurd QuadraticSurd::operator-() const
{
    QuadraticSurd n = *this;
    n.a_ = -n.a_;
    n.b_ = -n.b_;
    return n;
}

bool operator==(const QuadraticSurd& x, const QuadraticSurd& y)
{
    return x.a_ == y.a_ && x.b_ == y.b_ && (sgn(x.b_) == 0 || x.r_ == y.r_);
}

long double QuadraticSurd::approx() const
{
    long double v = static_cast<long double>(a_.get_d());
    if (sgn(b_) != 0) v += static_cast<long double>(b_.get_d()) * std::sqrt(static_cast<long double>(r_));
    return v;
}

std::string QuadraticSurd::str() const
{
    if (sgn(b_) == 0) return to_string(a_);
    std::string s = to_string(a_) + (sgn(b_) < 0 ? " - " : " + ");
    return s + to_string(Rational(abs(b_))) + "*sqrt(" + std::to_string(r_) + ")";
}

namespace {

Float128 integer_to_float128(const mpz_class& z)
{
    return strtoflt128(z.get_str().c_str(), nullptr);
}

}  // namespace

Float128 to_float128(const Rational& q)
{
    return integer_to_float128(q.get_num()) / integer_to_float128(q.get_den());
}

std::string to_string(Float128 x)
{
    char buf[64];
    quadmath_snprintf(buf, sizeof buf, "%.33Qe", x);
    return buf;
}

}  // namespace cpcross
