#include "cpcross/rational.hpp"

#include "cpcross/error.hpp"

#include <cctype>

namespace cpcross {

namespace {

bool is_integer_literal(std::string_view s)
{
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

mpz_class parse_integer(std::string_view s)
{
    std::string text(s);
    if (!text.empty() && text.front() == '+') text.erase(0, 1);
    return mpz_class(text, 10);
}

// d.ddd[e[+-]x] converted exactly.
Rational parse_decimal(std::string_view text)
{
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
        std::string_view exp_part = s.substr(epos + 1);
        if (!is_integer_literal(exp_part)) throw InputError("malformed rational \"" + std::string(text) + "\"");
        exponent = std::stol(std::string(exp_part));
        s = s.substr(0, epos);
    }
    std::string digits;
    bool seen_point = false;
    long fraction_digits = 0;
    for (char c : s) {
        if (c == '.' && !seen_point) {
            seen_point = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            if (seen_point) ++fraction_digits;
        } else {
            throw InputError("malformed rational \"" + std::string(text) + "\"");
        }
    }
    if (digits.empty()) throw InputError("malformed rational \"" + std::string(text) + "\"");
    Rational value{mpz_class(digits, 10)};
    long scale = exponent - fraction_digits;
    mpz_class ten_power;
    mpz_ui_pow_ui(ten_power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    if (scale < 0)
        value /= Rational(ten_power);
    else
        value *= Rational(ten_power);
    value.canonicalize();
    return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text, bool allow_decimal)
{
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw InputError("empty rational literal");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-' || den.front() == '+')
            throw InputError("malformed rational \"" + std::string(text) + "\"");
        mpz_class d = parse_integer(den);
        if (d == 0) throw InputError("zero denominator in \"" + std::string(text) + "\"");
        Rational q(parse_integer(num), d);
        q.canonicalize();
        return q;
    }
    if (is_integer_literal(s)) return Rational(parse_integer(s));
    if (!allow_decimal)
        throw InputError("decimal literal \"" + std::string(text) + "\" rejected; write p/q or pass --float");
    return parse_decimal(s);
}

std::string to_string(const Rational& q)
{
    Rational c = q;
    c.canonicalize();
    return c.get_str();
}

}  // namespace cpcross
