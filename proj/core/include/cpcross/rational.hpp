#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace cpcross {

using Rational = mpq_class;

// Parses "p", "-p", "p/q". Decimal literals ("0.25", "1e-3") are accepted only
// when allow_decimal is set; they are converted exactly.
Rational parse_rational(std::string_view text, bool allow_decimal = false);

// Canonical "p/q" form, or "p" for integers.
std::string to_string(const Rational& q);

inline Rational canonical(Rational q)
{
    q.canonicalize();
    return q;
}

}  // namespace cpcross
