#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ef1po {

/// Exact rational scalar. GMP keeps every value in lowest terms with a
/// positive denominator; expression templates are off so `auto` is safe.
using Rat = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                          boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

/// Parses "p", "-p" or "p/q" (surrounding whitespace allowed). Throws
/// InvalidInput on malformed text or a zero denominator.
Rat parse_rat(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rat& value);

/// True when the value has denominator one.
bool is_integer(const Rat& value);

Rat sum(std::span<const Rat> values);

}  // namespace ef1po
