#include "ef1po/rational.hpp"

#include "ef1po/error.hpp"

#include <algorithm>
#include <cctype>

namespace ef1po {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

BigInt parse_int(std::string_view s, std::string_view whole) {
  s = trim(s);
  std::size_t digits_from = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (s.size() == digits_from ||
      !std::all_of(s.begin() + digits_from, s.end(),
                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw InvalidInput("malformed rational: \"" + std::string(whole) + "\"");
  }
  if (s[0] == '+') s.remove_prefix(1);
  return BigInt(std::string(s));
}

}  // namespace

Rat parse_rat(std::string_view text) {
  const std::string_view t = trim(text);
  const auto slash = t.find('/');
  if (slash == std::string_view::npos) return Rat(parse_int(t, text));
  BigInt num = parse_int(t.substr(0, slash), text);
  BigInt den = parse_int(t.substr(slash + 1), text);
  if (den == 0) throw InvalidInput("zero denominator: \"" + std::string(text) + "\"");
  return Rat(num, den);
}

std::string to_string(const Rat& value) {
  if (is_integer(value)) return boost::multiprecision::numerator(value).str();
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

bool is_integer(const Rat& value) { return boost::multiprecision::denominator(value) == 1; }

Rat sum(std::span<const Rat> values) {
  Rat total = 0;
  for (const auto& v : values) total += v;
  return total;
}

}  // namespace ef1po
