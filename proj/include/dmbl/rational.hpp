#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "dmbl/error.hpp"

namespace dmbl {

/// Exact rational backed by GMP; always kept in canonical reduced form.
using Rational = mpq_class;

/// Accepts "p/q" or an integer "p"; surrounding whitespace is ignored.
inline Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  auto is_int = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  const auto slash = text.find('/');
  const auto num = text.substr(0, slash);
  const auto den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!is_int(num) || !is_int(den) || den.front() == '-' || den.front() == '+')
    throw Error("malformed rational '" + std::string(text) + "'");
  std::string n(num);
  if (n.front() == '+') n.erase(0, 1);
  mpz_class zn(n, 10);
  mpz_class zd(std::string(den), 10);
  if (zd == 0) throw Error("zero denominator in '" + std::string(text) + "'");
  Rational r(zn, zd);
  r.canonicalize();
  return r;
}

/// Always "p/q", including integers ("1/1", "0/1").
inline std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

}  // namespace dmbl
