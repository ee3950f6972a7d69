// Copyright 2026 The GTR Model Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Arithmetic modes. Every model computation is a template over a scalar
// type: `double` (tolerance based) or `Rational` (exact). The helpers here
// are the only places where the two modes behave differently.

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>

#include "gtr/error.hpp"

namespace gtr {

using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, Rational>;

template <Scalar T>
T abs_value(const T& x) {
    if constexpr (is_exact_v<T>) {
        return x < 0 ? T(-x) : x;
    } else {
        return std::fabs(x);
    }
}

template <Scalar T>
double to_double(const T& x) {
    if constexpr (is_exact_v<T>) {
        // both parts exact in a double: one correctly rounded division
        const auto& num = numerator(x);
        const auto& den = denominator(x);
        constexpr std::uint64_t kExactLimit = std::uint64_t(1) << 53;
        if (boost::multiprecision::abs(num) < kExactLimit && den < kExactLimit)
            return num.template convert_to<double>() / den.template convert_to<double>();
        return x.template convert_to<double>();
    } else {
        return x;
    }
}

/// Rational to the mode's scalar type.
template <Scalar T>
T from_rational(const Rational& x) {
    if constexpr (is_exact_v<T>) {
        return x;
    } else {
        return to_double(x);
    }
}

/// Equality under the mode's policy: exact for Rational, |a-b| <= tol for double.
template <Scalar T>
bool nearly_equal(const T& a, const T& b, double tol) {
    if constexpr (is_exact_v<T>) {
        return a == b;
    } else {
        return std::fabs(a - b) <= tol;
    }
}

/// a <= b, allowing `tol` of slack in float mode.
template <Scalar T>
bool leq_tol(const T& a, const T& b, double tol) {
    if constexpr (is_exact_v<T>) {
        return a <= b;
    } else {
        return a <= b + tol;
    }
}

/// Exact parse of a decimal ("0.4899", "-1e-3") or fraction ("1447/3200").
inline Rational parse_rational(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    if (text.empty()) fail(ErrorKind::parse, "empty number");

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Rational num = parse_rational(text.substr(0, slash));
        Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0) fail(ErrorKind::parse, "zero denominator in '" + std::string(text) + "'");
        return num / den;
    }

    bool negative = false;
    std::size_t pos = 0;
    if (text[pos] == '+' || text[pos] == '-') {
        negative = text[pos] == '-';
        ++pos;
    }
    BigInt digits = 0;
    int scale = 0;
    bool seen_digit = false;
    bool seen_point = false;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c >= '0' && c <= '9') {
            digits = digits * 10 + (c - '0');
            seen_digit = true;
            if (seen_point) ++scale;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) fail(ErrorKind::parse, "not a number: '" + std::string(text) + "'");

    long exponent = 0;
    if (pos < text.size()) {
        if (text[pos] != 'e' && text[pos] != 'E')
            fail(ErrorKind::parse, "not a number: '" + std::string(text) + "'");
        ++pos;
        auto rest = text.substr(pos);
        if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
        auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), exponent);
        if (ec != std::errc() || ptr != rest.data() + rest.size())
            fail(ErrorKind::parse, "bad exponent in '" + std::string(text) + "'");
    }
    exponent -= scale;
    if (exponent > 400 || exponent < -400) fail(ErrorKind::parse, "exponent out of range");

    BigInt power = 1;
    for (long i = 0; i < (exponent < 0 ? -exponent : exponent); ++i) power *= 10;
    Rational value = exponent >= 0 ? Rational(digits * power) : Rational(digits, power);
    return negative ? Rational(-value) : value;
}

/// Shortest round-trip decimal of a double, read back as an exact fraction.
/// 0.4899 becomes 4899/10000, not the binary expansion of the double.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) fail(ErrorKind::parse, "non-finite number");
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) fail(ErrorKind::parse, "cannot format number");
    return parse_rational(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

template <Scalar T>
T scalar_from_text(std::string_view text) {
    if constexpr (is_exact_v<T>) {
        return parse_rational(text);
    } else {
        Rational exact = parse_rational(text);  // validates the syntax
        if (denominator(exact) == 1 || text.find('/') != std::string_view::npos) return to_double(exact);
        while (!text.empty() && (text.front() == ' ' || text.front() == '+')) text.remove_prefix(1);
        while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size()) return to_double(exact);
        return value;
    }
}

template <Scalar T>
T scalar_from_double(double x) {
    if constexpr (is_exact_v<T>) {
        return rational_from_double(x);
    } else {
        return x;
    }
}

/// "num/den" for rationals (always with a denominator), 17 significant
/// digits for doubles.
template <Scalar T>
std::string format_scalar(const T& x) {
    if constexpr (is_exact_v<T>) {
        return numerator(x).str() + "/" + denominator(x).str();
    } else {
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
        return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
    }
}

}  // namespace gtr
