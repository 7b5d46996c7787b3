#include "engel/rational.hpp"

#include <cctype>
#include <charconv>
#include <bit>
#include <cmath>
#include <cstdint>

namespace engel {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    Rational value;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw Error("not a rational literal: '" + std::string(text) + "'");
        mpz_class n(std::string(num), 10), d(std::string(den), 10);
        if (d == 0) throw Error("zero denominator in '" + std::string(text) + "'");
        value = Rational(n, d);
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        auto whole = s.substr(0, dot);
        auto frac = s.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
            (whole.empty() && frac.empty()))
            throw Error("not a rational literal: '" + std::string(text) + "'");
        mpz_class n(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
        mpz_class d;
        mpz_ui_pow_ui(d.get_mpz_t(), 10, frac.size());
        value = Rational(n, d);
    } else {
        if (!all_digits(s)) throw Error("not a rational literal: '" + std::string(text) + "'");
        value = Rational(mpz_class(std::string(s), 10));
    }
    value.canonicalize();
    return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    return c.get_str(10);
}

double to_double(const Rational& q) {
    const double truncated = q.get_d();
    if (!std::isfinite(truncated)) return truncated;
    double best = truncated;
    Rational best_error = abs(Rational(truncated) - q);
    for (double candidate : {std::nextafter(truncated, -INFINITY), std::nextafter(truncated, INFINITY)}) {
        if (!std::isfinite(candidate)) continue;
        const Rational error = abs(Rational(candidate) - q);
        const bool tie_to_even = error == best_error && (std::bit_cast<std::uint64_t>(candidate) & 1u) == 0;
        if (error < best_error || tie_to_even) {
            best = candidate;
            best_error = error;
        }
    }
    return best;
}

Rational from_double(double value) {
    if (!std::isfinite(value)) throw Error("cannot convert a non-finite double to a rational");
    return Rational(value);
}

Rational shortest_rational(double value) {
    if (!std::isfinite(value)) throw Error("cannot convert a non-finite double to a rational");
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    std::string text(buffer, end);
    // to_chars may pick scientific notation; expand the exponent exactly.
    auto e = text.find('e');
    if (e == std::string::npos) return parse_rational(text);
    Rational mantissa = parse_rational(text.substr(0, e));
    const int exponent = std::stoi(text.substr(e + 1));
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    Rational out = exponent < 0 ? Rational(mantissa / scale) : Rational(mantissa * scale);
    out.canonicalize();
    return out;
}

}  // namespace engel
