#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace engel {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ChartMismatch : public Error {
public:
    ChartMismatch() : Error("objects live on different charts") {}
};

class DegreeOverflow : public Error {
public:
    explicit DegreeOverflow(int degree)
        : Error("polynomial total degree " + std::to_string(degree) +
                " exceeds the configured maximum") {}
};

/// Raised when an input violates the hypotheses an operation needs
/// (corank, regularity, constancy of L, ...). `stage` tags where it happened.
class HypothesisViolation : public Error {
public:
    HypothesisViolation(std::string stage, const std::string& what)
        : Error(stage.empty() ? what : stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// Parses "3", "-3/2" or a finite decimal "0.25" into an exact rational.
/// Throws Error on anything else.
Rational parse_rational(std::string_view text);

/// Canonical text: "p" or "p/q" with q > 0.
std::string to_string(const Rational& q);

/// Correctly rounded (nearest, ties to even); mpq_get_d alone truncates.
double to_double(const Rational& q);

/// Exact rational value of a double (every finite double is dyadic).
Rational from_double(double value);
/// Rational value of the shortest decimal that round-trips to `value`.
Rational shortest_rational(double value);

}  // namespace engel
