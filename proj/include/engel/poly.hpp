#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "engel/chart.hpp"

namespace engel {

/// Exponent multi-index, one entry per chart coordinate.
using Exponent = std::vector<std::uint16_t>;

/// Maximum total degree a polynomial may reach; products beyond it throw
/// DegreeOverflow. Default 16. Process-wide.
int max_total_degree() noexcept;
void set_max_total_degree(int degree);

/// Multivariate polynomial with exact rational coefficients over a chart.
/// Zero coefficients are never stored, so `is_zero()` is `terms().empty()`.
class PolyScalar {
public:
    using TermMap = std::map<Exponent, Rational>;

    explicit PolyScalar(Chart chart);
    static PolyScalar constant(Chart chart, const Rational& value);
    static PolyScalar variable(Chart chart, std::size_t index);
    /// Builds from raw terms, dropping zeros and validating exponent lengths.
    static PolyScalar from_terms(Chart chart, TermMap terms);

    const Chart& chart() const noexcept { return chart_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    /// Value of the constant term if the polynomial is constant.
    std::optional<Rational> constant_value() const;
    int total_degree() const noexcept;
    /// Highest exponent of coordinate `index` appearing in any term.
    int degree_in(std::size_t index) const noexcept;

    PolyScalar operator-() const;
    PolyScalar& operator+=(const PolyScalar& other);
    PolyScalar& operator-=(const PolyScalar& other);
    PolyScalar& operator*=(const Rational& factor);
    friend PolyScalar operator+(PolyScalar a, const PolyScalar& b) { return a += b; }
    friend PolyScalar operator-(PolyScalar a, const PolyScalar& b) { return a -= b; }
    friend PolyScalar operator*(const PolyScalar& a, const PolyScalar& b);
    friend PolyScalar operator*(PolyScalar a, const Rational& c) { return a *= c; }
    friend PolyScalar operator*(const Rational& c, PolyScalar a) { return a *= c; }
    PolyScalar pow(unsigned exponent) const;

    bool operator==(const PolyScalar& other) const {
        return chart_ == other.chart_ && terms_ == other.terms_;
    }
    bool operator!=(const PolyScalar& other) const { return !(*this == other); }

    PolyScalar derivative(std::size_t index) const;
    Rational evaluate(std::span<const Rational> point) const;
    Rational evaluate(const RationalPoint& point) const;
    double evaluate(std::span<const double> point) const;

    /// Sets coordinate `index` to `value`; the result lives on `target`,
    /// which must equal chart().without(index).
    PolyScalar substitute(std::size_t index, const Rational& value, const Chart& target) const;
    /// Re-expresses the polynomial on `target`, which must contain every
    /// coordinate name of chart() (extra coordinates are inert).
    PolyScalar embed(const Chart& target) const;
    /// Replaces coordinate i by images[i]; all images share one chart.
    PolyScalar compose(std::span<const PolyScalar> images) const;

private:
    void add_term(const Exponent& e, const Rational& c);

    Chart chart_;
    TermMap terms_;
};

std::string to_string(const PolyScalar& p);

/// Double-precision copy of a polynomial for the numerical integrator.
class CompiledPoly {
public:
    CompiledPoly() = default;
    explicit CompiledPoly(const PolyScalar& p);
    double operator()(std::span<const double> point) const;
    bool is_zero() const noexcept { return coefficients_.empty(); }

private:
    std::vector<double> coefficients_;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint16_t>>> factors_;
};

}  // namespace engel
