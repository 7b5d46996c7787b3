#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "engel/poly.hpp"

namespace engel {

/// Vector field with polynomial components, one per chart coordinate.
class VectorField {
public:
    explicit VectorField(Chart chart);
    VectorField(Chart chart, std::vector<PolyScalar> components);
    /// The coordinate field d/dx_index.
    static VectorField coordinate(Chart chart, std::size_t index);

    const Chart& chart() const noexcept { return chart_; }
    const std::vector<PolyScalar>& components() const noexcept { return components_; }
    const PolyScalar& operator[](std::size_t i) const { return components_.at(i); }
    bool is_zero() const noexcept;

    VectorField operator-() const;
    VectorField& operator+=(const VectorField& other);
    VectorField& operator-=(const VectorField& other);
    friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
    friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
    friend VectorField operator*(const PolyScalar& f, const VectorField& v);
    friend VectorField operator*(const Rational& c, const VectorField& v);
    bool operator==(const VectorField& other) const {
        return chart_ == other.chart_ && components_ == other.components_;
    }
    bool operator!=(const VectorField& other) const { return !(*this == other); }

    /// Directional derivative X(f).
    PolyScalar apply(const PolyScalar& f) const;
    RationalVector evaluate(const RationalPoint& p) const;
    VectorField embed(const Chart& target) const;

private:
    Chart chart_;
    std::vector<PolyScalar> components_;
};

VectorField lie_bracket(const VectorField& x, const VectorField& y);

/// Sorted strictly increasing coordinate index set, packed as a bit mask.
/// Charts carrying forms are limited to 64 coordinates.
struct FormIndex {
    std::uint64_t mask = 0;

    int size() const noexcept;
    bool contains(std::size_t i) const noexcept { return (mask >> i) & 1u; }
    std::vector<std::size_t> indices() const;
    bool operator==(const FormIndex&) const = default;
};

/// Lexicographic order of the increasing index tuples (for equal sizes).
struct FormIndexLess {
    bool operator()(const FormIndex& a, const FormIndex& b) const noexcept;
};

inline constexpr std::size_t kMaxFormDim = 64;

/// Exterior k-form with polynomial coefficients. Terms are keyed by increasing
/// index sets with signs normalised on insertion; zero coefficients are never
/// stored. Degree-0 forms wrap a single PolyScalar.
class ExtForm {
public:
    using TermMap = std::map<FormIndex, PolyScalar, FormIndexLess>;

    ExtForm(Chart chart, int degree);
    static ExtForm zero(Chart chart, int degree) { return ExtForm(std::move(chart), degree); }
    static ExtForm scalar(const PolyScalar& f);
    /// The coordinate differential dx_index.
    static ExtForm differential(Chart chart, std::size_t index);
    /// df for a 0-form f.
    static ExtForm differential_of(const PolyScalar& f);

    const Chart& chart() const noexcept { return chart_; }
    int degree() const noexcept { return degree_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    /// Coefficient of the basis element with these increasing indices.
    PolyScalar coefficient(const FormIndex& index) const;
    /// For 1-forms: the dense coefficient list.
    std::vector<PolyScalar> one_form_coefficients() const;
    /// Adds c * dx_I where I is any (possibly unsorted) index list.
    void add_term(std::span<const std::size_t> indices, const PolyScalar& c);

    ExtForm operator-() const;
    ExtForm& operator+=(const ExtForm& other);
    ExtForm& operator-=(const ExtForm& other);
    friend ExtForm operator+(ExtForm a, const ExtForm& b) { return a += b; }
    friend ExtForm operator-(ExtForm a, const ExtForm& b) { return a -= b; }
    friend ExtForm operator*(const PolyScalar& f, const ExtForm& a);
    friend ExtForm operator*(const Rational& c, const ExtForm& a);
    bool operator==(const ExtForm& other) const {
        return chart_ == other.chart_ && degree_ == other.degree_ && terms_ == other.terms_;
    }
    bool operator!=(const ExtForm& other) const { return !(*this == other); }

    /// Applies `fn` to every coefficient; results must live on `target`.
    template <typename Fn>
    ExtForm map_coefficients(const Chart& target, Fn&& fn) const {
        ExtForm out(target, degree_);
        for (const auto& [index, c] : terms_) {
            PolyScalar mapped = fn(c);
            if (!mapped.is_zero()) out.terms_.emplace(index, std::move(mapped));
        }
        return out;
    }

private:
    friend ExtForm wedge(const ExtForm&, const ExtForm&);
    friend ExtForm exterior_derivative(const ExtForm&);
    friend ExtForm interior_product(const VectorField&, const ExtForm&);
    void accumulate(const FormIndex& index, const PolyScalar& c);

    Chart chart_;
    int degree_;
    TermMap terms_;
};

/// Graded-commutative product. Degrees summing past dim give the canonical
/// zero form of that degree.
ExtForm wedge(const ExtForm& a, const ExtForm& b);
/// alpha ^ alpha ^ ... (count factors); count 0 gives the constant 1.
ExtForm wedge_power(const ExtForm& a, unsigned count);
ExtForm exterior_derivative(const ExtForm& a);
/// Contraction in the first slot: (i_X a)(Y,...) = a(X,Y,...).
ExtForm interior_product(const VectorField& x, const ExtForm& a);
/// a(X_1,...,X_k) as a polynomial.
PolyScalar contract(const ExtForm& a, std::span<const VectorField> fields);
/// Pulls back along the polynomial map whose coordinate functions
/// (expressed on the target chart) are `images`, one per source coordinate.
ExtForm pullback(const ExtForm& a, std::span<const PolyScalar> images);
ExtForm embed(const ExtForm& a, const Chart& target);

/// An exterior form evaluated at a point: index set -> exact value.
struct FormValue {
    int degree = 0;
    std::size_t dim = 0;
    std::map<FormIndex, Rational, FormIndexLess> components;

    bool is_zero() const noexcept { return components.empty(); }
    /// Value on concrete vectors (determinant convention).
    Rational apply(std::span<const RationalVector> vectors) const;
};

FormValue evaluate(const ExtForm& a, const RationalPoint& p);
/// Dense covector of a 1-form at p.
RationalVector evaluate_covector(const ExtForm& a, const RationalPoint& p);
/// Matrix B with a_p(u, v) = u^T B v for a 2-form.
std::vector<RationalVector> evaluate_bilinear(const ExtForm& a, const RationalPoint& p);
RationalVector evaluate(const VectorField& x, const RationalPoint& p);

}  // namespace engel
