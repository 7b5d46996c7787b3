#pragma once

#include <optional>
#include <span>
#include <vector>

#include "engel/poly.hpp"

namespace engel {

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    static RationalMatrix from_rows(std::span<const RationalVector> rows, std::size_t cols);
    static RationalMatrix from_columns(std::span<const RationalVector> columns, std::size_t rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    RationalVector row(std::size_t r) const;
    RationalVector column(std::size_t c) const;
    RationalMatrix transpose() const;
    RationalVector operator*(std::span<const Rational> x) const;
    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

struct RowEchelon {
    RationalMatrix reduced;            // reduced row echelon form
    std::vector<std::size_t> pivots;   // pivot column of each nonzero row
};

RowEchelon rref(RationalMatrix m);
std::size_t rank(const RationalMatrix& m);
/// Basis of {x : m x = 0}, one vector per free column.
std::vector<RationalVector> nullspace(const RationalMatrix& m);
/// Some x with m x = b, or nullopt when inconsistent.
std::optional<RationalVector> solve_particular(const RationalMatrix& m, std::span<const Rational> b);

// Subspaces of Q^dim given by spanning lists.
std::size_t span_rank(std::span<const RationalVector> vectors, std::size_t dim);
/// Canonical basis (nonzero rows of the reduced echelon form).
std::vector<RationalVector> span_basis(std::span<const RationalVector> vectors, std::size_t dim);
bool in_span(std::span<const RationalVector> vectors, std::span<const Rational> v, std::size_t dim);
std::vector<RationalVector> intersect(std::span<const RationalVector> a, std::span<const RationalVector> b,
                                      std::size_t dim);
/// Vectors of `within` orthogonal (Euclidean) to every vector of `to`.
std::vector<RationalVector> orthogonal_complement(std::span<const RationalVector> within,
                                                  std::span<const RationalVector> to, std::size_t dim);
/// Basis of the common kernel of covectors (vectors v with c.v = 0 for all c).
std::vector<RationalVector> common_kernel(std::span<const RationalVector> covectors, std::size_t dim);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);
bool is_zero(std::span<const Rational> v);

/// Result of eliminating a polynomial matrix over its fraction field.
struct PolynomialKernel {
    std::size_t rank = 0;                        // generic rank
    std::vector<std::vector<PolyScalar>> basis;  // polynomial kernel vectors
    std::vector<PolyScalar> pivots;              // basis valid where all pivots are nonzero
};

/// Fraction-free elimination over Q[x]: rows are the matrix rows. Returns a
/// polynomial basis of {v : rows . v = 0} valid off the pivot vanishing locus.
PolynomialKernel polynomial_kernel(const std::vector<std::vector<PolyScalar>>& rows, const Chart& chart);

}  // namespace engel
