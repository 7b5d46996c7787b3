#include "engel/linalg.hpp"

#include <algorithm>
#include <optional>

namespace engel {

RationalMatrix RationalMatrix::from_rows(std::span<const RationalVector> rows, std::size_t cols) {
    RationalMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw Error("row length mismatch");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
}

RationalMatrix RationalMatrix::from_columns(std::span<const RationalVector> columns, std::size_t rows) {
    RationalMatrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].size() != rows) throw Error("column length mismatch");
        for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
    }
    return m;
}

RationalVector RationalMatrix::row(std::size_t r) const {
    return RationalVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

RationalVector RationalMatrix::column(std::size_t c) const {
    RationalVector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

RationalMatrix RationalMatrix::transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

RationalVector RationalMatrix::operator*(std::span<const Rational> x) const {
    if (x.size() != cols_) throw Error("matrix-vector size mismatch");
    RationalVector out(rows_, Rational(0));
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if ((*this)(r, c) != 0 && x[c] != 0) out[r] += (*this)(r, c) * x[c];
    return out;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols_ != b.rows_) throw Error("matrix size mismatch");
    RationalMatrix out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            if (a(r, k) == 0) continue;
            for (std::size_t c = 0; c < b.cols_; ++c)
                if (b(k, c) != 0) out(r, c) += a(r, k) * b(k, c);
        }
    return out;
}

RowEchelon rref(RationalMatrix m) {
    RowEchelon out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && m(piv, c) == 0) ++piv;
        if (piv == m.rows()) continue;
        if (piv != r)
            for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(piv, k), m(r, k));
        Rational inv = 1 / m(r, c);
        for (std::size_t k = c; k < m.cols(); ++k) m(r, k) *= inv;
        for (std::size_t s = 0; s < m.rows(); ++s) {
            if (s == r || m(s, c) == 0) continue;
            Rational f = m(s, c);
            for (std::size_t k = c; k < m.cols(); ++k)
                if (m(r, k) != 0) m(s, k) -= f * m(r, k);
        }
        out.pivots.push_back(c);
        ++r;
    }
    out.reduced = std::move(m);
    return out;
}

std::size_t rank(const RationalMatrix& m) { return rref(m).pivots.size(); }

std::vector<RationalVector> nullspace(const RationalMatrix& m) {
    auto e = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<RationalVector> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        RationalVector v(m.cols(), Rational(0));
        v[f] = 1;
        for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<RationalVector> solve_particular(const RationalMatrix& m, std::span<const Rational> b) {
    if (b.size() != m.rows()) throw Error("right-hand side size mismatch");
    RationalMatrix aug(m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
        aug(r, m.cols()) = b[r];
    }
    auto e = rref(std::move(aug));
    if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
    RationalVector x(m.cols(), Rational(0));
    for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, m.cols());
    return x;
}

std::size_t span_rank(std::span<const RationalVector> vectors, std::size_t dim) {
    if (vectors.empty()) return 0;
    return rank(RationalMatrix::from_rows(vectors, dim));
}

std::vector<RationalVector> span_basis(std::span<const RationalVector> vectors, std::size_t dim) {
    if (vectors.empty()) return {};
    auto e = rref(RationalMatrix::from_rows(vectors, dim));
    std::vector<RationalVector> out;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) out.push_back(e.reduced.row(r));
    return out;
}

bool in_span(std::span<const RationalVector> vectors, std::span<const Rational> v, std::size_t dim) {
    if (is_zero(v)) return true;
    std::vector<RationalVector> stacked(vectors.begin(), vectors.end());
    std::size_t before = span_rank(stacked, dim);
    stacked.emplace_back(v.begin(), v.end());
    return span_rank(stacked, dim) == before;
}

std::vector<RationalVector> intersect(std::span<const RationalVector> a, std::span<const RationalVector> b,
                                      std::size_t dim) {
    if (a.empty() || b.empty()) return {};
    // Solve sum x_i a_i - sum y_j b_j = 0.
    RationalMatrix m(dim, a.size() + b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t r = 0; r < dim; ++r) m(r, i) = a[i][r];
    for (std::size_t j = 0; j < b.size(); ++j)
        for (std::size_t r = 0; r < dim; ++r) m(r, a.size() + j) = -b[j][r];
    std::vector<RationalVector> out;
    for (const auto& sol : nullspace(m)) {
        RationalVector v(dim, Rational(0));
        for (std::size_t i = 0; i < a.size(); ++i)
            if (sol[i] != 0)
                for (std::size_t r = 0; r < dim; ++r) v[r] += sol[i] * a[i][r];
        out.push_back(std::move(v));
    }
    return span_basis(out, dim);
}

std::vector<RationalVector> orthogonal_complement(std::span<const RationalVector> within,
                                                  std::span<const RationalVector> to, std::size_t dim) {
    auto base = span_basis(within, dim);
    if (base.empty()) return {};
    if (to.empty()) return base;
    RationalMatrix m(to.size(), base.size());
    for (std::size_t i = 0; i < to.size(); ++i)
        for (std::size_t j = 0; j < base.size(); ++j) m(i, j) = dot(to[i], base[j]);
    std::vector<RationalVector> out;
    for (const auto& sol : nullspace(m)) {
        RationalVector v(dim, Rational(0));
        for (std::size_t j = 0; j < base.size(); ++j)
            if (sol[j] != 0)
                for (std::size_t r = 0; r < dim; ++r) v[r] += sol[j] * base[j][r];
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<RationalVector> common_kernel(std::span<const RationalVector> covectors, std::size_t dim) {
    if (covectors.empty()) {
        std::vector<RationalVector> out;
        for (std::size_t i = 0; i < dim; ++i) {
            RationalVector e(dim, Rational(0));
            e[i] = 1;
            out.push_back(std::move(e));
        }
        return out;
    }
    return nullspace(RationalMatrix::from_rows(covectors, dim));
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
    if (a.size() != b.size()) throw Error("dot product size mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

bool is_zero(std::span<const Rational> v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

namespace {

// Constants first, then fewer terms, then lower degree.
bool better_pivot(const PolyScalar& a, const PolyScalar& b) {
    if (a.is_constant() != b.is_constant()) return a.is_constant();
    if (a.terms().size() != b.terms().size()) return a.terms().size() < b.terms().size();
    return a.total_degree() < b.total_degree();
}

// Divides out the largest monomial dividing every entry.
void strip_monomial_factor(std::vector<PolyScalar>& v, const Chart& chart) {
    std::optional<Exponent> common;
    for (const auto& e : v)
        for (const auto& [exp, c] : e.terms()) {
            if (!common) {
                common = exp;
                continue;
            }
            for (std::size_t i = 0; i < exp.size(); ++i) (*common)[i] = std::min((*common)[i], exp[i]);
        }
    if (!common || std::all_of(common->begin(), common->end(), [](std::uint16_t x) { return x == 0; })) return;
    for (auto& e : v) {
        PolyScalar::TermMap reduced;
        for (const auto& [exp, c] : e.terms()) {
            Exponent q = exp;
            for (std::size_t i = 0; i < q.size(); ++i) q[i] -= (*common)[i];
            reduced.emplace(std::move(q), c);
        }
        e = PolyScalar::from_terms(chart, std::move(reduced));
    }
}

}  // namespace

PolynomialKernel polynomial_kernel(const std::vector<std::vector<PolyScalar>>& input, const Chart& chart) {
    const std::size_t n = chart.dim();
    auto rows = input;
    for (const auto& row : rows)
        if (row.size() != n) throw Error("polynomial matrix row has wrong length");

    PolynomialKernel out;
    std::vector<std::size_t> pivot_cols;
    std::vector<bool> used(n, false);
    std::size_t r = 0;
    // Full pivoting: the best entry of the remaining block, so constant
    // pivots are found wherever they are.
    while (r < rows.size()) {
        std::size_t best_row = rows.size(), best_col = n;
        for (std::size_t c = 0; c < n; ++c) {
            if (used[c]) continue;
            for (std::size_t s = r; s < rows.size(); ++s) {
                if (rows[s][c].is_zero()) continue;
                if (best_row == rows.size() || better_pivot(rows[s][c], rows[best_row][best_col])) {
                    best_row = s;
                    best_col = c;
                }
            }
        }
        if (best_row == rows.size()) break;
        const std::size_t c = best_col;
        std::swap(rows[r], rows[best_row]);
        if (auto k = rows[r][c].constant_value()) {
            Rational inv = 1 / *k;
            for (auto& e : rows[r]) e *= inv;
        }
        const PolyScalar pivot = rows[r][c];
        const bool unit = pivot.is_constant();
        for (std::size_t s = 0; s < rows.size(); ++s) {
            if (s == r || rows[s][c].is_zero()) continue;
            const PolyScalar factor = rows[s][c];
            for (std::size_t k = 0; k < n; ++k) {
                PolyScalar updated = unit ? rows[s][k] : pivot * rows[s][k];
                if (!rows[r][k].is_zero()) updated -= factor * rows[r][k];
                rows[s][k] = std::move(updated);
            }
        }
        pivot_cols.push_back(c);
        used[c] = true;
        ++r;
    }
    out.rank = pivot_cols.size();
    // Rows above a non-unit pivot were rescaled, so read the final pivots.
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) out.pivots.push_back(rows[i][pivot_cols[i]]);

    std::vector<bool> is_pivot(n, false);
    for (auto c : pivot_cols) is_pivot[c] = true;
    PolyScalar product = PolyScalar::constant(chart, 1);
    for (const auto& p : out.pivots) product = product * p;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        std::vector<PolyScalar> v(n, PolyScalar(chart));
        v[f] = product;
        for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
            if (rows[i][f].is_zero()) continue;
            PolyScalar others = PolyScalar::constant(chart, -1);
            for (std::size_t j = 0; j < pivot_cols.size(); ++j)
                if (j != i) others = others * out.pivots[j];
            v[pivot_cols[i]] = others * rows[i][f];
        }
        strip_monomial_factor(v, chart);
        out.basis.push_back(std::move(v));
    }
    // Keep only the nonconstant pivots as the vanishing locus.
    std::erase_if(out.pivots, [](const PolyScalar& p) { return p.is_constant(); });
    return out;
}

}  // namespace engel
