#include "engel/exterior.hpp"

#include <algorithm>
#include <bit>

namespace engel {

namespace {

std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

// Number of set bits of `mask` strictly below position i.
int count_below(std::uint64_t mask, std::size_t i) { return std::popcount(mask & (bit(i) - 1)); }

// Sign of merging two disjoint increasing index sets: (-1)^{#pairs a > b}.
int merge_sign(std::uint64_t a, std::uint64_t b) {
    int swaps = 0;
    for (std::uint64_t rest = b; rest; rest &= rest - 1) {
        int j = std::countr_zero(rest);
        swaps += std::popcount(a >> (j + 1));
    }
    return (swaps & 1) ? -1 : 1;
}

void check_form_dim(const Chart& chart) {
    if (chart.dim() > kMaxFormDim) throw Error("forms are limited to charts of dimension <= 64");
}

}  // namespace

// ---------------------------------------------------------------- VectorField

VectorField::VectorField(Chart chart) : chart_(std::move(chart)) {
    components_.assign(chart_.dim(), PolyScalar(chart_));
}

VectorField::VectorField(Chart chart, std::vector<PolyScalar> components)
    : chart_(std::move(chart)), components_(std::move(components)) {
    if (components_.size() != chart_.dim()) throw Error("vector field needs one component per coordinate");
    for (const auto& c : components_) require_same_chart(chart_, c.chart());
}

VectorField VectorField::coordinate(Chart chart, std::size_t index) {
    VectorField v(std::move(chart));
    if (index >= v.chart_.dim()) throw Error("coordinate index out of range");
    v.components_[index] = PolyScalar::constant(v.chart_, 1);
    return v;
}

bool VectorField::is_zero() const noexcept {
    return std::all_of(components_.begin(), components_.end(), [](const auto& c) { return c.is_zero(); });
}

VectorField VectorField::operator-() const {
    VectorField out(*this);
    for (auto& c : out.components_) c = -c;
    return out;
}

VectorField& VectorField::operator+=(const VectorField& other) {
    require_same_chart(chart_, other.chart_);
    for (std::size_t i = 0; i < components_.size(); ++i) components_[i] += other.components_[i];
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
    require_same_chart(chart_, other.chart_);
    for (std::size_t i = 0; i < components_.size(); ++i) components_[i] -= other.components_[i];
    return *this;
}

VectorField operator*(const PolyScalar& f, const VectorField& v) {
    require_same_chart(f.chart(), v.chart_);
    VectorField out(v.chart_);
    for (std::size_t i = 0; i < v.components_.size(); ++i) out.components_[i] = f * v.components_[i];
    return out;
}

VectorField operator*(const Rational& c, const VectorField& v) {
    VectorField out(v);
    for (auto& comp : out.components_) comp *= c;
    return out;
}

PolyScalar VectorField::apply(const PolyScalar& f) const {
    require_same_chart(chart_, f.chart());
    PolyScalar out(chart_);
    for (std::size_t i = 0; i < components_.size(); ++i) {
        if (components_[i].is_zero()) continue;
        PolyScalar df = f.derivative(i);
        if (!df.is_zero()) out += components_[i] * df;
    }
    return out;
}

RationalVector VectorField::evaluate(const RationalPoint& p) const {
    require_same_chart(chart_, p.chart);
    RationalVector out;
    out.reserve(components_.size());
    for (const auto& c : components_) out.push_back(c.evaluate(std::span<const Rational>(p.coords)));
    return out;
}

VectorField VectorField::embed(const Chart& target) const {
    VectorField out(target);
    for (std::size_t i = 0; i < components_.size(); ++i) {
        auto j = target.index_of(chart_.name(i));
        if (!j) throw ChartMismatch();
        out.components_[*j] = components_[i].embed(target);
    }
    return out;
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
    require_same_chart(x.chart(), y.chart());
    std::vector<PolyScalar> comps;
    comps.reserve(x.chart().dim());
    for (std::size_t k = 0; k < x.chart().dim(); ++k) comps.push_back(x.apply(y[k]) - y.apply(x[k]));
    return VectorField(x.chart(), std::move(comps));
}

RationalVector evaluate(const VectorField& x, const RationalPoint& p) { return x.evaluate(p); }

// ------------------------------------------------------------------ FormIndex

int FormIndex::size() const noexcept { return std::popcount(mask); }

std::vector<std::size_t> FormIndex::indices() const {
    std::vector<std::size_t> out;
    for (std::uint64_t rest = mask; rest; rest &= rest - 1)
        out.push_back(static_cast<std::size_t>(std::countr_zero(rest)));
    return out;
}

bool FormIndexLess::operator()(const FormIndex& a, const FormIndex& b) const noexcept {
    std::uint64_t diff = a.mask ^ b.mask;
    if (!diff) return false;
    // The set holding the lowest differing index comes first.
    return (a.mask & (diff & (~diff + 1))) != 0;
}

// -------------------------------------------------------------------- ExtForm

ExtForm::ExtForm(Chart chart, int degree) : chart_(std::move(chart)), degree_(degree) {
    check_form_dim(chart_);
    if (degree < 0) throw Error("negative form degree");
}

ExtForm ExtForm::scalar(const PolyScalar& f) {
    ExtForm out(f.chart(), 0);
    if (!f.is_zero()) out.terms_.emplace(FormIndex{0}, f);
    return out;
}

ExtForm ExtForm::differential(Chart chart, std::size_t index) {
    ExtForm out(chart, 1);
    if (index >= chart.dim()) throw Error("coordinate index out of range");
    out.terms_.emplace(FormIndex{bit(index)}, PolyScalar::constant(chart, 1));
    return out;
}

ExtForm ExtForm::differential_of(const PolyScalar& f) { return exterior_derivative(scalar(f)); }

PolyScalar ExtForm::coefficient(const FormIndex& index) const {
    auto it = terms_.find(index);
    return it == terms_.end() ? PolyScalar(chart_) : it->second;
}

std::vector<PolyScalar> ExtForm::one_form_coefficients() const {
    if (degree_ != 1) throw Error("expected a 1-form");
    std::vector<PolyScalar> out(chart_.dim(), PolyScalar(chart_));
    for (const auto& [index, c] : terms_) out[static_cast<std::size_t>(std::countr_zero(index.mask))] = c;
    return out;
}

void ExtForm::accumulate(const FormIndex& index, const PolyScalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(index, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void ExtForm::add_term(std::span<const std::size_t> indices, const PolyScalar& c) {
    require_same_chart(chart_, c.chart());
    if (static_cast<int>(indices.size()) != degree_) throw Error("index count does not match form degree");
    std::vector<std::size_t> sorted(indices.begin(), indices.end());
    int sign = 1;
    // Bubble sort keeps track of the permutation parity.
    for (std::size_t i = 0; i < sorted.size(); ++i)
        for (std::size_t j = 0; j + 1 < sorted.size() - i; ++j)
            if (sorted[j] > sorted[j + 1]) {
                std::swap(sorted[j], sorted[j + 1]);
                sign = -sign;
            }
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] >= chart_.dim()) throw Error("coordinate index out of range");
        if (i && sorted[i] == sorted[i - 1]) return;  // repeated differential
        mask |= bit(sorted[i]);
    }
    accumulate(FormIndex{mask}, sign < 0 ? -c : c);
}

ExtForm ExtForm::operator-() const {
    ExtForm out(*this);
    for (auto& [index, c] : out.terms_) c = -c;
    return out;
}

ExtForm& ExtForm::operator+=(const ExtForm& other) {
    require_same_chart(chart_, other.chart_);
    if (degree_ != other.degree_) throw Error("cannot add forms of different degree");
    for (const auto& [index, c] : other.terms_) accumulate(index, c);
    return *this;
}

ExtForm& ExtForm::operator-=(const ExtForm& other) {
    require_same_chart(chart_, other.chart_);
    if (degree_ != other.degree_) throw Error("cannot subtract forms of different degree");
    for (const auto& [index, c] : other.terms_) accumulate(index, -c);
    return *this;
}

ExtForm operator*(const PolyScalar& f, const ExtForm& a) {
    require_same_chart(f.chart(), a.chart_);
    ExtForm out(a.chart_, a.degree_);
    if (f.is_zero()) return out;
    for (const auto& [index, c] : a.terms_) out.accumulate(index, f * c);
    return out;
}

ExtForm operator*(const Rational& c, const ExtForm& a) {
    ExtForm out(a.chart_, a.degree_);
    if (c == 0) return out;
    for (const auto& [index, coeff] : a.terms_) out.terms_.emplace(index, coeff * c);
    return out;
}

ExtForm wedge(const ExtForm& a, const ExtForm& b) {
    require_same_chart(a.chart_, b.chart_);
    ExtForm out(a.chart_, a.degree_ + b.degree_);
    if (out.degree_ > static_cast<int>(a.chart_.dim())) return out;
    for (const auto& [ia, ca] : a.terms_) {
        for (const auto& [ib, cb] : b.terms_) {
            if (ia.mask & ib.mask) continue;
            PolyScalar c = ca * cb;
            if (merge_sign(ia.mask, ib.mask) < 0) c = -c;
            out.accumulate(FormIndex{ia.mask | ib.mask}, c);
        }
    }
    return out;
}

ExtForm wedge_power(const ExtForm& a, unsigned count) {
    ExtForm result = ExtForm::scalar(PolyScalar::constant(a.chart(), 1));
    for (unsigned i = 0; i < count; ++i) {
        result = wedge(result, a);
        if (result.is_zero()) break;
    }
    if (result.is_zero()) return ExtForm::zero(a.chart(), a.degree() * static_cast<int>(count));
    return result;
}

ExtForm exterior_derivative(const ExtForm& a) {
    ExtForm out(a.chart_, a.degree_ + 1);
    if (out.degree_ > static_cast<int>(a.chart_.dim())) return out;
    for (const auto& [index, c] : a.terms_) {
        for (std::size_t j = 0; j < a.chart_.dim(); ++j) {
            if (index.contains(j)) continue;
            PolyScalar dc = c.derivative(j);
            if (dc.is_zero()) continue;
            // dx_j moves past every index below j.
            if (count_below(index.mask, j) & 1) dc = -dc;
            out.accumulate(FormIndex{index.mask | bit(j)}, dc);
        }
    }
    return out;
}

ExtForm interior_product(const VectorField& x, const ExtForm& a) {
    require_same_chart(x.chart(), a.chart_);
    if (a.degree_ < 1) throw Error("interior product needs a form of degree >= 1");
    ExtForm out(a.chart_, a.degree_ - 1);
    for (const auto& [index, c] : a.terms_) {
        for (std::uint64_t rest = index.mask; rest; rest &= rest - 1) {
            auto j = static_cast<std::size_t>(std::countr_zero(rest));
            if (x[j].is_zero()) continue;
            PolyScalar term = x[j] * c;
            if (count_below(index.mask, j) & 1) term = -term;
            out.accumulate(FormIndex{index.mask & ~bit(j)}, term);
        }
    }
    return out;
}

PolyScalar contract(const ExtForm& a, std::span<const VectorField> fields) {
    if (static_cast<int>(fields.size()) != a.degree()) throw Error("contract needs one field per slot");
    ExtForm current = a;
    for (const auto& f : fields) current = interior_product(f, current);
    return current.coefficient(FormIndex{0});
}

ExtForm pullback(const ExtForm& a, std::span<const PolyScalar> images) {
    if (images.size() != a.chart().dim()) throw Error("pullback needs one image per source coordinate");
    const Chart& target = images.front().chart();
    std::vector<ExtForm> differentials;
    differentials.reserve(images.size());
    for (const auto& f : images) differentials.push_back(ExtForm::differential_of(f));
    ExtForm out(target, a.degree());
    for (const auto& [index, c] : a.terms()) {
        ExtForm term = ExtForm::scalar(c.compose(images));
        if (a.degree() == 0) {
            out += term;
            continue;
        }
        for (auto i : index.indices()) term = wedge(term, differentials[i]);
        out += term;
    }
    return out;
}

ExtForm embed(const ExtForm& a, const Chart& target) {
    if (a.chart() == target) return a;
    std::vector<std::size_t> where(a.chart().dim());
    for (std::size_t i = 0; i < a.chart().dim(); ++i) {
        auto j = target.index_of(a.chart().name(i));
        if (!j) throw ChartMismatch();
        where[i] = *j;
    }
    ExtForm out(target, a.degree());
    for (const auto& [index, c] : a.terms()) {
        std::vector<std::size_t> mapped;
        for (auto i : index.indices()) mapped.push_back(where[i]);
        out.add_term(mapped, c.embed(target));
    }
    return out;
}

// ----------------------------------------------------------------- evaluation

Rational FormValue::apply(std::span<const RationalVector> vectors) const {
    if (static_cast<int>(vectors.size()) != degree) throw Error("form value needs one vector per slot");
    Rational total = 0;
    for (const auto& [index, c] : components) {
        auto idx = index.indices();
        // Determinant of the k x k minor.
        std::vector<RationalVector> m(idx.size(), RationalVector(idx.size()));
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t s = 0; s < idx.size(); ++s) m[r][s] = vectors[s][idx[r]];
        Rational det = 1;
        for (std::size_t col = 0; col < m.size(); ++col) {
            std::size_t piv = col;
            while (piv < m.size() && m[piv][col] == 0) ++piv;
            if (piv == m.size()) {
                det = 0;
                break;
            }
            if (piv != col) {
                std::swap(m[piv], m[col]);
                det = -det;
            }
            det *= m[col][col];
            for (std::size_t r = col + 1; r < m.size(); ++r) {
                if (m[r][col] == 0) continue;
                Rational f = m[r][col] / m[col][col];
                for (std::size_t s = col; s < m.size(); ++s) m[r][s] -= f * m[col][s];
            }
        }
        total += c * det;
    }
    return total;
}

FormValue evaluate(const ExtForm& a, const RationalPoint& p) {
    require_same_chart(a.chart(), p.chart);
    FormValue out;
    out.degree = a.degree();
    out.dim = a.chart().dim();
    for (const auto& [index, c] : a.terms()) {
        Rational v = c.evaluate(std::span<const Rational>(p.coords));
        if (v != 0) out.components.emplace(index, std::move(v));
    }
    return out;
}

RationalVector evaluate_covector(const ExtForm& a, const RationalPoint& p) {
    if (a.degree() != 1) throw Error("expected a 1-form");
    require_same_chart(a.chart(), p.chart);
    RationalVector out(a.chart().dim(), Rational(0));
    for (const auto& [index, c] : a.terms())
        out[static_cast<std::size_t>(std::countr_zero(index.mask))] =
            c.evaluate(std::span<const Rational>(p.coords));
    return out;
}

std::vector<RationalVector> evaluate_bilinear(const ExtForm& a, const RationalPoint& p) {
    if (a.degree() != 2) throw Error("expected a 2-form");
    require_same_chart(a.chart(), p.chart);
    const std::size_t n = a.chart().dim();
    std::vector<RationalVector> out(n, RationalVector(n, Rational(0)));
    for (const auto& [index, c] : a.terms()) {
        auto idx = index.indices();
        Rational v = c.evaluate(std::span<const Rational>(p.coords));
        out[idx[0]][idx[1]] = v;
        out[idx[1]][idx[0]] = -v;
    }
    return out;
}

}  // namespace engel
