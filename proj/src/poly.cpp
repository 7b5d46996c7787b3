#include "engel/poly.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

namespace engel {

namespace {

std::atomic<int> g_max_total_degree{16};

int exponent_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

// Graded order, higher degree first, then reverse lexicographic on exponents:
// x^2 before x*y before y^2 before x before 1.
bool print_before(const Exponent& a, const Exponent& b) {
    int da = exponent_degree(a), db = exponent_degree(b);
    if (da != db) return da > db;
    return a > b;
}

}  // namespace

int max_total_degree() noexcept { return g_max_total_degree.load(std::memory_order_relaxed); }

void set_max_total_degree(int degree) {
    if (degree < 1) throw Error("maximum total degree must be positive");
    g_max_total_degree.store(degree, std::memory_order_relaxed);
}

PolyScalar::PolyScalar(Chart chart) : chart_(std::move(chart)) {}

PolyScalar PolyScalar::constant(Chart chart, const Rational& value) {
    PolyScalar p(std::move(chart));
    if (value != 0) p.terms_.emplace(Exponent(p.chart_.dim(), 0), value);
    return p;
}

PolyScalar PolyScalar::variable(Chart chart, std::size_t index) {
    PolyScalar p(std::move(chart));
    if (index >= p.chart_.dim()) throw Error("coordinate index out of range");
    Exponent e(p.chart_.dim(), 0);
    e[index] = 1;
    p.terms_.emplace(std::move(e), Rational(1));
    return p;
}

PolyScalar PolyScalar::from_terms(Chart chart, TermMap terms) {
    PolyScalar p(std::move(chart));
    for (auto& [e, c] : terms) {
        if (e.size() != p.chart_.dim()) throw Error("exponent length does not match chart");
        if (exponent_degree(e) > max_total_degree()) throw DegreeOverflow(exponent_degree(e));
        if (c != 0) p.terms_.emplace(e, c);
    }
    return p;
}

bool PolyScalar::is_constant() const noexcept {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && exponent_degree(terms_.begin()->first) == 0;
}

std::optional<Rational> PolyScalar::constant_value() const {
    if (!is_constant()) return std::nullopt;
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

int PolyScalar::total_degree() const noexcept {
    int d = terms_.empty() ? -1 : 0;
    for (const auto& [e, c] : terms_) d = std::max(d, exponent_degree(e));
    return d;
}

int PolyScalar::degree_in(std::size_t index) const noexcept {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max<int>(d, e[index]);
    return d;
}

void PolyScalar::add_term(const Exponent& e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

PolyScalar PolyScalar::operator-() const {
    PolyScalar out(*this);
    for (auto& [e, c] : out.terms_) c = -c;
    return out;
}

PolyScalar& PolyScalar::operator+=(const PolyScalar& other) {
    require_same_chart(chart_, other.chart_);
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
}

PolyScalar& PolyScalar::operator-=(const PolyScalar& other) {
    require_same_chart(chart_, other.chart_);
    for (const auto& [e, c] : other.terms_) add_term(e, -c);
    return *this;
}

PolyScalar& PolyScalar::operator*=(const Rational& factor) {
    if (factor == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) c *= factor;
    return *this;
}

PolyScalar operator*(const PolyScalar& a, const PolyScalar& b) {
    require_same_chart(a.chart_, b.chart_);
    PolyScalar out(a.chart_);
    const int cap = max_total_degree();
    Exponent e(a.chart_.dim());
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            int deg = 0;
            for (std::size_t i = 0; i < e.size(); ++i) {
                e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
                deg += e[i];
            }
            if (deg > cap) throw DegreeOverflow(deg);
            out.add_term(e, ca * cb);
        }
    }
    return out;
}

PolyScalar PolyScalar::pow(unsigned exponent) const {
    PolyScalar result = constant(chart_, 1);
    PolyScalar base = *this;
    while (exponent) {
        if (exponent & 1u) result = result * base;
        exponent >>= 1u;
        if (exponent) base = base * base;
    }
    return result;
}

PolyScalar PolyScalar::derivative(std::size_t index) const {
    if (index >= chart_.dim()) throw Error("coordinate index out of range");
    PolyScalar out(chart_);
    for (const auto& [e, c] : terms_) {
        if (e[index] == 0) continue;
        Exponent d = e;
        --d[index];
        out.add_term(d, c * e[index]);
    }
    return out;
}

Rational PolyScalar::evaluate(std::span<const Rational> point) const {
    if (point.size() != chart_.dim()) throw Error("point dimension does not match chart");
    Rational sum = 0;
    Rational term, power;
    for (const auto& [e, c] : terms_) {
        term = c;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            mpz_pow_ui(power.get_num_mpz_t(), point[i].get_num_mpz_t(), e[i]);
            mpz_pow_ui(power.get_den_mpz_t(), point[i].get_den_mpz_t(), e[i]);
            term *= power;
        }
        sum += term;
    }
    return sum;
}

Rational PolyScalar::evaluate(const RationalPoint& point) const {
    require_same_chart(chart_, point.chart);
    return evaluate(std::span<const Rational>(point.coords));
}

double PolyScalar::evaluate(std::span<const double> point) const {
    return CompiledPoly(*this)(point);
}

PolyScalar PolyScalar::substitute(std::size_t index, const Rational& value, const Chart& target) const {
    if (target.dim() + 1 != chart_.dim()) throw ChartMismatch();
    PolyScalar out(target);
    for (const auto& [e, c] : terms_) {
        Rational factor;
        mpz_pow_ui(factor.get_num_mpz_t(), value.get_num_mpz_t(), e[index]);
        mpz_pow_ui(factor.get_den_mpz_t(), value.get_den_mpz_t(), e[index]);
        Exponent reduced = e;
        reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(index));
        out.add_term(reduced, c * factor);
    }
    return out;
}

PolyScalar PolyScalar::embed(const Chart& target) const {
    if (target == chart_) return *this;
    std::vector<std::size_t> where(chart_.dim());
    for (std::size_t i = 0; i < chart_.dim(); ++i) {
        auto j = target.index_of(chart_.name(i));
        if (!j) throw ChartMismatch();
        where[i] = *j;
    }
    PolyScalar out(target);
    for (const auto& [e, c] : terms_) {
        Exponent f(target.dim(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) f[where[i]] = e[i];
        out.terms_.emplace(std::move(f), c);
    }
    return out;
}

PolyScalar PolyScalar::compose(std::span<const PolyScalar> images) const {
    if (images.size() != chart_.dim()) throw Error("compose needs one image per coordinate");
    const Chart& target = images.front().chart();
    PolyScalar out(target);
    for (const auto& [e, c] : terms_) {
        PolyScalar term = constant(target, c);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i]) term = term * images[i].pow(e[i]);
        out += term;
    }
    return out;
}

std::string to_string(const PolyScalar& p) {
    if (p.is_zero()) return "0";
    std::vector<const PolyScalar::TermMap::value_type*> order;
    for (const auto& t : p.terms()) order.push_back(&t);
    std::sort(order.begin(), order.end(),
              [](auto* a, auto* b) { return print_before(a->first, b->first); });
    std::string out;
    bool first = true;
    for (const auto* term : order) {
        const auto& [e, c] = *term;
        Rational mag = abs(c);
        if (first) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        first = false;
        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (!e[i]) continue;
            if (!mono.empty()) mono += "*";
            mono += p.chart().name(i);
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        if (mono.empty()) {
            out += to_string(mag);
        } else if (mag == 1) {
            out += mono;
        } else {
            out += to_string(mag) + "*" + mono;
        }
    }
    return out;
}

CompiledPoly::CompiledPoly(const PolyScalar& p) {
    for (const auto& [e, c] : p.terms()) {
        coefficients_.push_back(c.get_d());
        std::vector<std::pair<std::uint32_t, std::uint16_t>> f;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i]) f.emplace_back(static_cast<std::uint32_t>(i), e[i]);
        factors_.push_back(std::move(f));
    }
}

double CompiledPoly::operator()(std::span<const double> point) const {
    double sum = 0.0;
    for (std::size_t t = 0; t < coefficients_.size(); ++t) {
        double term = coefficients_[t];
        for (auto [var, power] : factors_[t]) {
            double x = point[var];
            double v = x;
            for (std::uint16_t k = 1; k < power; ++k) v *= x;
            term *= v;
        }
        sum += term;
    }
    return sum;
}

}  // namespace engel
