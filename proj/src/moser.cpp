#include "engel/moser.hpp"

namespace engel {

Rational bilinear(const std::vector<RationalVector>& b, std::span<const Rational> u, std::span<const Rational> v) {
    Rational s = 0;
    for (std::size_t r = 0; r < u.size(); ++r)
        if (u[r] != 0) s += u[r] * dot(b[r], v);
    return s;
}

namespace {

RationalVector combine(const std::vector<RationalVector>& basis, std::span<const Rational> c, std::size_t n) {
    RationalVector v(n, Rational(0));
    for (std::size_t a = 0; a < basis.size(); ++a)
        if (c[a] != 0)
            for (std::size_t i = 0; i < n; ++i) v[i] += c[a] * basis[a][i];
    return v;
}

std::string where(const Rational& t, const RationalPoint& p) {
    return "(t=" + to_string(t) + ", p=" + p.to_string() + ")";
}

/// {X in span(basis) : b(X, Y) = 0 for all Y in span(basis)}.
std::vector<RationalVector> radical(const std::vector<RationalVector>& b, const std::vector<RationalVector>& basis,
                                    std::size_t n) {
    const std::size_t m = basis.size();
    if (m == 0) return {};
    RationalMatrix M(m, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t a = 0; a < m; ++a) M(j, a) = bilinear(b, basis[a], basis[j]);
    std::vector<RationalVector> out;
    for (const auto& c : nullspace(M)) out.push_back(combine(basis, c, n));
    return span_basis(out, n);
}

}  // namespace

InstantFrame instant_frame(const OneParamFamily& fam, const Rational& t, const RationalPoint& p) {
    require_same_chart(fam.chart(), p.chart);
    const std::size_t n = fam.chart().dim();
    const ExtForm theta = fam.theta_at(t);
    const auto omegas = fam.omegas_at(t);
    InstantFrame f{p, t, evaluate_covector(theta, p), {}, {}, {}, {}, {}, {}};
    std::vector<RationalVector> all{f.theta};
    for (const auto& w : omegas) {
        f.omegas.push_back(evaluate_covector(w, p));
        all.push_back(f.omegas.back());
    }
    if (span_rank(all, n) != all.size())
        throw HypothesisViolation("moser", "defining forms are dependent at " + where(t, p));
    f.D = common_kernel(all, n);
    RationalVector theta_only[] = {f.theta};
    f.E = common_kernel(theta_only, n);
    f.dtheta = evaluate_bilinear(exterior_derivative(theta), p);
    for (const auto& w : omegas) f.domegas.push_back(evaluate_bilinear(exterior_derivative(w), p));

    // D^2 = ker theta iff d theta vanishes on D and the omega-part of
    // Lambda^2 D -> TM/D is onto.
    std::vector<RationalVector> pair_rows;
    for (std::size_t a = 0; a < f.D.size(); ++a)
        for (std::size_t b = a + 1; b < f.D.size(); ++b) {
            if (bilinear(f.dtheta, f.D[a], f.D[b]) != 0)
                throw HypothesisViolation("moser", "D_t^2 is not contained in ker theta_t at " + where(t, p));
            RationalVector row;
            for (const auto& dw : f.domegas) row.push_back(bilinear(dw, f.D[a], f.D[b]));
            pair_rows.push_back(std::move(row));
        }
    if (!omegas.empty() && span_rank(pair_rows, omegas.size()) != omegas.size())
        throw HypothesisViolation("moser", "D_t^2 is smaller than ker theta_t at " + where(t, p));
    f.L = radical(f.dtheta, f.E, n);
    return f;
}

KernelDistributions kernel_distributions(const OneParamFamily& fam, const Rational& t, const RationalPoint& p) {
    const std::size_t n = fam.chart().dim();
    InstantFrame f = instant_frame(fam, t, p);
    KernelDistributions out;
    out.D = f.D;
    out.L = f.L;
    for (const auto& dw : f.domegas) out.K.push_back(radical(dw, f.D, n));
    out.W = span_basis(f.D, n);
    for (const auto& k : out.K) out.W = intersect(out.W, k, n);
    for (std::size_t i = 0; i < out.K.size(); ++i) {
        std::vector<RationalVector> acc = span_basis(f.L, n);
        for (std::size_t j = 0; j < out.K.size(); ++j)
            if (j != i) acc = intersect(acc, out.K[j], n);
        out.J.push_back(std::move(acc));
    }
    return out;
}

MoserSolveResult moser_field_at(const OneParamFamily& fam, const Rational& t, const RationalPoint& p) {
    if (fam.k() == 0) throw Error("moser_field_at needs at least one omega");
    const std::size_t n = fam.chart().dim();
    InstantFrame f = instant_frame(fam, t, p);

    const RationalVector theta_dot = evaluate_covector(fam.theta_dot_at(t), p);
    for (const auto& e : f.E)
        if (dot(theta_dot, e) != 0)
            throw HypothesisViolation("moser", "E_t = ker theta_t moves with t at " + where(t, p));
    for (const auto& l : f.L)
        if (!in_span(f.D, l, n))
            throw HypothesisViolation("moser", "L is not contained in D_t at " + where(t, p));

    std::vector<RationalVector> omega_dot;
    for (const auto& w : fam.omegas_dot_at(t)) omega_dot.push_back(evaluate_covector(w, p));

    const std::size_t m = f.L.size();
    RationalMatrix A(fam.k() * f.D.size(), m);
    RationalVector rhs(A.rows());
    for (std::size_t i = 0; i < fam.k(); ++i)
        for (std::size_t j = 0; j < f.D.size(); ++j) {
            const std::size_t row = i * f.D.size() + j;
            for (std::size_t a = 0; a < m; ++a) A(row, a) = bilinear(f.domegas[i], f.L[a], f.D[j]);
            rhs[row] = -dot(omega_dot[i], f.D[j]);
        }
    auto c0 = solve_particular(A, rhs);
    if (!c0) throw HypothesisViolation("moser", "family violates stability hypotheses at " + where(t, p));

    RationalVector x = combine(f.L, *c0, n);
    // Minimise |x + sum s_q u_q| over the homogeneous solutions u_q.
    std::vector<RationalVector> u;
    for (const auto& c : nullspace(A)) u.push_back(combine(f.L, c, n));
    if (!u.empty()) {
        RationalMatrix G(u.size(), u.size());
        RationalVector g(u.size());
        for (std::size_t a = 0; a < u.size(); ++a) {
            for (std::size_t b = 0; b < u.size(); ++b) G(a, b) = dot(u[a], u[b]);
            g[a] = -dot(u[a], x);
        }
        auto s = solve_particular(G, g);
        if (!s) throw Error("min-norm normal equations are singular");
        for (std::size_t q = 0; q < u.size(); ++q)
            if ((*s)[q] != 0)
                for (std::size_t i = 0; i < n; ++i) x[i] += (*s)[q] * u[q][i];
    }

    MoserSolveResult out{p, t, x, true, in_span(f.L, x, n)};
    for (std::size_t i = 0; i < fam.k(); ++i)
        for (const auto& y : f.D)
            if (bilinear(f.domegas[i], x, y) + dot(omega_dot[i], y) != 0) out.residual_zero = false;
    return out;
}

RationalVector even_contact_moser_field_at(const OneParamFamily& fam, const Rational& t, const RationalPoint& p) {
    require_same_chart(fam.chart(), p.chart);
    const std::size_t n = fam.chart().dim();
    const ExtForm theta = fam.theta_at(t);
    if (is_zero(evaluate_covector(theta, p)))
        throw HypothesisViolation("even_contact", "theta_t vanishes at " + where(t, p));
    const auto L = cauchy_characteristic(theta, p).basis;
    for (const Rational& s : {Rational(0), Rational(1)}) {
        const auto Ls = cauchy_characteristic(fam.theta_at(s), p).basis;
        if (subspace_compare(L, Ls, n) != SubspaceRelation::equal)
            throw HypothesisViolation("even_contact",
                                      "Cauchy characteristic of E_t varies with t at " + where(t, p));
    }
    RationalVector theta_cov[] = {evaluate_covector(theta, p)};
    const auto E = common_kernel(theta_cov, n);
    const auto V = orthogonal_complement(E, L, n);
    const auto dtheta = evaluate_bilinear(exterior_derivative(theta), p);
    const RationalVector theta_dot = evaluate_covector(fam.theta_dot_at(t), p);

    RationalMatrix M(V.size(), V.size());
    RationalVector rhs(V.size());
    for (std::size_t j = 0; j < V.size(); ++j) {
        for (std::size_t a = 0; a < V.size(); ++a) M(j, a) = bilinear(dtheta, V[a], V[j]);
        rhs[j] = -dot(theta_dot, V[j]);
    }
    if (rank(M) != V.size())
        throw HypothesisViolation("even_contact", "d theta_t is degenerate on V at " + where(t, p));
    auto c = solve_particular(M, rhs);
    return combine(V, *c, n);
}

}  // namespace engel
