#include "engel/flow.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

#include "engel/moser.hpp"

namespace engel {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct CompiledOneForm {
    std::vector<CompiledPoly> coeff;      // per spatial coordinate
    std::vector<CompiledPoly> coeff_dot;  // d/dt of the same
    // Spatial part of d (terms with dt dropped): strictly upper entries.
    std::vector<std::tuple<std::size_t, std::size_t, CompiledPoly>> d_upper;
};

CompiledOneForm compile_form(const OneParamFamily& fam, const ExtForm& form_t) {
    const std::size_t n = fam.chart().dim();
    CompiledOneForm out;
    const auto coeffs = form_t.one_form_coefficients();
    const std::size_t ti = fam.t_index();
    for (std::size_t i = 0; i < n; ++i) {
        out.coeff.emplace_back(coeffs[i]);
        out.coeff_dot.emplace_back(coeffs[i].derivative(ti));
    }
    const ExtForm d = exterior_derivative(form_t);
    for (const auto& [index, c] : d.terms()) {
        if (index.contains(ti)) continue;
        auto ij = index.indices();
        out.d_upper.emplace_back(ij[0], ij[1], CompiledPoly(c));
    }
    return out;
}

struct FormValues {
    VectorXd value, dot;
    MatrixXd d;
};

FormValues eval_form(const CompiledOneForm& f, std::span<const double> xt, std::size_t n) {
    FormValues v{VectorXd(n), VectorXd(n), MatrixXd::Zero(n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        v.value[i] = f.coeff[i](xt);
        v.dot[i] = f.coeff_dot[i](xt);
    }
    for (const auto& [i, j, c] : f.d_upper) {
        double x = c(xt);
        v.d(i, j) += x;
        v.d(j, i) -= x;
    }
    return v;
}

/// Orthonormal basis of the common kernel of the rows, with prescribed dimension.
MatrixXd kernel_basis(const MatrixXd& rows, std::size_t dim) {
    Eigen::JacobiSVD<MatrixXd> svd(rows, Eigen::ComputeFullV);
    return svd.matrixV().rightCols(static_cast<Eigen::Index>(dim)).eval();
}

MatrixXd orthonormalize(const MatrixXd& a) {
    Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeThinU);
    return svd.matrixU();
}

double max_angle(const MatrixXd& qa, const MatrixXd& qb) {
    if (qa.cols() == 0 || qb.cols() == 0) return 0.0;
    MatrixXd residual = qa - qb * (qb.transpose() * qa);
    Eigen::JacobiSVD<MatrixXd> svd(residual);
    double s = svd.singularValues().size() ? svd.singularValues().maxCoeff() : 0.0;
    return std::asin(std::min(1.0, s));
}

/// Numerical counterpart of the instantaneous system with ranks fixed in advance.
class NumericFamily {
public:
    NumericFamily(const OneParamFamily& fam, std::size_t rank_D, std::size_t rank_L)
        : n_(fam.chart().dim()), rank_D_(rank_D), rank_L_(rank_L), theta_(compile_form(fam, fam.theta_t())) {
        for (const auto& w : fam.omegas_t()) omegas_.push_back(compile_form(fam, w));
    }

    struct Frame {
        FormValues theta;
        std::vector<FormValues> omegas;
        MatrixXd D, E, L, V;  // orthonormal columns
    };

    Frame frame(const VectorXd& p, double t) const {
        std::vector<double> xt(p.data(), p.data() + n_);
        xt.push_back(t);
        Frame f;
        f.theta = eval_form(theta_, xt, n_);
        MatrixXd all(static_cast<Eigen::Index>(omegas_.size() + 1), static_cast<Eigen::Index>(n_));
        all.row(0) = f.theta.value.transpose();
        for (std::size_t i = 0; i < omegas_.size(); ++i) {
            f.omegas.push_back(eval_form(omegas_[i], xt, n_));
            all.row(static_cast<Eigen::Index>(i + 1)) = f.omegas.back().value.transpose();
        }
        f.D = kernel_basis(all, rank_D_);
        f.E = kernel_basis(f.theta.value.transpose(), n_ - 1);
        MatrixXd restricted = f.E.transpose() * f.theta.d * f.E;
        Eigen::JacobiSVD<MatrixXd> svd(restricted, Eigen::ComputeFullV);
        const auto m = static_cast<Eigen::Index>(n_ - 1);
        const auto rl = static_cast<Eigen::Index>(rank_L_);
        f.L = f.E * svd.matrixV().rightCols(rl);
        f.V = f.E * svd.matrixV().leftCols(m - rl);
        return f;
    }

    /// Z in L with d omega^i(Z, Y) = rhs(i, Y) for Y in D; min-norm.
    VectorXd solve_in_L(const Frame& f, const std::function<double(std::size_t, const VectorXd&)>& rhs,
                        double t) const {
        const auto dD = f.D.cols(), dL = f.L.cols();
        MatrixXd A(static_cast<Eigen::Index>(omegas_.size()) * dD, dL);
        VectorXd b(A.rows());
        for (std::size_t i = 0; i < omegas_.size(); ++i)
            for (Eigen::Index j = 0; j < dD; ++j) {
                const auto row = static_cast<Eigen::Index>(i) * dD + j;
                A.row(row) = (f.L.transpose() * f.omegas[i].d * f.D.col(j)).transpose();
                b[row] = rhs(i, f.D.col(j));
            }
        Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(A);
        cod.setThreshold(1e-10);
        cod.compute(A);
        VectorXd c = cod.solve(b);
        if ((A * c - b).norm() > 1e-7 * (1.0 + b.norm()))
            throw HypothesisViolation("moser", "linear solve failed mid-flow at t=" + std::to_string(t));
        return f.L * c;
    }

    VectorXd moser_field(const VectorXd& p, double t) const {
        Frame f = frame(p, t);
        return solve_in_L(f, [&](std::size_t i, const VectorXd& y) { return -f.omegas[i].dot.dot(y); }, t);
    }

    VectorXd even_contact_field(const Frame& f, double t) const {
        const auto m = f.V.cols();
        if (m == 0) return VectorXd::Zero(static_cast<Eigen::Index>(n_));
        MatrixXd M = f.V.transpose() * f.theta.d.transpose() * f.V;  // M(j, a) = dtheta(V_a, V_j)
        VectorXd rhs = -(f.V.transpose() * f.theta.dot);
        Eigen::FullPivLU<MatrixXd> lu(M);
        if (lu.rank() < m)
            throw HypothesisViolation("even_contact", "d theta_t is degenerate on V at t=" + std::to_string(t));
        return f.V * lu.solve(rhs);
    }

    VectorXd even_contact_field(const VectorXd& p, double t) const { return even_contact_field(frame(p, t), t); }

    VectorXd pipeline_field(const VectorXd& p, double t, double inner_step) const {
        Frame f = frame(p, t);
        VectorXd x1 = even_contact_field(f, t);
        // Gradient of g_i = omega^i_t(X1) by central differences.
        std::vector<VectorXd> grad(omegas_.size(), VectorXd::Zero(static_cast<Eigen::Index>(n_)));
        if (!x1.isZero(0.0)) {
            for (std::size_t j = 0; j < n_; ++j) {
                VectorXd pp = p, pm = p;
                pp[static_cast<Eigen::Index>(j)] += inner_step;
                pm[static_cast<Eigen::Index>(j)] -= inner_step;
                Frame fp = frame(pp, t), fm = frame(pm, t);
                VectorXd xp = even_contact_field(fp, t), xm = even_contact_field(fm, t);
                for (std::size_t i = 0; i < omegas_.size(); ++i)
                    grad[i][static_cast<Eigen::Index>(j)] =
                        (fp.omegas[i].value.dot(xp) - fm.omegas[i].value.dot(xm)) / (2 * inner_step);
            }
        }
        VectorXd z = solve_in_L(
            f,
            [&](std::size_t i, const VectorXd& y) {
                double lie = x1.dot(f.omegas[i].d * y) + grad[i].dot(y);
                return -(lie + f.omegas[i].dot.dot(y));
            },
            t);
        return x1 + z;
    }

    std::size_t dim() const noexcept { return n_; }

private:
    std::size_t n_, rank_D_, rank_L_;
    CompiledOneForm theta_;
    std::vector<CompiledOneForm> omegas_;
};

using Field = std::function<VectorXd(const VectorXd&, double)>;

FlowVerification integrate(const OneParamFamily& fam, std::span<const double> p0_span, const FlowOptions& opt,
                           const std::string& stage, bool pipeline) {
    const std::size_t n = fam.chart().dim();
    if (p0_span.size() != n) throw Error("start point has wrong dimension");
    if (!(opt.h > 0) || !(opt.t_end > 0)) throw Error("step and horizon must be positive");

    RationalVector p0q;
    for (double x : p0_span) p0q.push_back(shortest_rational(x));
    const RationalPoint start(fam.chart(), p0q);
    InstantFrame exact = instant_frame(fam, Rational(0), start);
    NumericFamily num(fam, exact.D.size(), exact.L.size());

    const double inner = opt.inner_fd_step;
    Field field = pipeline ? Field([&](const VectorXd& p, double t) { return num.pipeline_field(p, t, inner); })
                           : Field([&](const VectorXd& p, double t) { return num.moser_field(p, t); });

    const auto N = static_cast<Eigen::Index>(n);
    auto jacobian_of_field = [&](const VectorXd& p, double t) {
        MatrixXd dx(N, N);
        for (Eigen::Index j = 0; j < N; ++j) {
            VectorXd pp = p, pm = p;
            pp[j] += opt.fd_step;
            pm[j] -= opt.fd_step;
            dx.col(j) = (field(pp, t) - field(pm, t)) / (2 * opt.fd_step);
        }
        return dx;
    };

    FlowVerification out;
    out.stage = stage;
    out.steps = static_cast<std::size_t>(std::llround(opt.t_end / opt.h));
    if (out.steps == 0) out.steps = 1;
    out.h = opt.t_end / static_cast<double>(out.steps);
    const double h = out.h;

    VectorXd p = Eigen::Map<const VectorXd>(p0_span.data(), N);
    MatrixXd J = MatrixXd::Identity(N, N);
    auto f0 = num.frame(p, 0.0);
    const MatrixXd D0 = f0.D, E0 = f0.E, L0 = f0.L;

    std::vector<std::size_t> checkpoint_steps;
    for (std::size_t c = 1; c <= opt.checkpoints; ++c) checkpoint_steps.push_back(c * out.steps / (opt.checkpoints + 1));

    auto record = [&](double t) {
        auto ft = num.frame(p, t);
        out.t_grid.push_back(t);
        out.trajectory.emplace_back(p.data(), p.data() + N);
        std::vector<double> jac(static_cast<std::size_t>(N * N));
        for (Eigen::Index r = 0; r < N; ++r)
            for (Eigen::Index c = 0; c < N; ++c) jac[static_cast<std::size_t>(r * N + c)] = J(r, c);
        out.jacobians.push_back(std::move(jac));
        out.angles_D.push_back(max_angle(orthonormalize(J * D0), ft.D));
        out.angles_E.push_back(max_angle(orthonormalize(J * E0), ft.E));
        out.angles_L.push_back(max_angle(orthonormalize(J * L0), ft.L));
        out.max_angle_D = std::max(out.max_angle_D, out.angles_D.back());
        out.max_angle_E = std::max(out.max_angle_E, out.angles_E.back());
        out.max_angle_L = std::max(out.max_angle_L, out.angles_L.back());
    };

    record(0.0);
    for (std::size_t step = 0; step < out.steps; ++step) {
        const double t = static_cast<double>(step) * h;
        VectorXd k1 = field(p, t);
        MatrixXd K1 = jacobian_of_field(p, t) * J;
        VectorXd p2 = p + 0.5 * h * k1;
        MatrixXd J2 = J + 0.5 * h * K1;
        VectorXd k2 = field(p2, t + 0.5 * h);
        MatrixXd K2 = jacobian_of_field(p2, t + 0.5 * h) * J2;
        VectorXd p3 = p + 0.5 * h * k2;
        MatrixXd J3 = J + 0.5 * h * K2;
        VectorXd k3 = field(p3, t + 0.5 * h);
        MatrixXd K3 = jacobian_of_field(p3, t + 0.5 * h) * J3;
        VectorXd p4 = p + h * k3;
        MatrixXd J4 = J + h * K3;
        VectorXd k4 = field(p4, t + h);
        MatrixXd K4 = jacobian_of_field(p4, t + h) * J4;
        p += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
        J += (h / 6.0) * (K1 + 2 * K2 + 2 * K3 + K4);
        const double t_next = static_cast<double>(step + 1) * h;

        if (p.cwiseAbs().maxCoeff() > opt.box) {
            out.truncated = true;
            out.truncated_at = t_next;
            out.truncation_reason = "trajectory left the chart box |x| <= " + std::to_string(opt.box);
            break;
        }
        if (!pipeline && std::find(checkpoint_steps.begin(), checkpoint_steps.end(), step + 1) != checkpoint_steps.end()) {
            RationalVector q;
            for (Eigen::Index i = 0; i < N; ++i) q.push_back(shortest_rational(p[i]));
            auto exact_x = moser_field_at(fam, shortest_rational(t_next), RationalPoint(fam.chart(), q));
            VectorXd numeric = field(p, t_next);
            for (Eigen::Index i = 0; i < N; ++i)
                out.max_checkpoint_deviation =
                    std::max(out.max_checkpoint_deviation, std::abs(numeric[i] - to_double(exact_x.X[static_cast<std::size_t>(i)])));
            ++out.checkpoints_run;
        }
        record(t_next);
    }
    return out;
}

}  // namespace

FlowVerification integrate_moser_flow(const OneParamFamily& fam, std::span<const double> p0, const FlowOptions& options) {
    if (fam.k() == 0) throw Error("integrate_moser_flow needs at least one omega");
    return integrate(fam, p0, options, "moser", false);
}

FlowVerification verify_stability_pipeline(const OneParamFamily& fam, std::span<const double> p0,
                                           const FlowOptions& options) {
    if (fam.k() == 0) throw Error("verify_stability_pipeline needs at least one omega");
    // Exact hypothesis checks of both stages at the start point.
    RationalVector q;
    for (double x : p0) q.push_back(shortest_rational(x));
    if (q.size() != fam.chart().dim()) throw Error("start point has wrong dimension");
    even_contact_moser_field_at(fam, Rational(0), RationalPoint(fam.chart(), q));
    return integrate(fam, p0, options, "pipeline", true);
}

std::vector<double> principal_angles(const std::vector<std::vector<double>>& a,
                                     const std::vector<std::vector<double>>& b) {
    if (a.empty() || b.empty()) return {};
    const auto n = static_cast<Eigen::Index>(a.front().size());
    MatrixXd ma(n, static_cast<Eigen::Index>(a.size())), mb(n, static_cast<Eigen::Index>(b.size()));
    for (std::size_t c = 0; c < a.size(); ++c)
        for (Eigen::Index r = 0; r < n; ++r) ma(r, static_cast<Eigen::Index>(c)) = a[c].at(static_cast<std::size_t>(r));
    for (std::size_t c = 0; c < b.size(); ++c)
        for (Eigen::Index r = 0; r < n; ++r) mb(r, static_cast<Eigen::Index>(c)) = b[c].at(static_cast<std::size_t>(r));
    MatrixXd qa = orthonormalize(ma), qb = orthonormalize(mb);
    if (qa.cols() > qb.cols()) std::swap(qa, qb);
    // Sines of the angles: singular values of the part of qa orthogonal to qb.
    MatrixXd residual = qa - qb * (qb.transpose() * qa);
    Eigen::JacobiSVD<MatrixXd> svd(residual);
    std::vector<double> out;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        out.push_back(std::asin(std::min(1.0, svd.singularValues()[i])));
    std::sort(out.begin(), out.end());
    return out;
}

double trajectory_distance(const FlowVerification& a, const FlowVerification& b) {
    if (a.trajectory.size() != b.trajectory.size()) return INFINITY;
    double d = 0;
    for (std::size_t s = 0; s < a.trajectory.size(); ++s)
        for (std::size_t i = 0; i < a.trajectory[s].size(); ++i)
            d = std::max(d, std::abs(a.trajectory[s][i] - b.trajectory[s][i]));
    return d;
}

}  // namespace engel
