#include "engel/verify.hpp"

#include <cstdlib>
#include <set>

namespace engel {

namespace {

std::size_t rank_of_values(const std::vector<FormValue>& values) {
    std::set<FormIndex, FormIndexLess> keys;
    for (const auto& v : values)
        for (const auto& [index, c] : v.components) keys.insert(index);
    if (keys.empty()) return 0;
    RationalMatrix m(values.size(), keys.size());
    for (std::size_t r = 0; r < values.size(); ++r) {
        std::size_t c = 0;
        for (const auto& key : keys) {
            auto it = values[r].components.find(key);
            if (it != values[r].components.end()) m(r, c) = it->second;
            ++c;
        }
    }
    return rank(m);
}

std::size_t flag_key(const FlagWitness& w) {
    return ((w.rank_D * 65 + w.rank_E) * 65 + w.rank_D3) * 65 + w.rank_L;
}

}  // namespace

FlagReport check_generalized_engel(const Distribution& d, std::span<const RationalPoint> points, bool parallel) {
    if (points.empty()) throw Error("check_generalized_engel needs at least one sample point");
    const std::size_t n = d.chart().dim();
    FlagReport report;
    report.dim = n;
    auto levels = derived_flag_generators(d, 3);
    const Distribution& e = levels[1];
    const Distribution& d3 = levels[2];
    CauchyCharacteristic cauchy(e);

    std::vector<FlagWitness> witnesses(points.size(), FlagWitness{points[0]});
    parallel_for(points.size(), parallel, [&](std::size_t i) {
        const RationalPoint& p = points[i];
        FlagWitness w{p};
        auto dvals = d.evaluate(p);
        w.rank_D = span_rank(dvals, n);
        w.rank_E = pointwise_rank(e, p);
        w.rank_D3 = pointwise_rank(d3, p);
        w.even_corank = (n - w.rank_D) % 2 == 0;
        w.E_corank1 = w.rank_E + 1 == n;
        w.D3_full = w.rank_D3 == n;
        if (w.E_corank1) {
            w.L_basis = cauchy.at(p).basis;
            w.rank_L = w.L_basis.size();
            w.rank_L_cap_D = intersect(w.L_basis, dvals, n).size();
            for (const auto& v : w.L_basis)
                if (!in_span(dvals, v, n)) w.L_outside_D.push_back(v);
            w.L_in_D = w.L_outside_D.empty();
            const long gap = static_cast<long>(w.rank_D) - static_cast<long>(w.rank_L);
            w.L_corank1_in_D = std::labs(gap) == 1;
        }
        witnesses[i] = std::move(w);
    });

    std::vector<std::size_t> keys;
    for (const auto& w : witnesses) keys.push_back(flag_key(w));
    auto regularity = regularity_from_ranks(points, keys);
    report.regular = regularity.regular;
    report.singular_witnesses = regularity.singular_witnesses;

    const FlagWitness* typical = &witnesses[0];
    for (const auto& w : witnesses)
        if (flag_key(w) == regularity.majority_rank) {
            typical = &w;
            break;
        }
    report.corank_D = static_cast<int>(n - typical->rank_D);
    report.corank_E = static_cast<int>(n - typical->rank_E);
    report.corank_L_in_D = static_cast<int>(typical->rank_D) - static_cast<int>(typical->rank_L);
    if (!typical->E_corank1) report.note = "D^2 does not have corank 1, so L is undefined";

    auto all = [&](bool FlagWitness::*flag) {
        for (const auto& w : witnesses)
            if (!(w.*flag)) return false;
        return true;
    };
    report.cond_even_corank = all(&FlagWitness::even_corank);
    report.cond_E_corank1 = all(&FlagWitness::E_corank1);
    report.cond_D3_full = all(&FlagWitness::D3_full);
    report.cond_L_in_D = all(&FlagWitness::L_in_D);
    report.cond_L_corank1_in_D = all(&FlagWitness::L_corank1_in_D);
    if (report.regular)
        report.verdict = report.cond_even_corank && report.cond_E_corank1 && report.cond_D3_full &&
                         report.cond_L_in_D && report.cond_L_corank1_in_D;
    report.growth = derived_flag(d, points[0], static_cast<int>(n)).ranks;
    report.witnesses = std::move(witnesses);
    return report;
}

std::vector<ExtForm> eta_forms(const ExtForm& theta, const std::vector<ExtForm>& omegas) {
    ExtForm prefix = ExtForm::scalar(PolyScalar::constant(theta.chart(), 1));
    for (const auto& w : omegas) prefix = wedge(prefix, w);
    prefix = wedge(prefix, theta);
    std::vector<ExtForm> out;
    for (const auto& w : omegas) out.push_back(wedge(prefix, exterior_derivative(w)));
    return out;
}

PfaffianReport check_pfaffian_criteria(const ExtForm& theta, const std::vector<ExtForm>& omegas,
                                       std::span<const RationalPoint> points, bool parallel) {
    if (theta.degree() != 1) throw Error("theta must be a 1-form");
    for (const auto& w : omegas) {
        require_same_chart(theta.chart(), w.chart());
        if (w.degree() != 1) throw Error("every omega must be a 1-form");
    }
    const std::size_t n = theta.chart().dim();
    const std::size_t k = omegas.size();
    if (k % 2 == 0) throw Error("the number of omegas must be odd (k = 2l+1), got k = " + std::to_string(k));
    if (k + 3 > n)
        throw Error("chart dimension " + std::to_string(n) + " is too small for k = " + std::to_string(k) +
                    " (needs at least k+3)");

    PfaffianReport report;
    report.k = static_cast<int>(k);
    report.l = static_cast<int>((k - 1) / 2);
    const ExtForm dtheta = exterior_derivative(theta);
    const ExtForm top = wedge(theta, wedge_power(dtheta, static_cast<unsigned>(report.l + 1)));

    for (std::size_t i = 0; i < k; ++i)
        if (!wedge(omegas[i], top).is_zero()) report.omega_theta_failures.push_back(i);
    report.omega_theta_vanish = report.omega_theta_failures.empty();
    report.theta_degenerate_next = wedge(top, dtheta).is_zero();

    const auto etas = eta_forms(theta, omegas);
    std::vector<PfaffianWitness> witnesses;
    for (const auto& p : points) witnesses.push_back(PfaffianWitness{p});
    parallel_for(points.size(), parallel, [&](std::size_t i) {
        PfaffianWitness w{points[i]};
        std::vector<FormValue> values;
        for (const auto& eta : etas) values.push_back(evaluate(eta, points[i]));
        w.eta_rank = rank_of_values(values);
        w.eta_independent = w.eta_rank == k;
        w.theta_nondegenerate = !evaluate(top, points[i]).is_zero();
        witnesses[i] = std::move(w);
    });
    report.eta_independent = !witnesses.empty();
    report.theta_nondegenerate = !witnesses.empty();
    for (const auto& w : witnesses) {
        report.eta_independent = report.eta_independent && w.eta_independent;
        report.theta_nondegenerate = report.theta_nondegenerate && w.theta_nondegenerate;
    }
    report.witnesses = std::move(witnesses);
    report.verdict = report.eta_independent && report.omega_theta_vanish && report.theta_nondegenerate &&
                     report.theta_degenerate_next;
    return report;
}

FormsToDistribution forms_to_distribution(const ExtForm& theta, const std::vector<ExtForm>& omegas,
                                          std::span<const RationalPoint> points) {
    std::vector<ExtForm> forms{theta};
    forms.insert(forms.end(), omegas.begin(), omegas.end());
    PfaffianSystem system(theta.chart(), forms);
    const std::size_t n = theta.chart().dim();
    FormsToDistribution out;
    for (const auto& p : points) {
        auto covectors = system.evaluate(p);
        if (span_rank(covectors, n) != forms.size())
            throw HypothesisViolation("forms_to_distribution", "forms are dependent at " + p.to_string());
        out.pointwise.push_back(common_kernel(covectors, n));
    }
    auto kernel = symbolic_kernel(system, points);
    out.symbolic = std::move(kernel.distribution);
    out.symbolic_failure = std::move(kernel.failure);
    return out;
}

DistributionToForms distribution_to_forms(const Distribution& d, std::span<const RationalPoint> points) {
    if (points.empty()) throw Error("distribution_to_forms needs at least one sample point");
    const std::size_t n = d.chart().dim();
    auto levels = derived_flag_generators(d, 2);
    const Distribution& e = levels[1];
    const std::size_t rank_d = pointwise_rank(d, points[0]);
    for (const auto& p : points) {
        if (pointwise_rank(e, p) + 1 != n)
            throw HypothesisViolation("distribution_to_forms", "D^2 does not have corank 1 at " + p.to_string());
        if (pointwise_rank(d, p) != rank_d)
            throw HypothesisViolation("distribution_to_forms", "rank of D varies on the sample at " + p.to_string());
    }
    const std::size_t wanted = n - rank_d - 1;

    DistributionToForms out;
    auto sym_e = symbolic_annihilator(e, points);
    auto sym_d = symbolic_annihilator(d, points);
    if (sym_e.system && sym_e.system->forms().size() == 1 && (wanted == 0 || sym_d.system)) {
        const ExtForm& theta = sym_e.system->forms().front();
        std::vector<ExtForm> chosen;
        if (sym_d.system) {
            for (const auto& f : sym_d.system->forms()) {
                if (chosen.size() == wanted) break;
                bool independent = true;
                for (const auto& p : points) {
                    std::vector<RationalVector> covs{evaluate_covector(theta, p)};
                    for (const auto& c : chosen) covs.push_back(evaluate_covector(c, p));
                    covs.push_back(evaluate_covector(f, p));
                    if (span_rank(covs, n) != covs.size()) {
                        independent = false;
                        break;
                    }
                }
                if (independent) chosen.push_back(f);
            }
        }
        if (chosen.size() == wanted) {
            out.symbolic = true;
            out.theta = theta;
            out.omegas = std::move(chosen);
        } else {
            out.note = "symbolic annihilator of D has no basis completing theta on the sample";
        }
    } else {
        out.note = !sym_e.failure.empty() ? sym_e.failure : sym_d.failure;
        if (out.note.empty()) out.note = "no symbolic annihilator basis";
    }

    for (const auto& p : points) {
        PointCovectors pc;
        if (out.symbolic) {
            pc.theta = evaluate_covector(*out.theta, p);
            for (const auto& w : out.omegas) pc.omegas.push_back(evaluate_covector(w, p));
        } else {
            pc.theta = annihilator(e, p).front();
            std::vector<RationalVector> covs{pc.theta};
            for (auto& c : annihilator(d, p)) {
                covs.push_back(c);
                if (span_rank(covs, n) == covs.size())
                    pc.omegas.push_back(std::move(c));
                else
                    covs.pop_back();
            }
        }
        out.pointwise.push_back(std::move(pc));
    }
    return out;
}

}  // namespace engel
