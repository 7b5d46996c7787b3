#include "engel/report.hpp"

#include <algorithm>
#include <set>

#include "engel/expression.hpp"

namespace engel {

Json point_json(const RationalPoint& p) {
    Json out = Json::array();
    for (const auto& c : p.coords) out.push_back(to_string(c));
    return out;
}

Json fields_json(std::span<const RationalVector> basis, const Chart& chart) {
    Json out = Json::array();
    for (const auto& v : basis) out.push_back(print(constant_field(chart, v)));
    return out;
}

namespace {

Json sizes(const std::vector<std::size_t>& v) {
    Json out = Json::array();
    for (auto x : v) out.push_back(x);
    return out;
}

Json flag_witness_json(const FlagWitness& w, const Chart& chart) {
    Json j;
    j["point"] = point_json(w.point);
    j["rank_D"] = w.rank_D;
    j["rank_D2"] = w.rank_E;
    j["rank_D3"] = w.rank_D3;
    if (w.E_corank1) {
        j["rank_L"] = w.rank_L;
        j["L"] = fields_json(w.L_basis, chart);
        if (!w.L_outside_D.empty()) j["L_outside_D"] = fields_json(w.L_outside_D, chart);
    }
    return j;
}

}  // namespace

Json to_json(const FlagReport& r, const Chart& chart, std::size_t max_witnesses) {
    Json j;
    j["report"] = "generalized_engel";
    j["dim"] = r.dim;
    j["growth"] = sizes(r.growth);
    j["samples"] = r.witnesses.size();
    j["regular"] = r.regular;
    j["verdict"] = r.verdict ? Json(*r.verdict) : Json(nullptr);
    j["corank_D"] = r.corank_D;
    j["corank_D2"] = r.corank_E;
    j["corank_L_in_D"] = r.corank_L_in_D;
    if (!r.witnesses.empty() && r.witnesses.front().E_corank1) j["cauchy_rank"] = r.witnesses.front().rank_L;
    const bool passes[] = {r.cond_even_corank, r.cond_E_corank1, r.cond_D3_full, r.cond_L_in_D,
                           r.cond_L_corank1_in_D};
    bool FlagWitness::*flags[] = {&FlagWitness::even_corank, &FlagWitness::E_corank1, &FlagWitness::D3_full,
                                  &FlagWitness::L_in_D, &FlagWitness::L_corank1_in_D};
    Json conditions;
    for (std::size_t c = 0; c < 5; ++c) {
        Json entry;
        entry["pass"] = passes[c];
        Json failing = Json::array();
        for (const auto& w : r.witnesses) {
            if (failing.size() >= max_witnesses) break;
            if (!(w.*flags[c])) failing.push_back(flag_witness_json(w, chart));
        }
        entry["witnesses"] = failing;
        conditions[kFlagConditions[c]] = entry;
    }
    j["conditions"] = conditions;
    Json singular = Json::array();
    for (const auto& p : r.singular_witnesses) {
        if (singular.size() >= max_witnesses) break;
        singular.push_back(point_json(p));
    }
    j["singular_witnesses"] = singular;
    if (!r.witnesses.empty()) j["first_point"] = flag_witness_json(r.witnesses.front(), chart);
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

Json to_json(const PfaffianReport& r, std::size_t max_witnesses) {
    Json j;
    j["report"] = "pfaffian";
    j["k"] = r.k;
    j["l"] = r.l;
    j["samples"] = r.witnesses.size();
    j["verdict"] = r.verdict;
    Json conditions;
    auto pointwise = [&](bool pass, bool PfaffianWitness::*flag) {
        Json entry;
        entry["pass"] = pass;
        entry["method"] = "sampled";
        Json failing = Json::array();
        for (const auto& w : r.witnesses) {
            if (failing.size() >= max_witnesses) break;
            if (!(w.*flag)) failing.push_back({{"point", point_json(w.point)}, {"eta_rank", w.eta_rank}});
        }
        entry["witnesses"] = failing;
        return entry;
    };
    conditions["eta_independent"] = pointwise(r.eta_independent, &PfaffianWitness::eta_independent);
    Json omega;
    omega["pass"] = r.omega_theta_vanish;
    omega["method"] = "symbolic";
    Json failures = Json::array();
    for (auto i : r.omega_theta_failures) failures.push_back("omega" + std::to_string(i + 1));
    omega["witnesses"] = failures;
    conditions["omega_theta_vanish"] = omega;
    conditions["theta_nondegenerate"] = pointwise(r.theta_nondegenerate, &PfaffianWitness::theta_nondegenerate);
    conditions["theta_degenerate_next"] = {
        {"pass", r.theta_degenerate_next}, {"method", "symbolic"}, {"witnesses", Json::array()}};
    j["conditions"] = conditions;
    return j;
}

Json fixture_json(const Fixture& f, const FlagReport& r) {
    Json j;
    j["fixture"] = f.name;
    j["description"] = f.description;
    std::vector<std::string> failed;
    const bool passes[] = {r.cond_even_corank, r.cond_E_corank1, r.cond_D3_full, r.cond_L_in_D,
                           r.cond_L_corank1_in_D};
    for (std::size_t c = 0; c < 5; ++c)
        if (!passes[c]) failed.push_back(kFlagConditions[c]);
    j["expected_failures"] = f.expected_failures;
    j["failed"] = failed;
    const bool cauchy_ok =
        !r.witnesses.empty() && r.witnesses.front().E_corank1 && r.witnesses.front().rank_L == f.expected_cauchy_rank;
    j["matches"] = failed == f.expected_failures && cauchy_ok && r.corank_L_in_D == f.expected_corank_L_in_D &&
                   r.regular;
    j["check"] = to_json(r, f.D.chart());
    return j;
}

Json to_json(const MoserSolveResult& r, const Chart& chart) {
    Json j;
    j["report"] = "moser_field";
    j["t"] = to_string(r.t);
    j["point"] = point_json(r.point);
    j["X"] = print(constant_field(chart, r.X));
    j["residual_zero"] = r.residual_zero;
    j["in_L"] = r.membership_L;
    return j;
}

Json to_json(const KernelDistributions& k, const Chart& chart) {
    Json j;
    j["rank_D"] = k.D.size();
    j["rank_L"] = k.L.size();
    j["rank_W"] = k.W.size();
    Json ks = Json::array(), js = Json::array();
    for (const auto& b : k.K) ks.push_back(b.size());
    for (const auto& b : k.J) js.push_back(b.size());
    j["rank_K"] = ks;
    j["rank_J"] = js;
    j["L"] = fields_json(k.L, chart);
    return j;
}

Json to_json(const FlowVerification& v, std::size_t rows) {
    Json j;
    j["report"] = "flow";
    j["stage"] = v.stage;
    j["metric"] = v.metric;
    j["h"] = v.h;
    j["steps"] = v.steps;
    j["max_angle"] = {{"D", v.max_angle_D}, {"E", v.max_angle_E}, {"L", v.max_angle_L}};
    if (!v.trajectory.empty()) {
        j["t_final"] = v.t_grid.back();
        j["final_point"] = v.trajectory.back();
    }
    j["truncated"] = v.truncated;
    if (v.truncated) {
        j["truncated_at"] = v.truncated_at;
        j["truncation_reason"] = v.truncation_reason;
    }
    if (v.checkpoints_run > 0) {
        j["checkpoints"] = v.checkpoints_run;
        j["max_checkpoint_deviation"] = v.max_checkpoint_deviation;
    }
    Json grid = Json::array();
    const std::size_t n = v.t_grid.size();
    if (n > 0) {
        const std::size_t stride = std::max<std::size_t>(1, (n - 1) / std::max<std::size_t>(1, rows - 1));
        std::set<std::size_t> picks;
        for (std::size_t i = 0; i < n; i += stride) picks.insert(i);
        picks.insert(n - 1);
        for (auto i : picks) {
            Json row;
            row["t"] = v.t_grid[i];
            row["point"] = v.trajectory[i];
            if (i < v.angles_D.size())
                row["angle"] = {{"D", v.angles_D[i]}, {"E", v.angles_E[i]}, {"L", v.angles_L[i]}};
            grid.push_back(row);
        }
    }
    j["grid"] = grid;
    return j;
}

Json to_json(const GrowthVector& g) {
    Json j;
    j["point"] = point_json(g.point);
    j["growth"] = sizes(g.ranks);
    return j;
}

Json to_json(const CauchyResult& c, const Chart& chart) {
    Json j;
    j["rank"] = c.rank();
    j["basis"] = fields_json(c.basis, chart);
    return j;
}

namespace {

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

std::string scalar_text(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_null()) return "undetermined";
    return j.dump();
}

bool is_flat_array(const Json& j) {
    if (!j.is_array()) return false;
    return std::all_of(j.begin(), j.end(), [](const Json& e) {
        return is_scalar(e) || (e.is_array() && std::all_of(e.begin(), e.end(), is_scalar));
    });
}

std::string flat_text(const Json& j) {
    if (is_scalar(j)) return scalar_text(j);
    std::string s = "[";
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) s += ", ";
        s += flat_text(j[i]);
    }
    return s + "]";
}

void walk(const Json& j, int indent, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            if (is_scalar(value) || is_flat_array(value)) {
                out += pad + key + ": " + flat_text(value) + "\n";
            } else if (value.empty()) {
                out += pad + key + ": " + (value.is_array() ? "[]" : "{}") + "\n";
            } else {
                out += pad + key + ":\n";
                walk(value, indent + 2, out);
            }
        }
    } else if (j.is_array()) {
        for (const auto& e : j) {
            if (is_scalar(e) || is_flat_array(e) || e.empty()) {
                out += pad + "- " + (e.is_object() && e.empty() ? std::string("{}") : flat_text(e)) + "\n";
            } else {
                std::string inner;
                walk(e, indent + 2, inner);
                inner.replace(static_cast<std::size_t>(indent), 2, "- ");
                out += inner;
            }
        }
    } else {
        out += pad + scalar_text(j) + "\n";
    }
}

}  // namespace

std::string render(const Json& report, ReportFormat format) {
    if (format == ReportFormat::json) return report.dump(2) + "\n";
    std::string out;
    walk(report, 0, out);
    return out;
}

}  // namespace engel
