#include "engel/constructions.hpp"

namespace engel {

namespace {

std::vector<std::string> numbered(const std::string& stem, int count) {
    std::vector<std::string> out;
    for (int i = 1; i <= count; ++i) out.push_back(stem + std::to_string(i));
    return out;
}

void append(std::vector<std::string>& to, const std::vector<std::string>& from) {
    to.insert(to.end(), from.begin(), from.end());
}

std::size_t idx(const Chart& c, const std::string& name) { return *c.index_of(name); }

VectorField d_(const Chart& c, const std::string& name) { return VectorField::coordinate(c, idx(c, name)); }
PolyScalar var(const Chart& c, const std::string& name) { return PolyScalar::variable(c, idx(c, name)); }
ExtForm dx_(const Chart& c, const std::string& name) { return ExtForm::differential(c, idx(c, name)); }

}  // namespace

ProlongationChart cartan_prolongation(int n) {
    if (n < 1) throw Error("prolongation needs n >= 1");
    std::vector<std::string> names;
    append(names, numbered("x", n));
    append(names, numbered("y", n));
    names.push_back("z");
    append(names, numbered("a", n));
    append(names, numbered("b", n - 1));
    Chart chart(names);
    const auto s = [](int i) { return std::to_string(i); };

    std::vector<VectorField> P;
    for (int i = 1; i <= n; ++i) P.push_back(d_(chart, "x" + s(i)) + var(chart, "y" + s(i)) * d_(chart, "z"));
    VectorField Z = P[n - 1];
    for (int i = 1; i <= n; ++i) Z += var(chart, "a" + s(i)) * d_(chart, "y" + s(i));
    for (int j = 1; j < n; ++j) Z += var(chart, "b" + s(j)) * P[j - 1];

    std::vector<VectorField> L;
    for (int i = 1; i <= n; ++i) L.push_back(d_(chart, "a" + s(i)));
    for (int j = 1; j < n; ++j) L.push_back(d_(chart, "b" + s(j)));
    std::vector<VectorField> D = L;
    D.push_back(Z);
    std::vector<VectorField> E = D;
    for (int i = 1; i <= n; ++i) E.push_back(d_(chart, "y" + s(i)));
    for (int j = 1; j < n; ++j) E.push_back(P[j - 1]);

    ExtForm theta = dx_(chart, "z");
    for (int i = 1; i <= n; ++i) theta -= var(chart, "y" + s(i)) * dx_(chart, "x" + s(i));

    return ProlongationChart{n, chart, std::move(P), std::move(Z), Distribution(chart, std::move(L)),
                             Distribution(chart, std::move(D)), Distribution(chart, std::move(E)), std::move(theta)};
}

NormalFormSystem normal_form(int l, int r) {
    if (l < 0 || r < 0) throw Error("normal form needs l >= 0 and r >= 0");
    const int k = 2 * l + 1;
    std::vector<std::string> names;
    append(names, numbered("x", l + 1));
    append(names, numbered("y", l + 1));
    names.push_back("z");
    append(names, numbered("c", k));
    append(names, numbered("q", r));
    Chart chart(names);
    const auto s = [](int i) { return std::to_string(i); };

    ExtForm theta = dx_(chart, "z");
    for (int i = 1; i <= l + 1; ++i) theta -= var(chart, "y" + s(i)) * dx_(chart, "x" + s(i));
    const ExtForm dy_last = dx_(chart, "y" + s(l + 1));
    std::vector<ExtForm> omegas;
    for (int i = 1; i <= k; ++i) {
        const std::string lead = i <= l + 1 ? "x" + s(i) : "y" + s(i - l - 1);
        omegas.push_back(dx_(chart, lead) + var(chart, "c" + s(i)) * dy_last);
    }
    return NormalFormSystem{l, r, k, chart, std::move(theta), std::move(omegas)};
}

namespace {

Chart engel_chart() {
    static const Chart chart(std::vector<std::string>{"x", "y", "z", "w"});
    return chart;
}

}  // namespace

EngelPair engel_pair_standard() {
    Chart c = engel_chart();
    return EngelPair{"dz - y*dx, dy - w*dx", c, dx_(c, "z") - var(c, "y") * dx_(c, "x"),
                     dx_(c, "y") - var(c, "w") * dx_(c, "x")};
}

EngelPair engel_pair_swapped() {
    Chart c = engel_chart();
    return EngelPair{"dz - y*dx, dx - w*dy", c, dx_(c, "z") - var(c, "y") * dx_(c, "x"),
                     dx_(c, "x") - var(c, "w") * dx_(c, "y")};
}

Distribution standard_engel() {
    Chart c = engel_chart();
    return Distribution(c, {d_(c, "w"), d_(c, "x") + var(c, "y") * d_(c, "z") + var(c, "w") * d_(c, "y")});
}

std::vector<Fixture> reference_fixtures() {
    std::vector<Fixture> out;
    {
        Chart c(std::vector<std::string>{"x", "y", "z", "w", "x1", "y1", "z1", "t"});
        VectorField last = d_(c, "w") + var(c, "x") * d_(c, "x1") + var(c, "y") * d_(c, "y1") +
                           var(c, "z") * d_(c, "z1") + var(c, "z1") * d_(c, "t");
        out.push_back(Fixture{"a", "L has rank 5 and is not contained in D",
                              Distribution(c, {d_(c, "x"), d_(c, "y"), d_(c, "z"), last}),
                              {"L_in_D"}, 5, -1});
    }
    Chart c(std::vector<std::string>{"w", "x1", "x2", "x3", "y1", "y2", "y3", "z"});
    {
        std::vector<VectorField> gens{d_(c, "w")};
        for (int i = 1; i <= 2; ++i) {
            const std::string s = std::to_string(i);
            gens.push_back(d_(c, "x" + s) + var(c, "w") * d_(c, "y" + s) + var(c, "y" + s) * d_(c, "z"));
        }
        gens.push_back(d_(c, "x3") + var(c, "w") * d_(c, "y3"));
        out.push_back(Fixture{"b", "L contains d_y3, which is not in D", Distribution(c, std::move(gens)),
                              {"L_in_D"}, 3, 1});
    }
    {
        std::vector<VectorField> gens{d_(c, "w")};
        for (int i = 1; i <= 3; ++i) {
            const std::string s = std::to_string(i);
            gens.push_back(d_(c, "x" + s) + var(c, "w") * d_(c, "y" + s) + var(c, "y" + s) * d_(c, "z"));
        }
        out.push_back(Fixture{"c", "L = <d_w> lies in D with corank 3", Distribution(c, std::move(gens)),
                              {"L_corank1_in_D"}, 1, 3});
    }
    return out;
}

}  // namespace engel
