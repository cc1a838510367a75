#include "gie/gauge_pt.hpp"

#include "gie/error.hpp"

#include <cmath>

namespace gie::gauge_pt {

EquivalenceReport gauge_equivalence_report(const OscillatorPair& pair, const std::vector<ModeGrid>& grids,
                                           const LorentzOptions& opts, const Parallelism& policy)
{
    if (grids.size() < 2)
        throw ValidationError("gauge equivalence report needs at least two grids");
    EquivalenceReport rep;
    rep.coulomb = epsilon_coulomb(pair);
    const double ref = rep.coulomb.value.real();
    for (const auto& g : grids) {
        const EpsilonResult l = epsilon_lorentz(pair, g, opts, policy);
        const double err = ref != 0.0 ? std::abs(l.value / ref - 1.0) : std::abs(l.value);
        rep.rows.push_back({g.label, g.size(), l.value, err});
    }
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        if (!(rep.rows[i].rel_error < rep.rows[i - 1].rel_error)) {
            rep.monotone = false;
            rep.diagnostics.push_back("error does not decrease from grid " + std::to_string(i) + " to grid " +
                                      std::to_string(i + 1));
        }
    rep.final_error = rep.rows.back().rel_error;
    return rep;
}

Table EquivalenceReport::table() const
{
    Table t;
    t.header = {"grid_index", "modes", "eps_re", "eps_im", "rel_error"};
    t.rows.push_back({0.0, 0.0, coulomb.value.real(), coulomb.value.imag(), 0.0});
    for (std::size_t i = 0; i < rows.size(); ++i)
        t.rows.push_back({static_cast<double>(i + 1), static_cast<double>(rows[i].modes), rows[i].eps_lorentz.real(),
                          rows[i].eps_lorentz.imag(), rows[i].rel_error});
    return t;
}

} // namespace gie::gauge_pt
