// The two-track example: track P stays at 0, track Q moves 1, 1, 2.
// Prints the time-extended states with their debut to P's end point in
// both budget modes, then the separation verdict at a few budgets.

#include <iostream>

#include "epsbasin/export.hpp"

using namespace epsbasin;

int main() {
    TrackDataset ds;
    ds.tracks = {{"P", 1, {{0, {0, 0}}, {1, {0, 0}}, {2, {0, 0}}}}, {"Q", 2, {{0, {1, 0}}, {1, {1, 0}}, {2, {2, 0}}}}};
    const TimeExtension ext = build_timeextended_system(ds, ExtensionLayout::Synchronized);
    const SystemSpec& spec = ext.spec();

    const StateSet good = ext.lift_final({2});  // base point 2 is P at step 2
    const StateSet bad = spec.dead_ends() - good;
    const auto by_max = debut_field(spec, good, BudgetMode::MaxPerStep);
    const auto by_sum = debut_field(spec, good, BudgetMode::TotalSum);
    std::cout << "state      max     sum\n";
    for (StateId s = 0; s < spec.size(); ++s)
        std::cout << spec.state(s).label << "  " << to_string(by_max[s]) << "  " << to_string(by_sum[s]) << "\n";

    for (double eps : {0.0, 0.5, 1.0, 2.0}) {
        const auto r = check_separation(spec, good, bad, eps, BudgetMode::MaxPerStep);
        std::cout << "separation at eps=" << format_cost(eps) << ": " << to_string(r.verdict) << " (good basin "
                  << r.good.count() << ", bad basin " << r.bad.count() << ")\n";
    }
}
