#pragma once

#include <vector>

namespace epiq {

// Per-site survival probabilities on a day grid, with statistical errors
// (zero for deterministic engines) and populations for derived infected
// counts. Row 0 is day 0 with survival 1 everywhere.
struct TimeSeries {
    std::vector<double> times;                    // days, starting at 0
    std::vector<std::vector<double>> survival;    // [time][site]
    std::vector<std::vector<double>> stderrs;     // [time][site]
    std::vector<double> populations;              // per site

    int n_times() const { return static_cast<int>(times.size()); }
    int n_sites() const {
        return survival.empty() ? 0 : static_cast<int>(survival.front().size());
    }
    double infected(int t, int j) const {
        const double pop = populations.empty() ? 1.0 : populations[j];
        return pop * (1.0 - survival[t][j]);
    }
    double total_infected(int t) const {
        double tot = 0.0;
        for (int j = 0; j < n_sites(); ++j)
            tot += infected(t, j);
        return tot;
    }
};

} // namespace epiq
