#pragma once

// Test-only oracles, independent of the library paths they check.

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

#include "lhh/grid.hpp"

namespace oracles {

// Brute-force sort-and-accumulate rearrangement of piecewise-constant data.
struct BruteSteps {
    std::vector<double> values;       // descending, > 0
    std::vector<double> breakpoints;  // prefix masses
};

inline BruteSteps brute_rearrange(const lhh::GridFunction& f, const lhh::PowerMeasure& mu) {
    const auto masses = lhh::cell_measures(f.grid, mu);
    std::vector<std::pair<double, double>> atoms;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double v = std::fabs(f.values[i]);
        if (v != 0.0 && masses[i] != 0.0) atoms.emplace_back(v, masses[i]);
    }
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    BruteSteps out;
    for (const auto& [v, m] : atoms) {
        if (!out.values.empty() && out.values.back() == v) {
            out.breakpoints.back() += m;
        } else {
            out.values.push_back(v);
            out.breakpoints.push_back((out.breakpoints.empty() ? 0.0 : out.breakpoints.back()) +
                                      m);
        }
    }
    return out;
}

// Deterministic random piecewise-constant corpus.
inline lhh::GridFunction random_step_function(std::mt19937& rng, std::size_t max_cells = 48,
                                              bool nonnegative = false) {
    std::uniform_int_distribution<std::size_t> nd(3, max_cells);
    std::uniform_real_distribution<double> xd(0.1, 4.0);
    std::uniform_real_distribution<double> vd(-3.0, 5.0);
    const std::size_t n = nd(rng);
    const double x_min = std::exp(xd(rng) - 2.0);
    const double x_max = x_min * std::exp(xd(rng) + 0.2);
    lhh::LogGrid grid(x_min, x_max, n);
    std::vector<double> vals(n);
    std::uniform_real_distribution<double> zd(0.0, 1.0);
    for (auto& v : vals) {
        v = vd(rng);
        if (nonnegative) v = std::fabs(v);
        if (zd(rng) < 0.15) v = 0.0;  // keep some flat spots
    }
    return lhh::GridFunction(grid, std::move(vals));
}

// Same but supported in [1, inf), for operators on X = [1, inf).
inline lhh::GridFunction random_step_function_on_X(std::mt19937& rng, std::size_t max_cells = 48) {
    std::uniform_int_distribution<std::size_t> nd(3, max_cells);
    std::uniform_real_distribution<double> xd(0.3, 6.0);
    std::uniform_real_distribution<double> vd(0.0, 4.0);
    const std::size_t n = nd(rng);
    const double x_min = std::exp(std::uniform_real_distribution<double>(0.0, 1.5)(rng));
    const double x_max = x_min * std::exp(xd(rng));
    lhh::LogGrid grid(x_min, x_max, n);
    std::vector<double> vals(n);
    for (auto& v : vals) v = vd(rng);
    return lhh::GridFunction(grid, std::move(vals));
}

}  // namespace oracles
