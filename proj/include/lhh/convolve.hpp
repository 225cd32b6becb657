#pragma once

/// Convolution on the multiplicative group (R+, dx/x):
///     (f*g)(x) = int_0^inf f(y) g(x/y) dy/y.
///
/// In logarithmic coordinates this is ordinary convolution of step functions
/// on commensurable lattices, which is piecewise linear and computed exactly
/// at the lattice points. The returned GridFunction carries the exact cell
/// averages of that piecewise-linear result, so L^p norms of the output never
/// overshoot the true ones.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lhh/grid.hpp"

namespace lhh {

namespace detail {

inline void require_compact(const GridFunction& f, const char* who) {
    if (f.has_tail() || f.has_head())
        throw std::invalid_argument(std::string(who) + ": requires compactly supported input");
}

}  // namespace detail

/// Exact pointwise value of (f*g)(x) for compactly supported step data.
inline double mult_convolve_at(const GridFunction& f, const GridFunction& g, double x) {
    detail::require_compact(f, "mult_convolve_at");
    detail::require_compact(g, "mult_convolve_at");
    // integrate over y: f stepwise in y, g stepwise in x/y
    std::vector<double> cuts;
    for (std::size_t i = 0; i <= f.grid.n_cells(); ++i) cuts.push_back(f.grid.edge(i));
    for (std::size_t j = 0; j <= g.grid.n_cells(); ++j) cuts.push_back(x / g.grid.edge(j));
    std::sort(cuts.begin(), cuts.end());
    const double lo = std::max(f.grid.x_min(), x / g.grid.x_max());
    const double hi = std::min(f.grid.x_max(), x / g.grid.x_min());
    KahanSum acc;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = std::max(cuts[i], lo), b = std::min(cuts[i + 1], hi);
        if (!(b > a)) continue;
        const double ym = std::sqrt(a * b);
        acc.add(f(ym) * g(x / ym) * std::log(b / a));
    }
    return acc.value();
}

/// Exact log-domain convolution values on the shared lattice; the result is
/// piecewise linear between nodes.
struct LatticeConvolution {
    double u0 = 0.0;  // log of the left support edge
    double h = 1.0;   // lattice step in log coordinates
    std::vector<double> node;

    double at(double x) const {
        const double s = (std::log(x) - u0) / h;
        if (s <= 0.0 || s >= static_cast<double>(node.size() - 1)) return 0.0;
        const auto i = static_cast<std::size_t>(s);
        const double frac = s - static_cast<double>(i);
        return node[i] * (1.0 - frac) + node[i + 1] * frac;
    }
};

/// Full convolution on a shared geometric lattice. Inputs whose log steps
/// differ are resampled (exact cell averaging in dx/x) onto the finer step.
inline LatticeConvolution mult_convolve_lattice(const GridFunction& f, const GridFunction& g) {
    detail::require_compact(f, "mult_convolve");
    detail::require_compact(g, "mult_convolve");

    auto resample = [](const GridFunction& fn, double h) {
        const double span = std::log(fn.grid.x_max() / fn.grid.x_min());
        const auto n = static_cast<std::size_t>(std::llround(span / h));
        LogGrid grid(fn.grid.x_min(), fn.grid.x_max(), n == 0 ? 1 : n);
        std::vector<double> vals(grid.n_cells(), 0.0);
        for (std::size_t i = 0; i < grid.n_cells(); ++i) {
            const double a = grid.edge(i), b = grid.edge(i + 1);
            // average of fn over [a,b] against dy/y
            KahanSum acc;
            for (std::size_t j = 0; j < fn.grid.n_cells(); ++j) {
                const double lo = std::max(a, fn.grid.edge(j));
                const double hi = std::min(b, fn.grid.edge(j + 1));
                if (hi > lo) acc.add(fn.values[j] * std::log(hi / lo));
            }
            vals[i] = acc.value() / std::log(b / a);
        }
        return GridFunction(grid, std::move(vals));
    };

    const double hf = f.grid.log_step(), hg = g.grid.log_step();
    GridFunction F = f, G = g;
    const double h = std::min(hf, hg);
    if (std::fabs(hf - h) > 1e-12 * h) F = resample(f, h);
    if (std::fabs(hg - h) > 1e-12 * h) G = resample(g, h);
    const double hc = F.grid.log_step();

    const std::size_t nf = F.grid.n_cells(), ng = G.grid.n_cells();
    LatticeConvolution out;
    out.u0 = std::log(F.grid.x_min()) + std::log(G.grid.x_min());
    out.h = hc;
    out.node.assign(nf + ng + 1, 0.0);
    for (std::size_t k = 1; k < nf + ng; ++k) {
        KahanSum acc;
        const std::size_t i_lo = (k - 1 >= ng) ? k - ng : 0;
        const std::size_t i_hi = std::min(nf - 1, k - 1);
        for (std::size_t i = i_lo; i <= i_hi; ++i) acc.add(F.values[i] * G.values[k - 1 - i]);
        out.node[k] = hc * acc.value();
    }
    return out;
}

/// Convolution as a GridFunction carrying the exact cell averages of the
/// piecewise-linear result, so norms of the output never overshoot.
inline GridFunction mult_convolve(const GridFunction& f, const GridFunction& g) {
    const LatticeConvolution lc = mult_convolve_lattice(f, g);
    const std::size_t n = lc.node.size() - 1;
    LogGrid out_grid(std::exp(lc.u0), std::exp(lc.u0 + lc.h * static_cast<double>(n)), n);
    std::vector<double> vals(n);
    for (std::size_t k = 0; k < n; ++k) vals[k] = 0.5 * (lc.node[k] + lc.node[k + 1]);
    return GridFunction(out_grid, std::move(vals));
}

}  // namespace lhh
