#pragma once

/// Hardy-Hilbert type integral operators: homogeneous kernels applied through
/// multiplicative convolution or direct segment sweeps, and the piecewise
/// power operators R1/R2 with their pointwise envelopes.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "lhh/convolve.hpp"
#include "lhh/grid.hpp"
#include "lhh/lorentz.hpp"
#include "lhh/quadrature.hpp"

namespace lhh {

/// Kernel K(x,y) = y^degree * profile(x/y); homogeneity of the stated degree
/// holds by construction. The profile carries declared exponents at 0 and
/// infinity so moment integrals can complete both ends analytically.
struct HomogeneousKernel {
    double degree;
    GridFunction profile;  // t -> K(t, 1)

    double operator()(double x, double y) const {
        return std::pow(y, degree) * profile(x / y);
    }

    static HomogeneousKernel sample(double degree, const LogGrid& grid,
                                    const std::function<double(double)>& k_of_t,
                                    double head_exponent, double tail_exponent) {
        GridFunction p = GridFunction::sample(grid, k_of_t);
        p.with_head(head_exponent).with_tail(tail_exponent);
        return HomogeneousKernel{degree, std::move(p)};
    }
};

namespace detail {

/// value = coeff * y^expo on [lo, hi)
struct Seg {
    double lo, hi, coeff, expo;
};

inline std::vector<Seg> segments_of(const GridFunction& f) {
    std::vector<Seg> s;
    if (f.has_head())
        s.push_back({0.0, f.grid.x_min(), f.head_coefficient(), *f.head_exponent});
    for (std::size_t i = 0; i < f.grid.n_cells(); ++i) {
        if (f.values[i] != 0.0)
            s.push_back({f.grid.edge(i), f.grid.edge(i + 1), f.values[i], 0.0});
    }
    if (f.has_tail())
        s.push_back({f.grid.x_max(), kInf, f.tail_coefficient(), *f.tail_exponent});
    return s;
}

inline double checked_power_mass(double lo, double hi, double c, double coeff) {
    const double m = power_mass(lo, hi, c);
    if (!std::isfinite(m) && coeff != 0.0)
        throw DivergenceError(
            "kernel application diverges, combined exponent " + std::to_string(c),
            sign_of(coeff));
    return m;
}

/// int K(x,y) f(y) y^{d1-1} dy with f given as power segments; the profile is
/// walked by index over the t-range each f segment maps to, so the cost per
/// output point is O(profile cells in range + segments of f).
inline double hh_apply_at(const HomogeneousKernel& k, const std::vector<Seg>& fsegs, double d1,
                          double x) {
    const auto& prof = k.profile;
    const double tmin = prof.grid.x_min(), tmax = prof.grid.x_max();
    KahanSum acc;
    for (const auto& fs : fsegs) {
        if (fs.coeff == 0.0) continue;
        // profile tail region t >= tmax: y <= x/tmax
        if (prof.has_tail()) {
            const double hi = std::min(fs.hi, x / tmax);
            if (hi > fs.lo) {
                const double C = prof.tail_coefficient() * std::pow(x, *prof.tail_exponent);
                const double c = k.degree - *prof.tail_exponent + fs.expo + d1;
                acc.add(C * fs.coeff * checked_power_mass(fs.lo, hi, c, C * fs.coeff));
            }
        }
        // profile head region t <= tmin: y >= x/tmin
        if (prof.has_head()) {
            const double lo = std::max(fs.lo, x / tmin);
            if (fs.hi > lo) {
                const double C = prof.head_coefficient() * std::pow(x, *prof.head_exponent);
                const double c = k.degree - *prof.head_exponent + fs.expo + d1;
                acc.add(C * fs.coeff * checked_power_mass(lo, fs.hi, c, C * fs.coeff));
            }
        }
        // grid region: iterate profile cells whose t-interval meets (x/fs.hi, x/fs.lo]
        const double t_lo = std::max(tmin, fs.hi == kInf ? tmin : x / fs.hi);
        const double t_hi = std::min(tmax, fs.lo == 0.0 ? tmax : x / fs.lo);
        if (!(t_hi > t_lo)) continue;
        const std::size_t j_lo = prof.grid.locate(t_lo);
        const std::size_t j_hi = prof.grid.locate(std::nextafter(t_hi, 0.0));
        const double c = k.degree + fs.expo + d1;
        for (std::size_t j = j_lo; j <= j_hi && j < prof.grid.n_cells(); ++j) {
            if (prof.values[j] == 0.0) continue;
            // y-interval of profile cell j clipped to the f segment
            const double ylo = std::max(fs.lo, x / prof.grid.edge(j + 1));
            const double yhi = std::min(fs.hi, x / prof.grid.edge(j));
            if (yhi > ylo)
                acc.add(prof.values[j] * fs.coeff *
                        checked_power_mass(ylo, yhi, c, prof.values[j] * fs.coeff));
        }
    }
    return acc.value();
}

}  // namespace detail

struct MomentIntegrals {
    double k;        // the shared value
    double first;    // int K(x,1) x^{d2/p - 1} dx
    double second;   // int K(1,y) y^{d1/p' - 1} dy
};

/// The two moment integrals of a homogeneous kernel. Throws on degree
/// mismatch, divergence, or disagreement beyond tolerance.
inline MomentIntegrals hh_moments(const HomogeneousKernel& K, double p, double d1, double d2,
                                  double tol = 1e-9) {
    const double pp = conjugate_exponent(p);
    const double n = d2 / p + d1 / pp;
    if (std::fabs(K.degree + n) > 1e-9 * (1.0 + std::fabs(n)))
        throw std::invalid_argument("hh_moments: kernel degree " + std::to_string(K.degree) +
                                    " is not -(d2/p + d1/p') = " + std::to_string(-n));
    const double first = integrate_weight(K.profile, d2 / p);

    // second integral swept literally along the y axis: K(1,y) = y^degree * profile(1/y)
    KahanSum acc;
    const auto& prof = K.profile;
    const double c = K.degree + d1 / pp;  // weight exponent in y
    for (std::size_t i = 0; i < prof.grid.n_cells(); ++i) {
        if (prof.values[i] == 0.0) continue;
        acc.add(prof.values[i] *
                power_mass(1.0 / prof.grid.edge(i + 1), 1.0 / prof.grid.edge(i), c));
    }
    if (prof.has_head()) {
        // t <= t_min i.e. y >= 1/t_min: integrand C y^{-e0} y^{c-1}
        const double e = c - *prof.head_exponent;
        const double m = power_mass(1.0 / prof.grid.x_min(), kInf, e);
        if (!std::isfinite(m))
            throw DivergenceError("hh_moments: divergent second integral",
                                  detail::sign_of(prof.values.front()));
        acc.add(prof.head_coefficient() * m);
    }
    if (prof.has_tail()) {
        const double e = c - *prof.tail_exponent;
        const double m = power_mass(0.0, 1.0 / prof.grid.x_max(), e);
        if (!std::isfinite(m))
            throw DivergenceError("hh_moments: divergent second integral",
                                  detail::sign_of(prof.values.back()));
        acc.add(prof.tail_coefficient() * m);
    }
    const double second = acc.value();
    if (!std::isfinite(first) || !std::isfinite(second))
        throw DivergenceError("hh_moments: divergent moment integral", +1);
    if (std::fabs(first - second) > tol * (std::fabs(first) + std::fabs(second)))
        throw std::invalid_argument("hh_moments: moment integrals disagree: " +
                                    std::to_string(first) + " vs " + std::to_string(second));
    return {0.5 * (first + second), first, second};
}

inline double hh_constant(const HomogeneousKernel& K, double p, double d1, double d2) {
    return hh_moments(K, p, d1, d2).k;
}

enum class ApplyVia { direct, convolution };

/// Kf(x) = int K(x,y) f(y) dmu1(y) sampled on out_grid. The direct path is
/// exact per segment pair; the convolution path goes through the
/// multiplicative-convolution identity Kf(x) = x^{d1/p'-n} (h*g)(x) and drops
/// profile continuations, so it needs a profile grid wide enough to cover the
/// mass of the kernel.
inline GridFunction hh_apply(const HomogeneousKernel& K, const GridFunction& f, double d1,
                             const LogGrid& out_grid, ApplyVia via = ApplyVia::direct,
                             double p = 2.0) {
    if (via == ApplyVia::direct) {
        const auto fs = detail::segments_of(f);
        std::vector<double> vals(out_grid.n_cells());
        for (std::size_t i = 0; i < out_grid.n_cells(); ++i)
            vals[i] = detail::hh_apply_at(K, fs, d1, out_grid.mid(i));
        return GridFunction(out_grid, std::move(vals));
    }
    const double pp = conjugate_exponent(p);
    const double n = -K.degree;
    GridFunction h = K.profile;
    h.tail_exponent.reset();
    h.head_exponent.reset();
    for (std::size_t i = 0; i < h.values.size(); ++i)
        h.values[i] *= std::pow(h.grid.mid(i), n - d1 / pp);
    GridFunction g = f;
    g.tail_exponent.reset();
    g.head_exponent.reset();
    for (std::size_t i = 0; i < g.values.size(); ++i)
        g.values[i] *= std::pow(g.grid.mid(i), d1 / p);
    const LatticeConvolution conv = mult_convolve_lattice(h, g);
    std::vector<double> vals(out_grid.n_cells());
    for (std::size_t i = 0; i < out_grid.n_cells(); ++i) {
        const double x = out_grid.mid(i);
        vals[i] = std::pow(x, d1 / pp - n) * conv.at(x);
    }
    return GridFunction(out_grid, std::move(vals));
}

/// Radial kernel on R^{d2} x R^{d1} given through its radial profile
/// K0(s,t); returns the half-line reduction int K0(s,t) f(t) t^{d1-1} dt.
/// The sphere-area factor is reported separately by sphere_area().
inline GridFunction radial_reduce(const std::function<double(double, double)>& K0,
                                  const GridFunction& f, double d1, const LogGrid& out_grid) {
    detail::require_compact(f, "radial_reduce");
    std::vector<double> vals(out_grid.n_cells());
    for (std::size_t i = 0; i < out_grid.n_cells(); ++i) {
        const double s = out_grid.mid(i);
        KahanSum acc;
        for (std::size_t j = 0; j < f.grid.n_cells(); ++j) {
            if (f.values[j] == 0.0) continue;
            const double a = f.grid.edge(j), b = f.grid.edge(j + 1);
            acc.add(f.values[j] *
                    fixed_simpson([&](double t) { return K0(s, t) * std::pow(t, d1 - 1.0); }, a,
                                  b, 8));
        }
        vals[i] = acc.value();
    }
    return GridFunction(out_grid, std::move(vals));
}

inline double sphere_area(double d) {
    return 2.0 * std::pow(std::acos(-1.0), 0.5 * d) / std::tgamma(0.5 * d);
}

// ---------------------------------------------------------------------------
// Piecewise power kernels on X = [1, inf)
// ---------------------------------------------------------------------------

/// K(x,y) = x^{-alpha} y^{-beta} for x <= y, x^{-alpha'} y^{-beta'} for x > y,
/// with alpha + beta = alpha' + beta'.
struct PiecewisePowerKernel {
    double alpha, beta, alphap, betap;

    PiecewisePowerKernel(double a, double b, double ap, double bp)
        : alpha(a), beta(b), alphap(ap), betap(bp) {
        if (!(a > 0.0 && b > 0.0 && ap > 0.0 && bp > 0.0))
            throw std::domain_error("PiecewisePowerKernel: exponents must be positive");
        if (std::fabs((a + b) - (ap + bp)) > 1e-12 * (a + b))
            throw std::domain_error("PiecewisePowerKernel: requires alpha+beta = alpha'+beta'");
    }

    /// Adjoint substitution alpha<->beta', beta<->alpha' (d1 and d2 swap at
    /// the measure level). An involution.
    PiecewisePowerKernel adjoint() const {
        return PiecewisePowerKernel(betap, alphap, beta, alpha);
    }

    double operator()(double x, double y) const {
        if (x <= y) return std::pow(x, -alpha) * std::pow(y, -beta);
        return std::pow(x, -alphap) * std::pow(y, -betap);
    }
};

enum class KernelPart { R1, R2, full };

namespace detail {

/// x^{-alpha} * int_{max(x, lower)}^{inf} y^{-beta} f(y) dmu1, exact per cell.
inline double r1_value(const PiecewisePowerKernel& K, const GridFunction& f, double d1,
                       double x) {
    KahanSum acc;
    const double c = d1 - K.beta;  // weight exponent for power_mass
    for (std::size_t i = 0; i < f.grid.n_cells(); ++i) {
        if (f.values[i] == 0.0) continue;
        const double lo = std::max(x, f.grid.edge(i)), hi = f.grid.edge(i + 1);
        if (hi > lo) acc.add(f.values[i] * power_mass(lo, hi, c));
    }
    if (f.has_tail()) {
        const double e = c + *f.tail_exponent;
        const double m = power_mass(std::max(x, f.grid.x_max()), kInf, e);
        if (!std::isfinite(m))
            throw DivergenceError("R1 diverges: tail exponent sum " + std::to_string(e) +
                                      " >= 0",
                                  sign_of(f.values.back()));
        acc.add(f.tail_coefficient() * m);
    }
    return std::pow(x, -K.alpha) * acc.value();
}

inline double r2_value(const PiecewisePowerKernel& K, const GridFunction& f, double d1,
                       double x) {
    KahanSum acc;
    const double c = d1 - K.betap;
    for (std::size_t i = 0; i < f.grid.n_cells(); ++i) {
        if (f.values[i] == 0.0) continue;
        const double lo = f.grid.edge(i), hi = std::min(x, f.grid.edge(i + 1));
        if (hi > lo) acc.add(f.values[i] * power_mass(lo, hi, c));
    }
    if (f.has_tail() && x > f.grid.x_max()) {
        const double e = c + *f.tail_exponent;
        acc.add(f.tail_coefficient() * power_mass(f.grid.x_max(), x, e));
    }
    return std::pow(x, -K.alphap) * acc.value();
}

}  // namespace detail

/// Applies R1, R2 or their sum to f (supported in [1, inf)), sampling on
/// out_grid. Output continuations are declared where they are exact single
/// powers; for part=full with a tail-bearing input, the slower-decaying power
/// is used.
inline GridFunction piecewise_apply(const PiecewisePowerKernel& K, const GridFunction& f,
                                    double d1, KernelPart part, const LogGrid& out_grid) {
    if (f.grid.x_min() < 1.0 - 1e-12)
        throw std::invalid_argument("piecewise_apply: input must be supported in [1, inf)");
    if (f.has_head()) throw std::invalid_argument("piecewise_apply: head continuation unsupported");
    std::vector<double> vals(out_grid.n_cells());
    for (std::size_t i = 0; i < out_grid.n_cells(); ++i) {
        const double x = out_grid.mid(i);
        double v = 0.0;
        if (part != KernelPart::R2) v += detail::r1_value(K, f, d1, x);
        if (part != KernelPart::R1) v += detail::r2_value(K, f, d1, x);
        vals[i] = v;
    }
    GridFunction out(out_grid, std::move(vals));
    const bool beyond_support = out_grid.x_max() >= f.grid.x_max();
    if (beyond_support) {
        if (part == KernelPart::R1) {
            if (f.has_tail()) out.with_tail(d1 - K.beta + *f.tail_exponent - K.alpha);
        } else if (part == KernelPart::R2) {
            out.with_tail(f.has_tail() ? std::max(-K.alphap, d1 - K.betap + *f.tail_exponent -
                                                                 K.alphap)
                                       : -K.alphap);
        } else {
            double e = f.has_tail()
                           ? std::max({-K.alphap, d1 - K.beta + *f.tail_exponent - K.alpha,
                                       d1 - K.betap + *f.tail_exponent - K.alphap})
                           : -K.alphap;
            out.with_tail(e);
        }
    }
    return out;
}

inline double r1_point_value(const PiecewisePowerKernel& K, const GridFunction& f, double d1,
                             double x) {
    return detail::r1_value(K, f, d1, x);
}

struct R1Envelopes {
    double applied;            // |R1 f(x)|
    double l1_bound;           // x^{-(alpha+beta)} ||f||_1, constant exactly 1
    double endpoint_bound;     // C_e ||f||_(p_e,1) x^{-alpha}, p_e = d1/(d1-beta)
    double holder_bound;       // C_h x^{d1/p' - alpha - beta} ||f||_p
    double endpoint_constant;  // d1^{-beta/d1}
    double holder_constant;    // (beta p' - d1)^{-1/p'}
};

/// The three pointwise envelopes dominating |R1 f(x)|.
inline R1Envelopes r1_envelopes(const PiecewisePowerKernel& K, const GridFunction& f, double d1,
                                double x, double p_holder) {
    R1Envelopes out{};
    const PowerMeasure mu1(d1, 1.0);
    out.applied = std::fabs(detail::r1_value(K, f.abs(), d1, x));
    out.l1_bound = std::pow(x, -(K.alpha + K.beta)) * integrate(f.abs(), mu1);
    if (!(K.beta < d1))
        throw std::domain_error("r1_envelopes: endpoint envelope requires beta < d1");
    const double pe = d1 / (d1 - K.beta);
    out.endpoint_constant = std::pow(d1, -K.beta / d1);
    out.endpoint_bound =
        out.endpoint_constant * lorentz_norm(f, mu1, LorentzIndex(pe, 1.0)) * std::pow(x, -K.alpha);
    const double pp = conjugate_exponent(p_holder);
    if (!(K.beta * pp > d1))
        throw std::domain_error("r1_envelopes: Hoelder envelope requires beta*p' > d1");
    out.holder_constant = std::pow(K.beta * pp - d1, -1.0 / pp);
    out.holder_bound = out.holder_constant * std::pow(x, d1 / pp - K.alpha - K.beta) *
                       lp_norm(f, mu1, p_holder);
    return out;
}

struct OperatorNormEstimate {
    double analytic_upper = 0.0;
    double empirical_lower = 0.0;
    std::string witness;
};

struct ProbeRow {
    double eps;
    double ratio;
};

/// Probes ||Kf||_p / ||f||_p along the near-extremal family
/// f_eps(y) = y^{-d1/p - eps} truncated at T. Reports ratios only; sharpness
/// is never asserted.
inline std::pair<OperatorNormEstimate, std::vector<ProbeRow>> norm_probe(
    const HomogeneousKernel& K, double p, double d1, double d2,
    const std::vector<double>& eps_list, double T = 1e6, std::size_t cells_per_decade = 64) {
    OperatorNormEstimate est;
    est.analytic_upper = hh_constant(K, p, d1, d2);
    std::vector<ProbeRow> rows;
    const PowerMeasure mu1(d1, 1.0), mu2(d2, 1.0);
    for (double eps : eps_list) {
        const auto n = static_cast<std::size_t>(std::log10(T) * cells_per_decade);
        LogGrid grid(1.0, T, n);
        GridFunction f = GridFunction::sample(grid, [&](double y) {
            return std::pow(y, -d1 / p - eps);
        });
        LogGrid out(1.0, T, n);
        const GridFunction kf = hh_apply(K, f, d1, out);
        const double ratio = lp_norm(kf, mu2, p) / lp_norm(f, mu1, p);
        rows.push_back({eps, ratio});
        if (ratio > est.empirical_lower) {
            est.empirical_lower = ratio;
            est.witness = "f(y) = y^{-d1/p-" + std::to_string(eps) + "} on [1, " +
                          std::to_string(T) + "]";
        }
    }
    return {est, rows};
}

}  // namespace lhh
