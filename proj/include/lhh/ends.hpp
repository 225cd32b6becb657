#pragma once

/// Star-shaped model of a manifold with ends: a compact core of finite mass
/// plus l radial half-lines [1, inf) carrying r^{n_i-1} dr. All geometry
/// enters through the printed kernel majorants of the composite operators;
/// the model only ever sees (r, r') and core membership.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lhh/grid.hpp"
#include "lhh/kernels.hpp"
#include "lhh/lorentz.hpp"

namespace lhh {

struct EndsModel {
    std::vector<int> ends;  // n_i
    int N = 0;
    double core_mass = 1.0;

    EndsModel(std::vector<int> ends_, int N_, double core_mass_ = 1.0)
        : ends(std::move(ends_)), N(N_), core_mass(core_mass_) {
        if (ends.size() < 2) throw std::domain_error("EndsModel: need l >= 2 ends");
        for (int n : ends)
            if (n < 3) throw std::domain_error("EndsModel: every n_i must be >= 3");
        if (N < *std::max_element(ends.begin(), ends.end()))
            throw std::domain_error("EndsModel: N must be >= max n_i");
        if (!(core_mass > 0.0)) throw std::domain_error("EndsModel: core_mass must be > 0");
    }

    int n_star() const { return *std::min_element(ends.begin(), ends.end()); }
    PowerMeasure end_measure(std::size_t i) const {
        return PowerMeasure(static_cast<double>(ends[i]), 1.0);
    }
};

/// Radial model of a function on the manifold: one value on the core, one
/// radial profile per end.
struct EndsFunction {
    double core_value = 0.0;
    std::vector<GridFunction> end_parts;

    static EndsFunction zero(const EndsModel& m) {
        EndsFunction f;
        f.end_parts.reserve(m.ends.size());
        for (std::size_t i = 0; i < m.ends.size(); ++i)
            f.end_parts.push_back(GridFunction::zero(LogGrid(1.0, 2.0, 1)));
        return f;
    }
};

/// Rearrangement over the whole model: core atom plus every end.
inline RearrangedFunction ends_rearrangement(const EndsModel& m, const EndsFunction& f) {
    std::vector<std::pair<double, double>> atoms;
    std::vector<PowerPiece> pieces;
    atoms.emplace_back(std::fabs(f.core_value), m.core_mass);
    for (std::size_t i = 0; i < m.ends.size(); ++i) {
        const auto& g = f.end_parts[i];
        const double d = static_cast<double>(m.ends[i]);
        if (g.grid.x_min() < 1.0 - 1e-12)
            throw std::invalid_argument("ends_rearrangement: end part extends below r = 1");
        const auto masses = cell_measures(g.grid, PowerMeasure(d, 1.0));
        for (std::size_t j = 0; j < g.values.size(); ++j)
            atoms.emplace_back(std::fabs(g.values[j]), masses[j]);
        if (g.has_tail())
            pieces.push_back(
                {std::fabs(g.tail_coefficient()), *g.tail_exponent, g.grid.x_max(), kInf, d});
    }
    return RearrangedFunction::build(std::move(atoms), std::move(pieces));
}

inline double ends_lorentz_norm(const EndsModel& m, const EndsFunction& f,
                                const LorentzIndex& idx) {
    return ends_rearrangement(m, f).lorentz_norm(idx);
}

namespace detail {

/// int_lo^hi |f|(r) r^{c-1} dr for a compactly supported grid function.
inline double partial_weight_integral(const GridFunction& f, double c, double lo, double hi) {
    KahanSum acc;
    for (std::size_t i = 0; i < f.grid.n_cells(); ++i) {
        if (f.values[i] == 0.0) continue;
        const double a = std::max(lo, f.grid.edge(i));
        const double b = std::min(hi, f.grid.edge(i + 1));
        if (b > a) acc.add(std::fabs(f.values[i]) * power_mass(a, b, c));
    }
    return acc.value();
}

inline void require_compact_ends(const EndsFunction& f, const char* who) {
    for (const auto& g : f.end_parts)
        if (g.has_tail() || g.has_head())
            throw std::invalid_argument(std::string(who) +
                                        ": end parts must be compactly supported");
}

struct ApplyWeights {
    double near_weight;  // exponent c in int r'^{c-1} |f| dr' for r' <= r
    double far_weight;   //               ... for r' > r
    double core_row;     // exponent c for the core-output row
};

// reduced weights after multiplying the kernel by r'^{n_s - 1}
constexpr ApplyWeights kT3Weights{2.0, 1.0, 1.0};  // r'^{2-ns}, r'^{1-ns}; core row r'^{1-ns}
constexpr ApplyWeights kT4Weights{1.0, 0.0, 0.0};  // r'^{1-ns}, r'^{-ns};  core row r'^{-ns}

inline EndsFunction kernel_bound_apply(const EndsModel& m, const EndsFunction& f,
                                       const ApplyWeights& w, std::size_t cells_per_decade) {
    require_compact_ends(f, "kernel_bound_apply");
    double r_max = 4.0;
    for (const auto& g : f.end_parts) r_max = std::max(r_max, 4.0 * g.grid.x_max());

    EndsFunction out;
    // core row
    {
        KahanSum acc;
        for (std::size_t j = 0; j < m.ends.size(); ++j)
            acc.add(partial_weight_integral(f.end_parts[j], w.core_row, 1.0, kInf));
        acc.add(m.core_mass * std::fabs(f.core_value));
        out.core_value = acc.value();
    }
    // end rows
    for (std::size_t i = 0; i < m.ends.size(); ++i) {
        const double ni = static_cast<double>(m.ends[i]);
        const auto n_cells =
            static_cast<std::size_t>(std::ceil(std::log10(r_max) * cells_per_decade));
        LogGrid grid(1.0, r_max, std::max<std::size_t>(n_cells, 8));
        std::vector<double> vals(grid.n_cells());
        for (std::size_t kcell = 0; kcell < grid.n_cells(); ++kcell) {
            const double r = grid.mid(kcell);
            KahanSum acc;
            for (std::size_t j = 0; j < m.ends.size(); ++j) {
                acc.add(std::pow(r, -ni) *
                        partial_weight_integral(f.end_parts[j], w.near_weight, 1.0, r));
                acc.add(std::pow(r, 1.0 - ni) *
                        partial_weight_integral(f.end_parts[j], w.far_weight, r, kInf));
            }
            acc.add(std::pow(r, -ni) * m.core_mass * std::fabs(f.core_value));
            vals[kcell] = acc.value();
        }
        GridFunction g(grid, std::move(vals));
        g.with_tail(-ni);  // exact beyond the support of f
        out.end_parts.push_back(std::move(g));
    }
    return out;
}

}  // namespace detail

/// Majorant of T3 applied to |f|, per the printed case table.
inline EndsFunction t3_bound_apply(const EndsModel& m, const EndsFunction& f,
                                   std::size_t cells_per_decade = 64) {
    return detail::kernel_bound_apply(m, f, detail::kT3Weights, cells_per_decade);
}

/// Majorant of T4 applied to |f| (one power of r' lower in the source).
inline EndsFunction t4_bound_apply(const EndsModel& m, const EndsFunction& f,
                                   std::size_t cells_per_decade = 64) {
    return detail::kernel_bound_apply(m, f, detail::kT4Weights, cells_per_decade);
}

struct SBoundResult {
    EndsFunction out;
    double input_norm;        // ||f||_(n*,1) over the model
    double envelope_sup_ratio;  // sup |Sf| / (input_norm * shape), shape below
};

/// Majorant operator S of the T3 analysis, reading the source end i only.
/// The envelope shape is chi_core + sum_j r^{2 - n_j - n_i/n*}; the reported
/// sup ratio is the fitted constant making |Sf| <= const * ||f||_(n*,1) * shape.
inline SBoundResult s_bound_apply(const EndsModel& m, std::size_t i, const EndsFunction& f,
                                  std::size_t cells_per_decade = 64) {
    detail::require_compact_ends(f, "s_bound_apply");
    const auto& src = f.end_parts.at(i);
    const double ni = static_cast<double>(m.ends[i]);
    const double nstar = static_cast<double>(m.n_star());
    double r_max = std::max(4.0, 4.0 * src.grid.x_max());

    SBoundResult res{};
    res.out.core_value = detail::partial_weight_integral(src, 1.0, 1.0, kInf);
    for (std::size_t j = 0; j < m.ends.size(); ++j) {
        const double nj = static_cast<double>(m.ends[j]);
        const auto n_cells =
            static_cast<std::size_t>(std::ceil(std::log10(r_max) * cells_per_decade));
        LogGrid grid(1.0, r_max, std::max<std::size_t>(n_cells, 8));
        std::vector<double> vals(grid.n_cells());
        for (std::size_t kcell = 0; kcell < grid.n_cells(); ++kcell) {
            const double r = grid.mid(kcell);
            vals[kcell] = std::pow(r, -nj) * detail::partial_weight_integral(src, 2.0, 1.0, r) +
                          std::pow(r, 1.0 - nj) * detail::partial_weight_integral(src, 1.0, r, kInf);
        }
        GridFunction g(grid, std::move(vals));
        g.with_tail(-nj);
        res.out.end_parts.push_back(std::move(g));
    }
    res.input_norm = ends_lorentz_norm(m, f, LorentzIndex(nstar, 1.0));
    if (res.input_norm == 0.0) {
        res.envelope_sup_ratio = 0.0;
        return res;
    }
    double sup = res.out.core_value / res.input_norm;  // core shape is 1
    for (std::size_t j = 0; j < m.ends.size(); ++j) {
        const double nj = static_cast<double>(m.ends[j]);
        const auto& g = res.out.end_parts[j];
        for (std::size_t kcell = 0; kcell < g.grid.n_cells(); ++kcell) {
            const double r = g.grid.mid(kcell);
            const double shape = std::pow(r, 2.0 - nj - ni / nstar);
            sup = std::max(sup, g.values[kcell] / (res.input_norm * shape));
        }
    }
    res.envelope_sup_ratio = sup;
    return res;
}

struct PBoundReport {
    double near_schur;         // Schur row/column bound of the near-diagonal part, = eps
    double far_sup;            // sup_alpha alpha d_g(alpha)^{1/(n*)'}
    double far_bound;          // far_sup * ||f||_(n*,1)
    double endpoint_constant;  // far_sup / eps^{1 - n_i/n*}
};

/// Distribution of the far-field kernel profile g(r') = r'^{1-n_i} chi_{r'>eps}.
inline double p_far_distribution(double alpha, double eps, int n_i) {
    const double ni = static_cast<double>(n_i);
    if (alpha >= std::pow(eps, 1.0 - ni)) return 0.0;
    return (std::pow(alpha, -ni / (ni - 1.0)) - std::pow(eps, ni)) / ni;
}

/// Near/far decomposition bounds of the resolvent-integral operator on end i.
inline PBoundReport p_bound_apply(const EndsModel& m, std::size_t i, double eps,
                                  const EndsFunction& f) {
    if (!(eps > 0.0)) throw std::domain_error("p_bound_apply: eps must be > 0");
    const int n_i = m.ends.at(i);
    const double nstar = static_cast<double>(m.n_star());
    const double conj = nstar / (nstar - 1.0);
    PBoundReport rep{};
    rep.near_schur = eps;
    const double alpha_max = std::pow(eps, 1.0 - static_cast<double>(n_i));
    auto g = [&](double la) {
        const double a = std::exp(la);
        return a * std::pow(p_far_distribution(a, eps, n_i), 1.0 / conj);
    };
    const double la = golden_max(g, std::log(alpha_max) - 60.0, std::log(alpha_max), 200);
    rep.far_sup = g(la);
    rep.far_bound = rep.far_sup * ends_lorentz_norm(m, f, LorentzIndex(nstar, 1.0));
    rep.endpoint_constant = rep.far_sup / std::pow(eps, 1.0 - static_cast<double>(n_i) / nstar);
    return rep;
}

// ---------------------------------------------------------------------------
// Counterexample families and divergence studies
// ---------------------------------------------------------------------------

struct CounterexampleSpec {
    enum class Kind { lemma313a, lemma313b, prop44 };
    Kind kind = Kind::prop44;
    double beta = 0.6;   // lemma313a and prop44
    double delta = 1.0;  // lemma313b
    double p = 2.0;
    double T = 1e6;
    std::size_t cells_per_decade = 64;

    void validate(double d1) const {
        if (!(T > 1.0)) throw std::domain_error("CounterexampleSpec: T must exceed 1");
        switch (kind) {
            case Kind::lemma313a:
                if (!(beta > 0.0 && beta <= d1))
                    throw std::domain_error("lemma313a family: requires 0 < beta <= d1");
                break;
            case Kind::lemma313b:
                if (!(delta > 0.0)) throw std::domain_error("lemma313b family: requires delta > 0");
                if (!(p >= 1.0)) throw std::domain_error("lemma313b family: requires p >= 1");
                break;
            case Kind::prop44:
                if (!(p > 1.0)) throw std::domain_error("prop44 family: requires p > 1");
                if (!(beta > 1.0 / p && beta <= 1.0))
                    throw std::domain_error("prop44 family: requires 1/p < beta <= 1");
                break;
        }
    }
};

/// The family member truncated at T, sampled on a log grid over [1, T].
inline GridFunction counterexample_family(const CounterexampleSpec& spec, double d1) {
    spec.validate(d1);
    const auto n = std::max<std::size_t>(
        8, static_cast<std::size_t>(std::ceil(std::log10(spec.T) * spec.cells_per_decade)));
    LogGrid grid(1.0, spec.T, n);
    switch (spec.kind) {
        case CounterexampleSpec::Kind::lemma313a:
            return GridFunction::sample(grid, [&](double y) {
                return std::pow(y, spec.beta - d1) / (1.0 + std::log(y));
            });
        case CounterexampleSpec::Kind::lemma313b:
            return GridFunction::sample(grid, [&](double y) {
                return std::pow(y, -(d1 + spec.delta) / spec.p);
            });
        case CounterexampleSpec::Kind::prop44:
        default:
            return GridFunction::sample(grid, [&](double r) {
                return std::pow(r, -1.0) * std::pow(1.0 + std::fabs(std::log(r)), -spec.beta);
            });
    }
}

struct StudyConfig {
    enum class Quantity { r1_point, r1_norm, pairing };
    Quantity quantity = Quantity::pairing;
    double d1 = 3, d2 = 3, alpha = 2, beta = 2;  // R1 kernel parameters
    double x = 1.0;                              // evaluation point for r1_point
    double q = 1.0;                              // output norm for r1_norm
    int n_i = 3;                                 // end dimension for the pairing
};

struct StudyRow {
    double T;
    double input_norm;
    double output;
    double ratio;
};

/// Truncation ladder study: input norm, output quantity and their ratio per T.
inline std::vector<StudyRow> divergence_study(const StudyConfig& cfg, CounterexampleSpec spec,
                                              const std::vector<double>& T_list) {
    for (std::size_t i = 1; i < T_list.size(); ++i)
        if (!(T_list[i] > T_list[i - 1]))
            throw std::invalid_argument("divergence_study: T_list must be increasing");
    std::vector<StudyRow> rows;
    for (double T : T_list) {
        spec.T = T;
        StudyRow row{};
        row.T = T;
        if (cfg.quantity == StudyConfig::Quantity::pairing) {
            const double d1 = static_cast<double>(cfg.n_i);
            const GridFunction f = counterexample_family(spec, d1);
            const PowerMeasure mu(d1, 1.0);
            row.input_norm = (spec.kind == CounterexampleSpec::Kind::prop44)
                                 ? lorentz_norm(f, mu, LorentzIndex(d1, spec.p))
                                 : lp_norm(f, mu, spec.p);
            row.output = integrate_weight(f.abs(), 1.0);  // int (r')^{1-n_i} |f| dmu_i
        } else {
            const GridFunction f = counterexample_family(spec, cfg.d1);
            const PowerMeasure mu1(cfg.d1, 1.0);
            row.input_norm = (spec.kind == CounterexampleSpec::Kind::prop44)
                                 ? lorentz_norm(f, mu1, LorentzIndex(cfg.d1, spec.p))
                                 : lp_norm(f, mu1, spec.p);
            const PiecewisePowerKernel K(cfg.alpha, cfg.beta, cfg.alpha + cfg.beta - 1.0, 1.0);
            if (cfg.quantity == StudyConfig::Quantity::r1_point) {
                row.output = r1_point_value(K, f.abs(), cfg.d1, cfg.x);
            } else {
                const auto n = static_cast<std::size_t>(
                    std::ceil(std::log10(T) * spec.cells_per_decade));
                LogGrid out_grid(1.0, T, std::max<std::size_t>(n, 8));
                const GridFunction r1f =
                    piecewise_apply(K, f.abs(), cfg.d1, KernelPart::R1, out_grid);
                row.output = lp_norm(r1f, PowerMeasure(cfg.d2, 1.0), cfg.q);
            }
        }
        row.ratio = row.output / row.input_norm;
        rows.push_back(row);
    }
    return rows;
}

enum class EndpointOperator { t3_bound, s_bound };

struct EndpointRatioResult {
    double sup_ratio = 0.0;
    std::size_t witness = 0;
    std::vector<double> ratios;
};

/// sup over a corpus of ||T f||_idx / ||f||_idx with the witness input.
inline EndpointRatioResult endpoint_ratio(const EndsModel& m, EndpointOperator op,
                                          const std::vector<EndsFunction>& corpus,
                                          const LorentzIndex& idx, std::size_t source_end = 0,
                                          std::size_t cells_per_decade = 64) {
    if (corpus.empty()) throw std::invalid_argument("endpoint_ratio: empty corpus");
    EndpointRatioResult res;
    for (std::size_t k = 0; k < corpus.size(); ++k) {
        const double in = ends_lorentz_norm(m, corpus[k], idx);
        if (!(in > 0.0))
            throw std::invalid_argument("endpoint_ratio: corpus member " + std::to_string(k) +
                                        " has zero norm");
        const EndsFunction out = (op == EndpointOperator::t3_bound)
                                     ? t3_bound_apply(m, corpus[k], cells_per_decade)
                                     : s_bound_apply(m, source_end, corpus[k], cells_per_decade).out;
        const double ratio = ends_lorentz_norm(m, out, idx) / in;
        res.ratios.push_back(ratio);
        if (ratio > res.sup_ratio) {
            res.sup_ratio = ratio;
            res.witness = k;
        }
    }
    return res;
}

/// chi_{[2^k, 2^{k+1})} on the given end, exactly representable at any
/// resolution (grid edges are powers of two).
inline EndsFunction dyadic_annulus(const EndsModel& m, std::size_t end, int k,
                                   std::size_t cells = 16) {
    EndsFunction f = EndsFunction::zero(m);
    LogGrid grid(std::pow(2.0, k), std::pow(2.0, k + 1), cells);
    f.end_parts[end] = GridFunction(grid, std::vector<double>(cells, 1.0));
    return f;
}

inline std::vector<EndsFunction> standard_corpus(const EndsModel& m, int k_max = 12) {
    std::vector<EndsFunction> corpus;
    for (std::size_t e = 0; e < m.ends.size(); ++e)
        for (int k = 0; k <= k_max; k += 2) corpus.push_back(dyadic_annulus(m, e, k));
    EndsFunction core = EndsFunction::zero(m);
    core.core_value = 1.0;
    corpus.push_back(core);
    return corpus;
}

}  // namespace lhh
