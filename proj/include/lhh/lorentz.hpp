#pragma once

/// Distribution functions, decreasing rearrangements and Lorentz quasi-norms.
///
/// A rearrangement is held as an exact finite step part (sorted atoms with
/// ties merged) plus a list of analytic power pieces contributed by declared
/// head/tail continuations. For pure step data every quantity below is a
/// closed-form power sum; pieces add analytic level-set measures, with the
/// q < inf norm evaluated on the s-side identity
///     ||f||_{(p,q)}^q = p * int_0^inf s^{q-1} d_f(s)^{q/p} ds,
/// closed form wherever d_f is constant and adaptive quadrature elsewhere.
/// Divergence is a legal outcome: norms return +inf rather than throwing.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "lhh/grid.hpp"
#include "lhh/quadrature.hpp"

namespace lhh {

struct LorentzIndex {
    double p = 2.0;
    double q = 2.0;
    LorentzIndex() = default;
    LorentzIndex(double p_, double q_) : p(p_), q(q_) {
        if (!(p > 0.0) || !(q > 0.0)) throw std::domain_error("LorentzIndex: p, q must be > 0");
    }
};

/// Conjugate exponent, with 1' = inf and inf' = 1.
inline double conjugate_exponent(double p) {
    if (p == 1.0) return kInf;
    if (p == kInf) return 1.0;
    return p / (p - 1.0);
}

/// |f| = coeff * r^exponent on [lo, hi) against r^{d-1} dr.
struct PowerPiece {
    double coeff;
    double exponent;
    double lo;
    double hi;  // may be kInf
    double d;
};

class RearrangedFunction {
public:
    /// Atoms are (value, mass) pairs in carrier order; zero values and masses
    /// are dropped, equal values merged. Pieces describe analytic power
    /// segments of |f|.
    static RearrangedFunction build(std::vector<std::pair<double, double>> atoms,
                                    std::vector<PowerPiece> pieces) {
        RearrangedFunction r;
        for (auto& pc : pieces) {
            if (pc.coeff < 0.0) pc.coeff = -pc.coeff;
            if (pc.coeff == 0.0 || pc.hi <= pc.lo) continue;
            if (pc.exponent > 0.0 && pc.hi == kInf)
                throw std::invalid_argument("RearrangedFunction: growing tail is not rearrangeable");
            r.pieces_.push_back(pc);
        }
        atoms.erase(std::remove_if(atoms.begin(), atoms.end(),
                                   [](const auto& a) { return a.first == 0.0 || a.second == 0.0; }),
                    atoms.end());
        for (auto& a : atoms) a.first = std::fabs(a.first);
        std::stable_sort(atoms.begin(), atoms.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        for (const auto& [v, m] : atoms) {
            if (!r.values_.empty() && r.values_.back() == v) {
                r.cum_.back() += m;
            } else {
                r.values_.push_back(v);
                r.cum_.push_back((r.cum_.empty() ? 0.0 : r.cum_.back()) + m);
            }
        }
        return r;
    }

    const std::vector<double>& step_values() const { return values_; }
    const std::vector<double>& step_breakpoints() const { return cum_; }
    const std::vector<PowerPiece>& pieces() const { return pieces_; }
    bool has_pieces() const { return !pieces_.empty(); }

    /// mu{|f| > s}; +inf is a legal return.
    double distribution(double s) const {
        if (s < 0.0) throw std::domain_error("distribution: level must be >= 0");
        double total = 0.0;
        // steps: values_ descending, cum_ prefix masses
        const auto it = std::lower_bound(values_.begin(), values_.end(), s,
                                         [](double v, double level) { return v > level; });
        const auto k = static_cast<std::size_t>(it - values_.begin());
        if (k > 0) total += cum_[k - 1];
        for (const auto& pc : pieces_) total += piece_distribution(pc, s);
        return total;
    }

    /// f*(t), right-continuous.
    double value_at(double t) const {
        if (t < 0.0) throw std::domain_error("value_at: t must be >= 0");
        if (pieces_.empty()) {
            const auto it = std::upper_bound(cum_.begin(), cum_.end(), t);
            if (it == cum_.end()) return 0.0;
            return values_[static_cast<std::size_t>(it - cum_.begin())];
        }
        double hi = max_level();
        if (hi == kInf) {
            hi = values_.empty() ? 1.0 : values_.front();
            int guard = 0;
            while (distribution(hi) > t && guard++ < 4000) hi *= 2.0;
            if (distribution(hi) > t) return kInf;
        }
        if (distribution(hi) > t) return hi;  // t below the top plateau
        double lo = hi;
        int guard = 0;
        while (lo > 1e-300 && distribution(lo) <= t && guard++ < 4000) lo *= 0.5;
        if (distribution(lo) <= t) return 0.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = std::sqrt(lo * hi);
            if (distribution(mid) <= t)
                hi = mid;
            else
                lo = mid;
        }
        return hi;
    }

    double total_mass() const { return distribution(0.0); }

    double sup_value() const {
        double s = values_.empty() ? 0.0 : values_.front();
        for (const auto& pc : pieces_) s = std::max(s, piece_sup(pc));
        return s;
    }

    double lorentz_norm(const LorentzIndex& idx) const {
        const double p = idx.p, q = idx.q;
        if (values_.empty() && pieces_.empty()) return 0.0;
        if (p == kInf) {
            if (q == kInf) return sup_value();
            return sup_value() > 0.0 ? kInf : 0.0;
        }
        if (q == kInf) return weak_norm(p);
        if (pieces_.empty()) {
            // t-side closed form over the steps
            KahanSum acc;
            double t_prev = 0.0;
            for (std::size_t j = 0; j < values_.size(); ++j) {
                acc.add(std::pow(values_[j], q) *
                        (std::pow(cum_[j], q / p) - std::pow(t_prev, q / p)));
                t_prev = cum_[j];
            }
            return std::pow(acc.value() * (p / q), 1.0 / q);
        }
        return norm_with_pieces(p, q);
    }

    /// sup_alpha alpha * d_f(alpha)^{1/p}; equals sup_t t^{1/p} f*(t).
    double weak_norm(double p) const {
        double best = 0.0;
        for (std::size_t j = 0; j < values_.size(); ++j) {
            const double d = distribution_minus(values_[j]);
            best = std::max(best, values_[j] * std::pow(d, 1.0 / p));
        }
        if (pieces_.empty()) return best;
        // analytic limits at the ends
        for (const auto& pc : pieces_) {
            if (pc.hi == kInf) {  // d(s) ~ (s/C)^{d/e}/d as s -> 0
                const double expo = 1.0 + pc.d / (pc.exponent * p);
                if (expo < 0.0) return kInf;
                if (expo == 0.0)
                    best = std::max(best, std::pow(1.0 / pc.d, 1.0 / p) *
                                              std::pow(pc.coeff, -pc.d / (pc.exponent * p)));
            }
            if (pc.lo == 0.0 && pc.exponent < 0.0) {  // unbounded values near r = 0
                const double expo = 1.0 + pc.d / (pc.exponent * p);
                if (expo > 0.0) return kInf;
                if (expo == 0.0)
                    best = std::max(best, std::pow(1.0 / pc.d, 1.0 / p) *
                                              std::pow(pc.coeff, -pc.d / (pc.exponent * p)));
            }
            if (pc.exponent == 0.0 && pc.hi == kInf && pc.d > 0.0) return kInf;
        }
        // numeric sweep between level breakpoints: coarse scan, then a local
        // polish around the best sample (the objective need not be unimodal
        // across a whole segment when several pieces are active)
        auto g = [&](double la) {
            const double a = std::exp(la);
            const double d = distribution(a);
            return d == kInf ? kInf : a * std::pow(d, 1.0 / p);
        };
        auto bps = level_breakpoints();
        for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
            const double la = std::log(bps[i]), lb = std::log(bps[i + 1]);
            if (!(lb > la)) continue;
            const int scan = 24;
            double best_s = la;
            double best_v = -1.0;
            for (int j = 0; j <= scan; ++j) {
                const double s = la + (lb - la) * j / scan;
                const double v = g(s);
                if (v > best_v) {
                    best_v = v;
                    best_s = s;
                }
            }
            const double w = (lb - la) / scan;
            const double lm = golden_max(g, std::max(la, best_s - w), std::min(lb, best_s + w),
                                         100);
            best = std::max({best, best_v, g(lm)});
        }
        return best;
    }

private:
    static double piece_distribution(const PowerPiece& pc, double s) {
        if (s <= 0.0) return power_mass(pc.lo, pc.hi, pc.d);
        if (pc.exponent == 0.0)
            return pc.coeff > s ? power_mass(pc.lo, pc.hi, pc.d) : 0.0;
        const double rs = std::pow(s / pc.coeff, 1.0 / pc.exponent);
        if (pc.exponent < 0.0) return power_mass(pc.lo, std::min(pc.hi, rs), pc.d);
        return power_mass(std::max(pc.lo, rs), pc.hi, pc.d);
    }

    static double piece_sup(const PowerPiece& pc) {
        if (pc.exponent == 0.0) return pc.coeff;
        if (pc.exponent < 0.0)
            return pc.lo == 0.0 ? kInf : pc.coeff * std::pow(pc.lo, pc.exponent);
        return pc.coeff * std::pow(pc.hi, pc.exponent);  // hi < inf enforced in build
    }

    static double piece_inf_level(const PowerPiece& pc) {
        if (pc.exponent == 0.0) return pc.coeff;
        if (pc.exponent < 0.0)
            return pc.hi == kInf ? 0.0 : pc.coeff * std::pow(pc.hi, pc.exponent);
        return pc.coeff * std::pow(pc.lo, pc.exponent);
    }

    double max_level() const {
        double m = values_.empty() ? 0.0 : values_.front();
        for (const auto& pc : pieces_) m = std::max(m, piece_sup(pc));
        return m;
    }

    // d_f just below level v (counts the level-v step itself)
    double distribution_minus(double v) const {
        const auto it = std::lower_bound(values_.begin(), values_.end(), v,
                                         [](double val, double level) { return val >= level; });
        const auto k = static_cast<std::size_t>(it - values_.begin());
        double total = (k > 0) ? cum_[k - 1] : 0.0;
        for (const auto& pc : pieces_) {
            // {|f| >= v} and {|f| > v} agree except on constant plateaus
            if (pc.exponent == 0.0 && pc.coeff == v)
                total += power_mass(pc.lo, pc.hi, pc.d);
            else
                total += piece_distribution(pc, v);
        }
        return total;
    }

    std::vector<double> level_breakpoints() const {
        std::vector<double> b;
        for (double v : values_) b.push_back(v);
        for (const auto& pc : pieces_) {
            const double s = piece_sup(pc), i = piece_inf_level(pc);
            if (s > 0.0 && s < kInf) b.push_back(s);
            if (i > 0.0) b.push_back(i);
        }
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        if (b.empty()) return b;
        b.insert(b.begin(), b.front() * 1e-8);
        b.push_back(b.back() * (max_level() == kInf ? 1e8 : 1.0));
        b.erase(std::unique(b.begin(), b.end()), b.end());
        return b;
    }

    bool piece_active_between(double s1, double s2) const {
        for (const auto& pc : pieces_) {
            const double hi = piece_sup(pc), lo = piece_inf_level(pc);
            if (s1 < hi && s2 > lo) return true;
        }
        return false;
    }

    double norm_with_pieces(double p, double q) const {
        // divergence screens at both ends of the level axis
        for (const auto& pc : pieces_) {
            if (pc.exponent == 0.0 && pc.hi == kInf && pc.d > 0.0) return kInf;
            if (pc.hi == kInf) {
                // s -> 0 : d(s) ~ (s/C)^{d/e}/d, integrand exponent q-1+(d/e)(q/p)
                if (q - 1.0 + (pc.d / pc.exponent) * (q / p) <= -1.0) return kInf;
            }
            if (pc.lo == 0.0 && pc.exponent < 0.0) {
                // s -> inf tail of the level axis
                if (q - 1.0 + (pc.d / pc.exponent) * (q / p) >= -1.0) return kInf;
            }
        }
        auto bps = level_breakpoints();
        if (bps.empty()) return 0.0;
        auto integrand = [&](double s) {
            const double d = distribution(s);
            return d == kInf ? kInf : p * std::pow(s, q - 1.0) * std::pow(d, q / p);
        };
        KahanSum acc;
        // core region between breakpoints
        for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
            const double s1 = bps[i], s2 = bps[i + 1];
            if (!(s2 > s1)) continue;
            if (!piece_active_between(s1, s2)) {
                const double d = distribution(0.5 * (s1 + s2));
                acc.add(p * std::pow(d, q / p) * (std::pow(s2, q) - std::pow(s1, q)) / q);
            } else {
                acc.add(integrate_log_scale(integrand, s1, s2, 1e-11));
            }
        }
        // below the smallest breakpoint
        {
            double s1 = bps.front();
            bool unbounded_mass = false;
            for (const auto& pc : pieces_)
                if (pc.hi == kInf) unbounded_mass = true;
            if (!unbounded_mass) {
                const double T = total_mass();
                acc.add(p * std::pow(T, q / p) * std::pow(s1, q) / q);
            } else {
                double block = s1;
                for (int i = 0; i < 400; ++i) {
                    const double contrib = integrate_log_scale(integrand, block * 0.1, block, 1e-10);
                    acc.add(contrib);
                    block *= 0.1;
                    if (contrib < 1e-14 * std::fabs(acc.value()) || block < 1e-280) break;
                }
            }
        }
        // above the largest breakpoint (only when values are unbounded)
        if (max_level() == kInf) {
            double block = bps.back();
            for (int i = 0; i < 400; ++i) {
                const double contrib = integrate_log_scale(integrand, block, block * 10.0, 1e-10);
                acc.add(contrib);
                block *= 10.0;
                if (contrib < 1e-14 * std::fabs(acc.value()) || block > 1e280) break;
            }
        }
        return std::pow(acc.value(), 1.0 / q);
    }

    std::vector<double> values_;  // descending, > 0
    std::vector<double> cum_;     // prefix masses
    std::vector<PowerPiece> pieces_;
};

/// Builds the rearrangement of a GridFunction against a PowerMeasure.
inline RearrangedFunction decreasing_rearrangement(const GridFunction& f, const PowerMeasure& mu) {
    if (mu.lower_endpoint == 1.0) {
        if (f.grid.x_min() < 1.0 - 1e-12)
            throw std::invalid_argument("rearrangement: grid extends below the measure support");
        if (f.has_head())
            throw std::invalid_argument("rearrangement: head continuation below lower endpoint 1");
    }
    std::vector<std::pair<double, double>> atoms;
    const auto masses = cell_measures(f.grid, mu);
    atoms.reserve(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i)
        atoms.emplace_back(std::fabs(f.values[i]), masses[i]);
    std::vector<PowerPiece> pieces;
    if (f.has_tail())
        pieces.push_back({std::fabs(f.tail_coefficient()), *f.tail_exponent, f.grid.x_max(), kInf,
                          mu.dimension});
    if (f.has_head() && mu.lower_endpoint == 0.0)
        pieces.push_back({std::fabs(f.head_coefficient()), *f.head_exponent, 0.0, f.grid.x_min(),
                          mu.dimension});
    return RearrangedFunction::build(std::move(atoms), std::move(pieces));
}

/// d_f(s) = mu{|f| > s}; +inf is a legal return.
inline double distribution_function(const GridFunction& f, const PowerMeasure& mu, double s) {
    return decreasing_rearrangement(f, mu).distribution(s);
}

inline double lorentz_norm(const GridFunction& f, const PowerMeasure& mu,
                           const LorentzIndex& idx) {
    return decreasing_rearrangement(f, mu).lorentz_norm(idx);
}

struct PairingResult {
    double lhs;       // |int f g dmu|
    double rhs;       // int f*(t) g*(t) dt
    double majorant;  // ||f||_(p,q) ||g||_(p',q')
};

/// Hardy-Littlewood pairing: both sides of |int fg| <= int f* g* dt, plus the
/// Lorentz-Hoelder majorant at the requested index.
inline PairingResult hl_pairing(const GridFunction& f, const GridFunction& g,
                                const PowerMeasure& mu, const LorentzIndex& idx = {2.0, 2.0}) {
    PairingResult out{};
    out.lhs = std::fabs(integrate(pointwise_product(f, g), mu));
    const auto rf = decreasing_rearrangement(f, mu);
    const auto rg = decreasing_rearrangement(g, mu);
    if (!rf.has_pieces() && !rg.has_pieces()) {
        const auto &fv = rf.step_values(), &gv = rg.step_values();
        const auto &fc = rf.step_breakpoints(), &gc = rg.step_breakpoints();
        KahanSum acc;
        std::size_t i = 0, j = 0;
        double t = 0.0;
        while (i < fv.size() && j < gv.size()) {
            const double tn = std::min(fc[i], gc[j]);
            acc.add(fv[i] * gv[j] * (tn - t));
            t = tn;
            if (fc[i] == tn) ++i;
            if (gc[j] == tn) ++j;
        }
        out.rhs = acc.value();
    } else {
        // analytic divergence screen on the t -> inf side
        auto decay = [](const RearrangedFunction& r) {
            double gamma = -kInf;  // f*(t) ~ t^gamma
            for (const auto& pc : r.pieces())
                if (pc.hi == kInf) gamma = std::max(gamma, pc.exponent / pc.d);
            return gamma;
        };
        const double gf = decay(rf), gg = decay(rg);
        if (gf > -kInf && gg > -kInf && gf + gg >= -1.0) {
            out.rhs = kInf;
        } else {
            auto integrand = [&](double t) { return rf.value_at(t) * rg.value_at(t); };
            KahanSum acc;
            double block = 1e-8;
            for (int i = 0; i < 60 && block < 1e40; ++i) {
                const double c = integrate_log_scale(integrand, block, block * 10.0, 1e-9);
                acc.add(c);
                block *= 10.0;
                if (block > 1.0 && c < 1e-13 * std::fabs(acc.value())) break;
            }
            out.rhs = acc.value();
        }
    }
    const LorentzIndex dual(conjugate_exponent(idx.p), conjugate_exponent(idx.q));
    out.majorant = rf.lorentz_norm(idx) * rg.lorentz_norm(dual);
    return out;
}

}  // namespace lhh
