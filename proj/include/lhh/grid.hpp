#pragma once

/// Weighted half-line measures, geometric grids and piecewise-constant
/// functions with declared power-law continuations.
///
/// Everything downstream (rearrangements, kernel applications, divergence
/// studies) works with these carriers. Integrals of piecewise-constant data
/// against r^{d-1} dr are evaluated in closed form per cell; infinite domains
/// are handled by declared endpoint exponents, never by silent truncation.

#include <cmath>
#include <cstddef>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lhh/errors.hpp"

namespace lhh {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Compensated sequential sum; deterministic for a fixed input order.
class KahanSum {
public:
    void add(double x) {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Mass of [a,b] under the weight y^{c-1} dy. Handles a=0 and b=inf through
/// IEEE limits; a divergent mass comes back as +inf.
inline double power_mass(double a, double b, double c) {
    if (b <= a) return 0.0;
    if (c == 0.0) {
        if (a == 0.0) return kInf;
        return std::log(b / a);
    }
    return (std::pow(b, c) - std::pow(a, c)) / c;
}

/// Measure r^{d-1} dr on [lower_endpoint, inf).
struct PowerMeasure {
    double dimension = 1.0;
    double lower_endpoint = 1.0;  // 0 or 1

    PowerMeasure() = default;
    PowerMeasure(double d, double lower) : dimension(d), lower_endpoint(lower) {
        if (!(d >= 0.0))
            throw std::domain_error("PowerMeasure: dimension must be >= 0");
        if (lower != 0.0 && lower != 1.0)
            throw std::domain_error("PowerMeasure: lower endpoint must be 0 or 1");
    }

    /// Multiplicative Haar measure dx/x on (0, inf).
    static PowerMeasure haar() { return PowerMeasure(0.0, 0.0); }

    /// Lebesgue measure dr on (0, inf).
    static PowerMeasure lebesgue() { return PowerMeasure(1.0, 0.0); }
};

/// Geometrically spaced grid on [x_min, x_max].
class LogGrid {
public:
    LogGrid() = default;
    LogGrid(double x_min, double x_max, std::size_t n_cells)
        : x_min_(x_min), x_max_(x_max), n_(n_cells) {
        if (!(x_min > 0.0) || !(x_max > x_min))
            throw std::domain_error("LogGrid: requires 0 < x_min < x_max");
        if (n_ < 1) throw std::domain_error("LogGrid: requires n_cells >= 1");
        edges_.resize(n_ + 1);
        const double lmin = std::log(x_min), lmax = std::log(x_max);
        for (std::size_t i = 0; i <= n_; ++i)
            edges_[i] = std::exp(lmin + (static_cast<double>(i) * (lmax - lmin)) /
                                            static_cast<double>(n_));
        edges_.front() = x_min;
        edges_.back() = x_max;
    }

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    std::size_t n_cells() const { return n_; }
    double edge(std::size_t i) const { return edges_[i]; }
    double mid(std::size_t i) const { return std::sqrt(edges_[i] * edges_[i + 1]); }
    double log_step() const { return (std::log(x_max_) - std::log(x_min_)) / static_cast<double>(n_); }

    /// Index of the cell containing r, for r in [x_min, x_max).
    std::size_t locate(double r) const {
        const double s = std::log(r / x_min_) / log_step();
        auto i = static_cast<std::ptrdiff_t>(std::floor(s));
        if (i < 0) i = 0;
        if (i >= static_cast<std::ptrdiff_t>(n_)) i = static_cast<std::ptrdiff_t>(n_) - 1;
        // guard against rounding at edges
        auto u = static_cast<std::size_t>(i);
        if (r < edges_[u] && u > 0) --u;
        if (r >= edges_[u + 1] && u + 1 < n_) ++u;
        return u;
    }

    LogGrid refined(std::size_t factor) const { return LogGrid(x_min_, x_max_, n_ * factor); }

    friend bool operator==(const LogGrid& a, const LogGrid& b) {
        return a.x_min_ == b.x_min_ && a.x_max_ == b.x_max_ && a.n_ == b.n_;
    }

private:
    double x_min_ = 1.0, x_max_ = 2.0;
    std::size_t n_ = 1;
    std::vector<double> edges_;
};

/// Piecewise-constant function on a LogGrid with optional power-law
/// continuations. Values are read as samples at the cells' geometric
/// midpoints, so the continuations anchor there: beyond x_max the function
/// is values.back()*(r/mid_last)^tail_exponent, below x_min (meaningful on
/// lower-endpoint-0 measures) values.front()*(r/mid_first)^head_exponent.
/// Midpoint-sampled power laws therefore continue exactly.
struct GridFunction {
    LogGrid grid;
    std::vector<double> values;
    std::optional<double> tail_exponent;
    std::optional<double> head_exponent;

    GridFunction() = default;
    GridFunction(LogGrid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
        if (values.size() != grid.n_cells())
            throw std::invalid_argument("GridFunction: values size must match n_cells");
    }

    static GridFunction sample(const LogGrid& g, const std::function<double(double)>& fn) {
        std::vector<double> v(g.n_cells());
        for (std::size_t i = 0; i < g.n_cells(); ++i) v[i] = fn(g.mid(i));
        return GridFunction(g, std::move(v));
    }

    static GridFunction zero(const LogGrid& g) {
        return GridFunction(g, std::vector<double>(g.n_cells(), 0.0));
    }

    GridFunction& with_tail(double exponent) {
        tail_exponent = exponent;
        return *this;
    }
    GridFunction& with_head(double exponent) {
        head_exponent = exponent;
        return *this;
    }

    bool has_tail() const { return tail_exponent && values.back() != 0.0; }
    bool has_head() const { return head_exponent && values.front() != 0.0; }

    /// Tail written as C*r^e: returns C.
    double tail_coefficient() const {
        return values.back() * std::pow(grid.mid(grid.n_cells() - 1), -*tail_exponent);
    }
    double head_coefficient() const {
        return values.front() * std::pow(grid.mid(0), -*head_exponent);
    }

    double operator()(double r) const {
        if (r >= grid.x_max()) {
            if (!tail_exponent) return 0.0;
            return tail_coefficient() * std::pow(r, *tail_exponent);
        }
        if (r < grid.x_min()) {
            if (!head_exponent) return 0.0;
            return head_coefficient() * std::pow(r, *head_exponent);
        }
        return values[grid.locate(r)];
    }

    GridFunction scaled(double a) const {
        GridFunction out = *this;
        for (auto& v : out.values) v *= a;
        return out;
    }

    /// |f|^p; closed under the piecewise-power representation.
    GridFunction abs_pow(double p) const {
        GridFunction out = *this;
        for (auto& v : out.values) v = std::pow(std::fabs(v), p);
        if (out.tail_exponent) out.tail_exponent = *out.tail_exponent * p;
        if (out.head_exponent) out.head_exponent = *out.head_exponent * p;
        return out;
    }

    GridFunction abs() const {
        GridFunction out = *this;
        for (auto& v : out.values) v = std::fabs(v);
        return out;
    }
};

inline GridFunction operator+(const GridFunction& f, const GridFunction& g) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("GridFunction +: grids differ");
    GridFunction out = f;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += g.values[i];
    if (f.tail_exponent != g.tail_exponent || f.head_exponent != g.head_exponent)
        throw std::invalid_argument("GridFunction +: continuation exponents differ");
    return out;
}

/// Pointwise product on a shared grid; continuation exponents add.
inline GridFunction pointwise_product(const GridFunction& f, const GridFunction& g) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("pointwise_product: grids differ");
    GridFunction out = f;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= g.values[i];
    out.tail_exponent.reset();
    out.head_exponent.reset();
    if (f.tail_exponent && g.tail_exponent)
        out.tail_exponent = *f.tail_exponent + *g.tail_exponent;
    else if (f.tail_exponent || g.tail_exponent)
        out.values.back() = 0.0;  // product of tail with truncated function vanishes
    if (f.head_exponent && g.head_exponent)
        out.head_exponent = *f.head_exponent + *g.head_exponent;
    return out;
}

/// Mass of each grid cell under the measure.
inline std::vector<double> cell_measures(const LogGrid& grid, const PowerMeasure& mu) {
    std::vector<double> m(grid.n_cells());
    std::vector<double> ed(grid.n_cells() + 1);
    for (std::size_t i = 0; i <= grid.n_cells(); ++i)
        ed[i] = (mu.dimension == 0.0) ? std::log(grid.edge(i)) : std::pow(grid.edge(i), mu.dimension);
    for (std::size_t i = 0; i < grid.n_cells(); ++i)
        m[i] = (mu.dimension == 0.0) ? ed[i + 1] - ed[i] : (ed[i + 1] - ed[i]) / mu.dimension;
    return m;
}

/// Analytic mass of the unit-coefficient tail r^exponent beyond x_max.
inline double tail_complete(double exponent, double x_max, const PowerMeasure& mu) {
    const double c = exponent + mu.dimension;
    if (c >= 0.0)
        throw DivergenceError("tail_complete: non-integrable tail, exponent + d = " +
                                  std::to_string(c) + " >= 0",
                              +1);
    return std::pow(x_max, c) / (-c);
}

namespace detail {

inline int sign_of(double x) { return (x > 0) - (x < 0); }

}  // namespace detail

/// Integral of f against the weight r^{c-1} dr over (0, inf), with analytic
/// continuation terms. Divergent heads or tails raise DivergenceError with
/// the sign of the divergence.
inline double integrate_weight(const GridFunction& f, double c) {
    KahanSum sum;
    const auto& g = f.grid;
    for (std::size_t i = 0; i < g.n_cells(); ++i) {
        if (f.values[i] != 0.0) sum.add(f.values[i] * power_mass(g.edge(i), g.edge(i + 1), c));
    }
    if (f.has_tail()) {
        const double e = *f.tail_exponent + c;
        if (e >= 0.0)
            throw DivergenceError("integrate: divergent tail, exponent sum " + std::to_string(e),
                                  detail::sign_of(f.values.back()));
        sum.add(f.tail_coefficient() * std::pow(g.x_max(), e) / (-e));
    }
    if (f.has_head()) {
        const double e = *f.head_exponent + c;
        if (e <= 0.0)
            throw DivergenceError("integrate: divergent head, exponent sum " + std::to_string(e),
                                  detail::sign_of(f.values.front()));
        sum.add(f.head_coefficient() * std::pow(g.x_min(), e) / e);
    }
    return sum.value();
}

/// Integral of f dmu. Exact for piecewise-constant integrands.
inline double integrate(const GridFunction& f, const PowerMeasure& mu) {
    if (mu.lower_endpoint == 1.0) {
        if (f.grid.x_min() < 1.0 - 1e-12)
            throw std::invalid_argument("integrate: grid extends below the measure support");
        if (f.has_head())
            throw std::invalid_argument("integrate: head continuation below lower endpoint 1");
    }
    if (mu.dimension == 0.0) {
        // dx/x: cells contribute value * log width
        KahanSum sum;
        for (std::size_t i = 0; i < f.grid.n_cells(); ++i)
            if (f.values[i] != 0.0)
                sum.add(f.values[i] * std::log(f.grid.edge(i + 1) / f.grid.edge(i)));
        if (f.has_tail()) {
            if (*f.tail_exponent >= 0.0)
                throw DivergenceError("integrate: divergent tail against dx/x",
                                      detail::sign_of(f.values.back()));
            sum.add(f.tail_coefficient() * std::pow(f.grid.x_max(), *f.tail_exponent) /
                    (-*f.tail_exponent));
        }
        if (f.has_head()) {
            if (*f.head_exponent <= 0.0)
                throw DivergenceError("integrate: divergent head against dx/x",
                                      detail::sign_of(f.values.front()));
            sum.add(f.head_coefficient() * std::pow(f.grid.x_min(), *f.head_exponent) /
                    *f.head_exponent);
        }
        return sum.value();
    }
    return integrate_weight(f, mu.dimension);
}

/// L^p(dmu) norm; +inf is a legal return for divergent integrals.
inline double lp_norm(const GridFunction& f, const PowerMeasure& mu, double p) {
    if (p == kInf) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, std::fabs(v));
        if (f.has_tail() && *f.tail_exponent > 0.0) return kInf;
        if (f.has_head() && *f.head_exponent < 0.0) return kInf;
        return m;
    }
    try {
        return std::pow(integrate(f.abs_pow(p), mu), 1.0 / p);
    } catch (const DivergenceError&) {
        return kInf;
    }
}

// ---------------------------------------------------------------------------
// CSV format: header "# grid x_min x_max n_cells tail_exponent", one value
// per line. The tail field is "none" when absent; a sixth header field
// carries the head exponent when one is declared.
// ---------------------------------------------------------------------------

inline void write_csv(const GridFunction& f, std::ostream& os) {
    os.precision(17);
    os << "# grid " << f.grid.x_min() << " " << f.grid.x_max() << " " << f.grid.n_cells() << " ";
    if (f.tail_exponent)
        os << *f.tail_exponent;
    else
        os << "none";
    if (f.head_exponent) os << " " << *f.head_exponent;
    os << "\n";
    for (double v : f.values) os << v << "\n";
}

inline GridFunction read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("GridFunction csv: empty input");
    std::istringstream hdr(line);
    std::string hash, tag, tail_tok;
    double x_min = 0, x_max = 0;
    std::size_t n = 0;
    hdr >> hash >> tag >> x_min >> x_max >> n >> tail_tok;
    if (hash != "#" || tag != "grid")
        throw std::invalid_argument("GridFunction csv: bad header");
    GridFunction f(LogGrid(x_min, x_max, n), std::vector<double>(n, 0.0));
    if (tail_tok != "none" && tail_tok != "nan") f.tail_exponent = std::stod(tail_tok);
    std::string head_tok;
    if (hdr >> head_tok) f.head_exponent = std::stod(head_tok);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(is, line))
            throw std::invalid_argument("GridFunction csv: expected " + std::to_string(n) +
                                        " values");
        f.values[i] = std::stod(line);
    }
    return f;
}

}  // namespace lhh
