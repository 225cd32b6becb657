#pragma once

/// Exact (1/p, 1/q) boundedness regions.
///
/// A region is a disjunction of clauses, each clause a conjunction of linear
/// constraints a*u + b*v REL c with rational coefficients, restricted to the
/// unit square. Membership is decided in exact rational arithmetic so that
/// strict and non-strict boundaries keep their meaning.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lhh/rational.hpp"

namespace lhh {

struct RegionPoint {
    Rational u;  // 1/p
    Rational v;  // 1/q
    friend bool operator==(const RegionPoint& a, const RegionPoint& b) {
        return a.u == b.u && a.v == b.v;
    }
};

enum class Rel { LT, LE, EQ, GE, GT };

/// a*u + b*v REL c
struct LinearConstraint {
    Rational a, b, c;
    Rel rel = Rel::LE;

    bool holds(const RegionPoint& p) const {
        const Rational lhs = a * p.u + b * p.v;
        switch (rel) {
            case Rel::LT: return lhs < c;
            case Rel::LE: return lhs <= c;
            case Rel::EQ: return lhs == c;
            case Rel::GE: return lhs >= c;
            case Rel::GT: return lhs > c;
        }
        return false;
    }
    bool is_strict() const { return rel == Rel::LT || rel == Rel::GT; }
    LinearConstraint relaxed() const {
        LinearConstraint r = *this;
        if (rel == Rel::LT) r.rel = Rel::LE;
        if (rel == Rel::GT) r.rel = Rel::GE;
        return r;
    }
};

using Clause = std::vector<LinearConstraint>;

struct BoundednessRegion {
    std::vector<Clause> clauses;
    std::string provenance;
};

inline bool clause_holds(const Clause& cl, const RegionPoint& p) {
    return std::all_of(cl.begin(), cl.end(),
                       [&](const LinearConstraint& c) { return c.holds(p); });
}

/// Exact membership test. Points outside the unit square are never members.
inline bool contains(const BoundednessRegion& r, const RegionPoint& p) {
    const Rational zero(0), one(1);
    if (p.u < zero || p.u > one || p.v < zero || p.v > one) return false;
    return std::any_of(r.clauses.begin(), r.clauses.end(),
                       [&](const Clause& cl) { return clause_holds(cl, p); });
}

/// D region of the R1 operator: 1/q <= (d1/d2)(1/p) - (d1-a-b)/d2 together
/// with the strict lower bound (d1-b)/d1 < 1/p <= 1.
inline BoundednessRegion region_D(const Rational& d1, const Rational& d2,
                                  const Rational& alpha, const Rational& beta) {
    if (!(d1 >= Rational(1) && d2 >= Rational(1)))
        throw std::domain_error("region_D: requires d1, d2 >= 1");
    if (!(alpha > Rational(0)))
        throw std::domain_error("region_D: requires alpha > 0");
    if (!(beta > Rational(0) && beta <= d1))
        throw std::domain_error("region_D: requires 0 < beta <= d1");
    Clause cl;
    // d1*u - d2*v >= d1 - alpha - beta
    cl.push_back({d1, -d2, d1 - alpha - beta, Rel::GE});
    // d1*u > d1 - beta  (strict)
    cl.push_back({d1, Rational(0), d1 - beta, Rel::GT});
    cl.push_back({Rational(1), Rational(0), Rational(1), Rel::LE});  // u <= 1
    BoundednessRegion r;
    r.clauses.push_back(std::move(cl));
    r.provenance = "D[" + d1.str() + "," + d2.str() + ";" + alpha.str() + "," + beta.str() + "]";
    return r;
}

/// F region of the adjoint operator R2, as a two-clause disjunction.
inline BoundednessRegion region_F(const Rational& d1, const Rational& d2,
                                  const Rational& alpha, const Rational& beta) {
    if (!(d1 >= Rational(1) && d2 >= Rational(1)))
        throw std::domain_error("region_F: requires d1, d2 >= 1");
    if (!(alpha > Rational(0) && alpha <= d2))
        throw std::domain_error("region_F: requires 0 < alpha <= d2");
    if (!(beta > Rational(0)))
        throw std::domain_error("region_F: requires beta > 0");
    Clause c1;
    c1.push_back({d1, -d2, d1 - alpha - beta, Rel::GE});
    c1.push_back({d1, Rational(0), d1 - alpha - beta, Rel::GE});  // u >= (d1-a-b)/d1
    c1.push_back({d1, Rational(0), d1 - beta, Rel::LT});          // u < (d1-b)/d1
    Clause c2;
    c2.push_back({Rational(0), d2, alpha, Rel::LT});              // v < alpha/d2
    c2.push_back({d1, Rational(0), d1 - beta, Rel::GE});          // u >= (d1-b)/d1
    c2.push_back({Rational(1), Rational(0), Rational(1), Rel::LE});
    BoundednessRegion r;
    r.clauses.push_back(std::move(c1));
    r.clauses.push_back(std::move(c2));
    r.provenance = "F[" + d1.str() + "," + d2.str() + ";" + alpha.str() + "," + beta.str() + "]";
    return r;
}

/// Clause-list product of a family of regions.
inline BoundednessRegion intersect(const std::vector<BoundednessRegion>& regions) {
    BoundednessRegion acc;
    acc.clauses.push_back(Clause{});
    acc.provenance = "intersection";
    for (const auto& r : regions) {
        std::vector<Clause> next;
        for (const auto& base : acc.clauses) {
            for (const auto& cl : r.clauses) {
                Clause merged = base;
                for (const auto& c : cl) {
                    if (std::find_if(merged.begin(), merged.end(), [&](const LinearConstraint& m) {
                            return m.a == c.a && m.b == c.b && m.c == c.c && m.rel == c.rel;
                        }) == merged.end())
                        merged.push_back(c);
                }
                next.push_back(std::move(merged));
            }
        }
        acc.clauses = std::move(next);
    }
    return acc;
}

enum class Axis { U, V };

/// Removes the line {u=c} or {v=c} from a region.
inline BoundednessRegion minus_line(const BoundednessRegion& r, Axis axis, const Rational& c) {
    const Rational a = (axis == Axis::U) ? Rational(1) : Rational(0);
    const Rational b = (axis == Axis::U) ? Rational(0) : Rational(1);
    BoundednessRegion out;
    out.provenance = r.provenance + " minus line";
    for (const auto& cl : r.clauses) {
        Clause lo = cl, hi = cl;
        lo.push_back({a, b, c, Rel::LT});
        hi.push_back({a, b, c, Rel::GT});
        out.clauses.push_back(std::move(lo));
        out.clauses.push_back(std::move(hi));
    }
    return out;
}

enum class CompositeKind { T3, T4 };

/// Boundedness region for the composite operators on a manifold-with-ends
/// model: the pairwise intersection over all ordered end pairs, with the
/// stated boundary line removed.
inline BoundednessRegion composite_region(const std::vector<int>& ends, CompositeKind kind) {
    if (ends.size() < 2) throw std::domain_error("composite_region: need at least two ends");
    for (int n : ends)
        if (n < 3) throw std::domain_error("composite_region: each end dimension must be >= 3");
    std::vector<BoundednessRegion> parts;
    for (int ni : ends) {
        for (int nj : ends) {
            if (kind == CompositeKind::T3) {
                parts.push_back(region_D(Rational(nj), Rational(ni),
                                         Rational(ni - 1), Rational(nj - 1)));
            } else {
                parts.push_back(region_F(Rational(nj), Rational(ni),
                                         Rational(ni), Rational(nj - 2)));
            }
        }
    }
    BoundednessRegion r = intersect(parts);
    if (kind == CompositeKind::T3) {
        r = minus_line(r, Axis::V, Rational(1));  // drop {q = 1}
        r.provenance = "T3 composite";
    } else {
        r = minus_line(r, Axis::U, Rational(0));  // drop {p = inf}
        r.provenance = "T4 composite";
    }
    return r;
}

/// Convex interpolation point between two restricted-weak-type exponent pairs.
inline RegionPoint interpolate_rw(const RegionPoint& p0, const RegionPoint& p1,
                                  const Rational& theta) {
    if (!(theta > Rational(0) && theta < Rational(1)))
        throw std::domain_error("interpolate_rw: theta must lie in (0,1)");
    if (p0.u == p1.u || p0.v == p1.v)
        throw std::domain_error("interpolate_rw: exponent pairs must differ in both components");
    const Rational om = Rational(1) - theta;
    return {om * p0.u + theta * p1.u, om * p0.v + theta * p1.v};
}

namespace detail {

struct Line {
    Rational a, b, c;  // a*u + b*v = c
    friend bool operator==(const Line& x, const Line& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c;
    }
};

inline Line normalized_line(Rational a, Rational b, Rational c) {
    // scale so the first nonzero coefficient is 1
    if (a != Rational(0)) return {Rational(1), b / a, c / a};
    return {Rational(0), Rational(1), c / b};
}

inline std::optional<RegionPoint> line_intersection(const Line& l1, const Line& l2) {
    const Rational det = l1.a * l2.b - l2.a * l1.b;
    if (det == Rational(0)) return std::nullopt;
    return RegionPoint{(l1.c * l2.b - l2.c * l1.b) / det, (l1.a * l2.c - l2.a * l1.c) / det};
}

inline Rational cross(const RegionPoint& o, const RegionPoint& a, const RegionPoint& b) {
    return (a.u - o.u) * (b.v - o.v) - (a.v - o.v) * (b.u - o.u);
}

}  // namespace detail

/// Membership in the topological closure: empty clauses are discarded, the
/// rest have their strict constraints relaxed.
inline bool closure_contains(const BoundednessRegion& r, const RegionPoint& p);

namespace detail {

inline std::vector<Line> clause_lines(const Clause& cl) {
    std::vector<Line> lines = {
        normalized_line(Rational(1), Rational(0), Rational(0)),
        normalized_line(Rational(1), Rational(0), Rational(1)),
        normalized_line(Rational(0), Rational(1), Rational(0)),
        normalized_line(Rational(0), Rational(1), Rational(1)),
    };
    for (const auto& c : cl) {
        Line l = normalized_line(c.a, c.b, c.c);
        if (std::find(lines.begin(), lines.end(), l) == lines.end()) lines.push_back(l);
    }
    return lines;
}

inline bool in_square(const RegionPoint& p) {
    return p.u >= Rational(0) && p.u <= Rational(1) && p.v >= Rational(0) && p.v <= Rational(1);
}

// Vertices of the closed polygon cut out by the relaxed clause inside the square.
inline std::vector<RegionPoint> relaxed_clause_vertices(const Clause& cl) {
    auto lines = clause_lines(cl);
    std::vector<RegionPoint> pts;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            auto p = line_intersection(lines[i], lines[j]);
            if (!p || !in_square(*p)) continue;
            bool ok = true;
            for (const auto& c : cl)
                if (!c.relaxed().holds(*p)) { ok = false; break; }
            if (ok && std::find(pts.begin(), pts.end(), *p) == pts.end()) pts.push_back(*p);
        }
    }
    return pts;
}

// A clause with strict constraints is non-empty iff the barycenter of its
// relaxed polygon satisfies every strict constraint (the relaxed polygon is
// convex, so its barycenter is in the relative interior).
inline bool clause_nonempty(const Clause& cl) {
    auto pts = relaxed_clause_vertices(cl);
    if (pts.empty()) return false;
    Rational su(0), sv(0);
    for (const auto& p : pts) { su = su + p.u; sv = sv + p.v; }
    const Rational n(static_cast<std::int64_t>(pts.size()));
    const RegionPoint bary{su / n, sv / n};
    return clause_holds(cl, bary) || std::any_of(pts.begin(), pts.end(), [&](const RegionPoint& p) {
        return clause_holds(cl, p);
    });
}

}  // namespace detail

inline bool closure_contains(const BoundednessRegion& r, const RegionPoint& p) {
    if (!detail::in_square(p)) return false;
    for (const auto& cl : r.clauses) {
        if (!detail::clause_nonempty(cl)) continue;
        bool ok = true;
        for (const auto& c : cl)
            if (!c.relaxed().holds(p)) { ok = false; break; }
        if (ok) return true;
    }
    return false;
}

/// Vertex set of the closure of a region, in counterclockwise order.
///
/// Candidates are all pairwise intersections of constraint boundary lines
/// (plus the square edges); extreme points are extracted by an exact convex
/// hull. Valid when the closure is convex, which holds for the D/F composites
/// built here; a non-convex closure is detected and rejected.
inline std::vector<RegionPoint> vertex_set(const BoundednessRegion& r) {
    using detail::Line;
    std::vector<Line> lines = {
        detail::normalized_line(Rational(1), Rational(0), Rational(0)),
        detail::normalized_line(Rational(1), Rational(0), Rational(1)),
        detail::normalized_line(Rational(0), Rational(1), Rational(0)),
        detail::normalized_line(Rational(0), Rational(1), Rational(1)),
    };
    for (const auto& cl : r.clauses) {
        for (const auto& c : cl) {
            Line l = detail::normalized_line(c.a, c.b, c.c);
            if (std::find(lines.begin(), lines.end(), l) == lines.end()) lines.push_back(l);
        }
    }
    std::vector<RegionPoint> cand;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            auto p = detail::line_intersection(lines[i], lines[j]);
            if (p && detail::in_square(*p) && closure_contains(r, *p) &&
                std::find(cand.begin(), cand.end(), *p) == cand.end())
                cand.push_back(*p);
        }
    }
    if (cand.size() < 3) return cand;

    // exact monotone-chain hull
    std::sort(cand.begin(), cand.end(), [](const RegionPoint& a, const RegionPoint& b) {
        return a.u < b.u || (a.u == b.u && a.v < b.v);
    });
    std::vector<RegionPoint> hull;
    auto build = [&](auto begin, auto end) {
        const std::size_t base = hull.size();
        for (auto it = begin; it != end; ++it) {
            while (hull.size() >= base + 2 &&
                   detail::cross(hull[hull.size() - 2], hull[hull.size() - 1], *it) <= Rational(0))
                hull.pop_back();
            hull.push_back(*it);
        }
        hull.pop_back();
    };
    build(cand.begin(), cand.end());
    build(cand.rbegin(), cand.rend());

    // convexity check: every hull edge midpoint must belong to the closure
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const RegionPoint& a = hull[i];
        const RegionPoint& b = hull[(i + 1) % hull.size()];
        const RegionPoint mid{(a.u + b.u) / Rational(2), (a.v + b.v) / Rational(2)};
        if (!closure_contains(r, mid))
            throw std::runtime_error("vertex_set: region closure is not convex");
    }
    return hull;
}

}  // namespace lhh
