#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>

namespace lhh {

namespace detail {

template <class F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction on a finite interval.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-11, int max_depth = 40) {
    if (!(b > a)) return 0.0;
    const double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole,
                                        tol * (std::fabs(whole) + 1e-300), max_depth);
}

/// Integral of f(r) dr over [a,b] via the substitution r = e^s; suited to
/// power-law-like integrands over wide ranges.
template <class F>
double integrate_log_scale(const F& f, double a, double b, double tol = 1e-11) {
    if (!(a > 0.0) || !(b > a)) throw std::domain_error("integrate_log_scale: need 0 < a < b");
    auto g = [&](double s) {
        const double r = std::exp(s);
        return f(r) * r;
    };
    return adaptive_simpson(g, std::log(a), std::log(b), tol);
}

/// Composite Simpson with a fixed panel count (n is rounded up to even).
template <class F>
double fixed_simpson(const F& f, double a, double b, std::size_t n) {
    if (!(b > a)) return 0.0;
    if (n < 2) n = 2;
    if (n % 2) ++n;
    const double h = (b - a) / static_cast<double>(n);
    double s4 = 0.0, s2 = 0.0;
    for (std::size_t i = 1; i < n; i += 2) s4 += f(a + h * static_cast<double>(i));
    for (std::size_t i = 2; i < n; i += 2) s2 += f(a + h * static_cast<double>(i));
    return h / 3.0 * (f(a) + f(b) + 4.0 * s4 + 2.0 * s2);
}

/// Golden-section maximizer for a unimodal objective on [a,b].
template <class F>
double golden_max(const F& f, double a, double b, int iters = 200) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace lhh
