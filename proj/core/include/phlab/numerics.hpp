#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace phlab {

struct QuadResult {
    double value = 0.0;
    double err = 0.0;  // accumulated local error estimates, a bound in practice
};

namespace detail {

template <class F>
void simpson_rec(F& f, double a, double fa, double b, double fb, double m, double fm,
                 double whole, double tol, int depth, QuadResult& out) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double h6 = (b - a) / 12.0;
    const double left = h6 * (fa + 4.0 * flm + fm);
    const double right = h6 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        out.value += left + right + delta / 15.0;
        out.err += std::abs(delta) / 15.0;
        return;
    }
    simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, out);
    simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

/// Adaptive Simpson quadrature with a Richardson error estimate. The
/// integrand must be smooth on [a,b]; orbit integrals split at roof
/// crossings before calling this.
template <class F>
QuadResult adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 32) {
    QuadResult out;
    if (a == b) return out;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    detail::simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth, out);
    return out;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares for y against x.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need two equal-length samples");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

/// Fixed-order pairwise sum; deterministic for a fixed sample order and
/// accurate enough for the Monte-Carlo reductions here.
inline double pairwise_sum(std::span<const double> v) {
    if (v.empty()) return 0.0;
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

struct MeanSem {
    double mean = 0.0;
    double sem = 0.0;  // standard error of the mean: sample std / sqrt(n)
    std::size_t n = 0;
};

inline MeanSem mean_sem(std::span<const double> v) {
    if (v.size() < 2) throw std::invalid_argument("mean_sem: need at least two samples");
    MeanSem r;
    r.n = v.size();
    const double n = static_cast<double>(v.size());
    r.mean = pairwise_sum(v) / n;
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - r.mean) * (v[i] - r.mean);
    r.sem = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
    return r;
}

}  // namespace phlab
