#include "phlab/time_change.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double kdot(const std::array<int, 2>& k, Vec2 v) {
    return static_cast<double>(k[0]) * v.x + static_cast<double>(k[1]) * v.y;
}

}  // namespace

double bump_window(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return std::exp(4.0 - 1.0 / (s * (1.0 - s)));
}

double bump_window_d1(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double q = s * (1.0 - s);
    return bump_window(s) * (1.0 - 2.0 * s) / (q * q);
}

double bump_window_d2(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double q = s * (1.0 - s);
    const double r = 1.0 - 2.0 * s;
    const double q2 = q * q;
    return bump_window(s) * (r * r / (q2 * q2) - 2.0 / q2 - 2.0 * r * r / (q2 * q));
}

double bump_window_mass() {
    static const double mass =
        adaptive_simpson([](double s) { return bump_window(s); }, 0.0, 1.0, 1e-14).value;
    return mass;
}

double bump_window_d1_max() {
    // coarse scan plus golden-section refinement; the tiny inflation keeps
    // the value usable as a certified upper bound
    static const double sup = [] {
        double best = 0.0, at = 0.25;
        for (int i = 1; i < 20000; ++i) {
            const double s = i / 20000.0;
            const double a = std::abs(bump_window_d1(s));
            if (a > best) {
                best = a;
                at = s;
            }
        }
        const double gr = 0.6180339887498949;
        double lo = at - 1e-4, hi = at + 1e-4;
        double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
        for (int i = 0; i < 80; ++i) {
            if (std::abs(bump_window_d1(c)) > std::abs(bump_window_d1(d))) {
                hi = d;
            } else {
                lo = c;
            }
            c = hi - gr * (hi - lo);
            d = lo + gr * (hi - lo);
        }
        return std::abs(bump_window_d1(0.5 * (lo + hi))) * (1.0 + 1e-9);
    }();
    return sup;
}

double bump_field(const std::vector<BumpTerm>& terms, const PhasePoint& p) {
    double v = 0.0;
    const double w = bump_window(p.roof);
    for (const auto& t : terms) v += t.eps * w * std::cos(kTwoPi * kdot(t.k, p.base) + t.phase);
    return v;
}

TimeChange::TimeChange(double c0, std::vector<BumpTerm> bumps, std::vector<BumpTerm> cobounds)
    : c0_(c0), bumps_(std::move(bumps)), cobounds_(std::move(cobounds)) {
    double spread = 0.0;
    for (const auto& b : bumps_) spread += std::abs(b.eps);
    const double w1 = bump_window_d1_max();
    for (const auto& c : cobounds_) spread += std::abs(c.eps) * w1;
    tau_min_ = c0_ - spread;
    tau_max_ = c0_ + spread;
    if (!(tau_min_ > 0.0))
        throw std::invalid_argument("TimeChange: c0 minus coefficient spread must be positive");
}

TimeChange TimeChange::coboundary_of(double kappa, std::vector<BumpTerm> xi_terms) {
    return TimeChange(kappa, {}, std::move(xi_terms));
}

double TimeChange::value(Vec2 base, double roof) const {
    double v = c0_;
    if (!bumps_.empty()) {
        const double w = bump_window(roof);
        for (const auto& b : bumps_) v += b.eps * w * std::cos(kTwoPi * kdot(b.k, base) + b.phase);
    }
    if (!cobounds_.empty()) {
        const double w1 = bump_window_d1(roof);
        for (const auto& c : cobounds_)
            v += c.eps * w1 * std::cos(kTwoPi * kdot(c.k, base) + c.phase);
    }
    return v;
}

double TimeChange::base_derivative(Vec2 base, double roof, Vec2 dir) const {
    double v = 0.0;
    const double w = bump_window(roof);
    for (const auto& b : bumps_)
        v -= b.eps * w * kTwoPi * kdot(b.k, dir) * std::sin(kTwoPi * kdot(b.k, base) + b.phase);
    if (!cobounds_.empty()) {
        const double w1 = bump_window_d1(roof);
        for (const auto& c : cobounds_)
            v -= c.eps * w1 * kTwoPi * kdot(c.k, dir) *
                 std::sin(kTwoPi * kdot(c.k, base) + c.phase);
    }
    return v;
}

double TimeChange::roof_derivative(Vec2 base, double roof) const {
    double v = 0.0;
    const double w1 = bump_window_d1(roof);
    for (const auto& b : bumps_)
        v += b.eps * w1 * std::cos(kTwoPi * kdot(b.k, base) + b.phase);
    if (!cobounds_.empty()) {
        const double w2 = bump_window_d2(roof);
        for (const auto& c : cobounds_)
            v += c.eps * w2 * std::cos(kTwoPi * kdot(c.k, base) + c.phase);
    }
    return v;
}

double TimeChange::directional(const CatSuspension& m, const PhasePoint& p,
                               const TangentVector& v) const {
    double d = 0.0;
    if (v.xi_s != 0.0) d += v.xi_s * base_derivative(p.base, p.roof, m.e_s());
    if (v.xi_u != 0.0) d += v.xi_u * base_derivative(p.base, p.roof, m.e_u());
    if (v.xi_c != 0.0) d += v.xi_c * roof_derivative(p.base, p.roof);
    return d;
}

double TimeChange::diff_along(Vec2 base, double roof, Vec2 dir, double h) const {
    // cos(theta) - cos(theta + delta) = 2 sin(theta + delta/2) sin(delta/2)
    double v = 0.0;
    const double w = bump_window(roof);
    for (const auto& b : bumps_) {
        const double theta = kTwoPi * kdot(b.k, base) + b.phase;
        const double half = 0.5 * kTwoPi * kdot(b.k, dir) * h;
        v += b.eps * w * 2.0 * std::sin(theta + half) * std::sin(half);
    }
    if (!cobounds_.empty()) {
        const double w1 = bump_window_d1(roof);
        for (const auto& c : cobounds_) {
            const double theta = kTwoPi * kdot(c.k, base) + c.phase;
            const double half = 0.5 * kTwoPi * kdot(c.k, dir) * h;
            v += c.eps * w1 * 2.0 * std::sin(theta + half) * std::sin(half);
        }
    }
    return v;
}

double TimeChange::mean() const {
    double m = c0_;
    for (const auto& b : bumps_)
        if (b.k[0] == 0 && b.k[1] == 0) m += b.eps * std::cos(b.phase) * bump_window_mass();
    // coboundary terms integrate to zero: the base factor averages to zero
    // for k != 0 and the roof factor w' has zero mass
    return m;
}

double TimeChange::lipschitz_along(Vec2 dir) const {
    double l = 0.0;
    for (const auto& b : bumps_) l += std::abs(b.eps) * kTwoPi * std::abs(kdot(b.k, dir));
    const double w1 = bump_window_d1_max();
    for (const auto& c : cobounds_)
        l += std::abs(c.eps) * kTwoPi * std::abs(kdot(c.k, dir)) * w1;
    return l;
}

namespace {

// integral of (tau - c0) over [a,b] inside one panel
QuadResult panel_bump_integral(const TimeChange& tau, const OrbitPanel& pan, double a, double b,
                               double tol) {
    if (tau.is_constant() || a == b) return {};
    auto f = [&](double t) { return tau.value(pan.base, pan.roof_at(t)) - tau.c0(); };
    // Tolerances below the summation roundoff of the integrand cannot be
    // met; flooring them keeps the subdivision from thrashing when callers
    // ask for offset-scaled accuracy.
    const double floor = 4e-17 * (tau.tau_max() - tau.c0()) * (b - a);
    return adaptive_simpson(f, a, b, std::max(tol, floor));
}

// monotone root solve on [a,b]: g(a) <= 0 <= g(b), g' = gp > 0.
// bisection to width 1e-3 first, then safeguarded Newton.
template <class G, class Gp>
double solve_monotone(G&& g, Gp&& gp, double a, double b, double tol_resid, double* resid) {
    double lo = a, hi = b;
    while (hi - lo > 1e-3) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    double s = 0.5 * (lo + hi);
    double gs = g(s);
    for (int i = 0; i < 64 && std::abs(gs) > tol_resid; ++i) {
        (gs < 0.0 ? lo : hi) = s;
        double ns = s - gs / gp(s);
        if (!(ns > lo && ns < hi)) ns = 0.5 * (lo + hi);
        s = ns;
        gs = g(s);
    }
    *resid = std::abs(gs);
    return s;
}

}  // namespace

CocycleValue v_cocycle(const CatSuspension& m, const TimeChange& tau, const PhasePoint& p,
                       double t, double tol) {
    if (t == 0.0) return {0.0, 0.0};
    const double lo = std::min(0.0, t), hi = std::max(0.0, t);
    const double span = hi - lo;
    PanelWalker w(m, p);
    w.seek(lo);
    double value = 0.0, err = 0.0;
    while (true) {
        const OrbitPanel pan = w.panel();
        const double a = std::max(pan.t_begin, lo);
        const double b = std::min(pan.t_end, hi);
        if (a < b) {
            const auto q = panel_bump_integral(tau, pan, a, b, 0.5 * tol * (b - a) / span);
            value += tau.c0() * (b - a) + q.value;
            err += q.err;
        }
        if (pan.t_end >= hi) break;
        w.step_forward();
    }
    if (t < 0.0) value = -value;
    return {value, err};
}

CocycleValue alpha(const CatSuspension& m, const TimeChange& tau, const PhasePoint& p, double t,
                   double tol) {
    if (t == 0.0) return {0.0, 0.0};
    if (tau.is_constant()) return {t / tau.c0(), 0.0};
    // expected number of panels, for the quadrature budget split
    const double est_panels = std::ceil(std::abs(t) / tau.tau_min()) + 2.0;
    const double panel_tol = 0.25 * tol / est_panels;
    PanelWalker w(m, p);
    double v_edge = 0.0, err = 0.0;

    if (t > 0.0) {
        while (true) {
            const OrbitPanel pan = w.panel();
            const double a = std::max(pan.t_begin, 0.0);
            const double b = pan.t_end;
            const auto q = panel_bump_integral(tau, pan, a, b, panel_tol);
            const double dv = tau.c0() * (b - a) + q.value;
            if (v_edge + dv >= t) {
                // root in this panel: v_edge + int_a^s tau = t
                auto g = [&](double s) {
                    const auto qq = panel_bump_integral(tau, pan, a, s, panel_tol);
                    return v_edge + tau.c0() * (s - a) + qq.value - t;
                };
                auto gp = [&](double s) { return tau.value(pan.base, pan.roof_at(s)); };
                double resid = 0.0;
                const double s = solve_monotone(g, gp, a, b, 0.5 * tol, &resid);
                return {s, err + q.err + resid};
            }
            v_edge += dv;
            err += q.err;
            w.step_forward();
        }
    }
    while (true) {
        const OrbitPanel pan = w.panel();
        const double a = pan.t_begin;
        const double b = std::min(pan.t_end, 0.0);
        const auto q = panel_bump_integral(tau, pan, a, b, panel_tol);
        const double dv = tau.c0() * (b - a) + q.value;
        if (v_edge - dv <= t) {
            // root in this panel: v_edge - int_s^b tau = t, increasing in s
            auto g = [&](double s) {
                const auto qq = panel_bump_integral(tau, pan, s, b, panel_tol);
                return v_edge - (tau.c0() * (b - s) + qq.value) - t;
            };
            auto gp = [&](double s) { return tau.value(pan.base, pan.roof_at(s)); };
            double resid = 0.0;
            const double s = solve_monotone(g, gp, a, b, 0.5 * tol, &resid);
            return {s, err + q.err + resid};
        }
        v_edge -= dv;
        err += q.err;
        w.step_backward();
    }
}

FlowTauResult flow_tau_full(const CatSuspension& m, const TimeChange& tau, const PhasePoint& p,
                            double t, double tol) {
    const CocycleValue a = alpha(m, tau, p, t, tol);
    const FlowResult f = m.flow_counted(p, a.value);
    return {f.point, a.value, f.crossings, a.err_bound};
}

PhasePoint flow_tau(const CatSuspension& m, const TimeChange& tau, const PhasePoint& p, double t,
                    double tol) {
    return flow_tau_full(m, tau, p, t, tol).point;
}

double density(const TimeChange& tau, const PhasePoint& p) {
    return tau(p) / tau.mean();
}

namespace {

// int_0^al lambda^{+/-k(t)} * dtau[dir](g_t p) dt over the base direction dir,
// with sgn_exp = -1 for the stable weight and +1 for the unstable one
double directional_orbit_integral(const CatSuspension& m, const TimeChange& tau,
                                  const PhasePoint& p, Vec2 dir, int sgn_exp, double al,
                                  double tol) {
    if (al == 0.0) return 0.0;
    const double lo = std::min(0.0, al), hi = std::max(0.0, al);
    const double est_panels = std::ceil(hi - lo) + 2.0;
    // The weight lambda^{sgn_exp * k} is monotone in the panel index, so its
    // sup over the range sits at an endpoint. Error budget: tol absolute
    // while every weight is <= 1, tol relative to the dominant weight when
    // the integrand expands (an absolute target tol/lambda^n would just
    // drive the quadrature into runaway recursion, and only the relative
    // size is meaningful for the derivative cocycle anyway).
    const double factor_cap =
        std::max({1.0, m.lambda_pow(sgn_exp * m.crossings(p, lo)),
                  m.lambda_pow(sgn_exp * m.crossings(p, hi))});
    PanelWalker w(m, p);
    w.seek(lo);
    double value = 0.0;
    while (true) {
        const OrbitPanel pan = w.panel();
        const double a = std::max(pan.t_begin, lo);
        const double b = std::min(pan.t_end, hi);
        if (a < b) {
            const double factor = m.lambda_pow(sgn_exp * pan.index);
            auto f = [&](double t) {
                return tau.base_derivative(pan.base, pan.roof_at(t), dir);
            };
            const double share =
                0.5 * tol * factor_cap / (est_panels * std::max(1.0, factor));
            const auto q = adaptive_simpson(f, a, b, share);
            value += factor * q.value;
        }
        if (pan.t_end >= hi) break;
        w.step_forward();
    }
    return al < 0.0 ? -value : value;
}

}  // namespace

double dalpha(const CatSuspension& m, const TimeChange& tau, const PhasePoint& p,
              const TangentVector& v, double T, double tol) {
    const CocycleValue a = alpha(m, tau, p, T, tol);
    const PhasePoint pT = m.flow(p, a.value);
    double dv_tau = 0.0;
    if (v.xi_s != 0.0)
        dv_tau += v.xi_s * directional_orbit_integral(m, tau, p, m.e_s(), -1, a.value, tol);
    if (v.xi_u != 0.0)
        dv_tau += v.xi_u * directional_orbit_integral(m, tau, p, m.e_u(), +1, a.value, tol);
    if (v.xi_c != 0.0) dv_tau += v.xi_c * (tau(pT) - tau(p));  // exact boundary identity
    return -dv_tau / tau(pT);
}

TangentVector dflow_tau(const CatSuspension& m, const TimeChange& tau, const PhasePoint& p,
                        const TangentVector& v, double T, double tol) {
    const CocycleValue a = alpha(m, tau, p, T, tol);
    TangentVector image = m.dflow(p, v, a.value);
    image.xi_c += dalpha(m, tau, p, v, T, tol);
    return image;
}

}  // namespace phlab
