#include "phlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

#include "phlab/numerics.hpp"

namespace phlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

RateReport finite_time_rates(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x,
                             double T, double tol) {
    RateReport rep;
    const SplitFrame frame = split_frame(m, tau, x, tol);
    const FlowTauResult f = flow_tau_full(m, tau, x, T, tol);
    rep.alpha = f.alpha;
    rep.crossings = f.crossings;

    const TangentVector ds = dflow_tau(m, tau, x, frame.e_s_tilde, T, tol);
    const TangentVector du = dflow_tau(m, tau, x, frame.e_u_tilde, T, tol);
    const TangentVector dc = dflow_tau(m, tau, x, frame.e_c, T, tol);

    rep.nu = ds.norm() / frame.e_s_tilde.norm();
    rep.nu_hat = frame.e_u_tilde.norm() / du.norm();
    const double center = dc.norm() / frame.e_c.norm();
    rep.gamma = center;
    rep.gamma_hat = 1.0 / center;
    rep.center_defect = std::abs(center - tau(x) / tau(f.point));
    return rep;
}

BunchingReport center_bunching_check(const CatSuspension& m, const TimeChange& tau, double T,
                                     int n_samples, Rng& rng, double tol) {
    BunchingReport rep;
    rep.n = n_samples;
    const auto n = static_cast<std::size_t>(n_samples);
    std::vector<double> log_nu(n), log_nu_hat(n), alphas(n);
    int ok_contracting = 0, ok_chain = 0, ok_bunched = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const PhasePoint x = m.sample(rng);
        const RateReport r = finite_time_rates(m, tau, x, T, tol);
        log_nu[i] = std::log(r.nu);
        log_nu_hat[i] = std::log(r.nu_hat);
        alphas[i] = r.alpha;
        if (r.nu < 1.0 && r.nu_hat < 1.0) ++ok_contracting;
        if (r.nu < r.gamma && 1.0 / r.gamma_hat < 1.0 / r.nu_hat) ++ok_chain;
        const double gg = r.gamma * r.gamma_hat;
        if (r.nu < gg && r.nu_hat < gg) ++ok_bunched;
        rep.max_center_defect = std::max(rep.max_center_defect, r.center_defect);
    }
    const double dn = static_cast<double>(n_samples);
    rep.frac_contracting = ok_contracting / dn;
    rep.frac_chain = ok_chain / dn;
    rep.frac_bunched = ok_bunched / dn;
    rep.mean_log_nu = pairwise_sum(log_nu) / dn;
    rep.mean_log_nu_hat = pairwise_sum(log_nu_hat) / dn;
    rep.mean_alpha = pairwise_sum(alphas) / dn;
    return rep;
}

double observe(Observable f, const PhasePoint& p) {
    switch (f) {
        case Observable::one: return 1.0;
        case Observable::roof_cos: return std::cos(kTwoPi * p.roof);
        case Observable::roof_sin: return std::sin(kTwoPi * p.roof);
        case Observable::bump10: return bump_window(p.roof) * std::cos(kTwoPi * p.base.x);
        case Observable::bump11:
            return bump_window(p.roof) * std::cos(kTwoPi * (p.base.x + p.base.y));
        case Observable::bump1m1:
            return bump_window(p.roof) * std::cos(kTwoPi * (p.base.x - p.base.y));
    }
    return 0.0;
}

namespace {

constexpr std::pair<Observable, std::string_view> kObservableNames[] = {
    {Observable::one, "one"},           {Observable::roof_cos, "roof_cos"},
    {Observable::roof_sin, "roof_sin"}, {Observable::bump10, "bump10"},
    {Observable::bump11, "bump11"},     {Observable::bump1m1, "bump1m1"},
};

/// Self-normalized weighted covariance of (fv, zv) with weights w; c_i are
/// scaled so their plain mean is the estimate and their sem its error.
Estimate weighted_covariance(std::span<const double> w, double w_total,
                             std::span<const double> fv, std::span<const double> zv) {
    const std::size_t n = w.size();
    std::vector<double> tmp(n);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = w[i] * fv[i];
    const double fbar = pairwise_sum(tmp) / w_total;
    for (std::size_t i = 0; i < n; ++i) tmp[i] = w[i] * zv[i];
    const double zbar = pairwise_sum(tmp) / w_total;
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = w[i] * (fv[i] - fbar) * (zv[i] - zbar) * static_cast<double>(n) / w_total;
    const MeanSem ms = mean_sem(tmp);
    return {ms.mean, ms.sem};
}

}  // namespace

std::string_view observable_name(Observable f) {
    for (const auto& [ob, name] : kObservableNames)
        if (ob == f) return name;
    return "unknown";
}

std::optional<Observable> observable_from(std::string_view name) {
    for (const auto& [ob, nm] : kObservableNames)
        if (nm == name) return ob;
    return std::nullopt;
}

Estimate correlation(const CatSuspension& m, const TimeChange& tau, Observable f, Observable g,
                     double t, int n_samples, Rng& rng, double tol) {
    const auto n = static_cast<std::size_t>(n_samples);
    std::vector<double> w(n), fv(n), zv(n);
    for (std::size_t i = 0; i < n; ++i) {
        const PhasePoint y = m.sample(rng);
        w[i] = density(tau, y);
        fv[i] = observe(f, y);
        zv[i] = observe(g, flow_tau(m, tau, y, t, tol));
    }
    return weighted_covariance(w, pairwise_sum(w), fv, zv);
}

CorrelationSeries mixing_profile(const CatSuspension& m, const TimeChange& tau, Observable f,
                                 Observable g, std::span<const double> times, int n_samples,
                                 Rng& rng, double tol) {
    CorrelationSeries series;
    series.times.assign(times.begin(), times.end());
    std::sort(series.times.begin(), series.times.end());
    const auto n = static_cast<std::size_t>(n_samples);
    std::vector<PhasePoint> pts(n);
    std::vector<double> w(n), fv(n), zv(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = m.sample(rng);
        w[i] = density(tau, pts[i]);
        fv[i] = observe(f, pts[i]);
    }
    const double w_total = pairwise_sum(w);
    double t_now = 0.0;
    for (double t : series.times) {
        const double dt = t - t_now;
        if (dt != 0.0)
            for (auto& p : pts) p = flow_tau(m, tau, p, dt, tol);
        t_now = t;
        for (std::size_t i = 0; i < n; ++i) zv[i] = observe(g, pts[i]);
        series.values.push_back(weighted_covariance(w, w_total, fv, zv));
    }
    return series;
}

BirkhoffResult birkhoff_average(const CatSuspension& m, const TimeChange& tau, Observable f,
                                const PhasePoint& x, double T, double tol) {
    if (T == 0.0) throw std::invalid_argument("birkhoff_average: T must be nonzero");
    const CocycleValue a = alpha(m, tau, x, T, tol);
    const double lo = std::min(0.0, a.value);
    const double hi = std::max(0.0, a.value);
    const double est_panels = std::ceil(hi - lo) + 2.0;
    const double share = 0.5 * tol * std::abs(T) / est_panels;

    PanelWalker walker(m, x);
    walker.seek(lo);
    double acc = 0.0, err = 0.0;
    while (walker.t_begin() < hi) {
        const OrbitPanel pan = walker.panel();
        const double r0 = std::max(pan.t_begin, lo);
        const double r1 = std::min(pan.t_end, hi);
        if (r1 > r0) {
            const auto integrand = [&](double r) {
                const PhasePoint p{pan.base, pan.roof_at(r)};
                return observe(f, p) * tau(p);
            };
            const QuadResult q = adaptive_simpson(integrand, r0, r1, share);
            acc += q.value;
            err += q.err;
        }
        walker.step_forward();
    }
    BirkhoffResult out;
    out.alpha = a.value;
    // The walker accumulates over [lo, hi] = [alpha, 0] when T < 0; orient
    // the integral back to int_0^alpha before dividing.
    out.value = (a.value >= 0.0 ? acc : -acc) / T;
    out.err_bound = (err + tau.tau_max() * a.err_bound) / std::abs(T);
    return out;
}

}  // namespace phlab
