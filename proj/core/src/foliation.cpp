#include "phlab/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phlab/numerics.hpp"

namespace phlab {

namespace {

void check_leg(double u) {
    if (std::abs(u) > kMaxLegParam)
        throw std::invalid_argument("leg parameter exceeds the locality bound 0.2");
}

// geometric truncation depth: remaining tail <= lip * |u| * lambda^{-J} / (lambda-1)
long truncation_depth(double lip_u_scale, double tol, double log_lambda, double lambda) {
    if (lip_u_scale <= 0.0) return 0;
    const double need = lip_u_scale / ((lambda - 1.0) * 0.5 * tol);
    if (need <= 1.0) return 1;
    return std::min(400L, static_cast<long>(std::ceil(std::log(need) / log_lambda)) + 1);
}

}  // namespace

BetaValue beta(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x, LegKind kind,
               double u, double tol) {
    check_leg(u);
    if (u == 0.0 || tau.is_constant()) return {0.0, 0.0, 0.0};
    const bool stable = kind == LegKind::stable;
    const Vec2 dir = stable ? m.e_s() : m.e_u();
    const double lip = tau.lipschitz_along(dir);
    const double lambda = m.lambda();
    const long depth = truncation_depth(lip * std::abs(u), tol, m.log_lambda(), lambda);

    PanelWalker w(m, x);
    double value = 0.0, err = 0.0, t_cut = 0.0;
    double contraction = 1.0;  // lambda^{-j} at panel depth j
    const double share_scale = 0.5 * tol * (lambda - 1.0) / lambda;
    for (long j = 0; j <= depth; ++j) {
        const OrbitPanel pan = w.panel();
        // panel clipped at orbit time 0; depth j has leg offset u * lambda^{-j}
        const double a = stable ? std::max(pan.t_begin, 0.0) : pan.t_begin;
        const double b = stable ? pan.t_end : std::min(pan.t_end, 0.0);
        const double off = u * contraction;
        auto f = [&](double t) { return tau.diff_along(pan.base, pan.roof_at(t), dir, off); };
        const auto q = adaptive_simpson(f, a, b, share_scale * contraction);
        value += q.value;
        err += q.err;
        t_cut = stable ? b : a;
        contraction /= lambda;
        if (stable)
            w.step_forward();
        else
            w.step_backward();
    }
    err += lip * std::abs(u) * contraction * lambda / (lambda - 1.0);  // certified tail
    if (!stable) value = -value;
    return {value, std::abs(t_cut), err};
}

BetaValue beta_s(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x, double u,
                 double tol) {
    return beta(m, tau, x, LegKind::stable, u, tol);
}

BetaValue beta_u(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x, double u,
                 double tol) {
    return beta(m, tau, x, LegKind::unstable, u, tol);
}

PhasePoint phi(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x, LegKind kind,
               double u, double tol) {
    const BetaValue b = beta(m, tau, x, kind, u, tol);
    const PhasePoint y = kind == LegKind::stable ? m.leg_s(x, u) : m.leg_u(x, u);
    return flow_tau(m, tau, y, -b.value, tol);
}

PhasePoint phi_s(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x, double u,
                 double tol) {
    return phi(m, tau, x, LegKind::stable, u, tol);
}

PhasePoint phi_u(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x, double u,
                 double tol) {
    return phi(m, tau, x, LegKind::unstable, u, tol);
}

double dbeta(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x, LegKind kind,
             const TangentVector& v, double tol) {
    const bool stable = kind == LegKind::stable;
    const double leaf_component = stable ? v.xi_s : v.xi_u;
    if (leaf_component == 0.0 || tau.is_constant()) return 0.0;
    const Vec2 dir = stable ? m.e_s() : m.e_u();
    const double lip = tau.lipschitz_along(dir);
    const double lambda = m.lambda();
    const long depth =
        truncation_depth(lip * std::abs(leaf_component), tol, m.log_lambda(), lambda);

    PanelWalker w(m, x);
    double value = 0.0;
    double contraction = 1.0;
    const double share_scale = 0.5 * tol * (lambda - 1.0) / lambda / std::abs(leaf_component);
    for (long j = 0; j <= depth; ++j) {
        const OrbitPanel pan = w.panel();
        const double a = stable ? std::max(pan.t_begin, 0.0) : pan.t_begin;
        const double b = stable ? pan.t_end : std::min(pan.t_end, 0.0);
        auto f = [&](double t) { return tau.base_derivative(pan.base, pan.roof_at(t), dir); };
        const auto q = adaptive_simpson(f, a, b, share_scale);
        value += contraction * q.value;
        contraction /= lambda;
        if (stable)
            w.step_forward();
        else
            w.step_backward();
    }
    // stable: second-slot derivative of the forward integral, hence -;
    // unstable: the outer minus of beta_u flips it back to +
    return (stable ? -1.0 : +1.0) * leaf_component * value;
}

double dbeta_s(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x,
               const TangentVector& v, double tol) {
    return dbeta(m, tau, x, LegKind::stable, v, tol);
}

double dbeta_u(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x,
               const TangentVector& v, double tol) {
    return dbeta(m, tau, x, LegKind::unstable, v, tol);
}

TangentVector lift(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x,
                   LegKind kind, const TangentVector& v, double tol) {
    TangentVector out = v;
    out.xi_c -= dbeta(m, tau, x, kind, v, tol) / tau(x);
    return out;
}

TangentVector lift_s(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x,
                     const TangentVector& v, double tol) {
    return lift(m, tau, x, LegKind::stable, v, tol);
}

TangentVector lift_u(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x,
                     const TangentVector& v, double tol) {
    return lift(m, tau, x, LegKind::unstable, v, tol);
}

SplitFrame split_frame(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x,
                       double tol) {
    return {lift_s(m, tau, x, {1.0, 0.0, 0.0}, tol), lift_u(m, tau, x, {0.0, 1.0, 0.0}, tol),
            {0.0, 0.0, 1.0}};
}

PairSeparation graph_pair_separation(const CatSuspension& m, const TimeChange& tau,
                                     const PhasePoint& x, LegKind kind, double u, double t,
                                     double tol) {
    check_leg(u);
    if (t < 0.0) throw std::invalid_argument("graph_pair_separation: horizon must be >= 0");
    const bool stable = kind == LegKind::stable;
    const CocycleValue a = alpha(m, tau, x, stable ? t : -t, tol);
    const FlowResult fr = m.flow_counted(x, a.value);
    const double u_a = u * m.lambda_pow(stable ? -fr.crossings : fr.crossings);
    if (u_a == 0.0 || tau.is_constant()) return {u_a, 0.0, std::abs(u_a)};
    // The flow offset scales with u_a, so its tolerance does too -- but only
    // down to the roundoff floor of the underlying quadratures; below that
    // the adaptive subdivision would thrash without gaining accuracy.
    const double pair_tol = std::clamp(std::abs(u_a) * tol, 1e-15, tol);
    const BetaValue tail = beta(m, tau, fr.point, kind, u_a, pair_tol);
    const PhasePoint y_a = stable ? m.leg_s(fr.point, u_a) : m.leg_u(fr.point, u_a);
    const double delta = alpha(m, tau, y_a, -tail.value, pair_tol).value;
    return {u_a, delta, std::hypot(u_a, delta)};
}

ContractionFit contraction_rate(const CatSuspension& m, const TimeChange& tau,
                                const PhasePoint& x, double u, double t_max, int n_samples,
                                double tol) {
    if (n_samples < 2 || t_max <= 1.0)
        throw std::invalid_argument("contraction_rate: need n_samples >= 2, t_max > 1");
    ContractionFit fit;
    for (int i = 0; i < n_samples; ++i) {
        const double t = 1.0 + (t_max - 1.0) * static_cast<double>(i) /
                                   static_cast<double>(n_samples - 1);
        const PairSeparation sep =
            graph_pair_separation(m, tau, x, LegKind::stable, u, t, tol);
        if (!(sep.dist > 0.0) || !std::isfinite(sep.dist)) {
            fit.degenerate = true;
            return fit;
        }
        fit.times.push_back(t);
        fit.log_dists.push_back(std::log(sep.dist));
    }
    fit.rate = fit_line(fit.times, fit.log_dists).slope;
    return fit;
}

}  // namespace phlab
