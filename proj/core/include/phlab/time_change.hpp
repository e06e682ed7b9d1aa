#pragma once

#include <array>
#include <vector>

#include "phlab/flow.hpp"
#include "phlab/numerics.hpp"

namespace phlab {

/// One term eps * w(roof) * cos(2 pi k . base + phase). The window
/// w(s) = exp(4 - 1/(s(1-s))) is flat at both ends (all derivatives vanish
/// at s in {0,1}) and normalized to w(1/2) = 1, so every term descends to a
/// smooth function on the suspension manifold.
struct BumpTerm {
    double eps = 0.0;
    std::array<int, 2> k{0, 0};
    double phase = 0.0;
};

double bump_window(double s);
double bump_window_d1(double s);
double bump_window_d2(double s);
/// integral of the window over [0,1]
double bump_window_mass();
/// sup of |w'| over [0,1]
double bump_window_d1_max();

/// Value of the scalar field sum_j eps_j w(roof) cos(2 pi k_j . base + phase_j).
double bump_field(const std::vector<BumpTerm>& terms, const PhasePoint& p);

/// Smooth positive time change tau = c0 + bump terms + coboundary terms.
/// A coboundary term is the derivative along the flow of a bump-family
/// field xi, i.e. eps * w'(roof) * cos(2 pi k . base + phase); it changes
/// the cocycle only by xi(g_t x) - xi(x). The constructor rejects data
/// whose analytic lower bound c0 - sum|eps| (cobounds weighted by
/// sup|w'|) is not positive.
class TimeChange {
  public:
    explicit TimeChange(double c0, std::vector<BumpTerm> bumps = {},
                        std::vector<BumpTerm> cobounds = {});

    static TimeChange constant(double c0) { return TimeChange(c0); }
    /// tau = kappa + d/dt xi(g_t p)|_{t=0} with xi from the bump family.
    static TimeChange coboundary_of(double kappa, std::vector<BumpTerm> xi_terms);

    double operator()(const PhasePoint& p) const { return value(p.base, p.roof); }
    double value(Vec2 base, double roof) const;

    /// Directional derivative along a base vector (leg directions).
    double base_derivative(Vec2 base, double roof, Vec2 dir) const;
    /// Derivative along the roof (flow) direction.
    double roof_derivative(Vec2 base, double roof) const;
    /// Full directional derivative for a tangent vector in the (s,u,c) frame.
    double directional(const CatSuspension& m, const PhasePoint& p, const TangentVector& v) const;

    /// tau(base, roof) - tau(base + h dir, roof), evaluated by a half-angle
    /// identity so the cancellation costs no relative precision even for
    /// h ~ 1e-15. Same-leaf orbit pairs share the roof, so this is the only
    /// difference the foliation integrals ever need.
    double diff_along(Vec2 base, double roof, Vec2 dir, double h) const;

    double c0() const { return c0_; }
    const std::vector<BumpTerm>& bumps() const { return bumps_; }
    const std::vector<BumpTerm>& cobounds() const { return cobounds_; }
    bool is_constant() const { return bumps_.empty() && cobounds_.empty(); }

    /// Analytic bounds from the coefficients (not sharp, but certified).
    double tau_min() const { return tau_min_; }
    double tau_max() const { return tau_max_; }
    /// Exact average over the invariant volume: base integrals vanish for
    /// k != 0, the window mass covers k = 0.
    double mean() const;
    /// sup_p |d tau(p)[dir]| for a base direction, from the coefficients.
    double lipschitz_along(Vec2 dir) const;

  private:
    double c0_;
    std::vector<BumpTerm> bumps_;
    std::vector<BumpTerm> cobounds_;
    double tau_min_, tau_max_;
};

struct CocycleValue {
    double value = 0.0;
    double err_bound = 0.0;
};

/// v(p,t) = int_0^t tau(g_s p) ds, split at roof crossings; the constant
/// part integrates exactly, the rest by adaptive Simpson to tol.
CocycleValue v_cocycle(const CatSuspension& m, const TimeChange& tau, const PhasePoint& p,
                       double t, double tol);

/// alpha(p,t): the unique solution of v(p, alpha) = t. Bracketed by
/// [t/tau_max, t/tau_min], located by a monotone panel scan, polished by
/// bisection and Newton with derivative tau(g_alpha p); err_bound is on the
/// residual |v(p, alpha) - t|.
CocycleValue alpha(const CatSuspension& m, const TimeChange& tau, const PhasePoint& p,
                   double t, double tol);

struct FlowTauResult {
    PhasePoint point;
    double alpha;     // original-flow time actually traveled
    long crossings;   // roof crossings along the way
    double err_bound;
};

/// Time-changed flow g^tau_t(p) = g_{alpha(p,t)}(p).
PhasePoint flow_tau(const CatSuspension& m, const TimeChange& tau, const PhasePoint& p,
                    double t, double tol);
FlowTauResult flow_tau_full(const CatSuspension& m, const TimeChange& tau, const PhasePoint& p,
                            double t, double tol);

/// Density of the invariant measure of g^tau w.r.t. the invariant volume
/// of g: tau / mean(tau).
double density(const TimeChange& tau, const PhasePoint& p);

/// Directional derivative of x -> alpha(x,T) along v, from
/// d_v alpha * tau(g_alpha x) = -int_0^alpha [d_{Dg_t v} tau](g_t x) dt.
double dalpha(const CatSuspension& m, const TimeChange& tau, const PhasePoint& p,
              const TangentVector& v, double T, double tol);

/// Derivative cocycle of the time-changed flow:
/// Dg^tau_T v = Dg_alpha v + (d_v alpha) X.
TangentVector dflow_tau(const CatSuspension& m, const TimeChange& tau, const PhasePoint& p,
                        const TangentVector& v, double T, double tol);

}  // namespace phlab
