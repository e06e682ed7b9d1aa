#pragma once

#include <vector>

#include "phlab/flow.hpp"
#include "phlab/time_change.hpp"

namespace phlab {

enum class LegKind { stable, unstable };

/// Leaf points are always carried as (anchor, leg parameter): y = leg(x,u).
/// Raw coordinates of y would lose the exact leaf relation to roundoff.
struct LeafLeg {
    LegKind kind = LegKind::stable;
    double u = 0.0;
};

constexpr double kMaxLegParam = 0.2;

struct BetaValue {
    double value = 0.0;
    double truncation_T = 0.0;  // orbit time where the improper integral was cut
    double err_bound = 0.0;     // quadrature error plus certified tail bound
};

/// beta over the leaf pair (x, leg(x,u)):
///   stable:   int_0^inf  [tau(g_r x) - tau(g_r y)] dr
///   unstable: -int_0^inf [tau(g_{-r} x) - tau(g_{-r} y)] dr
/// The integrand decays like lambda^{-j} with the panel depth j, so the
/// truncation horizon and the per-panel tolerance split are geometric.
BetaValue beta(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x, LegKind kind,
               double u, double tol);
BetaValue beta_s(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x, double u,
                 double tol);
BetaValue beta_u(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x, double u,
                 double tol);

/// Graph map onto the time-changed leaf through x:
/// phi(x; u) = flow_tau(leg(x,u), -beta). Fixing x and sweeping u draws the
/// new stable (resp. unstable) leaf of the time-changed flow as a graph
/// over the unchanged leaf.
PhasePoint phi(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x, LegKind kind,
               double u, double tol);
PhasePoint phi_s(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x, double u,
                 double tol);
PhasePoint phi_u(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x, double u,
                 double tol);

/// Derivative of y -> beta(x,y) at y = x along the leaf component of v
/// (the xi_s part for stable legs, xi_u for unstable):
///   stable:   -int_0^inf lambda^{-n(t)} [d_{e_s} tau](g_t x) dt * xi_s
///   unstable: +int_0^inf lambda^{-m(r)} [d_{e_u} tau](g_{-r} x) dr * xi_u
/// Matches a centered finite difference of beta in u.
double dbeta(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x, LegKind kind,
             const TangentVector& v, double tol);
double dbeta_s(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x,
               const TangentVector& v, double tol);
double dbeta_u(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x,
               const TangentVector& v, double tol);

/// Tangent lift onto the splitting of the time-changed flow. The invariant
/// direction is the tangent of the graph map at u = 0, which carries the
/// opposite sign of the leaf-slot derivative dbeta:
///   lift(v) = v - (dbeta(x, v) / tau(x)) e_c.
/// Exactly flow-invariant: Dg^tau_T lift_x(e) is parallel to lift_{x_T}(e).
TangentVector lift(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x,
                   LegKind kind, const TangentVector& v, double tol);
TangentVector lift_s(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x,
                     const TangentVector& v, double tol);
TangentVector lift_u(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x,
                     const TangentVector& v, double tol);

/// Frame of the transported invariant splitting at x.
struct SplitFrame {
    TangentVector e_s_tilde, e_u_tilde, e_c;
};
SplitFrame split_frame(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x,
                       double tol);

/// Separation of the pair (g^tau_t x, g^tau_t phi(x; u)) for stable legs,
/// or (g^tau_{-t} x, g^tau_{-t} phi(x; u)) for unstable ones, kept in exact
/// relative coordinates: a leg offset u * lambda^{-|n|} plus a flow-time
/// offset delta solving int_0^delta tau(g_s y_a) ds = -beta(pair at time a).
/// Independent orbits would lose these distances to chaotic roundoff
/// amplification; the pair representation never subtracts large floats.
struct PairSeparation {
    double leg_offset = 0.0;
    double flow_offset = 0.0;
    double dist = 0.0;
};
PairSeparation graph_pair_separation(const CatSuspension& m, const TimeChange& tau,
                                     const PhasePoint& x, LegKind kind, double u, double t,
                                     double tol);

struct ContractionFit {
    double rate = 0.0;
    bool degenerate = false;
    std::vector<double> times;
    std::vector<double> log_dists;
};

/// Least-squares slope of log dist(g^tau_t x, g^tau_t phi_s(x;u)) over
/// t in [1, t_max]. Flags a degenerate fit instead of fitting garbage when
/// a distance collapses entirely.
ContractionFit contraction_rate(const CatSuspension& m, const TimeChange& tau,
                                const PhasePoint& x, double u, double t_max, int n_samples,
                                double tol);

}  // namespace phlab
