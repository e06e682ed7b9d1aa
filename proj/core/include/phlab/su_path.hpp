#pragma once

#include <optional>
#include <span>
#include <vector>

#include "phlab/foliation.hpp"

namespace phlab {

using SuLeg = LeafLeg;

/// Concatenation of stable/unstable legs; vertices are recovered from the
/// start point and the leg parameters, never stored as raw coordinates.
struct SuPath {
    PhasePoint start;
    std::vector<SuLeg> legs;

    std::vector<PhasePoint> vertices(const CatSuspension& m) const;
    bool is_cycle(const CatSuspension& m, double tol = 1e-10) const;
};

/// Cycle functional of one leg: the beta of the leaf pair (x, leg(x,u)).
/// Antisymmetric under leg reversal; identically zero for constant tau.
double pcf_leg(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x, SuLeg leg,
               double tol);

/// Sum of the leg functionals along the path, evaluated at its vertices.
/// Total quadrature budget is tol per leg.
double pcf_path(const CatSuspension& m, const TimeChange& tau, const SuPath& path, double tol);

/// Path slid against the time-changed flow by the running cycle functional:
/// points[k] = flow_tau(x_k, -t_k) with t_k the cumulative leg functionals.
/// Consecutive points lie on one leaf of the time-changed foliation.
struct TransportedPath {
    std::vector<PhasePoint> points;
    std::vector<double> slide_times;
    double total_pcf = 0.0;
};
TransportedPath transport(const CatSuspension& m, const TimeChange& tau, const SuPath& path,
                          double tol);

/// Independent construction of the same transported path by composing the
/// leaf graph maps leg by leg: p_{k+1} = phi(p_k; u'_k) with the leg
/// parameter carried through the flow offset exactly. Slide times are
/// recovered from the time offsets as -v(x_k, c_k), so no leg functional
/// is ever evaluated; agreement with transport() is a two-route check of
/// the whole construction.
TransportedPath transport_composed(const CatSuspension& m, const TimeChange& tau,
                                   const SuPath& path, double tol);

/// Four-leg cycle (s,+u), (u,+v), (s,-u), (u,-v); closes exactly because
/// the legs are commuting base translations.
SuPath quad_cycle(const PhasePoint& x, double u, double v);

/// Cycle functional of the quad cycle: displacement along the orbit
/// direction accumulated by one su-holonomy loop of the time-changed flow.
double holonomy_displacement(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x,
                             double u, double v, double tol);

struct EngulfEntry {
    double u = 0.0, v = 0.0;
    double displacement = 0.0;
};

/// Sweep of holonomy displacements over a grid of quad-cycle sizes. If the
/// displacement attains both signs, continuity sweeps the transported
/// endpoint across an orbit segment around x: the accessibility class of x
/// engulfs a flow interval, which certifies accessibility.
struct EngulfCertificate {
    std::vector<EngulfEntry> entries;
    bool both_signs = false;
    double max_abs = 0.0;
    /// min(largest positive, largest |negative|) displacement: by continuity
    /// in (u,v) the certified radius of the engulfed orbit interval. Zero
    /// when only one sign occurs.
    double bracket_min_abs = 0.0;
};
EngulfCertificate engulf_sweep(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x,
                               std::span<const std::pair<double, double>> grid, double tol);

/// pcf(path) - v(x_0, r) for a path whose endpoint is flow(x_0, r).
/// Throws when the endpoint is not within 1e-10 of the orbit point.
double orbit_defect(const CatSuspension& m, const TimeChange& tau, const SuPath& path, double r,
                    double tol);

/// Translated cycle family: the same legs applied at Haar-random start
/// points. The mean cycle functional vanishes exactly in expectation.
MeanSem haar_average_pcf(const CatSuspension& m, const TimeChange& tau, double u, double v,
                         int n_samples, Rng& rng, double tol);

/// Haar average of int_0^r tau(g_t y) dt; equals r * mean(tau) exactly.
MeanSem haar_average_orbit(const CatSuspension& m, const TimeChange& tau, double r,
                           int n_samples, Rng& rng, double tol);

/// Scans a cycle family for a nonvanishing cycle functional; vanishing on a
/// spanning family is the signature of a coboundary time change. The
/// witness fields always report the largest-magnitude functional found
/// (index -1 only for an empty family); vanishing == (|witness| <= tol).
struct CoboundaryVerdict {
    bool vanishing = true;
    int witness_index = -1;
    double witness_value = 0.0;
};
CoboundaryVerdict coboundary_test(const CatSuspension& m, const TimeChange& tau,
                                  std::span<const SuPath> family, double tol);

/// Contraction diagnostics for one transported leg (p,q): distances under
/// the time-changed flow at horizon 0 and t (forward for stable legs,
/// backward for unstable).
struct LeafCheck {
    double d0 = 0.0;
    double d_horizon = 0.0;
    double ratio = 0.0;
};
LeafCheck transported_leg_leaf_check(const CatSuspension& m, const TimeChange& tau,
                                     const PhasePoint& p, const PhasePoint& q, LegKind kind,
                                     double horizon, double tol);

}  // namespace phlab
