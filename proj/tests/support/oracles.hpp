#pragma once

// Slow reference implementations used to cross-check the library numerics.
// Everything here works on a fixed uniform grid straight through the flow
// map, with none of the panel decomposition, adaptive subdivision, or
// closed-form shortcuts the library uses.  Accuracy is limited (midpoint
// rule across the kinks at roof crossings), so comparisons run at modest
// tolerances; the point is an independent path to the same numbers.

#include <phlab/flow.hpp>
#include <phlab/foliation.hpp>
#include <phlab/time_change.hpp>

namespace phlab::oracle {

// Midpoint-rule value of  int_0^t tau(g_s x) ds  on n uniform cells.
double riemann_v(const FlowModel& m, const TimeChange& tau, const PhasePoint& p,
                 double t, int n);

// Inverts riemann_v by pure bisection: returns a with v(x, a) = t.
double bisect_alpha(const FlowModel& m, const TimeChange& tau,
                    const PhasePoint& p, double t, int n, double width);

// Midpoint-rule value of  int_0^T [tau(g_r x) - tau(g_r y)] dr  where y is
// the point at parameter u on the stable (resp. unstable, integrating
// backward) leaf through x.  Direct subtraction of the two orbits; the tail
// beyond T is bounded by lip * |u| * lambda^{-T} * lambda / (lambda - 1).
double riemann_beta(const FlowModel& m, const TimeChange& tau,
                    const PhasePoint& x, LegKind kind, double u, double T,
                    int n);

// Centered difference  [f(h) - f(-h)] / 2h.
template <class F>
double centered_diff(F&& f, double h) {
  return (f(h) - f(-h)) / (2.0 * h);
}

}  // namespace phlab::oracle
